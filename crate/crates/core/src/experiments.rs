//! Batch experiments shared by the command-line tool and the acceptance suite.
//! Each returns a serializable report; nothing here reads clocks or the environment.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{
    dirichlet_poly, eval_hm_series, eval_hm_with, eval_l_with, poly_error_envelope, terms_for_tolerance, EvalOptions,
};
use crate::lfunction::SelbergLFunction;
use crate::random::{analytic_second_moment, sample_phases, RandomSeriesTable};
use crate::region::{CompactSetContext, CompactShape, GridSpec};
use crate::sampling::{energy_distance, energy_permutation_test, sample_q, sample_qt, PermutationTest, ShiftScheme};
use crate::shifts::{admissible_shifts, excluded_measure, shift_set_i, shift_set_x, IntervalSet};
use crate::smoothing::{mellin_hat, smoothed_sum};
use crate::zeros::ZeroSet;

/// Compensated (double-double) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct DdSum {
    hi: f64,
    lo: f64,
}

impl DdSum {
    pub fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += err;
        let t = self.hi + self.lo;
        self.lo -= t - self.hi;
        self.hi = t;
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

fn uniform(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCheckRow {
    pub s: Complex64,
    pub m: u32,
    pub value: Complex64,
    pub err_bound: f64,
    pub series: Complex64,
    pub series_err: f64,
    pub brute: Complex64,
    pub methods_agree: bool,
    pub value_vs_brute: f64,
    pub series_vs_brute: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCheckReport {
    pub brute_terms: u64,
    pub brute_tol: f64,
    pub rows: Vec<SeriesCheckRow>,
    pub methods_agree: usize,
    pub within_brute: usize,
}

/// Brute-force `sum_{n <= N} Lambda(n) / ((log n)^{m+1} n^s)` for `m = 0..=m_max`, accumulated in double-double.
pub fn brute_sums(l: &SelbergLFunction, m_max: u32, s: Complex64, n: u64) -> Vec<Complex64> {
    let table = l.lambda_table(n);
    let mut acc = vec![(DdSum::default(), DdSum::default()); m_max as usize + 1];
    for term in table.up_to(n).iter().rev() {
        let mut v = term.lambda * (-s * term.log_n).exp() / term.log_n;
        for a in acc.iter_mut() {
            a.0.add(v.re);
            a.1.add(v.im);
            v /= term.log_n;
        }
    }
    acc.iter()
        .map(|(re, im)| Complex64::new(re.value(), im.value()))
        .collect()
}

pub fn series_check(
    l: &SelbergLFunction,
    ms: &[u32],
    n_points: usize,
    sigma: (f64, f64),
    t_max: f64,
    brute_terms: u64,
    brute_tol: f64,
    seed: u64,
    opts: &EvalOptions,
) -> Result<SeriesCheckReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let points: Vec<Complex64> = (0..n_points)
        .map(|_| Complex64::new(uniform(&mut rng, sigma.0, sigma.1), uniform(&mut rng, -t_max, t_max)))
        .collect();
    let m_max = ms.iter().copied().max().unwrap_or(0);
    l.lambda_table(brute_terms);
    let rows: Vec<Vec<SeriesCheckRow>> = points
        .par_iter()
        .map(|&s| {
            let brute = brute_sums(l, m_max, s, brute_terms);
            ms.iter()
                .map(|&m| {
                    let v = eval_hm_with(l, m, s, opts)?;
                    let n = terms_for_tolerance(l, m, s.re, 1e-8, opts.max_series_terms);
                    let w = eval_hm_series(l, m, s, n)?;
                    let b = brute[m as usize];
                    Ok(SeriesCheckRow {
                        s,
                        m,
                        value: v.value,
                        err_bound: v.err_bound,
                        series: w.value,
                        series_err: w.err_bound,
                        brute: b,
                        methods_agree: v.agrees_with(&w),
                        value_vs_brute: (v.value - b).norm(),
                        series_vs_brute: (w.value - b).norm(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<SeriesCheckRow> = rows.into_iter().flatten().collect();
    Ok(SeriesCheckReport {
        brute_terms,
        brute_tol,
        methods_agree: rows.iter().filter(|r| r.methods_agree).count(),
        within_brute: rows
            .iter()
            .filter(|r| r.value_vs_brute <= brute_tol && r.series_vs_brute <= brute_tol)
            .count(),
        rows,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpCheckRow {
    pub s: Complex64,
    pub exp_h0: Complex64,
    pub l_value: Complex64,
    pub diff: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpCheckReport {
    pub rows: Vec<ExpCheckRow>,
    pub rejected_points: usize,
    pub worst_ratio: f64,
    pub passed: usize,
}

/// A point is admissible when no listed zero with `beta >= sigma` lies within distance 1 of its ordinate.
pub fn point_admissible(z: &ZeroSet, s: Complex64) -> bool {
    s.im.abs() >= 1.0 && z.off_line(s.re - 1e-12).all(|(_, g)| (g - s.im).abs() >= 1.0)
}

/// `exp(H_0(s))` against `L(s)`; the bound is `factor * (|L| err(H_0) + err(L))`.
pub fn exp_check(
    l: &SelbergLFunction,
    z: &ZeroSet,
    n_points: usize,
    sigma: (f64, f64),
    t_max: f64,
    factor: f64,
    seed: u64,
    opts: &EvalOptions,
) -> Result<ExpCheckReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n_points);
    let mut rejected = 0;
    while points.len() < n_points {
        let s = Complex64::new(uniform(&mut rng, sigma.0, sigma.1), uniform(&mut rng, -t_max, t_max));
        if point_admissible(z, s) {
            points.push(s);
        } else {
            rejected += 1;
        }
    }
    let rows: Vec<ExpCheckRow> = points
        .par_iter()
        .map(|&s| {
            let h = eval_hm_with(l, 0, s, opts)?;
            let v = eval_l_with(l, s, opts)?;
            let e = h.value.exp();
            Ok(ExpCheckRow {
                s,
                exp_h0: e,
                l_value: v.value,
                diff: (e - v.value).norm(),
                bound: factor * (v.value.norm() * h.err_bound + v.err_bound),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ExpCheckReport {
        rejected_points: rejected,
        worst_ratio: rows.iter().map(|r| r.diff / r.bound).fold(0.0, f64::max),
        passed: rows.iter().filter(|r| r.diff <= r.bound).count(),
        rows,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeRow {
    pub s: Complex64,
    pub m: u32,
    pub finite_difference: Complex64,
    pub lower: Complex64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub h: f64,
    pub rows: Vec<DerivativeRow>,
    pub worst_rel_error: f64,
}

/// Central difference of `H_m` in `sigma` against `-H_{m-1}`.
pub fn derivative_check(
    l: &SelbergLFunction,
    ms: &[u32],
    n_points: usize,
    sigma: (f64, f64),
    t_max: f64,
    seed: u64,
    opts: &EvalOptions,
) -> Result<DerivativeReport> {
    let h = 1e-4;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let jobs: Vec<(Complex64, u32)> = ms
        .iter()
        .flat_map(|&m| {
            (0..n_points)
                .map(|_| {
                    (
                        Complex64::new(uniform(&mut rng, sigma.0, sigma.1), uniform(&mut rng, -t_max, t_max)),
                        m,
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let rows: Vec<DerivativeRow> = jobs
        .par_iter()
        .map(|&(s, m)| {
            if m == 0 {
                return Err(Error::Domain("derivative chain needs m >= 1".into()));
            }
            let up = eval_hm_with(l, m, s + h, opts)?.value;
            let down = eval_hm_with(l, m, s - h, opts)?.value;
            let lower = eval_hm_with(l, m - 1, s, opts)?.value;
            let fd = (up - down) / (2.0 * h);
            Ok(DerivativeRow {
                s,
                m,
                finite_difference: fd,
                lower,
                rel_error: (fd + lower).norm() / lower.norm(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(DerivativeReport {
        h,
        worst_rel_error: rows.iter().map(|r| r.rel_error).fold(0.0, f64::max),
        rows,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub m: u32,
    pub sigma: f64,
    pub mean: Complex64,
    pub mean_standard_error: f64,
    pub mean_z: f64,
    pub second_moment: f64,
    pub second_moment_standard_error: f64,
    pub analytic: f64,
    pub rel_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub samples: usize,
    pub prime_bound: u64,
    pub seed: u64,
    pub rows: Vec<MomentRow>,
}

/// Monte-Carlo mean and second moment of the random model against the analytic value.
/// The mean is tested through `max(|z_re|, |z_im|)` of the per-component z-scores.
pub fn moment_check(
    l: &SelbergLFunction,
    ms: &[u32],
    sigmas: &[f64],
    n: usize,
    seed: u64,
    prime_bound: u64,
    kmax: u32,
) -> Result<MomentReport> {
    let points: Vec<Complex64> = sigmas.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    let mut rows = Vec::new();
    for &m in ms {
        let table = RandomSeriesTable::new(l, m, &points, prime_bound, kmax)?;
        let obs: Vec<Vec<Complex64>> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let w = sample_phases(seed.wrapping_add(i), prime_bound)?;
                Ok(table.eval(&w)?.into_iter().map(|v| v.value).collect())
            })
            .collect::<Result<_>>()?;
        for (j, &sigma) in sigmas.iter().enumerate() {
            let nf = n as f64;
            let col: Vec<Complex64> = obs.iter().map(|r| r[j]).collect();
            let mean = col.iter().sum::<Complex64>() / nf;
            let var_re = col.iter().map(|z| (z.re - mean.re).powi(2)).sum::<f64>() / (nf - 1.0);
            let var_im = col.iter().map(|z| (z.im - mean.im).powi(2)).sum::<f64>() / (nf - 1.0);
            let (se_re, se_im) = ((var_re / nf).sqrt(), (var_im / nf).sqrt());
            let sq: Vec<f64> = col.iter().map(|z| z.norm_sqr()).collect();
            let m2 = sq.iter().sum::<f64>() / nf;
            let var2 = sq.iter().map(|v| (v - m2).powi(2)).sum::<f64>() / (nf - 1.0);
            let analytic = analytic_second_moment(l, m, sigma)?.value.re;
            rows.push(MomentRow {
                m,
                sigma,
                mean,
                mean_standard_error: (se_re * se_re + se_im * se_im).sqrt(),
                mean_z: (mean.re / se_re).abs().max((mean.im / se_im).abs()),
                second_moment: m2,
                second_moment_standard_error: (var2 / nf).sqrt(),
                analytic,
                rel_diff: (m2 - analytic).abs() / analytic,
            });
        }
    }
    Ok(MomentReport {
        samples: n,
        prime_bound,
        seed,
        rows,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub y: f64,
    pub c_pilot: f64,
    pub c_calibrated: f64,
    pub envelope: f64,
    pub empirical_sup: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyCheckReport {
    pub t_height: f64,
    pub sigma3: f64,
    pub sigma4: f64,
    pub samples: usize,
    pub pilot: usize,
    pub safety: f64,
    pub rows: Vec<EnvelopeRow>,
    /// `max C / min C` over the `y` values.
    pub c_spread: f64,
    pub failed_evaluations: usize,
}

/// Sup error of the Dirichlet polynomial over the grid of `K`, at `n` shifts drawn uniformly from
/// `X_K(T)` (taken for the largest `y`, which is contained in the sets for the smaller ones).
/// `C` is fitted on an independent pilot sample as `safety * max(error / shape)` with
/// shape `y^{sigma3 - sigma4} (log T)^3`, `sigma3 = sigma0(K)`, `sigma4 = min Re K`.
pub fn poly_check(
    l: &SelbergLFunction,
    m: u32,
    k: &CompactSetContext,
    z: &ZeroSet,
    t_height: f64,
    ys: &[f64],
    n: usize,
    pilot: usize,
    safety: f64,
    seed: u64,
    opts: &EvalOptions,
) -> Result<PolyCheckReport> {
    let y_max = ys.iter().copied().fold(f64::NAN, f64::max);
    if ys.is_empty() || !(y_max >= 2.0) {
        return Err(Error::Domain("need at least one y >= 2".into()));
    }
    let shifts = shift_set_x(z, k, t_height, y_max, l.has_pole_at_one)?;
    let points = k.grid(GridSpec::default());
    let sigma3 = k.sigma0;
    let sigma4 = k.shape.min_re();
    let errors = |count: usize, seed: u64| -> (Vec<Vec<f64>>, usize) {
        let taus: Vec<f64> = crate::sampling::draw_shifts(&shifts, count, ShiftScheme::Random { seed });
        let rows: Vec<Option<Vec<f64>>> = taus
            .par_iter()
            .map(|&tau| {
                let mut sup = vec![0.0f64; ys.len()];
                for &p in &points {
                    let s = p + Complex64::new(0.0, tau);
                    let h = eval_hm_with(l, m, s, opts).ok()?.value;
                    for (j, &y) in ys.iter().enumerate() {
                        sup[j] = sup[j].max((h - dirichlet_poly(l, m, s, y)).norm());
                    }
                }
                Some(sup)
            })
            .collect();
        let failed = rows.iter().filter(|r| r.is_none()).count();
        (rows.into_iter().flatten().collect(), failed)
    };
    let (pilot_rows, f1) = errors(pilot, seed ^ 0x5eed_0001);
    let (rows, f2) = errors(n, seed);
    let mut out = Vec::new();
    for (j, &y) in ys.iter().enumerate() {
        let shape = poly_error_envelope(sigma3, sigma4, y, t_height, 1.0)?;
        let c_pilot = pilot_rows.iter().map(|r| r[j]).fold(0.0, f64::max) / shape;
        let c_calibrated = safety * c_pilot;
        let envelope = poly_error_envelope(sigma3, sigma4, y, t_height, c_calibrated.max(f64::MIN_POSITIVE))?;
        let empirical_sup = rows.iter().map(|r| r[j]).fold(0.0, f64::max);
        out.push(EnvelopeRow {
            y,
            c_pilot,
            c_calibrated,
            envelope,
            empirical_sup,
            within: empirical_sup <= envelope,
        });
    }
    let cs: Vec<f64> = out.iter().map(|r| r.c_calibrated).collect();
    let c_spread = cs.iter().copied().fold(0.0, f64::max) / cs.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PolyCheckReport {
        t_height,
        sigma3,
        sigma4,
        samples: rows.len(),
        pilot: pilot_rows.len(),
        safety,
        rows: out,
        c_spread,
        failed_evaluations: f1 + f2,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothRow {
    pub x: f64,
    pub mean_sup_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothCheckReport {
    pub shifts: Vec<f64>,
    pub grid_n: usize,
    pub rows: Vec<SmoothRow>,
    pub non_increasing: bool,
    pub final_over_initial: f64,
    pub slack: f64,
}

/// `sup_{grid} |H_m - H_{m,X}|` averaged over equispaced shifts from `I_K(T)`, for each `X`.
pub fn smooth_check(
    l: &SelbergLFunction,
    m: u32,
    k: &CompactSetContext,
    z: &ZeroSet,
    t_height: f64,
    xs: &[f64],
    n_shifts: usize,
    grid_n: usize,
    slack: f64,
    opts: &EvalOptions,
) -> Result<SmoothCheckReport> {
    let bbox = CompactShape::Rectangle {
        re: (k.shape.min_re(), k.shape.max_re()),
        im: (k.shape.min_im(), k.shape.max_im()),
    };
    let points = bbox.grid(GridSpec {
        rect_n: grid_n,
        disk_boundary: 0,
    });
    let shifts = shift_set_i(z, k, t_height, l.has_pole_at_one)?;
    let taus = crate::sampling::draw_shifts(&shifts, n_shifts, ShiftScheme::Equispaced);
    let sups: Vec<Vec<f64>> = taus
        .par_iter()
        .map(|&tau| {
            let mut sup = vec![0.0f64; xs.len()];
            for &p in &points {
                let s = p + Complex64::new(0.0, tau);
                let h = eval_hm_with(l, m, s, opts)?.value;
                for (j, &x) in xs.iter().enumerate() {
                    sup[j] = sup[j].max((h - smoothed_sum(l, m, s, x)).norm());
                }
            }
            Ok(sup)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<SmoothRow> = xs
        .iter()
        .enumerate()
        .map(|(j, &x)| SmoothRow {
            x,
            mean_sup_error: sups.iter().map(|r| r[j]).sum::<f64>() / sups.len() as f64,
        })
        .collect();
    let non_increasing = rows
        .windows(2)
        .all(|w| w[1].mean_sup_error <= slack * w[0].mean_sup_error);
    let final_over_initial = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) => b.mean_sup_error / a.mean_sup_error,
        _ => f64::NAN,
    };
    Ok(SmoothCheckReport {
        shifts: taus,
        grid_n,
        rows,
        non_increasing,
        final_over_initial,
        slack,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinCheckReport {
    pub s_small: f64,
    pub residue: Complex64,
    pub sigma: f64,
    pub t_step: f64,
    pub t_max: f64,
    /// `max |phi_hat(sigma + it)| (1 + |t|)^3` over `[1, t_max]` and over `[1, 2 t_max]`.
    pub decay_constant: f64,
    pub decay_constant_doubled: f64,
}

pub fn mellin_check(s_small: f64, sigma: f64, t_max: f64, t_step: f64) -> Result<MellinCheckReport> {
    let residue = Complex64::new(s_small, 0.0) * mellin_hat(Complex64::new(s_small, 0.0))?;
    let n = ((2.0 * t_max - 1.0) / t_step).round() as usize;
    let vals: Vec<(f64, f64)> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let t = 1.0 + i as f64 * t_step;
            Ok((t, mellin_hat(Complex64::new(sigma, t))?.norm() * (1.0 + t).powi(3)))
        })
        .collect::<Result<_>>()?;
    let max_to = |hi: f64| {
        vals.iter()
            .filter(|v| v.0 <= hi + 1e-9)
            .map(|v| v.1)
            .fold(0.0, f64::max)
    };
    Ok(MellinCheckReport {
        s_small,
        residue,
        sigma,
        t_step,
        t_max,
        decay_constant: max_to(t_max),
        decay_constant_doubled: max_to(2.0 * t_max),
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub m: u32,
    pub points: Vec<Complex64>,
    pub samples: usize,
    pub t_height: f64,
    pub shift_measure: f64,
    pub shift_fraction: f64,
    pub dropped: usize,
    pub energy_same_m: f64,
    pub energy_next_m: f64,
    pub permutation_same_m: PermutationTest,
    pub permutation_next_m: PermutationTest,
    pub discriminates: bool,
}

/// Energy distances `Q_T(m)` vs `Q(m)` and `Q_T(m)` vs `Q(m + 1)`; permutation p-values are reported only.
pub fn compare_measures(
    l: &SelbergLFunction,
    m: u32,
    points: &[Complex64],
    z: &ZeroSet,
    k: &CompactSetContext,
    t_height: f64,
    n: usize,
    seed: u64,
    prime_bound: u64,
    permutations: usize,
    opts: &EvalOptions,
) -> Result<CompareReport> {
    let shifts = shift_set_i(z, k, t_height, l.has_pole_at_one)?;
    let qt = sample_qt(l, m, points, &shifts, n, ShiftScheme::Random { seed }, opts)?;
    let q_same = sample_q(l, m, points, n, seed.wrapping_add(1 << 32), prime_bound, 8)?;
    let q_next = sample_q(l, m + 1, points, n, seed.wrapping_add(2 << 32), prime_bound, 8)?;
    let energy_same_m = energy_distance(&qt, &q_same)?;
    let energy_next_m = energy_distance(&qt, &q_next)?;
    Ok(CompareReport {
        m,
        points: points.to_vec(),
        samples: n,
        t_height,
        shift_measure: shifts.measure(),
        shift_fraction: shifts.measure() / t_height,
        dropped: qt.params.dropped,
        energy_same_m,
        energy_next_m,
        permutation_same_m: energy_permutation_test(&qt, &q_same, permutations, seed ^ 0xa)?,
        permutation_next_m: energy_permutation_test(&qt, &q_next, permutations, seed ^ 0xb)?,
        discriminates: energy_same_m < energy_next_m,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleRow {
    pub zeros: usize,
    pub t_height: f64,
    pub measure: f64,
    pub excluded: f64,
    pub identity_error: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleReport {
    pub seed: u64,
    pub gamma_range: (f64, f64),
    pub rows: Vec<AdmissibleRow>,
    pub max_identity_error: f64,
    pub min_fraction: f64,
}

/// Random synthetic zero sets (up to `max_zeros` zeros off the line, ordinates uniform in `gamma_range`)
/// checked against the measure identity of `I_K(T)`.
pub fn admissible_check(
    k: &CompactSetContext,
    n_sets: usize,
    max_zeros: usize,
    gamma_range: (f64, f64),
    heights: &[f64],
    seed: u64,
) -> Result<AdmissibleReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for _ in 0..n_sets {
        let count = rng.random_range(0..=max_zeros);
        let mut gammas: Vec<f64> = (0..count)
            .map(|_| uniform(&mut rng, gamma_range.0, gamma_range.1))
            .collect();
        gammas.sort_by(f64::total_cmp);
        gammas.dedup();
        let entries = gammas
            .iter()
            .map(|&g| (uniform(&mut rng, k.sigma0 + 1e-9, 0.999), g))
            .collect();
        let z = ZeroSet::from_entries(entries, "synthetic")?;
        for &t in heights {
            let delta = k.kwidth + 1.0;
            let s = admissible_shifts(&z, k, t, delta, true)?;
            let excluded = excluded_measure(&z, k, t, delta, true);
            rows.push(AdmissibleRow {
                zeros: z.len(),
                t_height: t,
                measure: s.measure(),
                excluded,
                identity_error: (t - s.measure() - excluded).abs() / t,
                fraction: s.measure() / t,
            });
        }
    }
    Ok(AdmissibleReport {
        seed,
        gamma_range,
        max_identity_error: rows.iter().map(|r| r.identity_error).fold(0.0, f64::max),
        min_fraction: rows.iter().map(|r| r.fraction).fold(f64::INFINITY, f64::min),
        rows,
    })
}

/// Both normalizations of a ball frequency: over `I_K(T)` and rescaled to `[T, 2T]`.
pub fn ball_frequency_normalizations(frequency: f64, shifts: &IntervalSet, t_height: f64) -> (f64, f64) {
    (frequency, frequency * shifts.measure() / t_height)
}
