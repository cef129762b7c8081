//! Empirical stand-ins for the shift measure `Q_T` and the random-model measure `Q`,
//! and the statistics used to compare them.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{eval_hm_with, EvalOptions};
use crate::lfunction::SelbergLFunction;
use crate::polynomial::Polynomial;
use crate::random::{sample_phases, PhaseAssignment, RandomSeriesTable};
use crate::region::CompactSetContext;
use crate::shifts::IntervalSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ShiftQt,
    MontecarloQ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleParams {
    pub l: String,
    pub m: u32,
    pub t_height: Option<f64>,
    pub seed: Option<u64>,
    pub prime_bound: Option<u64>,
    pub requested: usize,
    pub dropped: usize,
    /// Shift of each kept row (shift samples only).
    pub shifts: Vec<f64>,
    /// Measure of the shift set the rows were drawn from.
    pub shift_measure: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub eval_points: Vec<Complex64>,
    /// One row per sample, one column per evaluation point.
    pub observations: Vec<Vec<Complex64>>,
    pub provenance: Provenance,
    pub params: SampleParams,
}

impl SampleSet {
    pub fn rows(&self) -> usize {
        self.observations.len()
    }

    /// Per-point sample mean.
    pub fn mean(&self) -> Vec<Complex64> {
        let n = self.rows() as f64;
        (0..self.eval_points.len())
            .map(|j| self.observations.iter().map(|r| r[j]).sum::<Complex64>() / n)
            .collect()
    }

    /// Per-point `mean |x|^2`.
    pub fn second_moment(&self) -> Vec<f64> {
        let n = self.rows() as f64;
        (0..self.eval_points.len())
            .map(|j| self.observations.iter().map(|r| r[j].norm_sqr()).sum::<f64>() / n)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftScheme {
    /// Shifts at arc-length positions `(i + 1/2) / n` of the set.
    Equispaced,
    Random {
        seed: u64,
    },
}

/// Shifts selected by `scheme` from `shifts`.
pub fn draw_shifts(shifts: &IntervalSet, n: usize, scheme: ShiftScheme) -> Vec<f64> {
    let total = shifts.measure();
    match scheme {
        ShiftScheme::Equispaced => (0..n)
            .filter_map(|i| shifts.point_at(total * (i as f64 + 0.5) / n as f64))
            .collect(),
        ShiftScheme::Random { seed } => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            (0..n)
                .filter_map(|_| shifts.point_at(total * rng.random::<f64>()))
                .collect()
        }
    }
}

/// Rows `(H_m(s + i tau))_s` for shifts `tau` drawn from `shifts`; failing rows are dropped and counted.
pub fn sample_qt(
    l: &SelbergLFunction,
    m: u32,
    points: &[Complex64],
    shifts: &IntervalSet,
    n: usize,
    scheme: ShiftScheme,
    opts: &EvalOptions,
) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    if shifts.is_empty() {
        return Err(Error::EmptySample(0));
    }
    let taus = draw_shifts(shifts, n, scheme);
    let rows: Vec<Option<Vec<Complex64>>> = taus
        .par_iter()
        .map(|&tau| {
            points
                .iter()
                .map(|&s| eval_hm_with(l, m, s + Complex64::new(0.0, tau), opts).map(|v| v.value))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| log::debug!("shift {tau} dropped: {e}"))
                .ok()
        })
        .collect();
    let mut observations = Vec::with_capacity(rows.len());
    let mut kept = Vec::with_capacity(rows.len());
    for (tau, row) in taus.iter().zip(rows) {
        if let Some(r) = row {
            observations.push(r);
            kept.push(*tau);
        }
    }
    if observations.is_empty() {
        return Err(Error::EmptySample(taus.len()));
    }
    let seed = match scheme {
        ShiftScheme::Random { seed } => Some(seed),
        ShiftScheme::Equispaced => None,
    };
    let dropped = n - observations.len();
    Ok(SampleSet {
        eval_points: points.to_vec(),
        observations,
        provenance: Provenance::ShiftQt,
        params: SampleParams {
            l: l.name.clone(),
            m,
            t_height: shifts.intervals.first().map(|&(a, _)| a),
            seed,
            prime_bound: None,
            requested: n,
            dropped,
            shifts: kept,
            shift_measure: Some(shifts.measure()),
        },
    })
}

/// Monte-Carlo rows of the random model with seeds `seed, seed + 1, ..., seed + n - 1`.
pub fn sample_q(
    l: &SelbergLFunction,
    m: u32,
    points: &[Complex64],
    n: usize,
    seed: u64,
    prime_bound: u64,
    kmax: u32,
) -> Result<SampleSet> {
    let table = RandomSeriesTable::new(l, m, points, prime_bound, kmax)?;
    let observations: Vec<Vec<Complex64>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let w = sample_phases(seed.wrapping_add(i), prime_bound)?;
            Ok(table.eval(&w)?.into_iter().map(|v| v.value).collect())
        })
        .collect::<Result<_>>()?;
    Ok(SampleSet {
        eval_points: points.to_vec(),
        observations,
        provenance: Provenance::MontecarloQ,
        params: SampleParams {
            l: l.name.clone(),
            m,
            t_height: None,
            seed: Some(seed),
            prime_bound: Some(prime_bound),
            requested: n,
            dropped: 0,
            shifts: Vec::new(),
            shift_measure: None,
        },
    })
}

/// Random-model rows for explicitly given phase assignments (e.g. `omega = 1`).
pub fn sample_q_with_phases(
    l: &SelbergLFunction,
    m: u32,
    points: &[Complex64],
    assignments: &[PhaseAssignment],
    kmax: u32,
) -> Result<SampleSet> {
    let prime_bound = assignments
        .iter()
        .map(|w| w.prime_bound)
        .min()
        .ok_or(Error::EmptySample(0))?;
    let table = RandomSeriesTable::new(l, m, points, prime_bound, kmax)?;
    let observations = assignments
        .iter()
        .map(|w| Ok(table.eval(w)?.into_iter().map(|v| v.value).collect()))
        .collect::<Result<_>>()?;
    Ok(SampleSet {
        eval_points: points.to_vec(),
        observations,
        provenance: Provenance::MontecarloQ,
        params: SampleParams {
            l: l.name.clone(),
            m,
            t_height: None,
            seed: None,
            prime_bound: Some(prime_bound),
            requested: assignments.len(),
            dropped: 0,
            shifts: Vec::new(),
            shift_measure: None,
        },
    })
}

fn same_points(a: &SampleSet, b: &SampleSet) -> Result<()> {
    if a.eval_points != b.eval_points {
        return Err(Error::MismatchedPoints);
    }
    if a.rows() == 0 || b.rows() == 0 {
        return Err(Error::EmptySample(0));
    }
    Ok(())
}

fn flatten(s: &SampleSet) -> Vec<Vec<f64>> {
    s.observations
        .iter()
        .map(|r| r.iter().flat_map(|z| [z.re, z.im]).collect())
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn mean_cross(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let total: f64 = a
        .par_iter()
        .map(|x| b.iter().map(|y| dist(x, y)).sum::<f64>())
        .collect::<Vec<_>>()
        .iter()
        .sum();
    total / (a.len() * b.len()) as f64
}

/// `2 E|a - b| - E|a - a'| - E|b - b'|` over all pairs (V-statistic), rows read as real vectors.
pub fn energy_distance(a: &SampleSet, b: &SampleSet) -> Result<f64> {
    same_points(a, b)?;
    let (x, y) = (flatten(a), flatten(b));
    Ok(energy_from_rows(&x, &y))
}

fn energy_from_rows(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    2.0 * mean_cross(x, y) - mean_cross(x, x) - mean_cross(y, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PermutationTest {
    pub statistic: f64,
    pub p_value: f64,
    pub quantile_95: f64,
    pub permutations: usize,
}

/// Permutation null distribution of the energy statistic from a precomputed pooled distance matrix.
pub fn energy_permutation_test(
    a: &SampleSet,
    b: &SampleSet,
    permutations: usize,
    seed: u64,
) -> Result<PermutationTest> {
    same_points(a, b)?;
    let pooled: Vec<Vec<f64>> = flatten(a).into_iter().chain(flatten(b)).collect();
    let n = pooled.len();
    let na = a.rows();
    let d: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| pooled.iter().map(|y| dist(&pooled[i], y)).collect())
        .collect();
    let stat_for = |labels: &[bool]| {
        let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                match (labels[i], labels[j]) {
                    (true, true) => aa += d[i][j],
                    (false, false) => bb += d[i][j],
                    (true, false) => ab += d[i][j],
                    _ => {}
                }
            }
        }
        let nb = n - na;
        2.0 * ab / (na * nb) as f64 - aa / (na * na) as f64 - bb / (nb * nb) as f64
    };
    let mut labels: Vec<bool> = (0..n).map(|i| i < na).collect();
    let statistic = stat_for(&labels);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut null = Vec::with_capacity(permutations);
    for _ in 0..permutations {
        labels.shuffle(&mut rng);
        null.push(stat_for(&labels));
    }
    null.sort_by(f64::total_cmp);
    let exceed = null.iter().filter(|&&v| v >= statistic).count();
    let quantile_95 = if null.is_empty() {
        f64::NAN
    } else {
        null[((0.95 * null.len() as f64).ceil() as usize).clamp(1, null.len()) - 1]
    };
    Ok(PermutationTest {
        statistic,
        p_value: (exceed + 1) as f64 / (permutations + 1) as f64,
        quantile_95,
        permutations,
    })
}

/// Fraction of rows with `max_{points in K} |row - P| < eps`.
pub fn ball_frequency(s: &SampleSet, p: &Polynomial, k: &CompactSetContext, eps: f64) -> Result<f64> {
    let inside: Vec<usize> = (0..s.eval_points.len())
        .filter(|&j| k.shape.contains(s.eval_points[j]))
        .collect();
    if inside.is_empty() {
        return Err(Error::NoPointsInside);
    }
    if s.rows() == 0 {
        return Err(Error::EmptySample(0));
    }
    let target: Vec<Complex64> = inside.iter().map(|&j| p.eval(s.eval_points[j])).collect();
    let hits = s
        .observations
        .iter()
        .filter(|row| {
            let sup = inside
                .iter()
                .zip(&target)
                .map(|(&j, t)| (row[j] - t).norm())
                .fold(0.0, f64::max);
            sup < eps
        })
        .count();
    Ok(hits as f64 / s.rows() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{CompactShape, GridSpec};

    fn synthetic(points: usize, rows: Vec<Vec<Complex64>>) -> SampleSet {
        SampleSet {
            eval_points: (0..points).map(|j| Complex64::new(0.8, j as f64)).collect(),
            observations: rows,
            provenance: Provenance::MontecarloQ,
            params: SampleParams {
                l: "synthetic".into(),
                m: 0,
                t_height: None,
                seed: None,
                prime_bound: None,
                requested: 0,
                dropped: 0,
                shifts: Vec::new(),
                shift_measure: None,
            },
        }
    }

    fn gaussian(n: usize, shift: f64, seed: u64) -> SampleSet {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let rows = (0..n)
            .map(|_| {
                let (u1, u2): (f64, f64) = (rng.random(), rng.random());
                let r = (-2.0 * (1.0 - u1).ln()).sqrt();
                let a = std::f64::consts::TAU * u2;
                vec![Complex64::new(r * a.cos() + shift, r * a.sin())]
            })
            .collect();
        synthetic(1, rows)
    }

    #[test]
    fn energy_basics() {
        let a = gaussian(300, 0.0, 1);
        assert!(energy_distance(&a, &a).unwrap().abs() < 1e-12);
        let b = gaussian(300, 1.0, 2);
        assert!(energy_distance(&a, &b).unwrap() > 0.0);
        let mut c = gaussian(10, 0.0, 3);
        c.eval_points[0] = Complex64::new(0.0, 0.0);
        assert_eq!(energy_distance(&a, &c), Err(Error::MismatchedPoints));
    }

    #[test]
    fn permutation_test_discriminates() {
        let a = gaussian(400, 0.0, 11);
        let same = gaussian(400, 0.0, 12);
        let shifted = gaussian(400, 1.0, 13);
        let t0 = energy_permutation_test(&a, &same, 99, 5).unwrap();
        let t1 = energy_permutation_test(&a, &shifted, 99, 5).unwrap();
        assert!(t0.statistic < t0.quantile_95, "{t0:?}");
        assert!(t1.statistic > t1.quantile_95, "{t1:?}");
        assert!((t1.statistic - energy_distance(&a, &shifted).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ball_frequency_limits() {
        let k = CompactSetContext::new(CompactShape::disk(0.85, 0.0, 0.02), 0.5).unwrap();
        let pts = k.grid(GridSpec::default());
        let rows = (0..20)
            .map(|i| vec![Complex64::new(i as f64 * 0.01, 0.0); pts.len()])
            .collect();
        let s = SampleSet {
            eval_points: pts,
            ..synthetic(0, rows)
        };
        let zero = Polynomial::constant(Complex64::new(0.0, 0.0));
        assert_eq!(ball_frequency(&s, &zero, &k, f64::INFINITY).unwrap(), 1.0);
        assert_eq!(ball_frequency(&s, &zero, &k, 0.0).unwrap(), 0.0);
        assert_eq!(ball_frequency(&s, &zero, &k, 0.055).unwrap(), 0.3);
        let outside = synthetic(2, vec![vec![Complex64::new(0.0, 0.0); 2]]);
        assert_eq!(ball_frequency(&outside, &zero, &k, 1.0), Err(Error::NoPointsInside));
    }

    #[test]
    fn shift_samples_single_point_and_determinism() {
        let z = SelbergLFunction::zeta();
        let set = IntervalSet::from_raw(vec![(0.0, 1e-9)]);
        let s = sample_qt(
            &z,
            1,
            &[Complex64::new(2.0, 0.0)],
            &set,
            1,
            ShiftScheme::Equispaced,
            &EvalOptions::default(),
        )
        .unwrap();
        let direct = eval_hm_with(&z, 1, Complex64::new(2.0, s.params.shifts[0]), &EvalOptions::default()).unwrap();
        assert_eq!(s.observations[0][0], direct.value);

        let set = IntervalSet::span(1000.0, 1010.0);
        let pts = [Complex64::new(0.8, 0.0)];
        let a = sample_qt(
            &z,
            0,
            &pts,
            &set,
            8,
            ShiftScheme::Random { seed: 3 },
            &EvalOptions::default(),
        )
        .unwrap();
        let b = sample_qt(
            &z,
            0,
            &pts,
            &set,
            8,
            ShiftScheme::Random { seed: 3 },
            &EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn monte_carlo_rows_depend_on_seed_only() {
        let z = SelbergLFunction::zeta();
        let pts = [Complex64::new(0.8, 0.0), Complex64::new(0.85, 0.5)];
        let a = sample_q(&z, 0, &pts, 4, 100, 1000, 8).unwrap();
        let b = sample_q(&z, 0, &pts, 2, 102, 1000, 8).unwrap();
        assert_eq!(a.observations[2..], b.observations[..]);
        assert_ne!(a.observations[0], a.observations[1]);
    }
}
