//! Scan of vertical shifts `tau` for which `sup_K |H_m(s + i tau) - P(s)| < eps`.
//!
//! Stage one screens every grid shift with the Dirichlet polynomial of length `y`;
//! stage two confirms the survivors with the full evaluator.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evaluator::{eval_hm_with, EvalOptions};
use crate::lfunction::SelbergLFunction;
use crate::polynomial::Polynomial;
use crate::region::{CompactSetContext, GridSpec};
use crate::shifts::IntervalSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessOptions {
    pub step: f64,
    pub eps: f64,
    /// Length of the screening polynomial.
    pub y: f64,
    /// Shifts whose screening error is below `eps + slack` are confirmed.
    pub slack: f64,
    /// Stop after this many confirmed hits.
    pub max_hits: Option<usize>,
    pub grid: GridSpec,
    pub eval: EvalOptions,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self {
            step: 0.05,
            eps: 0.3,
            y: 1000.0,
            slack: 0.15,
            max_hits: None,
            grid: GridSpec::default(),
            eval: EvalOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub tau: f64,
    pub sup_error: f64,
    /// Largest evaluator error bound over the grid.
    pub err_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub target: String,
    pub k: CompactSetContext,
    pub m: u32,
    pub epsilon: f64,
    pub step: f64,
    pub hits: Vec<Hit>,
    pub scanned: usize,
    pub candidates: usize,
    pub failed_evaluations: usize,
    pub scanned_measure: f64,
    pub density_estimate: f64,
    pub truncated: bool,
}

const CHUNK: usize = 4096;

/// The shifts `a + k step` inside each interval `[a, b]`.
pub fn scan_grid(shifts: &IntervalSet, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for &(a, b) in &shifts.intervals {
        let n = ((b - a) / step).floor() as usize;
        out.extend((0..=n).map(|k| a + k as f64 * step).filter(|&x| x <= b));
    }
    out
}

struct Screen {
    /// `c[n][j] = Lambda(n) / (log n)^{m+1} * n^{-s_j}`.
    coeffs: Vec<Vec<Complex64>>,
    logs: Vec<f64>,
}

impl Screen {
    fn new(l: &SelbergLFunction, m: u32, points: &[Complex64], y: f64) -> Self {
        let bound = y.floor().max(2.0) as u64;
        let table = l.lambda_table(bound);
        let terms = table.up_to(bound);
        let coeffs = terms
            .iter()
            .map(|t| {
                let w = t.lambda / t.log_n.powi(m as i32 + 1);
                points.iter().map(|&s| w * (-s * t.log_n).exp()).collect()
            })
            .collect();
        let logs = terms.iter().map(|t| t.log_n).collect();
        Self { coeffs, logs }
    }

    fn values(&self, tau: f64, out: &mut [Complex64]) {
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (c, &ln) in self.coeffs.iter().zip(&self.logs) {
            let (sin, cos) = (tau * ln).sin_cos();
            let rot = Complex64::new(cos, -sin);
            for (v, cj) in out.iter_mut().zip(c) {
                *v += cj * rot;
            }
        }
    }
}

enum Outcome {
    Hit(Hit),
    Miss,
    Failed,
}

fn confirm(
    l: &SelbergLFunction,
    m: u32,
    points: &[Complex64],
    target: &[Complex64],
    order: &[usize],
    tau: f64,
    opts: &WitnessOptions,
) -> Outcome {
    let mut sup: f64 = 0.0;
    let mut err: f64 = 0.0;
    for &j in order {
        match eval_hm_with(l, m, points[j] + Complex64::new(0.0, tau), &opts.eval) {
            Ok(v) => {
                let d = (v.value - target[j]).norm();
                if !(d < opts.eps) {
                    return Outcome::Miss;
                }
                sup = sup.max(d);
                err = err.max(v.err_bound);
            }
            Err(e) => {
                log::debug!("witness confirmation at tau = {tau} failed: {e}");
                return Outcome::Failed;
            }
        }
    }
    Outcome::Hit(Hit {
        tau,
        sup_error: sup,
        err_bound: err,
    })
}

pub fn witness_search(
    l: &SelbergLFunction,
    m: u32,
    target: &Polynomial,
    k: &CompactSetContext,
    shifts: &IntervalSet,
    opts: &WitnessOptions,
) -> Result<WitnessReport> {
    if !(opts.step > 0.0) || !opts.step.is_finite() {
        return Err(crate::Error::Domain(format!(
            "step must be positive, got {}",
            opts.step
        )));
    }
    let points = k.grid(opts.grid);
    let goal: Vec<Complex64> = points.iter().map(|&s| target.eval(s)).collect();
    let screen = Screen::new(l, m, &points, opts.y);
    let grid = scan_grid(shifts, opts.step);
    let threshold = opts.eps + opts.slack;

    let mut hits = Vec::new();
    let mut scanned = 0;
    let mut candidates = 0;
    let mut failed = 0;
    let mut truncated = false;
    'chunks: for chunk in grid.chunks(CHUNK) {
        let screened: Vec<Option<Vec<usize>>> = chunk
            .par_iter()
            .map_init(
                || vec![Complex64::new(0.0, 0.0); points.len()],
                |buf, &tau| {
                    screen.values(tau, buf);
                    let errs: Vec<f64> = buf.iter().zip(&goal).map(|(v, g)| (v - g).norm()).collect();
                    let sup = errs.iter().copied().fold(0.0, f64::max);
                    (sup < threshold).then(|| {
                        let mut order: Vec<usize> = (0..points.len()).collect();
                        order.sort_by(|&a, &b| errs[b].total_cmp(&errs[a]));
                        order
                    })
                },
            )
            .collect();
        let outcomes: Vec<(usize, Outcome)> = chunk
            .par_iter()
            .zip(screened.par_iter())
            .enumerate()
            .filter_map(|(i, (&tau, order))| order.as_ref().map(|o| (i, confirm(l, m, &points, &goal, o, tau, opts))))
            .collect();
        let mut chunk_scanned = chunk.len();
        for (i, outcome) in outcomes {
            if let Some(cap) = opts.max_hits {
                if hits.len() >= cap {
                    chunk_scanned = i;
                    truncated = true;
                    break;
                }
            }
            candidates += 1;
            match outcome {
                Outcome::Hit(h) => hits.push(h),
                Outcome::Miss => {}
                Outcome::Failed => failed += 1,
            }
        }
        scanned += chunk_scanned;
        if truncated || opts.max_hits.is_some_and(|cap| hits.len() >= cap) {
            truncated = truncated || scanned < grid.len();
            break 'chunks;
        }
    }

    let scanned_set = match grid.get(scanned.saturating_sub(1)) {
        Some(&last) if scanned < grid.len() => shifts.intersect(f64::NEG_INFINITY, last + 0.5 * opts.step),
        Some(_) => shifts.clone(),
        None => IntervalSet::empty(),
    };
    let boxes = IntervalSet::from_raw(
        hits.iter()
            .map(|h| (h.tau - 0.5 * opts.step, h.tau + 0.5 * opts.step))
            .collect(),
    );
    let covered: f64 = scanned_set
        .intervals
        .iter()
        .map(|&(a, b)| boxes.intersect(a, b).measure())
        .sum();
    let scanned_measure = scanned_set.measure();
    Ok(WitnessReport {
        target: target.to_string(),
        k: *k,
        m,
        epsilon: opts.eps,
        step: opts.step,
        hits,
        scanned,
        candidates,
        failed_evaluations: failed,
        scanned_measure,
        density_estimate: if scanned_measure > 0.0 {
            covered / scanned_measure
        } else {
            0.0
        },
        truncated,
    })
}

/// Least-squares polynomial of degree `degree` matching `H_m(s + i tau)` on the grid of `K`,
/// and its sup residual there.
pub fn plant_target(
    l: &SelbergLFunction,
    m: u32,
    k: &CompactSetContext,
    tau: f64,
    degree: usize,
    opts: &WitnessOptions,
) -> Result<(Polynomial, f64)> {
    let points = k.grid(opts.grid);
    let values = points
        .iter()
        .map(|&s| eval_hm_with(l, m, s + Complex64::new(0.0, tau), &opts.eval).map(|v| v.value))
        .collect::<Result<Vec<_>>>()?;
    let center = k.shape.center();
    let p = Polynomial::fit(&points, &values, degree, center)?;
    let resid = p.sup_distance(&points, &values);
    Ok((p, resid))
}
