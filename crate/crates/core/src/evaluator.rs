//! Values of `L(s)`, the continuous branch of `log L(s)`, and the iterated integrals
//! `H_m(s) = sum Lambda(n) / ((log n)^{m+1} n^s)` continued into the critical strip.
//!
//! For `m >= 1` the `m`-fold integral is collapsed to
//! `H_m(sigma + it) = 1/(m-1)! int_sigma^inf (alpha - sigma)^{m-1} log L(alpha + it) d alpha`.
//! The piece beyond `sigma_c` is integrated term by term in closed form; the rest by quadrature.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfunction::{LKind, SelbergLFunction};
use crate::quad::{integrate, QuadOptions};
use crate::zeta::{dirichlet_l, riemann_zeta};

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    Continuation,
    CollapsedIntegral,
    DirichletPoly,
    Smoothed,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Continuation => "continuation",
            Method::CollapsedIntegral => "collapsed-integral",
            Method::DirichletPoly => "dirichlet-poly",
            Method::Smoothed => "smoothed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxValue {
    pub value: Complex64,
    pub err_bound: f64,
    pub method: Method,
}

impl ApproxValue {
    pub fn new(value: Complex64, err_bound: f64, method: Method) -> Self {
        Self {
            value,
            err_bound,
            method,
        }
    }

    /// True when the two values differ by no more than the sum of their bounds.
    pub fn agrees_with(&self, other: &ApproxValue) -> bool {
        (self.value - other.value).norm() <= self.err_bound + other.err_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Absolute quadrature tolerance for the collapsed integral.
    pub quad_tol: f64,
    /// Abscissa beyond which the collapsed integral is done term by term.
    pub sigma_split: f64,
    /// Anchor abscissa for branch tracking.
    pub sigma_start: f64,
    /// File-supplied L-functions are only evaluated for `sigma > 1 + custom_margin`.
    pub custom_margin: f64,
    /// `|L|` below this on the path counts as hitting a zero.
    pub zero_threshold: f64,
    /// A point whose Newton distance `|L / L'|` to a zero is below this counts as a zero too.
    pub zero_distance: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Cap on `N` when a series length is chosen from a tolerance.
    pub max_series_terms: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            quad_tol: 1e-9,
            sigma_split: 3.0,
            sigma_start: 3.0,
            custom_margin: 0.05,
            zero_threshold: 1e-12,
            zero_distance: 1e-6,
            max_step: 0.25,
            min_step: 1e-10,
            max_series_terms: 1 << 24,
        }
    }
}

/// `int_N^inf C x^{theta - sigma} (log x)^{-m} dx <= C N^{-a} / (a (log N)^m)`, `a = sigma - theta - 1`.
/// Bounds `sum_{n > N} |Lambda(n)| / ((log n)^{m+1} n^sigma)`; infinite when the series diverges.
pub fn series_tail_bound(l: &SelbergLFunction, m: u32, sigma: f64, n: u64) -> f64 {
    let a = sigma - l.theta - 1.0;
    if a <= 0.0 || n < 2 {
        return f64::INFINITY;
    }
    let ln = (n as f64).ln();
    l.ramanujan_constant * (-a * ln).exp() / (a * ln.powi(m as i32))
}

/// Smallest power-of-two `N` whose tail bound is below `tol`, capped at `cap`.
pub fn terms_for_tolerance(l: &SelbergLFunction, m: u32, sigma: f64, tol: f64, cap: u64) -> u64 {
    let mut n = 64u64;
    while n < cap && series_tail_bound(l, m, sigma, n) > tol {
        n = n.saturating_mul(2);
    }
    n.min(cap)
}

fn check_s(s: Complex64) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite argument {s}")))
    }
}

/// `L(s)`: Euler-Maclaurin for zeta, Hurwitz combinations for Dirichlet L,
/// and `exp` of the log-series for file-supplied coefficients.
pub fn eval_l(l: &SelbergLFunction, s: Complex64) -> Result<ApproxValue> {
    eval_l_with(l, s, &EvalOptions::default())
}

pub fn eval_l_with(l: &SelbergLFunction, s: Complex64, opts: &EvalOptions) -> Result<ApproxValue> {
    check_s(s)?;
    if l.has_pole_at_one {
        let d = (s - 1.0).norm();
        if d < 1e-8 {
            return Err(Error::Pole(d));
        }
    }
    let em = match l.kind() {
        LKind::Zeta => riemann_zeta(s),
        LKind::Dirichlet(chi) => dirichlet_l(s, chi),
        LKind::Custom(_) => {
            if s.re <= 1.0 + opts.custom_margin {
                return Err(Error::UnsupportedRegion(format!(
                    "{} has no continuation for sigma = {} <= 1 + {}",
                    l.name, s.re, opts.custom_margin
                )));
            }
            let log = log_series(l, s, 1e-12, opts)?;
            let value = log.value.exp();
            let err = value.norm() * log.err_bound.exp_m1();
            return Ok(ApproxValue::new(value, err, Method::Series));
        }
    };
    Ok(ApproxValue::new(em.value, em.err, Method::Series))
}

fn log_series(l: &SelbergLFunction, s: Complex64, tol: f64, opts: &EvalOptions) -> Result<ApproxValue> {
    let n = terms_for_tolerance(l, 0, s.re, tol, opts.max_series_terms);
    eval_hm_series(l, 0, s, n)
}

/// Partial sum of `H_m(s)` over `2 <= n <= N` plus the integral tail bound.
pub fn eval_hm_series(l: &SelbergLFunction, m: u32, s: Complex64, n: u64) -> Result<ApproxValue> {
    check_s(s)?;
    if s.re <= 1.0 {
        return Err(Error::UnsupportedRegion(format!(
            "the Dirichlet series needs Re s > 1, got {}",
            s.re
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!("series length N = {n} < 2")));
    }
    let table = l.lambda_table(n);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut rounding = 0.0;
    for term in table.up_to(n) {
        let v = term.lambda * (-s * term.log_n).exp() / term.log_n.powi(m as i32 + 1);
        sum += v;
        rounding += v.norm() * (4.0 + s.im.abs() * term.log_n);
    }
    let tail = series_tail_bound(l, m, s.re, n);
    Ok(ApproxValue::new(sum, tail + EPS * rounding, Method::Series))
}

/// Branch-continuous `log L` along the horizontal segment at height `t`.
///
/// Checkpoints run from `sigma_start` down to `sigma_min`; each accepted step changes the
/// argument by less than `pi/2` and the logarithm by less than `1/2`.
#[derive(Debug, Clone)]
pub struct LogTrack<'a> {
    l: &'a SelbergLFunction,
    t: f64,
    opts: EvalOptions,
    points: Vec<TrackPoint>,
}

#[derive(Debug, Clone, Copy)]
struct TrackPoint {
    sigma: f64,
    value: Complex64,
    log: Complex64,
    err: f64,
}

impl<'a> LogTrack<'a> {
    pub fn new(l: &'a SelbergLFunction, t: f64, sigma_min: f64, opts: EvalOptions) -> Result<Self> {
        if !sigma_min.is_finite() || !t.is_finite() {
            return Err(Error::Domain(format!("non-finite point {sigma_min} + {t}i")));
        }
        if opts.sigma_start <= 1.0 + opts.custom_margin {
            return Err(Error::Domain(format!(
                "sigma_start = {} must exceed 1 + {}",
                opts.sigma_start, opts.custom_margin
            )));
        }
        if l.has_pole_at_one && t == 0.0 && sigma_min <= 1.0 {
            return Err(Error::UnsupportedRegion(format!(
                "{} + 0i lies on the ray through the pole",
                sigma_min
            )));
        }
        let start = opts.sigma_start.max(sigma_min);
        let mut track = Self {
            l,
            t,
            opts,
            points: vec![anchor(l, start, t, &opts)?],
        };
        let first = track.points[0];
        let tail = track.walk(first, sigma_min)?;
        track.points.extend(tail);
        Ok(track)
    }

    pub fn sigma_min(&self) -> f64 {
        self.points.last().map(|p| p.sigma).unwrap_or(self.opts.sigma_start)
    }

    pub fn sigma_max(&self) -> f64 {
        self.points[0].sigma
    }

    /// Value at the lower end of the track.
    pub fn end(&self) -> ApproxValue {
        let p = self.points.last().expect("track has an anchor");
        ApproxValue::new(p.log, p.err, Method::Continuation)
    }

    /// `log L(sigma + it)` for any `sigma` on the tracked segment, continued from the nearest checkpoint above.
    pub fn log_at(&self, sigma: f64) -> Result<ApproxValue> {
        if sigma < self.sigma_min() - 1e-15 || sigma > self.sigma_max() + 1e-15 {
            return Err(Error::OutOfRange(format!(
                "sigma = {sigma} outside tracked segment [{}, {}]",
                self.sigma_min(),
                self.sigma_max()
            )));
        }
        let idx = self.points.partition_point(|p| p.sigma > sigma);
        if idx < self.points.len() && self.points[idx].sigma == sigma {
            let p = self.points[idx];
            return Ok(ApproxValue::new(p.log, p.err, Method::Continuation));
        }
        let from = self.points[idx - 1];
        let end = self.walk(from, sigma)?;
        let p = end.last().copied().unwrap_or(from);
        Ok(ApproxValue::new(p.log, p.err, Method::Continuation))
    }

    fn walk(&self, from: TrackPoint, target: f64) -> Result<Vec<TrackPoint>> {
        let mut out = Vec::new();
        let mut cur = from;
        let mut h = self.opts.max_step;
        while cur.sigma > target {
            h = h.min(cur.sigma - target);
            let next_sigma = if h >= cur.sigma - target { target } else { cur.sigma - h };
            let w = eval_l_with(self.l, Complex64::new(next_sigma, self.t), &self.opts)?;
            let d = (w.value / cur.value).ln();
            if d.im.abs() < PI / 2.0 && d.norm() < 0.5 && d.re.is_finite() {
                self.check_not_zero(next_sigma, &w)?;
                cur = TrackPoint {
                    sigma: next_sigma,
                    value: w.value,
                    log: cur.log + d,
                    err: cur.err + w.err_bound / w.value.norm() + 4.0 * EPS * d.norm(),
                };
                out.push(cur);
                h = (2.0 * h).min(self.opts.max_step);
            } else {
                h *= 0.5;
                if h < self.opts.min_step {
                    return Err(Error::ContinuationFailed {
                        sigma: cur.sigma,
                        t: self.t,
                    });
                }
            }
        }
        Ok(out)
    }

    fn check_not_zero(&self, sigma: f64, w: &ApproxValue) -> Result<()> {
        let modulus = w.value.norm();
        let zero = Error::ZeroOnPath {
            sigma,
            t: self.t,
            modulus,
        };
        if modulus < self.opts.zero_threshold {
            return Err(zero);
        }
        if modulus < 1e-4 {
            // Newton step |L / L'| from a central difference
            let h = 1e-6;
            let up = eval_l_with(self.l, Complex64::new(sigma + h, self.t), &self.opts)?.value;
            let down = eval_l_with(self.l, Complex64::new(sigma - h, self.t), &self.opts)?.value;
            let deriv = (up - down) / (2.0 * h);
            if modulus / deriv.norm() < self.opts.zero_distance {
                return Err(zero);
            }
        }
        Ok(())
    }
}

/// Principal log of `L` at the anchor, shifted onto the branch of the Dirichlet series.
fn anchor(l: &SelbergLFunction, sigma: f64, t: f64, opts: &EvalOptions) -> Result<TrackPoint> {
    let s = Complex64::new(sigma, t);
    let series = log_series(l, s, 1e-3, opts)?;
    let v = eval_l_with(l, s, opts)?;
    let principal = v.value.ln();
    let k = ((series.value.im - principal.im) / TAU).round();
    Ok(TrackPoint {
        sigma,
        value: v.value,
        log: principal + Complex64::new(0.0, TAU * k),
        err: v.err_bound / v.value.norm() + 4.0 * EPS * principal.norm(),
    })
}

/// `log L(sigma + it)` on the branch continued from `sigma_start` along the horizontal segment.
pub fn log_l_tracked(l: &SelbergLFunction, sigma: f64, t: f64, sigma_start: f64) -> Result<ApproxValue> {
    let opts = EvalOptions {
        sigma_start,
        ..EvalOptions::default()
    };
    log_l_tracked_with(l, sigma, t, &opts)
}

pub fn log_l_tracked_with(l: &SelbergLFunction, sigma: f64, t: f64, opts: &EvalOptions) -> Result<ApproxValue> {
    Ok(LogTrack::new(l, t, sigma, *opts)?.end())
}

/// `H_m(s)` in `G_L`: the tracked logarithm for `m = 0`, the collapsed integral otherwise.
pub fn eval_hm(l: &SelbergLFunction, m: u32, s: Complex64) -> Result<ApproxValue> {
    eval_hm_with(l, m, s, &EvalOptions::default())
}

pub fn eval_hm_with(l: &SelbergLFunction, m: u32, s: Complex64, opts: &EvalOptions) -> Result<ApproxValue> {
    check_s(s)?;
    if m == 0 {
        return log_l_tracked_with(l, s.re, s.im, opts);
    }
    let sigma = s.re;
    let t = s.im;
    let split = opts.sigma_split.max(1.0 + opts.custom_margin + 1e-9);
    if sigma >= split {
        let n = terms_for_tolerance(l, m, sigma, 0.1 * opts.quad_tol, opts.max_series_terms);
        let mut v = eval_hm_series(l, m, s, n)?;
        v.method = Method::CollapsedIntegral;
        return Ok(v);
    }
    let tail = collapsed_tail(l, m, sigma, t, split, opts)?;
    let track_opts = EvalOptions {
        sigma_start: opts.sigma_start.max(split),
        ..*opts
    };
    let track = LogTrack::new(l, t, sigma, track_opts)?;
    let fact = factorial(m - 1);
    let mut max_log_err: f64 = 0.0;
    let quad = integrate(
        |alpha| {
            let v = track.log_at(alpha)?;
            max_log_err = max_log_err.max(v.err_bound);
            Ok(v.value * (alpha - sigma).powi(m as i32 - 1) / fact)
        },
        sigma,
        split,
        QuadOptions {
            abs_tol: 0.9 * opts.quad_tol,
            ..QuadOptions::default()
        },
    )?;
    let weight = (split - sigma).powi(m as i32) / (fact * m as f64);
    Ok(ApproxValue::new(
        quad.value + tail.value,
        quad.error + tail.err_bound + weight * max_log_err,
        Method::CollapsedIntegral,
    ))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `1/(m-1)! int_{sigma_c}^inf (alpha - sigma)^{m-1} H_0(alpha + it) d alpha`, term by term:
/// each `n` contributes `Lambda(n)/log n * n^{-sigma_c - it} * sum_j a^{m-1-j} / ((m-1-j)! (log n)^{j+1})`
/// with `a = sigma_c - sigma`.
fn collapsed_tail(
    l: &SelbergLFunction,
    m: u32,
    sigma: f64,
    t: f64,
    split: f64,
    opts: &EvalOptions,
) -> Result<ApproxValue> {
    let a = split - sigma;
    let poly = |ln: f64| -> f64 {
        (0..m)
            .map(|j| a.powi((m - 1 - j) as i32) / factorial(m - 1 - j) / ln.powi(j as i32 + 1))
            .sum()
    };
    let decay = split - l.theta - 1.0;
    let bound_at = |n: u64| {
        let ln = (n as f64).ln();
        l.ramanujan_constant * poly(ln) * (-decay * ln).exp() / decay
    };
    let mut n = 64u64;
    while n < opts.max_series_terms && bound_at(n) > 0.1 * opts.quad_tol {
        n *= 2;
    }
    let table = l.lambda_table(n);
    let s = Complex64::new(split, t);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut rounding = 0.0;
    for term in table.up_to(n) {
        let v = term.lambda / term.log_n * (-s * term.log_n).exp() * poly(term.log_n);
        sum += v;
        rounding += v.norm() * (4.0 + t.abs() * term.log_n);
    }
    Ok(ApproxValue::new(sum, bound_at(n) + EPS * rounding, Method::Series))
}

/// `sum_{2 <= n <= y} Lambda(n) / (n^s (log n)^{m+1})`.
pub fn dirichlet_poly(l: &SelbergLFunction, m: u32, s: Complex64, y: f64) -> Complex64 {
    if !(y >= 2.0) {
        return Complex64::new(0.0, 0.0);
    }
    let bound = y.floor() as u64;
    let table = l.lambda_table(bound);
    table
        .up_to(bound)
        .iter()
        .map(|term| term.lambda * (-s * term.log_n).exp() / term.log_n.powi(m as i32 + 1))
        .sum()
}

/// `C y^{sigma_3 - sigma_4} (log T)^3`.
pub fn poly_error_envelope(sigma3: f64, sigma4: f64, y: f64, t_height: f64, c: f64) -> Result<f64> {
    if !(sigma3 < sigma4 && sigma4 <= 1.0) {
        return Err(Error::Domain(format!(
            "need sigma3 < sigma4 <= 1, got {sigma3}, {sigma4}"
        )));
    }
    if !(y >= 2.0) {
        return Err(Error::Domain(format!("need y >= 2, got {y}")));
    }
    if !(t_height >= y + 3.0) {
        return Err(Error::Domain(format!("need T >= y + 3, got T = {t_height}, y = {y}")));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("need C > 0, got {c}")));
    }
    Ok(c * y.powf(sigma3 - sigma4) * t_height.ln().powi(3))
}

/// `C log|t| / (sigma' - sigma_*)^2 * y^{sigma' - sigma}` with
/// `sigma' = min(sigma_* + 1/log y, (sigma + sigma_*)/2)`.
pub fn sharp_envelope(sigma: f64, sigma_star: f64, y: f64, t: f64, c: f64) -> Result<f64> {
    if !(sigma_star < sigma) {
        return Err(Error::Domain(format!(
            "need sigma_* < sigma, got {sigma_star}, {sigma}"
        )));
    }
    if !(y > 1.0) || !(t.abs() > 1.0) || !(c > 0.0) {
        return Err(Error::Domain(format!("need y > 1, |t| > 1, C > 0; got {y}, {t}, {c}")));
    }
    let sp = (sigma_star + 1.0 / y.ln()).min(0.5 * (sigma + sigma_star));
    Ok(c * t.abs().ln() / (sp - sigma_star).powi(2) * y.powf(sp - sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::DirichletCharacter;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_l_builtins() {
        let z = SelbergLFunction::zeta();
        let v = eval_l(&z, c(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.value.re, PI * PI / 6.0, epsilon = 1e-14);
        assert!(eval_l(&z, c(0.5, 14.134725)).unwrap().value.norm() < 1e-5);
        assert!(matches!(eval_l(&z, c(1.0 + 1e-9, 0.0)), Err(Error::Pole(_))));

        // Catalan's constant sum_k (-1)^k (2k+1)^{-2}
        let chi = SelbergLFunction::dirichlet("chi-4", DirichletCharacter::kronecker(-4).unwrap()).unwrap();
        let catalan: f64 = (0..2_000_000u64)
            .rev()
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / ((2 * k + 1) as f64).powi(2))
            .sum();
        let v = eval_l(&chi, c(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.value.re, catalan, epsilon = 1e-12);
        assert!(v.value.im.abs() < 1e-15);
        // no pole for L(s, chi)
        assert!(eval_l(&chi, c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn eval_l_error_bound_at_height() {
        let z = SelbergLFunction::zeta();
        for t in [100.0, 3000.0, 1.0e4, -1.0e4] {
            let v = eval_l(&z, c(0.6, t)).unwrap();
            assert!(v.err_bound <= 1e-10, "t = {t}: {}", v.err_bound);
        }
    }

    #[test]
    fn log_tracking_matches_series_and_exp() {
        let z = SelbergLFunction::zeta();
        let v = log_l_tracked(&z, 2.0, 0.0, 3.0).unwrap();
        assert_abs_diff_eq!(v.value.re, (PI * PI / 6.0).ln(), epsilon = 1e-12);
        assert!(v.value.im.abs() < 1e-14);

        let v = log_l_tracked(&z, 0.8, 1000.0, 3.0).unwrap();
        let l = eval_l(&z, c(0.8, 1000.0)).unwrap();
        assert!((v.value.exp() - l.value).norm() < 1e-8);
    }

    #[test]
    fn tracked_branch_is_continuous() {
        // imaginary part accumulates beyond (-pi, pi] near t = 1000
        let z = SelbergLFunction::zeta();
        let track = LogTrack::new(&z, 1000.0, 0.6, EvalOptions::default()).unwrap();
        let mut prev = track.log_at(3.0).unwrap().value;
        for i in 1..=60 {
            let sigma = 3.0 - 2.4 * i as f64 / 60.0;
            let v = track.log_at(sigma).unwrap().value;
            assert!((v - prev).norm() < 1.0, "jump at {sigma}: {prev} -> {v}");
            prev = v;
        }
    }

    #[test]
    fn zero_on_path_detected() {
        let z = SelbergLFunction::zeta();
        let r = log_l_tracked(&z, 0.5, 14.134725, 3.0);
        assert!(matches!(r, Err(Error::ZeroOnPath { .. })), "{r:?}");
        // just to the right of the critical line the point is admissible
        assert!(log_l_tracked(&z, 0.52, 14.134725, 3.0).is_ok());
        // pole ray
        assert!(matches!(
            log_l_tracked(&z, 0.8, 0.0, 3.0),
            Err(Error::UnsupportedRegion(_))
        ));
    }

    #[test]
    fn series_values() {
        let z = SelbergLFunction::zeta();
        let v = eval_hm_series(&z, 0, c(2.0, 0.0), 1_000_000).unwrap();
        assert!((v.value.re - (PI * PI / 6.0).ln()).abs() < 1e-6);
        assert!(v.err_bound <= 1.0001e-6);
        assert!(matches!(
            eval_hm_series(&z, 0, c(1.0, 3.0), 100),
            Err(Error::UnsupportedRegion(_))
        ));
        // large sigma: first term dominates
        let v = eval_hm_series(&z, 2, c(40.0, 0.0), 1000).unwrap();
        let first = 2f64.powf(-40.0) / 2f64.ln().powi(2);
        assert!((v.value.re / first - 1.0).abs() < 1e-6);
    }

    #[test]
    fn collapsed_integral_matches_series() {
        let z = SelbergLFunction::zeta();
        let a = eval_hm(&z, 0, c(2.0, 0.0)).unwrap();
        assert!((a.value.re - (PI * PI / 6.0).ln()).abs() < 1e-12);
        let b = eval_hm_series(&z, 0, c(2.0, 0.0), 1 << 22).unwrap();
        assert!(a.agrees_with(&b));

        for (m, s) in [(2, c(2.5, 0.0)), (1, c(1.5, 7.0)), (3, c(1.2, -20.0))] {
            let a = eval_hm(&z, m, s).unwrap();
            let n = terms_for_tolerance(&z, m, s.re, 1e-4, 1 << 24);
            let b = eval_hm_series(&z, m, s, n).unwrap();
            assert_eq!(a.method, Method::CollapsedIntegral);
            assert!(a.agrees_with(&b), "m = {m}, s = {s}: {a:?} vs {b:?}");
            assert!(a.err_bound < 1e-8);
        }
    }

    #[test]
    fn collapsed_integral_in_strip_differentiates() {
        let z = SelbergLFunction::zeta();
        let h = 1e-3;
        let t = 5000.0;
        let up = eval_hm(&z, 1, c(0.8 - h, t)).unwrap().value;
        let down = eval_hm(&z, 1, c(0.8 + h, t)).unwrap().value;
        let h0 = eval_hm(&z, 0, c(0.8, t)).unwrap().value;
        assert!(((up - down) / (2.0 * h) - h0).norm() < 1e-4);
    }

    #[test]
    fn dirichlet_poly_small_cases() {
        let z = SelbergLFunction::zeta();
        let v = dirichlet_poly(&z, 0, c(2.0, 0.0), 3.0);
        assert_abs_diff_eq!(v.re, 0.25 + 1.0 / 9.0, epsilon = 1e-15);
        let v = dirichlet_poly(&z, 2, c(0.7, 3.0), 2.0);
        let expect = c(2.0, 0.0).powc(-c(0.7, 3.0)) / 2f64.ln().powi(2);
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn envelopes() {
        let e = poly_error_envelope(0.5, 0.75, 4f64.exp(), 10f64.exp(), 1.0).unwrap();
        assert_abs_diff_eq!(e, (-1f64).exp() * 1000.0, epsilon = 1e-9);
        let e2 = poly_error_envelope(0.5, 0.75, 2.0 * 4f64.exp(), 10f64.exp(), 1.0).unwrap();
        assert_abs_diff_eq!(e2 / e, 2f64.powf(-0.25), epsilon = 1e-14);
        assert!(poly_error_envelope(0.75, 0.5, 10.0, 100.0, 1.0).is_err());
        assert!(poly_error_envelope(0.5, 0.75, 10.0, 12.0, 1.0).is_err());
        assert!(sharp_envelope(0.8, 0.6, 100.0, 1000.0, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn custom_l_only_right_of_one() {
        let z = SelbergLFunction::zeta();
        let map = (crate::primes::cached_prime_powers(1 << 12).entries.iter())
            .map(|pp| ((pp.p, pp.k), Complex64::new(1.0 / pp.k as f64, 0.0)))
            .collect();
        let meta = crate::lfunction::CustomMeta {
            degree: 1.0,
            ..Default::default()
        };
        let custom = SelbergLFunction::custom("trunc", map, meta).unwrap();
        assert!(matches!(eval_l(&custom, c(1.0, 5.0)), Err(Error::UnsupportedRegion(_))));
        // coefficients agree with zeta up to 4096, so the values are close at sigma = 3
        let a = eval_l(&custom, c(3.0, 5.0)).unwrap().value;
        let b = eval_l(&z, c(3.0, 5.0)).unwrap().value;
        assert!((a - b).norm() < 1e-6);
    }
}
