//! Euler-Maclaurin evaluation of the Hurwitz zeta function, and through it
//! the Riemann zeta function and Dirichlet L-functions.
//!
//! The remainder after `M` correction terms is bounded by
//! `|T_{M+1}| * |s + 2M + 1| / (sigma + 2M + 1)`, where `T_{M+1}` is the first omitted term.
//! Rounding in the main sum is estimated from the phase error of each term.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::character::DirichletCharacter;

const MAX_CORRECTIONS: usize = 80;
const EPS: f64 = f64::EPSILON;

/// `B_{2k} / (2k)!` for `k = 1..=MAX_CORRECTIONS + 1` (index `k - 1`).
fn bernoulli_ratios() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (1..=MAX_CORRECTIONS + 1)
            .map(|k| {
                let two_k = 2 * k as i32;
                let zeta_2k = if k == 1 {
                    PI * PI / 6.0
                } else {
                    // direct sum plus the Euler-Maclaurin tail at n = 2000
                    let n = 2000f64;
                    let direct: f64 = (1..=2000).rev().map(|j| (j as f64).powi(-two_k)).sum();
                    direct + n.powi(1 - two_k) / (two_k - 1) as f64 - 0.5 * n.powi(-two_k)
                        + two_k as f64 * n.powi(-two_k - 1) / 12.0
                };
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta_2k / TAU.powi(two_k)
            })
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmValue {
    pub value: Complex64,
    pub err: f64,
}

/// Complex `exp(z) - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        let mut term = z;
        let mut sum = z;
        for k in 2..12 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        z.exp() - 1.0
    }
}

/// Main-sum length used for a given ordinate.
pub fn default_cutoff(t: f64) -> usize {
    15 + (0.25 * t.abs()).ceil() as usize
}

/// Pieces of the Euler-Maclaurin formula for `zeta(s, alpha)` with the
/// `x^{1-s} / (s - 1)` term split off so callers can cancel it.
struct EmParts {
    head: Complex64,
    /// `(x^{1-s} - 1) / (s - 1)` with `x = N + alpha`.
    pole_regular: Complex64,
    /// `1 / (s - 1)`.
    pole: Complex64,
    err: f64,
}

fn em_parts(s: Complex64, alpha: f64, n_terms: usize) -> EmParts {
    let sigma = s.re;
    let t = s.im;
    let mut head = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut phase_sq = 0.0;
    for n in 0..n_terms {
        let x = n as f64 + alpha;
        let lx = x.ln();
        let mag = (-sigma * lx).exp();
        let (sin, cos) = (t * lx).sin_cos();
        head += Complex64::new(mag * cos, -mag * sin);
        abs_sum += mag;
        let ph = t * lx;
        phase_sq += mag * mag * ph * ph;
    }
    let x = n_terms as f64 + alpha;
    let lx = x.ln();
    let x_ms = (-s * lx).exp();
    head += x_ms * 0.5;
    let sm1 = s - 1.0;
    let pole_regular = expm1(-sm1 * lx) / sm1;

    let ratios = bernoulli_ratios();
    // term_k = B_{2k}/(2k)! * s (s+1) ... (s+2k-2) * x^{-s-2k+1}, built by ratios to avoid overflow
    let inv_x2 = 1.0 / (x * x);
    let mut term = s * (x_ms / x) * ratios[0];
    let mut err = f64::INFINITY;
    let mut prev = f64::INFINITY;
    for k in 1..=MAX_CORRECTIONS {
        head += term;
        let next = term * (s + (2 * k - 1) as f64) * (s + (2 * k) as f64) * inv_x2 * (ratios[k] / ratios[k - 1]);
        let factor = (s + (2 * k + 1) as f64).norm() / (sigma + (2 * k + 1) as f64);
        let bound = next.norm() * factor;
        if bound < err {
            err = bound;
        }
        if bound < EPS * head.norm().max(1e-300) * 1e-2 || next.norm() > prev {
            break;
        }
        prev = next.norm();
        term = next;
    }
    if 2.0 * std::f64::consts::PI * x <= s.norm() + 1.0 {
        // the correction terms never shrink; the truncation error is not controlled
        err = f64::INFINITY;
    }
    let rounding = 4.0 * EPS * (abs_sum + phase_sq.sqrt());
    EmParts {
        head,
        pole_regular,
        pole: 1.0 / sm1,
        err: err + rounding,
    }
}

/// Hurwitz zeta `zeta(s, alpha) = sum_{n>=0} (n + alpha)^{-s}`, `0 < alpha <= 1`, `s != 1`.
pub fn hurwitz(s: Complex64, alpha: f64) -> EmValue {
    hurwitz_with_cutoff(s, alpha, default_cutoff(s.im))
}

pub fn hurwitz_with_cutoff(s: Complex64, alpha: f64, n_terms: usize) -> EmValue {
    let parts = em_parts(s, alpha, n_terms);
    EmValue {
        value: parts.head + parts.pole_regular + parts.pole,
        err: parts.err,
    }
}

pub fn riemann_zeta(s: Complex64) -> EmValue {
    hurwitz(s, 1.0)
}

/// `L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q)` for a non-principal character.
/// The `1 / (s - 1)` pieces cancel exactly because `sum_a chi(a) = 0`.
pub fn dirichlet_l(s: Complex64, chi: &DirichletCharacter) -> EmValue {
    let q = chi.modulus();
    // each Hurwitz tail needs its own cutoff past |t| / 2 pi
    let n_terms = default_cutoff(s.im);
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for a in 1..=q {
        let c = chi.value(a);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let parts = em_parts(s, a as f64 / q as f64, n_terms);
        total += c * (parts.head + parts.pole_regular);
        err += parts.err;
    }
    let scale = (-s * (q as f64).ln()).exp();
    EmValue {
        value: total * scale,
        err: err * scale.norm() + 4.0 * EPS * total.norm() * scale.norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_cutoff_reports_unbounded_error() {
        let v = hurwitz_with_cutoff(Complex64::new(2.0, 100.0), 0.5, 3);
        assert!(v.err.is_infinite());
    }

    #[test]
    fn zeta_two_and_four() {
        let z2 = riemann_zeta(Complex64::new(2.0, 0.0));
        assert!((z2.value.re - PI * PI / 6.0).abs() < 1e-14);
        assert!(z2.err < 1e-13);
        let z4 = riemann_zeta(Complex64::new(4.0, 0.0));
        assert!((z4.value.re - PI.powi(4) / 90.0).abs() < 1e-14);
    }

    #[test]
    fn zeta_at_half_and_first_zero() {
        // zeta(1/2) = -1.4603545088095868...
        let v = riemann_zeta(Complex64::new(0.5, 0.0));
        assert!((v.value.re + 1.460_354_508_809_586_8).abs() < 1e-13);
        let z = riemann_zeta(Complex64::new(0.5, 14.134_725_141_734_693));
        assert!(z.value.norm() < 1e-12, "{}", z.value);
    }

    #[test]
    fn bernoulli_ratio_values() {
        let r = bernoulli_ratios();
        assert!((r[0] - 1.0 / 12.0).abs() < 1e-16);
        assert!((r[1] * 720.0 + 1.0).abs() < 1e-14);
        assert!((r[2] * 30240.0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hurwitz_half_is_scaled_zeta() {
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        let s = Complex64::new(0.7, 33.0);
        let lhs = hurwitz(s, 0.5).value;
        let rhs = (Complex64::new(2.0, 0.0).powc(s) - 1.0) * riemann_zeta(s).value;
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn error_estimate_small_at_large_height() {
        let v = riemann_zeta(Complex64::new(0.8, 1.0e4));
        assert!(v.err < 1e-10, "{}", v.err);
        // independent cutoff gives the same value
        let w = hurwitz_with_cutoff(Complex64::new(0.8, 1.0e4), 1.0, 4000);
        assert!((v.value - w.value).norm() < 1e-10, "{} vs {}", v.value, w.value);
    }

    #[test]
    fn expm1_small_and_large() {
        let z = Complex64::new(1e-9, -2e-9);
        assert!((expm1(z) - z).norm() < 1e-17);
        let z = Complex64::new(0.3, 0.2);
        assert!((expm1(z) - (z.exp() - 1.0)).norm() < 1e-15);
    }
}
