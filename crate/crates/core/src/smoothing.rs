//! The cutoff `phi`, its Mellin transform, and the smoothed truncation
//! `H_{m,X}(s) = sum Lambda(n) phi(n/X) / (n^s (log n)^{m+1})`.
//!
//! `phi = 1` on `[0, 1]`, `phi = 0` on `[2, inf)`, and in between
//! `phi(x) = h(2 - x) / (h(2 - x) + h(x - 1))` with `h(u) = exp(-1/u)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evaluator::{eval_hm_series, terms_for_tolerance};
use crate::lfunction::SelbergLFunction;
use crate::quad::{integrate, QuadOptions};

/// Target absolute accuracy of `mellin_hat`.
pub const MELLIN_TOL: f64 = 1e-12;

fn h(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

pub fn bump(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("bump needs x >= 0, got {x}")));
    }
    Ok(bump_unchecked(x))
}

fn bump_unchecked(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        let a = h(2.0 - x);
        let b = h(x - 1.0);
        a / (a + b)
    }
}

/// `phi'(x) = -A B (1/(2-x)^2 + 1/(x-1)^2) / (A + B)^2`, supported in `(1, 2)`.
pub fn bump_derivative(x: f64) -> f64 {
    if x <= 1.0 || x >= 2.0 {
        return 0.0;
    }
    let (u, v) = (2.0 - x, x - 1.0);
    // r / (1 + r)^2 is symmetric under r -> 1/r; take the side with r <= 1
    let r = (-(1.0 / u - 1.0 / v).abs()).exp();
    -r * (1.0 / (u * u) + 1.0 / (v * v)) / ((1.0 + r) * (1.0 + r))
}

fn mellin_quad_options() -> QuadOptions {
    QuadOptions {
        abs_tol: 0.1 * MELLIN_TOL,
        max_segments: 4000,
        min_width: 1e-14,
    }
}

/// `phi_hat(s) = int_0^inf phi(x) x^{s-1} dx` for `Re s > -1`, `s != 0`.
///
/// For `Re s > 0` this is `1/s + int_1^2 phi(x) x^{s-1} dx`; otherwise the
/// continuation `-(1/s) int_1^2 phi'(x) x^s dx`.
pub fn mellin_hat(s: Complex64) -> Result<Complex64> {
    if s.norm() < 1e-12 {
        return Err(Error::Pole(s.norm()));
    }
    if !(s.re > -1.0) || !s.im.is_finite() {
        return Err(Error::Domain(format!("mellin_hat needs Re s > -1, got {s}")));
    }
    if s.re > 0.0 {
        mellin_direct(s)
    } else {
        mellin_by_parts(s)
    }
}

pub fn mellin_direct(s: Complex64) -> Result<Complex64> {
    let sm1 = s - 1.0;
    let r = integrate(
        |x| Ok(bump_unchecked(x) * (sm1 * x.ln()).exp()),
        1.0,
        2.0,
        mellin_quad_options(),
    )?;
    Ok(1.0 / s + r.value)
}

pub fn mellin_by_parts(s: Complex64) -> Result<Complex64> {
    let r = integrate(
        |x| Ok(bump_derivative(x) * (s * x.ln()).exp()),
        1.0,
        2.0,
        mellin_quad_options(),
    )?;
    Ok(-r.value / s)
}

/// `sum_{2 <= n <= 2X} Lambda(n) phi(n/X) / (n^s (log n)^{m+1})`.
pub fn smoothed_sum(l: &SelbergLFunction, m: u32, s: Complex64, x: f64) -> Complex64 {
    let (main, rest) = smoothed_split(l, m, s, x);
    main + rest
}

/// The smoothed sum split into its `n <= X` part (the Dirichlet polynomial) and the
/// transition-zone remainder over `X < n < 2X`.
pub fn smoothed_split(l: &SelbergLFunction, m: u32, s: Complex64, x: f64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    if !(x > 0.0) || !(2.0 * x >= 2.0) {
        return (zero, zero);
    }
    let bound = (2.0 * x).floor() as u64;
    let table = l.lambda_table(bound);
    let mut main = zero;
    let mut rest = zero;
    for term in table.up_to(bound) {
        let ratio = term.n as f64 / x;
        let v = term.lambda * (-s * term.log_n).exp() / term.log_n.powi(m as i32 + 1);
        if ratio <= 1.0 {
            main += v;
        } else {
            rest += v * bump_unchecked(ratio);
        }
    }
    (main, rest)
}

/// `(1/2 pi i) int_{c - iH}^{c + iH} H_m(z + u) phi_hat(u) X^u du` with `H_m` from its Dirichlet series.
/// Needs `Re z + c > 1`.
pub fn mellin_smoothed(l: &SelbergLFunction, m: u32, z: Complex64, x: f64, c: f64, height: f64) -> Result<Complex64> {
    if !(z.re + c > 1.0) || !(c > 0.0) {
        return Err(Error::Domain(format!(
            "need c > 0 and Re z + c > 1, got z = {z}, c = {c}"
        )));
    }
    let n = terms_for_tolerance(l, m, z.re + c, 1e-12, 1 << 22);
    let lx = x.ln();
    let r = integrate(
        |v| {
            let u = Complex64::new(c, v);
            let hm = eval_hm_series(l, m, z + u, n)?.value;
            Ok(hm * mellin_hat(u)? * (u * lx).exp())
        },
        -height,
        height,
        QuadOptions {
            abs_tol: 1e-9,
            max_segments: 4000,
            min_width: 1e-9,
        },
    )?;
    Ok(r.value / (2.0 * PI))
}
