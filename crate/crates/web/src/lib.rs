//! Browser demo: thin wasm-bindgen wrappers returning flat `f64` arrays for plotting.

use hmlab::evaluator::{dirichlet_poly, eval_hm};
use hmlab::lfunction::SelbergLFunction;
use hmlab::sampling::sample_q;
use hmlab::smoothing::{bump, mellin_hat};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

fn js_err(e: hmlab::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// `[x0, phi(x0), x1, phi(x1), ...]` on `[0, 2]`, then `[t0, |phi_hat(sigma + i t0)|, ...]` on `[t_min, t_max]`.
#[wasm_bindgen]
pub fn cutoff_and_mellin(sigma: f64, t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    let n = n.max(2);
    let mut out = Vec::with_capacity(4 * n);
    for i in 0..n {
        let x = 2.0 * i as f64 / (n - 1) as f64;
        out.extend([x, bump(x).map_err(js_err)?]);
    }
    for i in 0..n {
        let t = t_min + (t_max - t_min) * i as f64 / (n - 1) as f64;
        let v = mellin_hat(Complex64::new(sigma, t))
            .map(|v| v.norm())
            .unwrap_or(f64::NAN);
        out.extend([t, v]);
    }
    Ok(out)
}

/// Rows `[t, re H, im H, re P_y, im P_y]` along `sigma + i t`, where `P_y` is the Dirichlet polynomial of length `y`.
#[wasm_bindgen]
pub fn hm_vs_polynomial(m: u32, sigma: f64, t0: f64, t1: f64, n: usize, y: f64) -> Result<Vec<f64>, JsValue> {
    let z = SelbergLFunction::zeta();
    let n = n.max(2);
    let mut out = Vec::with_capacity(5 * n);
    for i in 0..n {
        let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
        let s = Complex64::new(sigma, t);
        let h = eval_hm(&z, m, s)
            .map(|v| v.value)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let p = dirichlet_poly(&z, m, s, y);
        out.extend([t, h.re, h.im, p.re, p.im]);
    }
    Ok(out)
}

/// `[re, im, ...]` of `n` random-model samples of `H_m(s)` for zeta.
#[wasm_bindgen]
pub fn random_cloud(m: u32, re: f64, im: f64, n: usize, seed: u64, prime_bound: u64) -> Result<Vec<f64>, JsValue> {
    let z = SelbergLFunction::zeta();
    let set = sample_q(&z, m, &[Complex64::new(re, im)], n, seed, prime_bound, 8).map_err(js_err)?;
    Ok(set.observations.iter().flat_map(|row| [row[0].re, row[0].im]).collect())
}
