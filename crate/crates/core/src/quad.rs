//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub max_segments: usize,
    /// Segments narrower than this are not split further.
    pub min_width: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            max_segments: 400,
            min_width: 1e-12,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        kron += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).norm();
    Ok((value, error))
}

/// Integrate `f` over `[a, b]`, bisecting the worst segment until the summed
/// Kronrod-minus-Gauss estimate drops below `opts.abs_tol`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evals: 0,
        });
    }
    let (value, error) = gk15(&mut f, a, b)?;
    let mut segments = vec![Segment { a, b, value, error }];
    let mut evals = 15;
    loop {
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        if total_err <= opts.abs_tol {
            break;
        }
        if segments.len() >= opts.max_segments {
            return Err(Error::QuadratureNonConvergence(total_err));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("segment list is never empty");
        let seg = segments.swap_remove(worst);
        if (seg.b - seg.a).abs() < opts.min_width {
            return Err(Error::QuadratureNonConvergence(total_err));
        }
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&mut f, seg.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, seg.b)?;
        evals += 30;
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
    }
    // sum in left-to-right order so the result does not depend on refinement history
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segments.iter().map(|s| s.value).sum();
    let error = segments.iter().map(|s| s.error).sum();
    Ok(QuadResult { value, error, evals })
}

/// `integrate` over consecutive breakpoints, splitting the tolerance evenly.
pub fn integrate_pieces<F>(mut f: F, breaks: &[f64], opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let pieces = breaks.len().saturating_sub(1).max(1);
    let sub = QuadOptions {
        abs_tol: opts.abs_tol / pieces as f64,
        ..opts
    };
    let mut out = QuadResult {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evals: 0,
    };
    for w in breaks.windows(2) {
        let r = integrate(&mut f, w[0], w[1], sub)?;
        out.value += r.value;
        out.error += r.error;
        out.evals += r.evals;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| Ok(Complex64::new(x * x, 1.0)), 0.0, 3.0, QuadOptions::default()).unwrap();
        assert!((r.value - Complex64::new(9.0, 3.0)).norm() < 1e-13);
    }

    #[test]
    fn oscillatory_complex() {
        // int_0^{10} e^{i 20 x} dx
        let r = integrate(
            |x| Ok(Complex64::new(0.0, 20.0 * x).exp()),
            0.0,
            10.0,
            QuadOptions {
                abs_tol: 1e-12,
                ..Default::default()
            },
        )
        .unwrap();
        let exact = (Complex64::new(0.0, 200.0).exp() - 1.0) / Complex64::new(0.0, 20.0);
        assert!((r.value - exact).norm() < 1e-11);
        assert!(r.error <= 1e-12);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // int_0^1 x^{-1/2} = 2
        let r = integrate(
            |x| Ok(Complex64::new(x.powf(-0.5), 0.0)),
            0.0,
            1.0,
            QuadOptions {
                abs_tol: 1e-8,
                max_segments: 2000,
                min_width: 1e-300,
            },
        )
        .unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-7);
    }

    #[test]
    fn propagates_integrand_errors_and_budget() {
        let r = integrate(|_| Err(Error::Pole(0.0)), 0.0, 1.0, QuadOptions::default());
        assert_eq!(r.unwrap_err(), Error::Pole(0.0));
        let r = integrate(
            |x| Ok(Complex64::new(1.0 / (x - 0.5).abs().max(1e-300), 0.0)),
            0.0,
            1.0,
            QuadOptions {
                max_segments: 20,
                ..Default::default()
            },
        );
        assert!(matches!(r, Err(Error::QuadratureNonConvergence(_))));
    }
}
