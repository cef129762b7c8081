//! Compact sets in the strip and the derived abscissae, height window and rectangle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompactShape {
    Rectangle { re: (f64, f64), im: (f64, f64) },
    Disk { center: Complex64, radius: f64 },
}

impl CompactShape {
    pub fn disk(center_re: f64, center_im: f64, radius: f64) -> Self {
        CompactShape::Disk {
            center: Complex64::new(center_re, center_im),
            radius,
        }
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.min_re() + self.max_re()),
            0.5 * (self.min_im() + self.max_im()),
        )
    }

    pub fn min_re(&self) -> f64 {
        match *self {
            CompactShape::Rectangle { re, .. } => re.0,
            CompactShape::Disk { center, radius } => center.re - radius,
        }
    }

    pub fn max_re(&self) -> f64 {
        match *self {
            CompactShape::Rectangle { re, .. } => re.1,
            CompactShape::Disk { center, radius } => center.re + radius,
        }
    }

    pub fn min_im(&self) -> f64 {
        match *self {
            CompactShape::Rectangle { im, .. } => im.0,
            CompactShape::Disk { center, radius } => center.im - radius,
        }
    }

    pub fn max_im(&self) -> f64 {
        match *self {
            CompactShape::Rectangle { im, .. } => im.1,
            CompactShape::Disk { center, radius } => center.im + radius,
        }
    }

    pub fn contains(&self, s: Complex64) -> bool {
        const SLACK: f64 = 1e-12;
        match *self {
            CompactShape::Rectangle { re, im } => {
                s.re >= re.0 - SLACK && s.re <= re.1 + SLACK && s.im >= im.0 - SLACK && s.im <= im.1 + SLACK
            }
            CompactShape::Disk { center, radius } => (s - center).norm() <= radius * (1.0 + 1e-12) + SLACK,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            CompactShape::Rectangle { re, im } => {
                re.0.is_finite()
                    && re.1.is_finite()
                    && im.0.is_finite()
                    && im.1.is_finite()
                    && re.0 <= re.1
                    && im.0 <= im.1
            }
            CompactShape::Disk { center, radius } => {
                center.re.is_finite() && center.im.is_finite() && radius.is_finite() && radius > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("degenerate compact set {self:?}")))
        }
    }

    /// Evaluation grid used for discretized sup-norms.
    pub fn grid(&self, spec: GridSpec) -> Vec<Complex64> {
        match *self {
            CompactShape::Rectangle { re, im } => {
                let n = spec.rect_n.max(1);
                let step = |lo: f64, hi: f64, i: usize| {
                    if n == 1 {
                        0.5 * (lo + hi)
                    } else {
                        lo + (hi - lo) * i as f64 / (n - 1) as f64
                    }
                };
                let mut out = Vec::with_capacity(n * n);
                for j in 0..n {
                    for i in 0..n {
                        out.push(Complex64::new(step(re.0, re.1, i), step(im.0, im.1, j)));
                    }
                }
                out
            }
            CompactShape::Disk { center, radius } => {
                let mut out = Vec::with_capacity(spec.disk_boundary + 1);
                out.push(center);
                for k in 0..spec.disk_boundary {
                    let a = TAU * k as f64 / spec.disk_boundary as f64;
                    out.push(center + Complex64::from_polar(radius, a));
                }
                out
            }
        }
    }
}

/// Grid density for sup-norms: `rect_n x rect_n` for rectangles, center plus `disk_boundary` points for disks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rect_n: usize,
    pub disk_boundary: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            rect_n: 7,
            disk_boundary: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub sigma: (f64, f64),
    pub t: (f64, f64),
}

impl Rect {
    pub fn contains(&self, s: Complex64) -> bool {
        s.re > self.sigma.0 && s.re < self.sigma.1 && s.im > self.t.0 && s.im < self.t.1
    }
}

/// A compact set together with `sigma_0 < sigma_1 < min Re K`, `max Re K < sigma_2 < 1`,
/// its height center `tau_0`, width `|K|`, and the enclosing rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactSetContext {
    pub shape: CompactShape,
    pub sigma_l: f64,
    pub sigma0: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub tau0: f64,
    pub kwidth: f64,
    pub rect_r: Rect,
}

impl CompactSetContext {
    /// `sigma_0 = (sigma_L + min Re K) / 2`; `sigma_1` and `sigma_2` default to the midpoints of their gaps.
    pub fn new(shape: CompactShape, sigma_l: f64) -> Result<Self> {
        let sigma0 = 0.5 * (sigma_l + shape.min_re());
        let sigma1 = 0.5 * (sigma0 + shape.min_re());
        let sigma2 = 0.5 * (shape.max_re() + 1.0);
        Self::with_sigmas(shape, sigma_l, sigma1, sigma2)
    }

    pub fn with_sigmas(shape: CompactShape, sigma_l: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        shape.validate()?;
        let min_re = shape.min_re();
        let max_re = shape.max_re();
        let sigma0 = 0.5 * (sigma_l + min_re);
        if !(sigma_l < sigma0 && sigma0 < sigma1 && sigma1 < min_re && max_re < sigma2 && sigma2 < 1.0) {
            return Err(Error::Domain(format!(
                "need sigma_L < sigma0 < sigma1 < min Re K and max Re K < sigma2 < 1; got \
                 sigma_L = {sigma_l}, sigma0 = {sigma0}, sigma1 = {sigma1}, Re K = [{min_re}, {max_re}], sigma2 = {sigma2}"
            )));
        }
        let (lo, hi) = (shape.min_im(), shape.max_im());
        Ok(Self {
            shape,
            sigma_l,
            sigma0,
            sigma1,
            sigma2,
            tau0: 0.5 * (hi + lo),
            kwidth: hi - lo,
            rect_r: Rect {
                sigma: (sigma1, sigma2),
                t: (lo - 0.5, hi + 0.5),
            },
        })
    }

    pub fn grid(&self, spec: GridSpec) -> Vec<Complex64> {
        self.shape.grid(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_context() {
        let k = CompactSetContext::new(CompactShape::disk(0.85, 0.0, 0.02), 0.5).unwrap();
        assert!((k.sigma0 - 0.665).abs() < 1e-15);
        assert!(k.sigma0 < k.sigma1 && k.sigma1 < 0.83);
        assert!(k.sigma2 > 0.87 && k.sigma2 < 1.0);
        assert_eq!(k.tau0, 0.0);
        assert!((k.kwidth - 0.04).abs() < 1e-15);
        assert_eq!(k.rect_r.t, (-0.52, 0.52));
        assert_eq!(k.rect_r.sigma, (k.sigma1, k.sigma2));
    }

    #[test]
    fn rectangle_context_and_grid() {
        let shape = CompactShape::Rectangle {
            re: (0.7, 0.8),
            im: (1.0, 3.0),
        };
        let k = CompactSetContext::new(shape, 0.5).unwrap();
        assert_eq!(k.tau0, 2.0);
        assert_eq!(k.kwidth, 2.0);
        let g = k.grid(GridSpec::default());
        assert_eq!(g.len(), 49);
        assert!(g.iter().all(|&s| shape.contains(s) && k.rect_r.contains(s)));
    }

    #[test]
    fn rejects_sets_outside_the_strip() {
        assert!(CompactSetContext::new(CompactShape::disk(0.55, 0.0, 0.1), 0.5).is_err());
        assert!(CompactSetContext::new(CompactShape::disk(0.98, 0.0, 0.05), 0.5).is_err());
        assert!(CompactSetContext::new(CompactShape::disk(0.9, 0.0, 0.02), 0.9375).is_err());
        assert!(CompactSetContext::new(CompactShape::disk(0.8, 0.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn disk_grid_is_boundary_plus_center() {
        let shape = CompactShape::disk(0.85, 1.0, 0.02);
        let g = shape.grid(GridSpec::default());
        assert_eq!(g.len(), 17);
        assert_eq!(g[0], Complex64::new(0.85, 1.0));
        assert!(g[1..].iter().all(|&s| ((s - g[0]).norm() - 0.02).abs() < 1e-15));
    }
}
