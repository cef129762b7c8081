//! Polynomial targets `P(s) = sum_k c_k (s - center)^k`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub center: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Self {
        Self { center, coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), vec![c])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let z = s - self.center;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Least-squares fit of degree `degree` to `(points, values)`, expanded about `center`.
    pub fn fit(points: &[Complex64], values: &[Complex64], degree: usize, center: Complex64) -> Result<Self> {
        if points.len() != values.len() || points.len() <= degree {
            return Err(Error::Domain(format!(
                "need more than {degree} matching points, got {} points and {} values",
                points.len(),
                values.len()
            )));
        }
        let a = DMatrix::from_fn(points.len(), degree + 1, |i, j| (points[i] - center).powu(j as u32));
        let b = DVector::from_column_slice(values);
        let coeffs = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::Domain(format!("least squares failed: {e}")))?;
        Ok(Self::new(center, coeffs.iter().copied().collect()))
    }

    /// `max_i |P(points_i) - values_i|`.
    pub fn sup_distance(&self, points: &[Complex64], values: &[Complex64]) -> f64 {
        points
            .iter()
            .zip(values)
            .map(|(&s, &v)| (self.eval(s) - v).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| format_complex(c)).collect();
        write!(f, "{}", parts.join(","))?;
        if self.center != Complex64::new(0.0, 0.0) {
            write!(f, "@{}", format_complex(self.center))?;
        }
        Ok(())
    }
}

/// `a+bi` with shortest round-trip digits.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parse `a`, `bi`, `a+bi`, `a-bi` (no spaces; exponents like `1e-3` allowed).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::Domain(format!("cannot parse complex number {text:?}"));
    let t = text.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    let real = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(real(t)?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s),
    };
    match split {
        Some(k) => Ok(Complex64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Comma-separated coefficients, optionally followed by `@center`: `0.2`, `0.1+0.2i,1@0.85`.
    fn from_str(text: &str) -> Result<Self> {
        let (coeffs, center) = match text.split_once('@') {
            Some((c, z)) => (c, parse_complex(z)?),
            None => (text, Complex64::new(0.0, 0.0)),
        };
        let coeffs = coeffs.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(center, coeffs))
    }
}
