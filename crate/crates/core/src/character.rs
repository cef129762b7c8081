//! Dirichlet characters stored as exact residue-class tables.
//!
//! Each unit residue `a` carries an exponent `e(a)` with `chi(a) = exp(2 pi i e(a) / order)`,
//! so powers `chi(a)^k` are computed on the exponents without rounding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    /// `None` for residues sharing a factor with the modulus.
    exponents: Vec<Option<u64>>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Kronecker symbol `(d / n)` for `n >= 0`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    let mut tz = 0;
    while n.is_multiple_of(2) {
        n /= 2;
        tz += 1;
    }
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if tz % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    // Jacobi (d / n) for odd n
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

impl DirichletCharacter {
    /// Validated construction from an exponent table indexed by residue `0..modulus`.
    pub fn from_exponents(modulus: u64, order: u64, exponents: Vec<Option<u64>>) -> Result<Self> {
        if !(1..=MAX_MODULUS).contains(&modulus) {
            return Err(Error::Domain(format!(
                "character modulus {modulus} outside [1, {MAX_MODULUS}]"
            )));
        }
        if order == 0 {
            return Err(Error::Domain("character order must be positive".into()));
        }
        if exponents.len() != modulus as usize {
            return Err(Error::Domain(format!(
                "expected {modulus} residues, got {}",
                exponents.len()
            )));
        }
        for (a, e) in exponents.iter().enumerate() {
            let unit = gcd(a as u64, modulus) == 1;
            if unit != e.is_some() {
                return Err(Error::Domain(format!(
                    "residue {a}: value must be nonzero exactly on units"
                )));
            }
        }
        let exponents: Vec<Option<u64>> = exponents.into_iter().map(|e| e.map(|x| x % order)).collect();
        let chi = Self {
            modulus,
            order,
            exponents,
        };
        for a in 0..modulus {
            for b in 0..modulus {
                let lhs = chi.exponents[((a * b) % modulus) as usize];
                let rhs = match (chi.exponents[a as usize], chi.exponents[b as usize]) {
                    (Some(x), Some(y)) => Some((x + y) % order),
                    _ => None,
                };
                if lhs != rhs {
                    return Err(Error::Domain(format!("table is not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(chi)
    }

    /// Real character `n -> (d / n)` attached to a fundamental discriminant `d`.
    pub fn kronecker(d: i64) -> Result<Self> {
        let q = d.unsigned_abs();
        if q < 3 {
            return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
        }
        let exps = (0..q)
            .map(|n| match kronecker(d, n) {
                1 => Some(0),
                -1 => Some(1),
                _ => None,
            })
            .collect();
        let chi = Self::from_exponents(q, 2, exps)?;
        if !chi.is_primitive() || chi.is_principal() {
            return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
        }
        Ok(chi)
    }

    /// Character mod an odd prime `q` sending a primitive root `g` to `exp(2 pi i j / (q - 1))`.
    pub fn prime_modulus(q: u64, j: u64) -> Result<Self> {
        if q < 3 || !crate::primes::is_prime(q) {
            return Err(Error::Domain(format!("{q} is not an odd prime")));
        }
        let order = q - 1;
        if j.is_multiple_of(order) {
            return Err(Error::Domain("index j = 0 gives the principal character".into()));
        }
        let g = primitive_root(q);
        let mut exps = vec![None; q as usize];
        let mut x = 1u64;
        for k in 0..order {
            exps[x as usize] = Some((j * k) % order);
            x = x * g % q;
        }
        Self::from_exponents(q, order, exps)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self, n: u64) -> Option<u64> {
        self.exponents[(n % self.modulus) as usize]
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.value_pow(n, 1)
    }

    /// `chi(n)^k`, exact on the exponent table.
    pub fn value_pow(&self, n: u64, k: u64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => root_of_unity((e * (k % self.order)) % self.order, self.order),
        }
    }

    pub fn is_real(&self) -> bool {
        self.exponents.iter().flatten().all(|&e| (2 * e) % self.order == 0)
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().flatten().all(|&e| e == 0)
    }

    /// No proper divisor `d` of the modulus has `chi` trivial on units `= 1 mod d`.
    pub fn is_primitive(&self) -> bool {
        let q = self.modulus;
        for d in 1..q {
            if !q.is_multiple_of(d) {
                continue;
            }
            let induced = (0..q)
                .filter(|&a| gcd(a, q) == 1 && a % d == 1 % d)
                .all(|a| self.exponents[a as usize] == Some(0));
            if induced {
                return false;
            }
        }
        true
    }
}

fn root_of_unity(e: u64, order: u64) -> Complex64 {
    // exact values at the quarter turns keep e.g. chi_{-4} integral
    let four = 4 * e;
    if four.is_multiple_of(order) {
        return match (four / order) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = TAU * e as f64 / order as f64;
    Complex64::new(angle.cos(), angle.sin())
}

fn primitive_root(q: u64) -> u64 {
    let phi = q - 1;
    let factors: Vec<u64> = crate::primes::factorize(phi).into_iter().map(|(p, _)| p).collect();
    (2..q)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, phi / f, q) != 1))
        .expect("odd primes have primitive roots")
}
