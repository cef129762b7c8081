//! Selberg-class L-functions described by their local log-coefficients `b(p^k)`.
//!
//! The Dirichlet coefficients `a(n)` are always derived from `b` through the
//! local Euler factors, so the product representation holds by construction.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::{cached_prime_powers, cached_primes, factorize, prime_power};

/// `b(p^k)` keyed by `(p, k)`.
pub type LocalCoefficients = BTreeMap<(u64, u32), Complex64>;

/// Largest `n` held in the lazily grown `a(n)` table; larger arguments are factored on demand.
const A_CACHE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LKind {
    Zeta,
    Dirichlet(DirichletCharacter),
    /// File-supplied `b(p^k)`; absent entries are zero.
    Custom(LocalCoefficients),
}

/// One nonzero term `Lambda_L(n)` of `-L'/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaTerm {
    pub n: u64,
    pub p: u64,
    pub k: u32,
    pub log_n: f64,
    pub lambda: Complex64,
}

#[derive(Debug)]
pub struct LambdaTable {
    pub bound: u64,
    pub terms: Vec<LambdaTerm>,
}

impl LambdaTable {
    pub fn up_to(&self, bound: u64) -> &[LambdaTerm] {
        let end = self.terms.partition_point(|t| t.n <= bound);
        &self.terms[..end]
    }
}

pub struct SelbergLFunction {
    pub name: String,
    pub degree: f64,
    pub has_pole_at_one: bool,
    pub theta: f64,
    /// Constant `C` in `|b(p^k)| <= C p^{k theta}`.
    pub ramanujan_constant: f64,
    pub kappa_hint: Option<f64>,
    pub sigma_l: f64,
    /// Functional-equation data, stored verbatim and never interpreted.
    pub functional_equation: Option<String>,
    kind: LKind,
    a_cache: RwLock<Arc<Vec<Complex64>>>,
    lambda_cache: RwLock<Arc<LambdaTable>>,
}

impl fmt::Debug for SelbergLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelbergLFunction")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("has_pole_at_one", &self.has_pole_at_one)
            .field("theta", &self.theta)
            .field("sigma_l", &self.sigma_l)
            .finish_non_exhaustive()
    }
}

impl Clone for SelbergLFunction {
    fn clone(&self) -> Self {
        let mut out = Self::build(self.name.clone(), self.kind.clone());
        out.degree = self.degree;
        out.has_pole_at_one = self.has_pole_at_one;
        out.theta = self.theta;
        out.ramanujan_constant = self.ramanujan_constant;
        out.kappa_hint = self.kappa_hint;
        out.sigma_l = self.sigma_l;
        out.functional_equation = self.functional_equation.clone();
        out
    }
}

impl SelbergLFunction {
    fn build(name: String, kind: LKind) -> Self {
        Self {
            name,
            degree: 1.0,
            has_pole_at_one: false,
            theta: 0.0,
            ramanujan_constant: 1.0,
            kappa_hint: Some(1.0),
            sigma_l: 0.5,
            functional_equation: None,
            kind,
            a_cache: RwLock::new(Arc::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])),
            lambda_cache: RwLock::new(Arc::new(LambdaTable {
                bound: 1,
                terms: Vec::new(),
            })),
        }
    }

    pub fn zeta() -> Self {
        let mut l = Self::build("zeta".into(), LKind::Zeta);
        l.has_pole_at_one = true;
        l.functional_equation = Some("Q=pi^{-1/2}; lambda=1/2; mu=0; omega=1".into());
        l
    }

    /// `L(s, chi)` for a primitive non-principal character.
    pub fn dirichlet(name: impl Into<String>, chi: DirichletCharacter) -> Result<Self> {
        if chi.is_principal() || !chi.is_primitive() {
            return Err(Error::Domain(
                "Dirichlet L-functions need a primitive non-principal character".into(),
            ));
        }
        let mut l = Self::build(name.into(), LKind::Dirichlet(chi));
        l.sigma_l = default_sigma_l(1.0, false);
        Ok(l)
    }

    pub fn custom(name: impl Into<String>, coefficients: LocalCoefficients, meta: CustomMeta) -> Result<Self> {
        if !(0.0..0.5).contains(&meta.theta) {
            return Err(Error::Domain(format!("theta = {} outside [0, 1/2)", meta.theta)));
        }
        if meta.degree < 0.0 {
            return Err(Error::Domain(format!("degree = {} is negative", meta.degree)));
        }
        let sigma_l = meta.sigma_l.unwrap_or_else(|| default_sigma_l(meta.degree, false));
        if !(0.5..1.0).contains(&sigma_l) {
            return Err(Error::Domain(format!("sigma_L = {sigma_l} outside [1/2, 1)")));
        }
        let mut l = Self::build(name.into(), LKind::Custom(coefficients));
        l.degree = meta.degree;
        l.theta = meta.theta;
        l.has_pole_at_one = meta.pole;
        l.sigma_l = sigma_l;
        l.ramanujan_constant = meta.ramanujan_constant;
        l.kappa_hint = meta.kappa;
        for v in l.ramanujan_violations(1_000_000) {
            log::warn!(
                "{}: |b({}^{})| = {:.3e} exceeds C p^(k theta) = {:.3e}",
                l.name,
                v.p,
                v.k,
                v.modulus,
                v.bound
            );
        }
        Ok(l)
    }

    /// Parse a coefficient file: `p k re_b im_b` records with `# key=value` metadata.
    pub fn from_coefficient_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let name = path
            .as_ref()
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        let (coefficients, meta) = parse_coefficient_text(&text)?;
        Self::custom(meta.name.clone().unwrap_or(name), coefficients, meta)
    }

    pub fn kind(&self) -> &LKind {
        &self.kind
    }

    pub fn is_zeta(&self) -> bool {
        matches!(self.kind, LKind::Zeta)
    }

    /// True for instances whose analytic continuation into the strip is available.
    pub fn is_builtin(&self) -> bool {
        !matches!(self.kind, LKind::Custom(_))
    }

    /// Local log-coefficient `b(p^k)`.
    pub fn b_coeff(&self, p: u64, k: u32) -> Complex64 {
        match &self.kind {
            LKind::Zeta => Complex64::new(1.0 / k as f64, 0.0),
            LKind::Dirichlet(chi) => chi.value_pow(p, k as u64) / k as f64,
            LKind::Custom(map) => map.get(&(p, k)).copied().unwrap_or_default(),
        }
    }

    /// `Lambda_L(n) = b(p^k) log p^k` on prime powers, zero elsewhere.
    pub fn von_mangoldt(&self, n: u64) -> Complex64 {
        match prime_power(n) {
            Some((p, k)) => self.b_coeff(p, k) * (k as f64 * (p as f64).ln()),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `a(p^k)` for `k = 0..=kmax`, the coefficients of `exp(sum_j b(p^j) x^j)`.
    pub fn local_coefficients(&self, p: u64, kmax: u32) -> Vec<Complex64> {
        let b: Vec<Complex64> = (0..=kmax)
            .map(|j| {
                if j == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.b_coeff(p, j)
                }
            })
            .collect();
        formal_exp(&b)
    }

    pub fn dirichlet_coefficient(&self, n: u64) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        if n <= A_CACHE_LIMIT {
            let table = self.a_table(n);
            return table[n as usize];
        }
        self.dirichlet_coefficient_direct(n)
    }

    fn dirichlet_coefficient_direct(&self, n: u64) -> Complex64 {
        factorize(n)
            .into_iter()
            .map(|(p, k)| self.local_coefficients(p, k)[k as usize])
            .product()
    }

    fn a_table(&self, n: u64) -> Arc<Vec<Complex64>> {
        {
            let t = self.a_cache.read().expect("a(n) cache poisoned");
            if t.len() as u64 > n {
                return Arc::clone(&t);
            }
        }
        let mut t = self.a_cache.write().expect("a(n) cache poisoned");
        if t.len() as u64 <= n {
            let bound = n.max(2 * t.len() as u64).min(A_CACHE_LIMIT);
            *t = Arc::new(self.compute_a_table(bound));
        }
        Arc::clone(&t)
    }

    fn compute_a_table(&self, bound: u64) -> Vec<Complex64> {
        let size = bound as usize + 1;
        let mut spf = vec![0u32; size];
        for &p in cached_primes(bound).up_to(bound) {
            let mut m = p as usize;
            while m < size {
                if spf[m] == 0 {
                    spf[m] = p as u32;
                }
                m += p as usize;
            }
        }
        let mut a = vec![Complex64::new(0.0, 0.0); size];
        a[1] = Complex64::new(1.0, 0.0);
        let mut local: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
        for n in 2..size {
            let p = spf[n] as u64;
            let mut rest = n as u64;
            let mut k = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                k += 1;
            }
            let entry = local.entry(p).or_insert_with(|| self.local_coefficients(p, 1));
            if entry.len() <= k as usize {
                *entry = self.local_coefficients(p, k.max(2 * entry.len() as u32));
            }
            a[n] = entry[k as usize] * a[rest as usize];
        }
        a
    }

    /// Nonzero `Lambda_L(n)` for `n <= bound`, ascending in `n`.
    pub fn lambda_table(&self, bound: u64) -> Arc<LambdaTable> {
        {
            let t = self.lambda_cache.read().expect("lambda cache poisoned");
            if t.bound >= bound {
                return Arc::clone(&t);
            }
        }
        let mut t = self.lambda_cache.write().expect("lambda cache poisoned");
        if t.bound < bound {
            let new_bound = bound.max(t.bound.saturating_mul(2)).max(64);
            let powers = cached_prime_powers(new_bound);
            let terms = powers
                .up_to(new_bound)
                .iter()
                .filter_map(|pp| {
                    let b = self.b_coeff(pp.p, pp.k);
                    if b == Complex64::new(0.0, 0.0) {
                        return None;
                    }
                    let log_n = pp.log_n();
                    Some(LambdaTerm {
                        n: pp.n,
                        p: pp.p,
                        k: pp.k,
                        log_n,
                        lambda: b * log_n,
                    })
                })
                .collect();
            *t = Arc::new(LambdaTable {
                bound: new_bound,
                terms,
            });
        }
        Arc::clone(&t)
    }

    /// Majorant `C n^theta log n` for `|Lambda_L(n)|`.
    pub fn lambda_majorant(&self, n: f64) -> f64 {
        self.ramanujan_constant * n.powf(self.theta) * n.ln()
    }

    /// Sampled check of `|b(p^k)| <= C p^{k theta}` over `p^k <= limit`.
    pub fn ramanujan_violations(&self, limit: u64) -> Vec<RamanujanViolation> {
        let powers = cached_prime_powers(limit);
        powers
            .up_to(limit)
            .iter()
            .filter_map(|pp| {
                let modulus = self.b_coeff(pp.p, pp.k).norm();
                let bound = self.ramanujan_constant * (pp.p as f64).powf(pp.k as f64 * self.theta) * (1.0 + 1e-12);
                (modulus > bound).then_some(RamanujanViolation {
                    p: pp.p,
                    k: pp.k,
                    modulus,
                    bound,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamanujanViolation {
    pub p: u64,
    pub k: u32,
    pub modulus: f64,
    pub bound: f64,
}

/// Header metadata of a coefficient file.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomMeta {
    pub name: Option<String>,
    pub degree: f64,
    pub theta: f64,
    pub pole: bool,
    pub sigma_l: Option<f64>,
    pub ramanujan_constant: f64,
    pub kappa: Option<f64>,
}

impl Default for CustomMeta {
    fn default() -> Self {
        Self {
            name: None,
            degree: 1.0,
            theta: 0.0,
            pole: false,
            sigma_l: None,
            ramanujan_constant: 1.0,
            kappa: None,
        }
    }
}

pub fn parse_coefficient_text(text: &str) -> Result<(LocalCoefficients, CustomMeta)> {
    let mut meta = CustomMeta::default();
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('#') {
            for token in header.split_whitespace() {
                let Some((key, value)) = token.split_once('=') else {
                    continue;
                };
                let num = || {
                    value.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad value for {key}: {value:?}"),
                    })
                };
                match key {
                    "degree" => meta.degree = num()?,
                    "theta" => meta.theta = num()?,
                    "sigma_L" => meta.sigma_l = Some(num()?),
                    "C" => meta.ramanujan_constant = num()?,
                    "kappa" => meta.kappa = Some(num()?),
                    "name" => meta.name = Some(value.to_string()),
                    "pole" => {
                        meta.pole = match value {
                            "0" => false,
                            "1" => true,
                            _ => {
                                return Err(Error::Parse {
                                    line,
                                    msg: format!("pole must be 0 or 1, got {value:?}"),
                                })
                            }
                        }
                    }
                    other => log::warn!("line {line}: ignoring unknown header key {other:?}"),
                }
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line,
                msg: format!("expected `p k re_b im_b`, found {} fields", fields.len()),
            });
        }
        let p: u64 = fields[0].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad prime {:?}", fields[0]),
        })?;
        let k: u32 = fields[1].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad exponent {:?}", fields[1]),
        })?;
        let re: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad real part {:?}", fields[2]),
        })?;
        let im: f64 = fields[3].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad imaginary part {:?}", fields[3]),
        })?;
        if !crate::primes::is_prime(p) {
            return Err(Error::Parse {
                line,
                msg: format!("{p} is not prime"),
            });
        }
        if k == 0 {
            return Err(Error::Parse {
                line,
                msg: "exponent k must be >= 1".into(),
            });
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse {
                line,
                msg: "non-finite coefficient".into(),
            });
        }
        if map.insert((p, k), Complex64::new(re, im)).is_some() {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate record for p = {p}, k = {k}"),
            });
        }
    }
    Ok((map, meta))
}

/// Coefficients of `exp(B(x))` for `B = sum_{j>=1} b[j] x^j` (`b[0]` ignored), same length as `b`.
pub fn formal_exp(b: &[Complex64]) -> Vec<Complex64> {
    let n = b.len();
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return a;
    }
    a[0] = Complex64::new(1.0, 0.0);
    // A' = B' A
    for i in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=i {
            acc += b[j] * a[i - j] * j as f64;
        }
        a[i] = acc / i as f64;
    }
    a
}

/// `(1 / pi(x)) sum_{p <= x} |a(p)|^2`.
pub fn prime_mean_square(l: &SelbergLFunction, x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("prime mean-square needs x >= 2, got {x}")));
    }
    let bound = x.floor() as u64;
    let table = cached_primes(bound);
    let primes = table.up_to(bound);
    let total: f64 = primes.iter().map(|&p| l.b_coeff(p, 1).norm_sqr()).sum();
    Ok(total / primes.len() as f64)
}

/// Zero-density abscissa for a given degree: `1/2` under the density hypothesis, else `1 - 1/(4(d + 3))`.
pub fn default_sigma_l(degree: f64, assume_gdh: bool) -> f64 {
    if assume_gdh {
        0.5
    } else {
        1.0 - 1.0 / (4.0 * (degree + 3.0))
    }
}

/// `default_sigma_l` for an instance; the Riemann zeta function always gets `1/2`.
pub fn default_sigma_l_for(l: &SelbergLFunction, assume_gdh: bool) -> f64 {
    if l.is_zeta() {
        0.5
    } else {
        default_sigma_l(l.degree, assume_gdh)
    }
}
