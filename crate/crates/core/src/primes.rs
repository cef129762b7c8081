//! Prime tables, prime-power enumeration and small-integer factorization.
//!
//! Tables are cached process-wide and only ever grow, so repeated requests
//! for the same bound share one allocation.

use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTable {
    pub bound: u64,
    pub primes: Vec<u64>,
}

impl PrimeTable {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `<= bound`, which may be smaller than the table's own bound.
    pub fn up_to(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Complete ascending list of primes `<= n` (sieve of Eratosthenes over odd numbers).
pub fn primes_up_to(n: u64) -> Result<PrimeTable> {
    if n < 2 {
        return Err(Error::EmptyTable(n));
    }
    Ok(PrimeTable {
        bound: n,
        primes: sieve(n),
    })
}

fn sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    // index i represents 2i + 1
    let half = ((n - 1) / 2) as usize + 1;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(estimate_pi(n));
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1)
            .filter(|&p| p <= n),
    );
    out
}

fn estimate_pi(n: u64) -> usize {
    let x = n.max(3) as f64;
    (1.3 * x / x.ln()) as usize + 16
}

static PRIME_CACHE: OnceLock<RwLock<Arc<PrimeTable>>> = OnceLock::new();

/// Shared prime table covering at least `bound`.
pub fn cached_primes(bound: u64) -> Arc<PrimeTable> {
    let bound = bound.max(2);
    let cell = PRIME_CACHE.get_or_init(|| {
        RwLock::new(Arc::new(PrimeTable {
            bound: 1 << 16,
            primes: sieve(1 << 16),
        }))
    });
    {
        let table = cell.read().expect("prime cache poisoned");
        if table.bound >= bound {
            return Arc::clone(&table);
        }
    }
    let mut table = cell.write().expect("prime cache poisoned");
    if table.bound < bound {
        let new_bound = bound.max(table.bound.saturating_mul(2));
        *table = Arc::new(PrimeTable {
            bound: new_bound,
            primes: sieve(new_bound),
        });
    }
    Arc::clone(&table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimePower {
    pub n: u64,
    pub p: u64,
    pub k: u32,
    pub log_p: f64,
}

impl PrimePower {
    pub fn log_n(&self) -> f64 {
        self.k as f64 * self.log_p
    }
}

#[derive(Debug)]
pub struct PrimePowerTable {
    pub bound: u64,
    /// Sorted by `n`.
    pub entries: Vec<PrimePower>,
}

impl PrimePowerTable {
    pub fn up_to(&self, bound: u64) -> &[PrimePower] {
        let end = self.entries.partition_point(|e| e.n <= bound);
        &self.entries[..end]
    }
}

static POWER_CACHE: OnceLock<RwLock<Arc<PrimePowerTable>>> = OnceLock::new();

fn build_powers(bound: u64) -> PrimePowerTable {
    let primes = cached_primes(bound);
    let mut entries = Vec::with_capacity(primes.up_to(bound).len() + 64);
    for &p in primes.up_to(bound) {
        let log_p = (p as f64).ln();
        let mut n = p;
        let mut k = 1;
        loop {
            entries.push(PrimePower { n, p, k, log_p });
            match n.checked_mul(p) {
                Some(next) if next <= bound => {
                    n = next;
                    k += 1;
                }
                _ => break,
            }
        }
    }
    entries.sort_unstable_by_key(|e| e.n);
    PrimePowerTable { bound, entries }
}

/// Shared table of all prime powers `p^k <= bound`, ascending in `p^k`.
pub fn cached_prime_powers(bound: u64) -> Arc<PrimePowerTable> {
    let bound = bound.max(2);
    let cell = POWER_CACHE.get_or_init(|| RwLock::new(Arc::new(build_powers(1 << 12))));
    {
        let table = cell.read().expect("prime power cache poisoned");
        if table.bound >= bound {
            return Arc::clone(&table);
        }
    }
    let mut table = cell.write().expect("prime power cache poisoned");
    if table.bound < bound {
        let new_bound = bound.max(table.bound.saturating_mul(2));
        *table = Arc::new(build_powers(new_bound));
    }
    Arc::clone(&table)
}

/// Prime factorization by trial division against the cached table.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let root = (n as f64).sqrt() as u64 + 1;
    let primes = cached_primes(root);
    for &p in primes.up_to(root) {
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, k))` when `n = p^k` with `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

pub fn is_prime(n: u64) -> bool {
    matches!(prime_power(n), Some((_, 1)))
}

/// Number of primes `<= x`.
pub fn prime_pi(x: u64) -> usize {
    if x < 2 {
        return 0;
    }
    cached_primes(x).up_to(x).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(primes_up_to(10).unwrap().primes, vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap().primes, vec![2]);
        assert_eq!(primes_up_to(3).unwrap().primes, vec![2, 3]);
        assert_eq!(primes_up_to(1), Err(Error::EmptyTable(1)));
        assert_eq!(primes_up_to(0), Err(Error::EmptyTable(0)));
    }

    #[test]
    fn factorization_and_prime_powers() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(1_000_003), Some((1_000_003, 1)));
        assert!(!is_prime(1));
        assert!(is_prime(97));
    }

    #[test]
    fn prime_power_table_is_sorted_and_complete() {
        let t = cached_prime_powers(100);
        let ns: Vec<u64> = t.up_to(30).iter().map(|e| e.n).collect();
        assert_eq!(ns, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]);
    }

    #[test]
    fn cache_grows() {
        let a = cached_primes(100);
        assert!(a.bound >= 100);
        let b = cached_primes(300_000);
        assert!(b.bound >= 300_000);
        assert_eq!(prime_pi(100), 25);
    }
}
