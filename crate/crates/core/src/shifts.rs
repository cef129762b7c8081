//! Sets of admissible vertical shifts: `G_{sigma0, Delta}` intersected with `[T, 2T]`,
//! and the exceptional set `l(T; sigma3, y)` of the Dirichlet-polynomial approximation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region::CompactSetContext;
use crate::zeros::ZeroSet;

/// Disjoint ascending closed intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    pub intervals: Vec<(f64, f64)>,
    pub total_measure: f64,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            total_measure: 0.0,
        }
    }

    pub fn span(lo: f64, hi: f64) -> Self {
        Self::from_raw(vec![(lo, hi)])
    }

    /// Union of arbitrary intervals; empty and inverted ones are dropped, overlapping ones merged.
    pub fn from_raw(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|&(a, b)| a < b);
        raw.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self::from_sorted(out)
    }

    fn from_sorted(intervals: Vec<(f64, f64)>) -> Self {
        let total_measure = intervals.iter().map(|(a, b)| b - a).sum();
        Self {
            intervals,
            total_measure,
        }
    }

    pub fn measure(&self) -> f64 {
        self.total_measure
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|&(_, b)| b < x);
        i < self.intervals.len() && self.intervals[i].0 <= x
    }

    /// Remove the open windows `(a, b)` from the set.
    pub fn subtract_open(&self, windows: &[(f64, f64)]) -> Self {
        let cut = Self::from_raw(windows.to_vec());
        let mut out = Vec::new();
        for &(lo, hi) in &self.intervals {
            let mut start = lo;
            for &(a, b) in &cut.intervals {
                if b <= start || a >= hi {
                    continue;
                }
                if a > start {
                    out.push((start, a));
                }
                start = start.max(b);
                if start >= hi {
                    break;
                }
            }
            if start < hi {
                out.push((start, hi));
            }
        }
        Self::from_sorted(out)
    }

    pub fn intersect(&self, lo: f64, hi: f64) -> Self {
        let out = self
            .intervals
            .iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (a.max(lo), b.min(hi));
                (a < b).then_some((a, b))
            })
            .collect();
        Self::from_sorted(out)
    }

    /// The point at arc-length position `pos` in `[0, measure]`.
    pub fn point_at(&self, pos: f64) -> Option<f64> {
        if self.intervals.is_empty() || !(pos >= 0.0) || pos > self.total_measure {
            return None;
        }
        let mut left = pos;
        for &(a, b) in &self.intervals {
            if left <= b - a {
                return Some(a + left);
            }
            left -= b - a;
        }
        self.intervals.last().map(|&(_, b)| b)
    }
}

/// The windows removed from the real line in `G_{sigma0, Delta}`: `(gamma - tau0 - Delta, gamma - tau0 + Delta)`
/// for each zero with `beta > sigma0`, plus `(-tau0 - Delta, -tau0 + Delta)` around the pole when `pole`.
pub fn exclusion_windows(z: &ZeroSet, sigma0: f64, tau0: f64, delta: f64, pole: bool) -> Vec<(f64, f64)> {
    let mut w: Vec<(f64, f64)> = z
        .off_line(sigma0)
        .map(|(_, g)| (g - tau0 - delta, g - tau0 + delta))
        .collect();
    if pole {
        w.push((-tau0 - delta, -tau0 + delta));
    }
    w
}

/// `G_{sigma0(K), delta} cap [T, 2T]`.
pub fn admissible_shifts(z: &ZeroSet, k: &CompactSetContext, t: f64, delta: f64, pole: bool) -> Result<IntervalSet> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("T must be positive, got {t}")));
    }
    let windows = exclusion_windows(z, k.sigma0, k.tau0, delta, pole);
    Ok(IntervalSet::span(t, 2.0 * t).subtract_open(&windows))
}

/// Measure of the union of exclusion windows clipped to `[T, 2T]`.
pub fn excluded_measure(z: &ZeroSet, k: &CompactSetContext, t: f64, delta: f64, pole: bool) -> f64 {
    let clipped = exclusion_windows(z, k.sigma0, k.tau0, delta, pole)
        .into_iter()
        .map(|(a, b)| (a.max(t), b.min(2.0 * t)))
        .collect();
    IntervalSet::from_raw(clipped).measure()
}

/// `I_K(T)`: `Delta = |K| + 1`.
pub fn shift_set_i(z: &ZeroSet, k: &CompactSetContext, t: f64, pole: bool) -> Result<IntervalSet> {
    admissible_shifts(z, k, t, k.kwidth + 1.0, pole)
}

/// `X_K(T)`: `Delta = |K| + y + 4`.
pub fn shift_set_x(z: &ZeroSet, k: &CompactSetContext, t: f64, y: f64, pole: bool) -> Result<IntervalSet> {
    admissible_shifts(z, k, t, k.kwidth + y + 4.0, pole)
}

/// `Y(T) = (log T)^{4 / (sigma1 - sigma0)}`, reference value only.
pub fn y_reference(t: f64, sigma0: f64, sigma1: f64) -> f64 {
    t.ln().powf(4.0 / (sigma1 - sigma0))
}

/// `l(T; sigma3, y)`: windows of half-width `y + 3` about zeros with `beta > sigma3`, `gamma in [T/2, 5T/2]`,
/// plus the two end pieces of that range.
pub fn exceptional_set(z: &ZeroSet, t: f64, sigma3: f64, y: f64) -> IntervalSet {
    let (lo, hi) = (0.5 * t, 2.5 * t);
    let r = y + 3.0;
    let mut raw: Vec<(f64, f64)> = z
        .off_line(sigma3)
        .filter(|&(_, g)| g >= lo && g <= hi)
        .map(|(_, g)| (g - r, g + r))
        .collect();
    raw.push((lo, lo + r));
    raw.push((hi - r, hi));
    IntervalSet::from_raw(raw)
}

/// `[T/2, 5T/2]` minus `l(T; sigma3, y)`: heights where the Dirichlet-polynomial approximation applies.
pub fn approximation_heights(z: &ZeroSet, t: f64, sigma3: f64, y: f64) -> IntervalSet {
    let l = exceptional_set(z, t, sigma3, y);
    IntervalSet::span(0.5 * t, 2.5 * t).subtract_open(&l.intervals)
}
