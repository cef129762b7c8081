//! Zero tables: one ordinate per line (`beta = 1/2`), or `beta gamma` per line; `#` starts a comment.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    /// `(beta, gamma)` with `gamma` strictly ascending.
    pub entries: Vec<(f64, f64)>,
    pub source: String,
    pub rh_verified: bool,
}

impl ZeroSet {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
            source: String::new(),
            rh_verified: true,
        }
    }

    /// Validated construction from `(beta, gamma)` pairs.
    pub fn from_entries(entries: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self> {
        for (i, &(b, g)) in entries.iter().enumerate() {
            if !(b > 0.0 && b < 1.0) || !g.is_finite() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("zero {b} + {g}i outside the critical strip"),
                });
            }
            if i > 0 && !(g > entries[i - 1].1) {
                return Err(Error::NonAscending(i + 1));
            }
        }
        let rh_verified = entries.iter().all(|&(b, _)| b == 0.5);
        Ok(Self {
            entries,
            source: source.into(),
            rh_verified,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Zeros with `beta > sigma`.
    pub fn off_line(&self, sigma: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.entries.iter().copied().filter(move |&(b, _)| b > sigma)
    }
}

pub fn parse_zeros(text: &str, source: &str) -> Result<ZeroSet> {
    let mut entries: Vec<(f64, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("not a number: {s:?}"),
            })
        };
        let (beta, gamma) = match fields.as_slice() {
            [g] => (0.5, num(g)?),
            [b, g] => (num(b)?, num(g)?),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected `gamma` or `beta gamma`, got {body:?}"),
                })
            }
        };
        if !(beta > 0.0 && beta < 1.0) || !gamma.is_finite() {
            return Err(Error::Parse {
                line,
                msg: format!("zero {beta} + {gamma}i outside the critical strip"),
            });
        }
        if let Some(&(_, prev)) = entries.last() {
            if !(gamma > prev) {
                return Err(Error::NonAscending(line));
            }
        }
        entries.push((beta, gamma));
    }
    ZeroSet::from_entries(entries, source)
}

pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_zeros(&text, &path.display().to_string())
}

/// Number of entries with `beta > sigma` and `|gamma| < T`.
pub fn count_zeros_n(z: &ZeroSet, sigma: f64, t: f64) -> usize {
    z.entries.iter().filter(|&&(b, g)| b > sigma && g.abs() < t).count()
}
