use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("prime table requested with bound {0} < 2")]
    EmptyTable(u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("too close to the pole at s = 1 (|s - 1| = {0:e})")]
    Pole(f64),
    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),
    #[error("zero on path: |L| = {modulus:e} at {sigma} + {t}i")]
    ZeroOnPath { sigma: f64, t: f64, modulus: f64 },
    #[error("branch continuation failed at {sigma} + {t}i")]
    ContinuationFailed { sigma: f64, t: f64 },
    #[error("quadrature did not converge (estimated error {0:e})")]
    QuadratureNonConvergence(f64),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("ordinates not strictly ascending at line {0}")]
    NonAscending(usize),
    #[error("every sample row failed ({0} attempted)")]
    EmptySample(usize),
    #[error("sample sets have mismatched evaluation points")]
    MismatchedPoints,
    #[error("no evaluation point lies inside the compact set")]
    NoPointsInside,
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
