#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod character;
pub mod error;
pub mod evaluator;
pub mod experiments;
pub mod lfunction;
pub mod polynomial;
pub mod primes;
pub mod quad;
pub mod random;
pub mod region;
pub mod sampling;
pub mod shifts;
pub mod smoothing;
pub mod witness;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
