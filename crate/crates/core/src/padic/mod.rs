//! Truncated ℓ-adic integers, the Iwasawa logarithm and logarithmic
//! valuations over ℚ.
//!
//! Every value lives in Z/ℓ^N for an explicit precision N. Operations that
//! lose digits (division by ℓ, logarithms) work internally at a higher
//! precision so the returned value is correct to the full N digits.

mod divisor;
pub(crate) mod int;
mod log;

pub use divisor::LogDivisor;
pub use int::{PadicInt, PadicValue};
pub use log::{log_one_unit, teichmuller, LogContext};

use thiserror::Error;

/// Default number of ℓ-adic digits carried by [`LogContext::with_default_precision`].
pub const DEFAULT_PRECISION: u32 = 32;

/// Nonzero rationals, the elements x ∈ ℚ^× fed to valuations and divisors.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("ℓ = 2 is not supported")]
    EvenPrime,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least one digit")]
    ZeroPrecision,
    #[error("argument is not an ℓ-adic unit")]
    NonUnit,
    #[error("argument is not congruent to 1 mod ℓ")]
    NotOneUnit,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("{what} vanishes modulo ℓ^N; raise the precision")]
    DegenerateAtPrecision { what: String },
    #[error("needs {needed} digits of precision, only {available} available")]
    PrecisionExhausted { needed: u32, available: u32 },
    #[error("value is not divisible by ℓ^{k}")]
    NotDivisible { k: u32 },
    #[error("cannot factor {0} by trial division")]
    Unfactorable(String),
}

/// Parses `NUM/DEN` or a bare integer into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let r: Rational = s.parse().map_err(|e| format!("invalid rational {s:?}: {e}"))?;
    Ok(r)
}
