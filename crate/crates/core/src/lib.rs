//! Exact arithmetic for logarithmic class groups along Z_ℓ-extensions.
//!
//! * [`padic`]: truncated ℓ-adic integers, Iwasawa's logarithm, logarithmic
//!   valuations and divisors over ℚ.
//! * [`localfields`]: classical and logarithmic ramification indices of
//!   abelian local fields presented inside ℚ_p(μ_m).
//! * [`lambda`]: the Iwasawa algebra Z_ℓ[[T]] truncated to (ℓ^N, T^M).
//! * [`growth`]: elementary Λ-modules, quotient orders along the tower and
//!   fitting of the (μ, λ, ν) growth law.
//! * [`classgroups`]: class groups of imaginary quadratic fields from binary
//!   quadratic forms.
//! * [`tables`]: ingestion and verification of tabulated tower data.

pub mod arith;
pub mod classgroups;
pub mod growth;
pub mod lambda;
pub mod localfields;
pub mod padic;
pub mod poly;
pub mod tables;
