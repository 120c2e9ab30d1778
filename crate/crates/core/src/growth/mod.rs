//! Growth of quotient orders along a Z_ℓ-extension.
//!
//! For an elementary torsion module E = ⊕ Λ/(ℓ^{m_i}) ⊕ ⊕ Λ/(P_j) the order of
//! E/ω_nE is ℓ^{e_n} with e_n = μℓ^n + λn + ν for n large, where μ = Σ m_i and
//! λ = Σ deg P_j. Two independent routes compute e_n: exact resultants over ℤ
//! and Smith forms over ℤ/ℓ^N.

pub mod fit;
pub mod linalg;
pub mod module;
pub mod relations;

use thiserror::Error;

use crate::lambda::LambdaError;

pub use fit::{fit_invariants, fit_with_known_mu, gold_lambda, gold_lambda_at, InvariantTriple, Stabilization};
pub use module::{
    codescent_quotient, cyclotomic_factor, quotient_order_exponent, resultant_valuation, CodescentData,
    ElementaryModule, FiniteQuotients, DEFAULT_SNF_PRECISION, PRECISION_MARGIN,
};
pub use relations::{check_relations, cyclotomic_factor_difference, InvariantRelations, RelationCheck};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("quotient by ω_{n} is infinite (a cyclotomic factor is shared)")]
    InfiniteQuotient { n: u32 },
    #[error("an elementary divisor comes within the safety margin of ℓ^{prec}; raise the precision")]
    PrecisionSaturated { prec: u32 },
    #[error("need at least {needed} layers, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("no growth law fits the sequence: {0}")]
    InconsistentSequence(String),
    #[error("the known μ forces λ = {0} < 0")]
    NegativeLambda(i64),
    #[error("integer overflow")]
    Overflow,
}
