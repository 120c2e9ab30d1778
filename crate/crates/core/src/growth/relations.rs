//! Arithmetic relations between Iwasawa invariants of the modules attached
//! to a Z_ℓ-extension, and comparison of characteristic series up to
//! cyclotomic factors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::module::cyclotomic_factor;
use crate::arith::big_pow;
use crate::lambda::{LambdaElem, LambdaError};
use crate::poly::{self, IntPoly};

/// Invariants of one tower; absent fields skip the relations that use them.
///
/// Naming: `_tilde` is the logarithmic group Cl̃, `_star` the group Cl̃* of
/// divisors of arbitrary degree, `_prime` the quotient Cl′, `_ell` the
/// subgroup generated by primes above ℓ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRelations {
    pub mu_star: Option<i64>,
    pub lambda_star: Option<i64>,
    pub mu: Option<i64>,
    pub lambda: Option<i64>,
    pub mu_prime: Option<i64>,
    pub lambda_prime: Option<i64>,
    pub mu_ell: Option<i64>,
    pub lambda_ell: Option<i64>,
    pub mu_tilde: Option<i64>,
    pub lambda_tilde: Option<i64>,
    pub lambda_tilde_ell: Option<i64>,
    pub mu_star_ell: Option<i64>,
    pub lambda_star_ell: Option<i64>,
    /// Characteristic polynomials of C̃ and C̃*, as integer coefficient lists.
    #[serde(default)]
    pub chi: Option<Vec<i64>>,
    #[serde(default)]
    pub chi_star: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub operands: BTreeMap<String, String>,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl InvariantRelations {
    fn field(&self, name: &str) -> Option<i64> {
        match name {
            "mu_star" => self.mu_star,
            "lambda_star" => self.lambda_star,
            "mu" => self.mu,
            "lambda" => self.lambda,
            "mu_prime" => self.mu_prime,
            "lambda_prime" => self.lambda_prime,
            "mu_ell" => self.mu_ell,
            "lambda_ell" => self.lambda_ell,
            "mu_tilde" => self.mu_tilde,
            "lambda_tilde" => self.lambda_tilde,
            "lambda_tilde_ell" => self.lambda_tilde_ell,
            "mu_star_ell" => self.mu_star_ell,
            "lambda_star_ell" => self.lambda_star_ell,
            _ => unreachable!("unknown invariant {name}"),
        }
    }
}

/// `lhs = Σ rhs + offset`.
struct Linear {
    relation: &'static str,
    lhs: &'static str,
    rhs: &'static [&'static str],
    offset: i64,
}

const LINEAR: &[Linear] = &[
    Linear { relation: "mu_star = mu_tilde", lhs: "mu_star", rhs: &["mu_tilde"], offset: 0 },
    Linear { relation: "lambda_star = lambda_tilde + 1", lhs: "lambda_star", rhs: &["lambda_tilde"], offset: 1 },
    Linear { relation: "mu = mu_prime + mu_ell", lhs: "mu", rhs: &["mu_prime", "mu_ell"], offset: 0 },
    Linear { relation: "lambda = lambda_prime + lambda_ell", lhs: "lambda", rhs: &["lambda_prime", "lambda_ell"], offset: 0 },
    Linear { relation: "lambda_tilde = lambda_prime + lambda_tilde_ell", lhs: "lambda_tilde", rhs: &["lambda_prime", "lambda_tilde_ell"], offset: 0 },
    Linear { relation: "mu_star = mu_prime + mu_star_ell", lhs: "mu_star", rhs: &["mu_prime", "mu_star_ell"], offset: 0 },
    Linear { relation: "lambda_star = lambda_prime + lambda_star_ell", lhs: "lambda_star", rhs: &["lambda_prime", "lambda_star_ell"], offset: 0 },
    Linear { relation: "mu = mu_tilde", lhs: "mu", rhs: &["mu_tilde"], offset: 0 },
    Linear { relation: "lambda_star_ell = lambda_tilde_ell + 1", lhs: "lambda_star_ell", rhs: &["lambda_tilde_ell"], offset: 1 },
];

/// Evaluates every relation whose operands are all present.
pub fn check_relations(r: &InvariantRelations) -> Vec<RelationCheck> {
    let mut out = Vec::new();
    for rel in LINEAR {
        let Some(lhs) = r.field(rel.lhs) else { continue };
        let rhs: Option<Vec<i64>> = rel.rhs.iter().map(|f| r.field(f)).collect();
        let Some(rhs) = rhs else { continue };
        let expected = rhs.iter().sum::<i64>() + rel.offset;
        let mut operands = BTreeMap::new();
        operands.insert(rel.lhs.to_string(), lhs.to_string());
        for (name, v) in rel.rhs.iter().zip(&rhs) {
            operands.insert(name.to_string(), v.to_string());
        }
        out.push(RelationCheck {
            relation: rel.relation.to_string(),
            operands,
            expected: expected.to_string(),
            actual: lhs.to_string(),
            pass: lhs == expected,
        });
    }
    if let (Some(chi), Some(chi_star)) = (&r.chi, &r.chi_star) {
        let chi = poly::from_i64(chi);
        let star = poly::from_i64(chi_star);
        let expected = poly::mul(&chi, &poly::from_i64(&[0, 1]));
        let mut operands = BTreeMap::new();
        operands.insert("chi".to_string(), poly::format(&chi));
        operands.insert("chi_star".to_string(), poly::format(&star));
        out.push(RelationCheck {
            relation: "chi_star = chi * T".to_string(),
            operands,
            expected: poly::format(&expected),
            actual: poly::format(&star),
            pass: expected == star,
        });
    }
    out
}

/// Exact quotient a/b modulo m for monic b, if the remainder vanishes mod m.
fn divide_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Option<IntPoly> {
    let (q, r) = poly::divrem_monic(a, b);
    if r.iter().any(|c| !c.is_multiple_of(m)) {
        return None;
    }
    let half = m / 2;
    let mut q: IntPoly = q
        .iter()
        .map(|c| {
            let x = c.mod_floor(m);
            if x > half {
                x - m
            } else {
                x
            }
        })
        .collect();
    poly::trim(&mut q);
    Some(q)
}

/// If χ1 and χ2 differ, up to a unit of Λ, by a product of the cyclotomic
/// factors ω_0 and ω_k/ω_{k−1}, returns that product as (k, multiplicity)
/// pairs (k = 0 standing for ω_0). The larger series is the numerator.
pub fn cyclotomic_factor_difference(
    chi1: &LambdaElem,
    chi2: &LambdaElem,
) -> Result<Option<Vec<(u32, u32)>>, LambdaError> {
    let w1 = chi1.weierstrass()?;
    let w2 = chi2.weierstrass()?;
    if w1.mu != w2.mu {
        return Ok(None);
    }
    let ell = chi1.ring().ell();
    let prec = chi1.ring().prec().min(chi2.ring().prec()) - w1.mu;
    let m = BigInt::from(big_pow(ell, prec));
    let (big, small) = if w1.lambda() >= w2.lambda() { (&w1.p, &w2.p) } else { (&w2.p, &w1.p) };
    let Some(mut rest) = divide_mod(big.coeffs(), small.coeffs(), &m) else {
        return Ok(None);
    };
    let mut factors = Vec::new();
    let mut k = 0u32;
    while poly::degree(&rest).unwrap_or(0) > 0 {
        let phi = cyclotomic_factor(ell, k);
        let deg_phi = poly::degree(&phi).unwrap_or(0);
        if deg_phi > poly::degree(&rest).unwrap_or(0) {
            return Ok(None);
        }
        let mut mult = 0;
        while let Some(q) = divide_mod(&rest, &phi, &m) {
            rest = q;
            mult += 1;
            if poly::degree(&rest).unwrap_or(0) < deg_phi {
                break;
            }
        }
        if mult > 0 {
            factors.push((k, mult));
        }
        k += 1;
    }
    Ok(Some(factors))
}
