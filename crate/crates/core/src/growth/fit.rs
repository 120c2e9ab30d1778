//! Fitting e_n = μℓ^n + λn + ν to exponent sequences, and Gold's criterion.

use serde::Serialize;

use super::GrowthError;
use crate::arith::phi_prime_power;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantTriple {
    pub mu: i64,
    pub lambda: i64,
    pub nu: i64,
    /// First layer from which the formula holds on the supplied data.
    pub n0: usize,
}

impl InvariantTriple {
    /// μℓ^n + λn + ν.
    pub fn predict(&self, ell: u64, n: usize) -> Option<i128> {
        predict(self.mu, self.lambda, self.nu, ell, n)
    }
}

/// Where the growth formula is assumed to start holding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilization {
    /// Every supplied layer is taken to satisfy the formula (n0 = 0); a
    /// mismatch is an error.
    AssumeFromZero,
    /// Fit on the last two layers and report the first layer that agrees.
    Detect,
}

fn ell_pow(ell: u64, n: usize) -> Option<i128> {
    (ell as i128).checked_pow(u32::try_from(n).ok()?)
}

fn predict(mu: i64, lambda: i64, nu: i64, ell: u64, n: usize) -> Option<i128> {
    let a = (mu as i128).checked_mul(ell_pow(ell, n)?)?;
    let b = (lambda as i128).checked_mul(n as i128)?;
    a.checked_add(b)?.checked_add(nu as i128)
}

fn narrow(x: i128) -> Result<i64, GrowthError> {
    i64::try_from(x).map_err(|_| GrowthError::Overflow)
}

/// The smallest n0 such that every layer from n0 on matches the triple.
fn first_matching(e: &[i64], ell: u64, mu: i64, lambda: i64, nu: i64) -> Result<usize, GrowthError> {
    let mut n0 = e.len();
    for n in (0..e.len()).rev() {
        let p = predict(mu, lambda, nu, ell, n).ok_or(GrowthError::Overflow)?;
        if p != e[n] as i128 {
            break;
        }
        n0 = n;
    }
    Ok(n0)
}

/// Recovers (μ, λ, ν) from the last three layers and the first layer n0
/// from which the whole tail fits.
pub fn fit_invariants(e: &[i64], ell: u64) -> Result<InvariantTriple, GrowthError> {
    let len = e.len();
    if len < 3 {
        return Err(GrowthError::TooFewPoints { needed: 3, got: len });
    }
    let n = len - 3;
    let (e0, e1, e2) = (e[n] as i128, e[n + 1] as i128, e[n + 2] as i128);
    let l = ell as i128;
    let ln = ell_pow(ell, n).ok_or(GrowthError::Overflow)?;
    let denom = ln.checked_mul((l - 1) * (l - 1)).ok_or(GrowthError::Overflow)?;
    let second = (e2 - e1) - (e1 - e0);
    if second % denom != 0 {
        return Err(GrowthError::InconsistentSequence(format!(
            "second difference {second} is not a multiple of {denom}, so μ is not integral"
        )));
    }
    let mu = second / denom;
    if mu < 0 {
        return Err(GrowthError::InconsistentSequence(format!("μ = {mu} < 0")));
    }
    let lambda = (e1 - e0) - mu.checked_mul(ln * (l - 1)).ok_or(GrowthError::Overflow)?;
    if lambda < 0 {
        return Err(GrowthError::InconsistentSequence(format!("λ = {lambda} < 0")));
    }
    let nu = e0 - mu * ln - lambda * n as i128;
    let (mu, lambda, nu) = (narrow(mu)?, narrow(lambda)?, narrow(nu)?);
    let n0 = first_matching(e, ell, mu, lambda, nu)?;
    Ok(InvariantTriple { mu, lambda, nu, n0 })
}

/// Fits (λ, ν) when μ is known, using the last difference
/// λ = e_{n+1} − e_n − μ(ℓ^{n+1} − ℓ^n).
pub fn fit_with_known_mu(
    e: &[i64],
    ell: u64,
    mu: i64,
    stabilization: Stabilization,
) -> Result<InvariantTriple, GrowthError> {
    let len = e.len();
    if len < 2 {
        return Err(GrowthError::TooFewPoints { needed: 2, got: len });
    }
    if mu < 0 {
        return Err(GrowthError::InconsistentSequence(format!("μ = {mu} < 0")));
    }
    let n = len - 2;
    let ln = ell_pow(ell, n).ok_or(GrowthError::Overflow)?;
    let step = (mu as i128)
        .checked_mul(ln * (ell as i128 - 1))
        .ok_or(GrowthError::Overflow)?;
    let lambda = e[n + 1] as i128 - e[n] as i128 - step;
    if lambda < 0 {
        return Err(GrowthError::NegativeLambda(narrow(lambda)?));
    }
    let last = n + 1;
    let top = (mu as i128).checked_mul(ell_pow(ell, last).ok_or(GrowthError::Overflow)?);
    let nu = e[last] as i128 - top.ok_or(GrowthError::Overflow)? - lambda * last as i128;
    let (lambda, nu) = (narrow(lambda)?, narrow(nu)?);
    let n0 = first_matching(e, ell, mu, lambda, nu)?;
    if stabilization == Stabilization::AssumeFromZero && n0 != 0 {
        return Err(GrowthError::InconsistentSequence(format!(
            "layer {} does not satisfy the formula although stabilization from 0 was assumed",
            n0 - 1
        )));
    }
    Ok(InvariantTriple { mu, lambda, nu, n0 })
}

/// Gold's criterion: the first n ≥ 1 with e′_n − e′_{n−1} < φ(ℓ^n) gives λ′.
pub fn gold_lambda(e_prime: &[i64], ell: u64) -> Option<i64> {
    gold_lambda_at(e_prime, ell).map(|(_, l)| l)
}

/// As [`gold_lambda`], also returning the layer at which the criterion fired.
pub fn gold_lambda_at(e_prime: &[i64], ell: u64) -> Option<(usize, i64)> {
    (1..e_prime.len()).find_map(|n| {
        let diff = e_prime[n] - e_prime[n - 1];
        let phi = phi_prime_power(ell, u32::try_from(n).ok()?);
        (diff < phi as i64).then_some((n, diff))
    })
}
