use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use super::{PadicError, PadicInt, PadicValue, Rational, DEFAULT_PRECISION};
use crate::arith::{floor_log, is_prime, valuation, valuation_u64};

/// Teichmüller representative ω(u): the (ℓ−1)-th root of unity congruent to u mod ℓ.
///
/// Computed as u^{ℓ^{N−1}}, which is stable modulo ℓ^N.
pub fn teichmuller(u: &PadicInt) -> Result<PadicInt, PadicError> {
    if !u.is_unit() {
        return Err(PadicError::NonUnit);
    }
    let ell = BigUint::from(u.ell());
    let mut w = u.clone();
    for _ in 1..u.prec() {
        w = w.pow(&ell);
    }
    Ok(w)
}

/// log(x) = Σ (−1)^{n+1} (x−1)^n / n for a principal unit x ≡ 1 mod ℓ.
///
/// Writing x − 1 = ℓz, the n-th term is ℓ^{n−v(n)} z^n / (n/ℓ^{v(n)}); the
/// loop stops once n − ⌊log_ℓ n⌋ ≥ N, after which every term is 0 mod ℓ^N.
pub fn log_one_unit(x: &PadicInt) -> Result<PadicInt, PadicError> {
    let ell = x.ell();
    let prec = x.prec();
    let one = PadicInt::one(ell, prec);
    let y = x - &one;
    if !y.is_zero() && y.valuation() == Some(0) {
        return Err(PadicError::NotOneUnit);
    }
    if prec == 1 {
        return Ok(PadicInt::zero(ell, prec));
    }
    // z = y/ℓ is only known mod ℓ^{N−1}; that suffices for every term n ≥ 2.
    let z = PadicInt::from_residue(ell, prec, y.value() / ell);
    let mut sum = y.clone();
    let mut zpow = z.clone();
    let mut n: u64 = 1;
    loop {
        n += 1;
        if n - floor_log(n, ell) as u64 >= prec as u64 {
            break;
        }
        zpow = &zpow * &z;
        let k = valuation_u64(n, ell);
        let shift = n - k as u64;
        if shift >= prec as u64 {
            continue;
        }
        let cofactor = PadicInt::from_residue(ell, prec, BigUint::from(n / ell.pow(k)));
        let term = &zpow.mul_ell_power(shift as u32) * &cofactor.inverse()?;
        sum = if n % 2 == 0 { &sum - &term } else { &sum + &term };
    }
    Ok(sum)
}

fn log_unit(u: &PadicInt) -> Result<PadicInt, PadicError> {
    let w = teichmuller(u)?;
    log_one_unit(&(u * &w.inverse()?))
}

/// Precision context (ℓ, N) for the logarithm, degrees and logarithmic valuations over ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogContext {
    ell: u64,
    prec: u32,
}

impl LogContext {
    pub fn new(ell: u64, prec: u32) -> Result<Self, PadicError> {
        super::int::check_ell(ell)?;
        if prec == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        Ok(LogContext { ell, prec })
    }

    pub fn with_default_precision(ell: u64) -> Result<Self, PadicError> {
        Self::new(ell, DEFAULT_PRECISION)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn int(&self, x: impl Into<BigInt>) -> PadicInt {
        PadicInt::from_parts(self.ell, self.prec, &x.into())
    }

    fn widened(&self, extra: u32) -> Self {
        LogContext { ell: self.ell, prec: self.prec + extra }
    }

    /// Splits x = ℓ^v · u and returns (v, u mod ℓ^N).
    pub fn split(&self, x: &Rational) -> Result<PadicValue, PadicError> {
        if x.is_zero() {
            return Err(PadicError::ZeroArgument);
        }
        let ell = BigInt::from(self.ell);
        let strip = |n: &BigInt| -> (BigInt, i64) {
            let v = valuation(n, self.ell).unwrap_or(0);
            (n / ell.pow(v), v as i64)
        };
        let (num, vn) = strip(x.numer());
        let (den, vd) = strip(x.denom());
        let den = self.int(den).inverse()?;
        Ok(PadicValue { valuation: vn - vd, unit: &self.int(num) * &den })
    }

    /// Iwasawa's logarithm: Log(ℓ) = 0, Log(ζ) = 0 on roots of unity.
    pub fn iwasawa_log(&self, x: &Rational) -> Result<PadicInt, PadicError> {
        let v = self.split(x)?;
        log_unit(&v.unit)
    }

    pub fn iwasawa_log_value(&self, x: &PadicValue) -> Result<PadicInt, PadicError> {
        if x.unit.ell() != self.ell {
            return Err(PadicError::NonUnit);
        }
        log_unit(&x.unit)
    }

    /// deg p = Log(p) for p ≠ ℓ and Log(1+ℓ) for p = ℓ.
    pub fn deg_prime(&self, p: u64) -> Result<PadicInt, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        let arg = if p == self.ell { p + 1 } else { p };
        let d = self.iwasawa_log(&Rational::from_integer(BigInt::from(arg)))?;
        if d.is_zero() {
            return Err(PadicError::DegenerateAtPrecision { what: format!("deg {p}") });
        }
        Ok(d)
    }

    /// h_ℓ(x) = Log(x)/deg(ℓ), always an ℓ-adic integer; h_ℓ(1+ℓ) = 1.
    pub fn h_ell(&self, x: &Rational) -> Result<PadicInt, PadicError> {
        // Both logs are divisible by ℓ exactly once in the denominator, so
        // one guard digit keeps the quotient exact to N digits.
        let wide = self.widened(1);
        let log_x = wide.iwasawa_log(x)?.div_ell_power(1)?;
        let deg = wide.deg_prime(self.ell)?.div_ell_power(1)?;
        if !deg.is_unit() {
            return Err(PadicError::DegenerateAtPrecision { what: "deg(ℓ)/ℓ".into() });
        }
        Ok(&log_x * &deg.inverse()?)
    }

    /// Logarithmic valuation ṽ_p(x).
    ///
    /// Tame primes give the ordinary valuation. At p = ℓ the value is
    /// −Log(x)/deg(ℓ); the minus sign makes principal divisors have degree 0.
    pub fn log_valuation(&self, p: u64, x: &Rational) -> Result<PadicInt, PadicError> {
        if x.is_zero() {
            return Err(PadicError::ZeroArgument);
        }
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if p == self.ell {
            return Ok(-self.h_ell(x)?);
        }
        let vn = valuation(x.numer(), p).unwrap_or(0) as i64;
        let vd = valuation(x.denom(), p).unwrap_or(0) as i64;
        Ok(self.int(vn - vd))
    }

    /// The logarithmic divisor Σ ṽ_p(x)·p, with zero coefficients dropped.
    pub fn principal_divisor(&self, x: &Rational) -> Result<super::LogDivisor, PadicError> {
        if x.is_zero() {
            return Err(PadicError::ZeroArgument);
        }
        let mut div = super::LogDivisor::new(self.ell, self.prec);
        for (n, sign) in [(x.numer(), 1i64), (x.denom(), -1i64)] {
            let fac = crate::arith::factor(n).ok_or_else(|| PadicError::Unfactorable(n.abs().to_string()))?;
            for (p, e) in fac {
                if p != self.ell {
                    div.add_term(p, &self.int(sign * e as i64));
                }
            }
        }
        div.add_term(self.ell, &self.log_valuation(self.ell, x)?);
        Ok(div)
    }

    /// deg(Σ a_p p) = Σ a_p deg p.
    pub fn divisor_degree(&self, d: &super::LogDivisor) -> Result<PadicInt, PadicError> {
        let mut total = PadicInt::zero(self.ell, self.prec);
        for (&p, a) in d.iter() {
            total = &total + &(a * &self.deg_prime(p)?);
        }
        Ok(total)
    }
}
