use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PadicError;
use crate::arith::{big_pow, is_prime, mod_inverse, reduce_signed};

/// An ℓ-adic integer known modulo ℓ^prec, stored as its canonical residue.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    ell: u64,
    prec: u32,
    value: BigUint,
}

pub(crate) fn check_ell(ell: u64) -> Result<(), PadicError> {
    if ell == 2 {
        return Err(PadicError::EvenPrime);
    }
    if !is_prime(ell) {
        return Err(PadicError::NotPrime(ell));
    }
    Ok(())
}

impl PadicInt {
    /// Reduces an arbitrary integer modulo ℓ^prec.
    pub fn new(ell: u64, prec: u32, value: impl Into<BigInt>) -> Result<Self, PadicError> {
        check_ell(ell)?;
        if prec == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        Ok(Self::from_parts(ell, prec, &value.into()))
    }

    pub(crate) fn from_parts(ell: u64, prec: u32, value: &BigInt) -> Self {
        let m = big_pow(ell, prec);
        PadicInt { ell, prec, value: reduce_signed(value, &m) }
    }

    pub(crate) fn from_residue(ell: u64, prec: u32, value: BigUint) -> Self {
        let m = big_pow(ell, prec);
        PadicInt { ell, prec, value: value % m }
    }

    pub fn zero(ell: u64, prec: u32) -> Self {
        PadicInt { ell, prec, value: BigUint::zero() }
    }

    pub fn one(ell: u64, prec: u32) -> Self {
        Self::from_residue(ell, prec, BigUint::one())
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Canonical residue in [0, ℓ^prec).
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> BigUint {
        big_pow(self.ell, self.prec)
    }

    /// Representative in (−ℓ^prec/2, ℓ^prec/2].
    pub fn centered(&self) -> BigInt {
        let m = self.modulus();
        let v = BigInt::from(self.value.clone());
        if &self.value * 2u32 > m {
            v - BigInt::from(m)
        } else {
            v
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.value % self.ell).is_zero()
    }

    /// ℓ-adic valuation of the residue; `None` when it is zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        if self.value.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut x = self.value.clone();
        while (&x % self.ell).is_zero() {
            x /= self.ell;
            v += 1;
        }
        Some(v)
    }

    pub fn inverse(&self) -> Result<Self, PadicError> {
        mod_inverse(&self.value, &self.modulus())
            .map(|value| PadicInt { value, ell: self.ell, prec: self.prec })
            .ok_or(PadicError::NonUnit)
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        PadicInt { value: self.value.modpow(exp, &self.modulus()), ell: self.ell, prec: self.prec }
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }

    /// Drops digits: the same number known modulo ℓ^prec with a smaller `prec`.
    pub fn with_prec(&self, prec: u32) -> Self {
        assert!(prec >= 1 && prec <= self.prec, "can only lower precision");
        Self::from_residue(self.ell, prec, self.value.clone())
    }

    /// Divides by ℓ^k, which must divide the residue; precision drops by k.
    pub fn div_ell_power(&self, k: u32) -> Result<Self, PadicError> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k >= self.prec {
            return Err(PadicError::PrecisionExhausted { needed: k + 1, available: self.prec });
        }
        let d = big_pow(self.ell, k);
        if !(&self.value % &d).is_zero() {
            return Err(PadicError::NotDivisible { k });
        }
        Ok(PadicInt { ell: self.ell, prec: self.prec - k, value: &self.value / d })
    }

    /// Multiplies by ℓ^k keeping the precision.
    pub fn mul_ell_power(&self, k: u32) -> Self {
        Self::from_residue(self.ell, self.prec, &self.value * big_pow(self.ell, k))
    }

    pub fn from_i64(&self, x: i64) -> Self {
        Self::from_parts(self.ell, self.prec, &BigInt::from(x))
    }

    fn joint_prec(&self, other: &Self) -> u32 {
        assert_eq!(self.ell, other.ell, "mixing ℓ-adic integers for different primes");
        self.prec.min(other.prec)
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.ell, self.prec)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Add<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        let prec = self.joint_prec(rhs);
        PadicInt::from_residue(self.ell, prec, &self.value + &rhs.value)
    }
}

impl<'a> Sub<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        let prec = self.joint_prec(rhs);
        let m = big_pow(self.ell, prec);
        let a = &self.value % &m;
        let b = &rhs.value % &m;
        PadicInt { ell: self.ell, prec, value: (a + &m - b) % m }
    }
}

impl<'a> Mul<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        let prec = self.joint_prec(rhs);
        PadicInt::from_residue(self.ell, prec, &self.value * &rhs.value)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        if self.value.is_zero() {
            return self.clone();
        }
        PadicInt { ell: self.ell, prec: self.prec, value: self.modulus() - &self.value }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PadicInt> for PadicInt {
            type Output = PadicInt;
            fn $m(self, rhs: PadicInt) -> PadicInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct PadicIntRepr {
    ell: u64,
    prec: u32,
    value: String,
}

impl Serialize for PadicInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PadicIntRepr { ell: self.ell, prec: self.prec, value: self.value.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PadicIntRepr::deserialize(d)?;
        let value: BigInt = repr.value.parse().map_err(D::Error::custom)?;
        PadicInt::new(repr.ell, repr.prec, value).map_err(D::Error::custom)
    }
}

/// ℓ^valuation · unit, an element of ℚ_ℓ^×.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicValue {
    pub valuation: i64,
    pub unit: PadicInt,
}

impl PadicValue {
    pub fn new(valuation: i64, unit: PadicInt) -> Result<Self, PadicError> {
        if !unit.is_unit() {
            return Err(PadicError::NonUnit);
        }
        Ok(PadicValue { valuation, unit })
    }
}
