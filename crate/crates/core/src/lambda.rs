//! The Iwasawa algebra Λ = Z_ℓ[[T]] truncated to Λ/(ℓ^N, T^M).
//!
//! Elements are dense coefficient vectors of length M with entries reduced
//! mod ℓ^N. Exact operations (ω_n, quotients of ω's) are done over ℤ first and
//! reduced afterwards; anything that cannot be represented at the chosen
//! bound fails instead of silently truncating.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{big_pow, mod_inverse, reduce_signed};
use crate::padic::{PadicError, PadicInt};
use crate::poly::{self, IntPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("degree bound must be positive")]
    ZeroBound,
    #[error("degree {needed} does not fit below the truncation T^{bound}")]
    DegreeOverflow { needed: usize, bound: usize },
    #[error("series is zero modulo (ℓ^N, T^M)")]
    ZeroSeries,
    #[error("μ = {mu} leaves no precision at ℓ^{prec}")]
    PrecisionExhausted { mu: u32, prec: u32 },
    #[error("determinant vanishes modulo (ℓ^N, T^M); presentation is not torsion")]
    SingularPresentation,
    #[error("matrix is not square")]
    NotSquare,
    #[error("not a distinguished polynomial: {0}")]
    NotDistinguished(String),
    #[error("division by {divisor} leaves a nonzero remainder")]
    InexactDivision { divisor: String },
    #[error("operands live in different truncated rings")]
    RingMismatch,
}

/// Parameters (ℓ, N, M) of the truncation Λ/(ℓ^N, T^M).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaRing {
    ell: u64,
    prec: u32,
    bound: usize,
    modulus: BigUint,
}

/// Default degree bound for computations up to layer `n_max`: ℓ^{n_max} + 8.
pub fn default_bound(ell: u64, n_max: u32) -> usize {
    ell.pow(n_max) as usize + 8
}

impl LambdaRing {
    pub fn new(ell: u64, prec: u32, bound: usize) -> Result<Self, LambdaError> {
        crate::padic::int::check_ell(ell)?;
        if prec == 0 {
            return Err(PadicError::ZeroPrecision.into());
        }
        if bound == 0 {
            return Err(LambdaError::ZeroBound);
        }
        Ok(LambdaRing { ell, prec, bound, modulus: big_pow(ell, prec) })
    }

    /// Ring large enough to hold ω_n for every n ≤ `n_max`.
    pub fn for_layers(ell: u64, prec: u32, n_max: u32) -> Result<Self, LambdaError> {
        Self::new(ell, prec, default_bound(ell, n_max))
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn with_prec(&self, prec: u32) -> Result<Self, LambdaError> {
        Self::new(self.ell, prec, self.bound)
    }

    pub fn zero(&self) -> LambdaElem {
        LambdaElem { ring: self.clone(), coeffs: vec![BigUint::zero(); self.bound] }
    }

    pub fn one(&self) -> LambdaElem {
        self.constant(1)
    }

    pub fn t(&self) -> LambdaElem {
        let mut out = self.zero();
        if self.bound > 1 {
            out.coeffs[1] = BigUint::one() % &self.modulus;
        }
        out
    }

    pub fn constant(&self, c: i64) -> LambdaElem {
        let mut out = self.zero();
        out.coeffs[0] = reduce_signed(&BigInt::from(c), &self.modulus);
        out
    }

    /// Embeds an integer polynomial; fails if its degree reaches the bound.
    pub fn from_poly(&self, p: &[BigInt]) -> Result<LambdaElem, LambdaError> {
        if let Some(d) = poly::degree(p) {
            if d >= self.bound {
                return Err(LambdaError::DegreeOverflow { needed: d + 1, bound: self.bound });
            }
        }
        let mut out = self.zero();
        for (i, c) in p.iter().enumerate() {
            if i < self.bound {
                out.coeffs[i] = reduce_signed(c, &self.modulus);
            }
        }
        Ok(out)
    }

    pub fn from_i64s(&self, coeffs: &[i64]) -> Result<LambdaElem, LambdaError> {
        self.from_poly(&poly::from_i64(coeffs))
    }

    /// ω_n = (1+T)^{ℓ^n} − 1.
    pub fn omega(&self, n: u32) -> Result<LambdaElem, LambdaError> {
        let needed = self.ell.checked_pow(n).map(|d| d as usize + 1).unwrap_or(usize::MAX);
        if needed > self.bound {
            return Err(LambdaError::DegreeOverflow { needed, bound: self.bound });
        }
        self.from_poly(&poly::omega(self.ell, n))
    }

    /// The exact quotient ω_n/ω_d for n ≥ d.
    pub fn omega_quotient(&self, n: u32, d: u32) -> Result<LambdaElem, LambdaError> {
        assert!(n >= d, "omega_quotient needs n ≥ d");
        let needed = self.ell.checked_pow(n).map(|d| d as usize + 1).unwrap_or(usize::MAX);
        if needed > self.bound {
            return Err(LambdaError::DegreeOverflow { needed, bound: self.bound });
        }
        let num = poly::omega(self.ell, n);
        let den = poly::omega(self.ell, d);
        let (q, r) = poly::divrem_monic(&num, &den);
        if !r.is_empty() {
            return Err(LambdaError::InexactDivision { divisor: format!("ω_{d}") });
        }
        self.from_poly(&q)
    }
}

/// An element of Λ/(ℓ^N, T^M); index i holds the coefficient of T^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaElem {
    ring: LambdaRing,
    coeffs: Vec<BigUint>,
}

impl LambdaElem {
    pub fn ring(&self) -> &LambdaRing {
        &self.ring
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        PadicInt::from_residue(self.ring.ell, self.ring.prec, self.coeffs[i].clone())
    }

    pub fn residues(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficients as centered integer representatives, trailing zeros dropped.
    pub fn centered(&self) -> IntPoly {
        let mut p: IntPoly = (0..self.coeffs.len()).map(|i| self.coeff(i).centered()).collect();
        poly::trim(&mut p);
        p
    }

    /// Smallest ℓ-adic valuation among the coefficients (None for zero).
    pub fn min_valuation(&self) -> Option<u32> {
        (0..self.coeffs.len()).filter_map(|i| self.coeff(i).valuation()).min()
    }

    /// Reduction to a lower precision.
    pub fn with_prec(&self, prec: u32) -> Result<LambdaElem, LambdaError> {
        let ring = self.ring.with_prec(prec.min(self.ring.prec))?;
        let coeffs = self.coeffs.iter().map(|c| c % &ring.modulus).collect();
        Ok(LambdaElem { ring, coeffs })
    }

    fn check_same(&self, other: &LambdaElem) {
        assert!(self.ring == other.ring, "{}", LambdaError::RingMismatch);
    }

    pub fn try_mul(&self, other: &LambdaElem) -> Result<LambdaElem, LambdaError> {
        if self.ring != other.ring {
            return Err(LambdaError::RingMismatch);
        }
        Ok(self * other)
    }

    /// Weierstrass preparation: self = ℓ^μ · P · U with P distinguished and U a unit.
    pub fn weierstrass(&self) -> Result<WeierstrassFactorization, LambdaError> {
        let mu = self.min_valuation().ok_or(LambdaError::ZeroSeries)?;
        let n_prec = self.ring.prec;
        if mu >= n_prec {
            return Err(LambdaError::PrecisionExhausted { mu, prec: n_prec });
        }
        let prec = n_prec - mu;
        let ring = self.ring.with_prec(prec)?;
        let ell = BigInt::from(self.ring.ell);
        let ell_mu = BigInt::from(big_pow(self.ring.ell, mu));
        let g: IntPoly = {
            let mut g: IntPoly =
                self.coeffs.iter().map(|c| BigInt::from(c.clone()) / &ell_mu).collect();
            poly::trim(&mut g);
            g
        };
        let lambda = g
            .iter()
            .position(|c| !c.is_multiple_of(&ell))
            .expect("some coefficient has valuation μ");
        let (p, v) = hensel_split(&g, lambda, self.ring.ell, prec);
        let p = DistinguishedPoly::new(self.ring.ell, center_all(&p, &ring.modulus))?;
        let u = ring.from_poly(&v)?;
        Ok(WeierstrassFactorization { mu, p, u })
    }

    /// (μ, λ) of the Weierstrass factorization.
    pub fn invariants(&self) -> Result<(u32, usize), LambdaError> {
        let w = self.weierstrass()?;
        Ok((w.mu, w.p.degree()))
    }
}

fn center_all(p: &[BigInt], modulus: &BigUint) -> IntPoly {
    let m = BigInt::from(modulus.clone());
    let half = &m / 2;
    let mut out: IntPoly = p
        .iter()
        .map(|c| {
            let r = c.mod_floor(&m);
            if r > half {
                r - &m
            } else {
                r
            }
        })
        .collect();
    poly::trim(&mut out);
    out
}

/// Lifts g ≡ T^λ·V̄ (mod ℓ) to g ≡ P·V (mod ℓ^prec) with P monic of degree λ,
/// P ≡ T^λ (mod ℓ). Linear Hensel lifting, one ℓ-adic digit per step.
fn hensel_split(g: &[BigInt], lambda: usize, ell: u64, prec: u32) -> (IntPoly, IntPoly) {
    let l = BigInt::from(ell);
    let lu = BigUint::from(ell);
    let modulus = BigInt::from(big_pow(ell, prec));
    let reduce = |p: &mut IntPoly, m: &BigInt| {
        for c in p.iter_mut() {
            *c = c.mod_floor(m);
        }
        poly::trim(p);
    };
    let mut p: IntPoly = vec![BigInt::zero(); lambda + 1];
    p[lambda] = BigInt::one();
    let mut v: IntPoly = g[lambda..].to_vec();
    reduce(&mut v, &modulus);
    if lambda == 0 {
        return (p, v);
    }
    let mut vbar = v.clone();
    reduce(&mut vbar, &l);
    // Inverse of V̄ modulo (ℓ, T^λ).
    let v0_inv = BigInt::from(
        mod_inverse(&vbar[0].to_biguint().unwrap(), &lu).expect("V̄(0) is a unit"),
    );
    let mut vinv = vec![BigInt::zero(); lambda];
    vinv[0] = v0_inv.clone();
    for k in 1..lambda {
        let mut s = BigInt::zero();
        for j in 1..=k {
            if let Some(c) = vbar.get(j) {
                s += c * &vinv[k - j];
            }
        }
        vinv[k] = (-s * &v0_inv).mod_floor(&l);
    }
    let mut lk = l.clone();
    for _ in 1..prec {
        let err = poly::sub(g, &poly::mul(&p, &v));
        let mut e: IntPoly = err
            .iter()
            .map(|c| {
                debug_assert!(c.is_multiple_of(&lk));
                (c / &lk).mod_floor(&l)
            })
            .collect();
        poly::trim(&mut e);
        let mut dp = poly::mul(&e, &vinv);
        dp.truncate(lambda);
        reduce(&mut dp, &l);
        let rest = poly::sub(&e, &poly::mul(&dp, &vbar));
        let mut dv: IntPoly = rest.iter().skip(lambda).cloned().collect();
        debug_assert!(rest.iter().take(lambda).all(|c| c.is_multiple_of(&l)));
        reduce(&mut dv, &l);
        p = poly::add(&p, &poly::scale(&dp, &lk));
        v = poly::add(&v, &poly::scale(&dv, &lk));
        lk *= &l;
    }
    reduce(&mut v, &modulus);
    let mut plow = p[..lambda].to_vec();
    reduce(&mut plow, &modulus);
    plow.resize(lambda, BigInt::zero());
    plow.push(BigInt::one());
    (plow, v)
}

impl Add for &LambdaElem {
    type Output = LambdaElem;
    fn add(self, rhs: &LambdaElem) -> LambdaElem {
        self.check_same(rhs);
        let m = &self.ring.modulus;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| (a + b) % m).collect();
        LambdaElem { ring: self.ring.clone(), coeffs }
    }
}

impl Sub for &LambdaElem {
    type Output = LambdaElem;
    fn sub(self, rhs: &LambdaElem) -> LambdaElem {
        self + &(-rhs)
    }
}

impl Neg for &LambdaElem {
    type Output = LambdaElem;
    fn neg(self) -> LambdaElem {
        let m = &self.ring.modulus;
        let coeffs =
            self.coeffs.iter().map(|a| if a.is_zero() { a.clone() } else { m - a }).collect();
        LambdaElem { ring: self.ring.clone(), coeffs }
    }
}

impl Mul for &LambdaElem {
    type Output = LambdaElem;
    fn mul(self, rhs: &LambdaElem) -> LambdaElem {
        self.check_same(rhs);
        let bound = self.ring.bound;
        let mut acc = vec![BigUint::zero(); bound];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(bound - i).enumerate() {
                if !b.is_zero() {
                    acc[i + j] += a * b;
                }
            }
        }
        let m = &self.ring.modulus;
        let coeffs = acc.into_iter().map(|c| c % m).collect();
        LambdaElem { ring: self.ring.clone(), coeffs }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for LambdaElem {
            type Output = LambdaElem;
            fn $f(self, rhs: LambdaElem) -> LambdaElem { (&self).$f(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LambdaElem {
    type Output = LambdaElem;
    fn neg(self) -> LambdaElem {
        -&self
    }
}

impl fmt::Display for LambdaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{}, T^{})", poly::format(&self.centered()), self.ring.ell, self.ring.prec, self.ring.bound)
    }
}

/// Serialized as the array of coefficient residues, decimal strings.
impl Serialize for LambdaElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let last = self.coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        let mut seq = s.serialize_seq(Some(last))?;
        for c in &self.coeffs[..last] {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// Monic P ∈ ℤ[T] of degree λ with P ≡ T^λ (mod ℓ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedPoly {
    ell: u64,
    coeffs: IntPoly,
}

impl DistinguishedPoly {
    pub fn new(ell: u64, coeffs: IntPoly) -> Result<Self, LambdaError> {
        let mut coeffs = coeffs;
        poly::trim(&mut coeffs);
        let d = poly::degree(&coeffs)
            .ok_or_else(|| LambdaError::NotDistinguished("zero polynomial".into()))?;
        if !coeffs[d].is_one() {
            return Err(LambdaError::NotDistinguished(format!("{} is not monic", poly::format(&coeffs))));
        }
        let l = BigInt::from(ell);
        if coeffs[..d].iter().any(|c| !c.is_multiple_of(&l)) {
            return Err(LambdaError::NotDistinguished(format!(
                "{} has a lower coefficient prime to {ell}",
                poly::format(&coeffs)
            )));
        }
        Ok(DistinguishedPoly { ell, coeffs })
    }

    pub fn from_i64s(ell: u64, coeffs: &[i64]) -> Result<Self, LambdaError> {
        Self::new(ell, poly::from_i64(coeffs))
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_lambda(&self, ring: &LambdaRing) -> Result<LambdaElem, LambdaError> {
        ring.from_poly(&self.coeffs)
    }
}

impl fmt::Display for DistinguishedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly::format(&self.coeffs))
    }
}

impl Serialize for DistinguishedPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// f = ℓ^μ · P · U; U is known modulo ℓ^{N−μ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassFactorization {
    pub mu: u32,
    pub p: DistinguishedPoly,
    pub u: LambdaElem,
}

impl WeierstrassFactorization {
    pub fn lambda(&self) -> usize {
        self.p.degree()
    }
}

impl Serialize for WeierstrassFactorization {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WeierstrassFactorization", 4)?;
        st.serialize_field("mu", &self.mu)?;
        st.serialize_field("lambda", &self.lambda())?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("u", &self.u)?;
        st.end()
    }
}

/// Determinant of a square matrix over Λ/(ℓ^N, T^M) by Berkowitz's
/// division-free algorithm; pivots never need to be units.
pub fn determinant(a: &[Vec<LambdaElem>], ring: &LambdaRing) -> Result<LambdaElem, LambdaError> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(LambdaError::NotSquare);
    }
    if a.iter().flatten().any(|x| x.ring() != ring) {
        return Err(LambdaError::RingMismatch);
    }
    // c holds det(xI − A_k) from the leading coefficient down.
    let mut c = vec![ring.one()];
    for k in 0..n {
        let mut t = vec![ring.one(), -&a[k][k]];
        let mut v: Vec<LambdaElem> = (0..k).map(|i| a[i][k].clone()).collect();
        for _ in 0..k {
            let mut dot = ring.zero();
            for (j, vj) in v.iter().enumerate() {
                dot = &dot + &(&a[k][j] * vj);
            }
            t.push(-dot);
            v = (0..k)
                .map(|i| (0..k).fold(ring.zero(), |acc, j| &acc + &(&a[i][j] * &v[j])))
                .collect();
        }
        let mut next = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut s = ring.zero();
            for (j, cj) in c.iter().enumerate().take(i + 1) {
                if let Some(tij) = t.get(i - j) {
                    s = &s + &(tij * cj);
                }
            }
            next.push(s);
        }
        c = next;
    }
    let det = c.pop().expect("nonempty");
    Ok(if n % 2 == 1 { -det } else { det })
}

/// Characteristic series χ = det(A) of the module Λ^r / AΛ^r.
pub fn char_poly(a: &[Vec<LambdaElem>], ring: &LambdaRing) -> Result<LambdaElem, LambdaError> {
    let det = determinant(a, ring)?;
    if det.is_zero() {
        return Err(LambdaError::SingularPresentation);
    }
    Ok(det)
}

/// (μ, λ) of a characteristic series, read off its Weierstrass factorization.
pub fn invariants_from_charpoly(chi: &LambdaElem) -> Result<(u32, usize), LambdaError> {
    chi.invariants()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring3() -> LambdaRing {
        LambdaRing::new(3, 20, 40).unwrap()
    }

    #[test]
    fn omega_examples() {
        let r = ring3();
        assert_eq!(r.omega(0).unwrap(), r.t());
        assert_eq!(r.omega(1).unwrap(), r.from_i64s(&[0, 3, 3, 1]).unwrap());
        let r5 = LambdaRing::new(5, 10, 10).unwrap();
        assert_eq!(r5.omega(1).unwrap(), r5.from_i64s(&[0, 5, 10, 10, 5, 1]).unwrap());
        assert!(matches!(r.omega(4), Err(LambdaError::DegreeOverflow { needed: 82, bound: 40 })));
    }

    #[test]
    fn omega_quotient_examples() {
        let r = ring3();
        assert_eq!(r.omega_quotient(1, 0).unwrap(), r.from_i64s(&[3, 3, 1]).unwrap());
        assert_eq!(r.omega_quotient(2, 2).unwrap(), r.one());
        let q = r.omega_quotient(2, 1).unwrap();
        assert_eq!(&r.omega(1).unwrap() * &q, r.omega(2).unwrap());
    }

    #[test]
    fn telescoping_product() {
        let r = ring3();
        let mut prod = r.omega(0).unwrap();
        for k in 1..=3 {
            prod = &prod * &r.omega_quotient(k, k - 1).unwrap();
        }
        assert_eq!(prod, r.omega(3).unwrap());
    }

    #[test]
    fn omega_is_t_power_mod_ell() {
        let r = LambdaRing::new(5, 1, 30).unwrap();
        let mut expect = r.zero();
        expect.coeffs[25] = BigUint::one();
        assert_eq!(r.omega(2).unwrap(), expect);
    }

    #[test]
    fn weierstrass_examples() {
        let r = ring3();
        let w = r.from_i64s(&[3, 3]).unwrap().weierstrass().unwrap();
        assert_eq!((w.mu, w.lambda()), (1, 0));
        assert_eq!(w.u, r.with_prec(19).unwrap().from_i64s(&[1, 1]).unwrap());

        let w = r.from_i64s(&[3, 0, 1]).unwrap().weierstrass().unwrap();
        assert_eq!((w.mu, w.lambda()), (0, 2));
        assert_eq!(w.p.coeffs(), poly::from_i64(&[3, 0, 1]).as_slice());
        assert_eq!(w.u, r.one());

        let p = r.from_i64s(&[3, 3, 0, 1]).unwrap();
        let u = r.from_i64s(&[1, 1, 5]).unwrap();
        let f = &(&r.constant(9) * &p) * &u;
        let w = f.weierstrass().unwrap();
        assert_eq!((w.mu, w.lambda()), (2, 3));
        assert_eq!(w.p.coeffs(), poly::from_i64(&[3, 3, 0, 1]).as_slice());
        assert_eq!(w.u, u.with_prec(18).unwrap());
    }

    #[test]
    fn weierstrass_rejects_zero() {
        assert_eq!(ring3().zero().weierstrass(), Err(LambdaError::ZeroSeries));
    }

    fn cofactor_det(a: &[Vec<LambdaElem>], ring: &LambdaRing) -> LambdaElem {
        let n = a.len();
        if n == 0 {
            return ring.one();
        }
        let mut acc = ring.zero();
        for j in 0..n {
            let minor: Vec<Vec<LambdaElem>> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * &cofactor_det(&minor, ring);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn char_poly_examples() {
        let r = ring3();
        let a = vec![
            vec![r.constant(3), r.zero()],
            vec![r.zero(), r.from_i64s(&[3, 0, 1]).unwrap()],
        ];
        assert_eq!(char_poly(&a, &r).unwrap(), r.from_i64s(&[9, 0, 3]).unwrap());
        let a = vec![vec![r.t(), r.constant(3)], vec![r.zero(), r.one()]];
        assert_eq!(char_poly(&a, &r).unwrap(), r.t());
        let a = vec![vec![r.t(), r.t()], vec![r.t(), r.t()]];
        assert_eq!(char_poly(&a, &r), Err(LambdaError::SingularPresentation));
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        let r = LambdaRing::new(5, 8, 12).unwrap();
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 41) as i64 - 20
        };
        for n in 1..=4 {
            let a: Vec<Vec<LambdaElem>> = (0..n)
                .map(|_| (0..n).map(|_| r.from_i64s(&[next(), next(), next()]).unwrap()).collect())
                .collect();
            assert_eq!(determinant(&a, &r).unwrap(), cofactor_det(&a, &r));
        }
    }

    #[test]
    fn charpoly_invariants() {
        let r = ring3();
        let chi = &r.constant(9) * &r.from_i64s(&[3, 3, 0, 1]).unwrap();
        assert_eq!(invariants_from_charpoly(&chi).unwrap(), (2, 3));
        assert_eq!(invariants_from_charpoly(&r.one()).unwrap(), (0, 0));
        assert_eq!(invariants_from_charpoly(&r.omega_quotient(1, 0).unwrap()).unwrap(), (0, 2));
    }

    #[test]
    fn distinguished_validation() {
        assert!(DistinguishedPoly::from_i64s(3, &[3, 1]).is_ok());
        assert!(DistinguishedPoly::from_i64s(3, &[1, 1]).is_err());
        assert!(DistinguishedPoly::from_i64s(3, &[3, 2]).is_err());
    }

    #[test]
    fn series_json() {
        let r = ring3();
        let s = serde_json::to_string(&r.from_i64s(&[-1, 0, 2]).unwrap()).unwrap();
        assert_eq!(s, r#"["3486784400","0","2"]"#);
    }
}
