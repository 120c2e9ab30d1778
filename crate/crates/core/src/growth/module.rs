//! Elementary Λ-modules and codescent quotients along the tower.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::linalg::{bareiss_det, diagonalize_mod, rank_over_q};
use super::GrowthError;
use crate::arith::{big_pow, is_prime, phi_prime_power, valuation};
use crate::lambda::DistinguishedPoly;
use crate::poly::{self, IntPoly};

/// Digits of ℓ-adic precision the SNF route keeps beyond any elementary divisor.
pub const PRECISION_MARGIN: u32 = 4;

/// Working precision for codescent quotients.
pub const DEFAULT_SNF_PRECISION: u32 = 64;

/// ⊕ Λ/(ℓ^{m_i}) ⊕ ⊕ Λ/(P_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryModule {
    ell: u64,
    ell_parts: Vec<u32>,
    poly_parts: Vec<DistinguishedPoly>,
}

impl ElementaryModule {
    pub fn new(
        ell: u64,
        ell_parts: Vec<u32>,
        poly_parts: Vec<DistinguishedPoly>,
    ) -> Result<Self, GrowthError> {
        if ell == 2 || !is_prime(ell) {
            return Err(GrowthError::InvalidModule(format!("ℓ = {ell} must be an odd prime")));
        }
        if ell_parts.contains(&0) {
            return Err(GrowthError::InvalidModule("ℓ-part exponents must be ≥ 1".into()));
        }
        if let Some(p) = poly_parts.iter().find(|p| p.ell() != ell) {
            return Err(GrowthError::InvalidModule(format!("{p} is distinguished for ℓ = {}", p.ell())));
        }
        Ok(ElementaryModule { ell, ell_parts, poly_parts })
    }

    pub fn zero(ell: u64) -> Result<Self, GrowthError> {
        Self::new(ell, Vec::new(), Vec::new())
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn ell_parts(&self) -> &[u32] {
        &self.ell_parts
    }

    pub fn poly_parts(&self) -> &[DistinguishedPoly] {
        &self.poly_parts
    }

    /// μ = Σ m_i.
    pub fn mu(&self) -> u64 {
        self.ell_parts.iter().map(|&m| m as u64).sum()
    }

    /// λ = Σ deg P_j.
    pub fn lambda(&self) -> u64 {
        self.poly_parts.iter().map(|p| p.degree() as u64).sum()
    }
}

fn mul_mod(a: &[BigInt], b: &[BigInt], p: &[BigInt]) -> IntPoly {
    poly::divrem_monic(&poly::mul(a, b), p).1
}

/// v_ℓ(Res(P, ω_n)), None when the resultant vanishes.
pub fn resultant_valuation(p: &DistinguishedPoly, n: u32) -> Option<u32> {
    let ell = p.ell();
    let pc = p.coeffs();
    let lambda = p.degree();
    if lambda == 0 {
        return Some(0);
    }
    // (1+T)^{ℓ^n} mod P by n successive ℓ-th powers.
    let mut x = poly::divrem_monic(&poly::from_i64(&[1, 1]), pc).1;
    for _ in 0..n {
        let base = x.clone();
        for _ in 1..ell {
            x = mul_mod(&x, &base, pc);
        }
    }
    let r = poly::sub(&x, &poly::from_i64(&[1]));
    // Res(P, ω_n) = det of multiplication by ω_n on ℤ[T]/(P), P monic.
    let mut cols = Vec::with_capacity(lambda);
    let mut cur = r;
    for _ in 0..lambda {
        cols.push(cur.clone());
        cur = poly::divrem_monic(&poly::mul(&cur, &poly::from_i64(&[0, 1])), pc).1;
    }
    let matrix: Vec<Vec<BigInt>> = (0..lambda)
        .map(|i| cols.iter().map(|c| c.get(i).cloned().unwrap_or_default()).collect())
        .collect();
    let det = bareiss_det(matrix);
    valuation(&det, ell)
}

/// e_n with |E/ω_nE| = ℓ^{e_n}, from exact resultants.
pub fn quotient_order_exponent(e: &ElementaryModule, n: u32) -> Result<u64, GrowthError> {
    let ell_n = e.ell.checked_pow(n).ok_or(GrowthError::Overflow)?;
    let mut total = e.mu().checked_mul(ell_n).ok_or(GrowthError::Overflow)?;
    for p in &e.poly_parts {
        total += resultant_valuation(p, n).ok_or(GrowthError::InfiniteQuotient { n })? as u64;
    }
    Ok(total)
}

/// The cyclotomic factor of index k: T for k = 0, ω_k/ω_{k−1} otherwise.
pub fn cyclotomic_factor(ell: u64, k: u32) -> IntPoly {
    if k == 0 {
        return poly::omega(ell, 0);
    }
    let (q, r) = poly::divrem_monic(&poly::omega(ell, k), &poly::omega(ell, k - 1));
    debug_assert!(r.is_empty());
    q
}

/// Whether P shares a factor with ω_n over ℚ. ω_n is the squarefree product
/// of the irreducible cyclotomic factors of index ≤ n, so it is enough to
/// trial-divide by each of them.
fn meets_omega(p: &[BigInt], ell: u64, n: u32) -> bool {
    let deg = poly::degree(p).unwrap_or(0) as u64;
    (0..=n)
        .take_while(|&k| phi_prime_power(ell, k) <= deg)
        .any(|k| poly::divrem_monic(p, &cyclotomic_factor(ell, k)).1.is_empty())
}

/// (1+T)^{ℓ^n} − 1 reduced modulo (P, ℓ^N) by binary powering.
fn omega_mod(p: &[BigInt], ell: u64, n: u32, prec: u32) -> IntPoly {
    let m = BigInt::from(big_pow(ell, prec));
    let reduce = |x: IntPoly| -> IntPoly {
        let mut r: IntPoly = poly::divrem_monic(&x, p).1.iter().map(|c| c.mod_floor(&m)).collect();
        poly::trim(&mut r);
        r
    };
    let mut result = reduce(poly::from_i64(&[1]));
    let mut base = reduce(poly::from_i64(&[1, 1]));
    let mut exp = BigUint::from(ell).pow(n);
    while !exp.is_zero() {
        if exp.is_odd() {
            result = reduce(poly::mul(&result, &base));
        }
        base = reduce(poly::mul(&base, &base));
        exp >>= 1;
    }
    reduce(poly::sub(&result, &poly::from_i64(&[1])))
}

/// Rows T^j·g mod f for every generator g and j < deg f.
fn submodule_rows(gens: &[IntPoly], f: &[BigInt], modulus: Option<&BigInt>) -> Vec<Vec<BigInt>> {
    let d = poly::degree(f).unwrap_or(0);
    let t = poly::from_i64(&[0, 1]);
    let mut rows = Vec::new();
    for g in gens {
        let mut cur = poly::divrem_monic(g, f).1;
        for _ in 0..d {
            if let Some(m) = modulus {
                cur = cur.iter().map(|c| c.mod_floor(m)).collect();
                poly::trim(&mut cur);
            }
            let mut row = cur.clone();
            row.resize(d, BigInt::zero());
            rows.push(row);
            cur = poly::divrem_monic(&poly::mul(&cur, &t), f).1;
        }
    }
    rows
}

fn guarded_exponent(rows: &[Vec<BigInt>], cols: usize, ell: u64, prec: u32) -> Result<u64, GrowthError> {
    let diag = diagonalize_mod(rows, cols, ell, prec);
    if diag.zero_count > 0 || diag.max_valuation() + PRECISION_MARGIN > prec {
        return Err(GrowthError::PrecisionSaturated { prec });
    }
    Ok(diag.exponent())
}

/// Quotient orders computed as Smith forms over ℤ/ℓ^N; an oracle independent
/// of the resultant route.
pub trait FiniteQuotients {
    fn quotient_order_snf(&self, n: u32, prec: u32) -> Result<u64, GrowthError>;
}

impl FiniteQuotients for ElementaryModule {
    fn quotient_order_snf(&self, n: u32, prec: u32) -> Result<u64, GrowthError> {
        let mut total = 0u64;
        let deg_omega = self.ell.checked_pow(n).ok_or(GrowthError::Overflow)?;
        // Λ/(ℓ^m, ω_n) ≅ (ℤ/ℓ^m)^{ℓ^n}: its relation matrix is ℓ^m·I.
        for &m in &self.ell_parts {
            if m + PRECISION_MARGIN > prec {
                return Err(GrowthError::PrecisionSaturated { prec });
            }
            total += m as u64 * deg_omega;
        }
        for p in &self.poly_parts {
            let pc = p.coeffs();
            if meets_omega(pc, self.ell, n) {
                return Err(GrowthError::InfiniteQuotient { n });
            }
            let w = omega_mod(pc, self.ell, n, prec);
            let m = BigInt::from(big_pow(self.ell, prec));
            let rows = submodule_rows(&[w], pc, Some(&m));
            total += guarded_exponent(&rows, p.degree(), self.ell, prec)?;
        }
        Ok(total)
    }
}

/// C̃ = Λ/(f) with auxiliary elements ã_i; Y_0 = ⟨ã_i⟩ + ω_0·C̃ and
/// Y_n = (ω_n/ω_0)·Y_0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodescentData {
    f: DistinguishedPoly,
    aux: Vec<IntPoly>,
}

impl CodescentData {
    pub fn new(f: DistinguishedPoly, aux: Vec<IntPoly>) -> Self {
        let aux = aux.iter().map(|a| poly::divrem_monic(a, f.coeffs()).1).collect();
        CodescentData { f, aux }
    }

    pub fn f(&self) -> &DistinguishedPoly {
        &self.f
    }

    pub fn aux(&self) -> &[IntPoly] {
        &self.aux
    }

    fn reduce(&self, p: &[BigInt]) -> IntPoly {
        poly::divrem_monic(p, self.f.coeffs()).1
    }

    fn omega_quotient(&self, n: u32, d: u32) -> IntPoly {
        let ell = self.f.ell();
        let (q, r) = poly::divrem_monic(&poly::omega(ell, n), &poly::omega(ell, d));
        debug_assert!(r.is_empty());
        q
    }

    /// Generators of Y_n built directly from layer 0.
    pub fn generators(&self, n: u32) -> Vec<IntPoly> {
        let q = self.omega_quotient(n, 0);
        let mut gens: Vec<IntPoly> = self.aux.iter().map(|a| self.reduce(&poly::mul(&q, a))).collect();
        gens.push(self.reduce(&poly::omega(self.f.ell(), n)));
        gens
    }

    /// Generators of Y_n obtained as (ω_n/ω_d)·Y_d.
    pub fn generators_from_layer(&self, d: u32, n: u32) -> Vec<IntPoly> {
        let q = self.omega_quotient(n, d);
        self.generators(d).iter().map(|g| self.reduce(&poly::mul(&q, g))).collect()
    }

    fn exponent_of(&self, gens: &[IntPoly], n: u32, prec: u32) -> Result<u64, GrowthError> {
        let d = self.f.degree();
        if d == 0 {
            return Ok(0);
        }
        let rows = submodule_rows(gens, self.f.coeffs(), None);
        if rank_over_q(&rows, d) < d {
            return Err(GrowthError::InfiniteQuotient { n });
        }
        guarded_exponent(&rows, d, self.f.ell(), prec)
    }

    /// ẽ_n with |C̃/Y_n| = ℓ^{ẽ_n}.
    pub fn quotient_exponent(&self, n: u32) -> Result<u64, GrowthError> {
        self.quotient_order_snf(n, DEFAULT_SNF_PRECISION)
    }

    /// ẽ_n computed from Y_d for some d ≤ n.
    pub fn quotient_exponent_from_layer(&self, d: u32, n: u32) -> Result<u64, GrowthError> {
        assert!(d <= n, "layer d must not exceed n");
        self.exponent_of(&self.generators_from_layer(d, n), n, DEFAULT_SNF_PRECISION)
    }
}

impl FiniteQuotients for CodescentData {
    fn quotient_order_snf(&self, n: u32, prec: u32) -> Result<u64, GrowthError> {
        self.exponent_of(&self.generators(n), n, prec)
    }
}

/// ẽ_n of C̃/Y_n.
pub fn codescent_quotient(c: &CodescentData, n: u32) -> Result<u64, GrowthError> {
    c.quotient_exponent(n)
}
