//! Integer and ℤ/ℓ^N linear algebra for quotient orders.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{big_pow, mod_inverse, reduce_signed};

/// Diagonal form of a relation matrix over ℤ/ℓ^N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularDiagonal {
    /// ℓ-adic valuations of the nonzero elementary divisors, in pivot order.
    pub valuations: Vec<u32>,
    /// Columns left without a pivot (elementary divisor ≡ 0 mod ℓ^N).
    pub zero_count: usize,
}

impl ModularDiagonal {
    pub fn exponent(&self) -> u64 {
        self.valuations.iter().map(|&v| v as u64).sum()
    }

    pub fn max_valuation(&self) -> u32 {
        self.valuations.iter().copied().max().unwrap_or(0)
    }
}

fn residue_valuation(x: &BigUint, ell: &BigUint, prec: u32) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut y = x.clone();
    while v < prec && (&y % ell).is_zero() {
        y /= ell;
        v += 1;
    }
    Some(v)
}

/// Elementary divisors of the ℤ/ℓ^N-module ℤ^cols / ⟨rows⟩, by elimination
/// with a minimal-valuation pivot at every step.
pub fn diagonalize_mod(rows: &[Vec<BigInt>], cols: usize, ell: u64, prec: u32) -> ModularDiagonal {
    let m = big_pow(ell, prec);
    let l = BigUint::from(ell);
    let mut a: Vec<Vec<BigUint>> = rows
        .iter()
        .map(|r| (0..cols).map(|j| r.get(j).map_or_else(BigUint::zero, |x| reduce_signed(x, &m))).collect())
        .collect();
    let nrows = a.len();
    let mut valuations = Vec::new();
    for k in 0..nrows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if let Some(v) = residue_valuation(x, &l, prec) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let lv = big_pow(ell, v);
        let unit = &a[k][k] / &lv;
        let uinv = mod_inverse(&unit, &m).expect("pivot cofactor is a unit");
        for x in a[k].iter_mut() {
            *x = (&*x * &uinv) % &m;
        }
        let pivot_row = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            if row[k].is_zero() {
                continue;
            }
            let f = &row[k] / &lv;
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                let sub = (&f * p) % &m;
                *x = (&*x + &m - sub) % &m;
            }
        }
        for x in a[k].iter_mut().skip(k + 1) {
            *x = BigUint::zero();
        }
        valuations.push(v);
    }
    ModularDiagonal { zero_count: cols - valuations.len(), valuations }
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank_over_q(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| (0..cols).map(|j| r.get(j).cloned().unwrap_or_default()).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            let pv = &pivot_row[col];
            for (x, q) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * pv - &f * q;
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant over ℤ by Bareiss fraction-free elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
