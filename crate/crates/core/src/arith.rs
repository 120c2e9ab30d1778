//! Small integer helpers shared by the other modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Deterministic primality test for 64-bit inputs (trial division by 6k±1).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut i = 5u64;
    while i.saturating_mul(i) <= n {
        if n % i == 0 || n % (i + 2) == 0 {
            return false;
        }
        i += 6;
    }
    true
}

/// Exponent of `p` in a nonzero integer. Returns `None` for zero.
pub fn valuation(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

/// Exponent of `p` in a nonzero machine integer.
pub fn valuation_u64(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Largest k with p^k <= n (n >= 1).
pub fn floor_log(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut acc = p;
    while acc <= n {
        k += 1;
        acc = match acc.checked_mul(p) {
            Some(a) => a,
            None => break,
        };
    }
    k
}

pub fn big_pow(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Canonical residue of a signed integer modulo `m`.
pub fn reduce_signed(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    let r = x.mod_floor(&m);
    r.to_biguint().expect("mod_floor of a positive modulus is nonnegative")
}

/// Inverse of `a` modulo `m` if it exists.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m_s = BigInt::from(m.clone());
    let g = a.extended_gcd(&m_s);
    if !g.gcd.is_one() {
        return None;
    }
    Some(reduce_signed(&g.x, m))
}

/// Prime factorisation of |n| by trial division.
///
/// Cofactors left after dividing out every prime below `TRIAL_LIMIT` are
/// accepted as prime only when they are provably so (below the square of the
/// limit); otherwise `None` is returned.
pub fn factor(n: &BigInt) -> Option<Vec<(u64, u32)>> {
    const TRIAL_LIMIT: u64 = 1 << 20;
    let mut rest = n.abs();
    let mut out = Vec::new();
    if rest.is_zero() {
        return None;
    }
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        if let Some(r) = rest.to_u64() {
            if p.saturating_mul(p) > r {
                break;
            }
        }
        let pb = BigInt::from(p);
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Some(out);
    }
    let r = rest.to_u64()?;
    if (r as u128) < (TRIAL_LIMIT as u128) * (TRIAL_LIMIT as u128) || p.saturating_mul(p) > r {
        out.push((r, 1));
        out.sort_unstable();
        Some(out)
    } else {
        None
    }
}

/// Euler's totient of a prime power ℓ^n.
pub fn phi_prime_power(ell: u64, n: u32) -> u64 {
    if n == 0 {
        1
    } else {
        (ell - 1) * ell.pow(n - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_small() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn factor_composites() {
        assert_eq!(factor(&BigInt::from(-50)), Some(vec![(2, 1), (5, 2)]));
        assert_eq!(factor(&BigInt::from(1)), Some(vec![]));
        assert_eq!(factor(&BigInt::from(97 * 101)), Some(vec![(97, 1), (101, 1)]));
        assert_eq!(factor(&BigInt::from(0)), None);
    }

    #[test]
    fn floor_log_edges() {
        assert_eq!(floor_log(1, 3), 0);
        assert_eq!(floor_log(3, 3), 1);
        assert_eq!(floor_log(8, 3), 1);
        assert_eq!(floor_log(9, 3), 2);
    }
}
