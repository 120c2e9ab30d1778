//! Dense polynomials over ℤ as coefficient vectors (index = power of T).

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntPoly = Vec<BigInt>;

/// Drops trailing zero coefficients; the zero polynomial is the empty vector.
pub fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn from_i64(coeffs: &[i64]) -> IntPoly {
    let mut p: IntPoly = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    trim(&mut p);
    p
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[BigInt], k: &BigInt) -> IntPoly {
    let mut out: IntPoly = a.iter().map(|c| c * k).collect();
    trim(&mut out);
    out
}

/// Division with remainder by a monic polynomial.
pub fn divrem_monic(a: &[BigInt], b: &[BigInt]) -> (IntPoly, IntPoly) {
    let db = degree(b).expect("divisor is nonzero");
    assert!(b[db].is_one(), "divisor must be monic");
    let mut rem: IntPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quo = vec![BigInt::zero(); rem.len() - db];
    for k in (0..quo.len()).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            rem[k + j] -= &c * bj;
        }
        quo[k] = c;
    }
    trim(&mut quo);
    trim(&mut rem);
    (quo, rem)
}

/// (1+T)^k − 1 with exact binomial coefficients.
pub fn one_plus_t_pow_minus_one(k: u64) -> IntPoly {
    let mut out = vec![BigInt::zero(); k as usize + 1];
    let mut binom = BigInt::one();
    for i in 1..=k {
        binom = binom * BigInt::from(k - i + 1) / BigInt::from(i);
        out[i as usize] = binom.clone();
    }
    out
}

/// ω_n = (1+T)^{ℓ^n} − 1 over ℤ.
pub fn omega(ell: u64, n: u32) -> IntPoly {
    one_plus_t_pow_minus_one(ell.pow(n))
}

pub fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Renders as e.g. `T^3 + 3*T - 3`; the zero polynomial renders as `0`.
pub fn format(p: &[BigInt]) -> String {
    let mut out = String::new();
    for i in (0..p.len()).rev() {
        let c = &p[i];
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{i}"),
        };
        if mono.is_empty() {
            write!(out, "{abs}").unwrap();
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            write!(out, "{abs}*{mono}").unwrap();
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses sums of terms `c`, `c*T`, `cT^k`, `T^k`, `-T`, with optional spaces.
pub fn parse(s: &str) -> Result<IntPoly, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut out: IntPoly = Vec::new();
    for term in terms {
        let (sign, body) = match term.as_bytes()[0] {
            b'+' => (1, &term[1..]),
            b'-' => (-1, &term[1..]),
            _ => (1, term),
        };
        let (coef, power) = match body.find(['T', 't']) {
            None => (body, 0usize),
            Some(pos) => {
                let coef = body[..pos].trim_end_matches('*');
                let rest = &body[pos + 1..];
                let power = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<usize>().map_err(|_| format!("bad exponent in '{term}'"))?
                } else {
                    return Err(format!("unexpected '{rest}' in '{term}'"));
                };
                (coef, power)
            }
        };
        let c: BigInt = if coef.is_empty() {
            BigInt::one()
        } else {
            coef.parse().map_err(|_| format!("bad coefficient in '{term}'"))?
        };
        if out.len() <= power {
            out.resize(power + 1, BigInt::zero());
        }
        out[power] += c * sign;
    }
    trim(&mut out);
    Ok(out)
}
