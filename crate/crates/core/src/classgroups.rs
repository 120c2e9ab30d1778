//! Class groups of imaginary quadratic fields via reduced binary quadratic
//! forms, their ℓ-parts, and the quotient Cl′ by the classes of primes above ℓ.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_prime;

/// Largest |D| accepted by the forms oracle.
pub const MAX_DISCRIMINANT: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassGroupError {
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("d = {0} is not negative; only imaginary quadratic fields are supported")]
    PositiveD(i64),
    #[error("|D| = {0} exceeds {MAX_DISCRIMINANT}")]
    DiscriminantTooLarge(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("factor {factor} is not a power of {ell}")]
    InvalidGroupShape { ell: u64, factor: u64 },
}

/// A finite abelian ℓ-group by its invariant factors, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianLGroup {
    ell: u64,
    factors: Vec<u64>,
}

impl AbelianLGroup {
    pub fn trivial(ell: u64) -> Self {
        AbelianLGroup { ell, factors: Vec::new() }
    }

    /// Validates that each factor is ℓ^k with k ≥ 1; factors equal to 1 are
    /// dropped and the list is sorted in decreasing order.
    pub fn from_factors(ell: u64, factors: &[u64]) -> Result<Self, ClassGroupError> {
        let mut out = Vec::with_capacity(factors.len());
        for &f in factors {
            if f == 0 || ell < 2 {
                return Err(ClassGroupError::InvalidGroupShape { ell, factor: f });
            }
            let mut x = f;
            while x % ell == 0 {
                x /= ell;
            }
            if x != 1 {
                return Err(ClassGroupError::InvalidGroupShape { ell, factor: f });
            }
            if f > 1 {
                out.push(f);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(AbelianLGroup { ell, factors: out })
    }

    fn from_exponents(ell: u64, mut exps: Vec<u32>) -> Self {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        let factors = exps.into_iter().filter(|&k| k > 0).map(|k| ell.pow(k)).collect();
        AbelianLGroup { ell, factors }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// e with |G| = ℓ^e.
    pub fn exponent(&self) -> u32 {
        self.factors.iter().map(|&f| crate::arith::valuation_u64(f, self.ell)).sum()
    }
}

impl fmt::Display for AbelianLGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// a x² + b xy + c y².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// The reduced form equivalent to a positive definite form.
    pub fn reduce(self) -> QuadForm {
        let d = self.discriminant() as i128;
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b > a || b <= -a {
                // b ← b mod 2a into (−a, a]
                let two_a = 2 * a;
                let mut nb = b.rem_euclid(two_a);
                if nb > a {
                    nb -= two_a;
                }
                b = nb;
                c = (b * b - d) / (4 * a);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if (a == c || b == -a) && b < 0 {
                b = -b;
            }
            if b > a || b <= -a {
                continue;
            }
            break;
        }
        QuadForm { a: a as i64, b: b as i64, c: c as i64 }
    }

    pub fn inverse(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// Gauss composition (Cohen, Algorithm 5.4.7), followed by reduction.
    pub fn compose(&self, other: &QuadForm) -> QuadForm {
        let (mut f1, mut f2) = (*self, *other);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
        QuadForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce()
    }

    pub fn pow(&self, mut k: u64) -> QuadForm {
        let mut result = principal_form(self.discriminant());
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        result
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// (1, δ, (δ − D)/4) with δ ∈ {0, 1}, δ ≡ D mod 2.
pub fn principal_form(disc: i64) -> QuadForm {
    let delta = disc.rem_euclid(2);
    QuadForm { a: 1, b: delta, c: (delta - disc) / 4 }
}

fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    let mut m = n;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Fundamental discriminant of ℚ(√d) for squarefree d ≠ 1.
pub fn fundamental_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// How an odd prime ℓ decomposes in ℚ(√d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Decomposition of ℓ from the Kronecker symbol (D | ℓ); ℓ odd prime.
pub fn splitting(d: i64, ell: u64) -> Splitting {
    let disc = fundamental_discriminant(d);
    let l = ell as i128;
    let r = (disc as i128).rem_euclid(l);
    if r == 0 {
        return Splitting::Ramified;
    }
    let mut e = (ell - 1) / 2;
    let mut base = r;
    let mut acc: i128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % l;
        }
        base = base * base % l;
        e >>= 1;
    }
    if acc == 1 {
        Splitting::Split
    } else {
        Splitting::Inert
    }
}

/// The class group of ℚ(√d), d < 0, as its set of reduced primitive forms.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    d: i64,
    disc: i64,
    forms: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
}

fn validate(d: i64) -> Result<i64, ClassGroupError> {
    if d >= 0 {
        return Err(ClassGroupError::PositiveD(d));
    }
    if !is_squarefree(d) {
        return Err(ClassGroupError::NotSquarefree(d));
    }
    let disc = fundamental_discriminant(d);
    if disc.abs() > MAX_DISCRIMINANT {
        return Err(ClassGroupError::DiscriminantTooLarge(disc.abs()));
    }
    Ok(disc)
}

fn check_ell(ell: u64) -> Result<(), ClassGroupError> {
    if is_prime(ell) {
        Ok(())
    } else {
        Err(ClassGroupError::NotPrime(ell))
    }
}

impl ClassGroup {
    pub fn new(d: i64) -> Result<Self, ClassGroupError> {
        let disc = validate(d)?;
        let mut forms = Vec::new();
        let mut a = 1i64;
        while 3 * a * a <= -disc {
            for b in -a + 1..=a {
                if (b - disc).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let f = QuadForm { a, b, c };
                if f.is_reduced() && a.gcd(&b).gcd(&c) == 1 {
                    forms.push(f);
                }
            }
            a += 1;
        }
        forms.sort();
        let index = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        Ok(ClassGroup { d, disc, forms, index })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// Class number h.
    pub fn order(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn identity(&self) -> QuadForm {
        principal_form(self.disc)
    }

    pub fn contains(&self, f: &QuadForm) -> bool {
        self.index.contains_key(f)
    }

    fn prime_to_ell_part(&self, ell: u64) -> u64 {
        let mut h = self.order() as u64;
        while h % ell == 0 {
            h /= ell;
        }
        h
    }

    /// Elements of the Sylow ℓ-subgroup, as the image of x ↦ x^{h′}.
    pub fn sylow(&self, ell: u64) -> Vec<QuadForm> {
        let h_prime = self.prime_to_ell_part(ell);
        let set: BTreeSet<QuadForm> = self.forms.iter().map(|f| f.pow(h_prime)).collect();
        set.into_iter().collect()
    }

    /// Invariant factors of the Sylow ℓ-subgroup.
    pub fn ell_part(&self, ell: u64) -> Result<AbelianLGroup, ClassGroupError> {
        check_ell(ell)?;
        let sylow = self.sylow(ell);
        let trivial = vec![self.identity()];
        Ok(quotient_structure(&sylow, &trivial, ell))
    }

    /// Classes of the forms (ℓ, b, c) with b² ≡ D mod 4ℓ.
    pub fn primes_above(&self, ell: u64) -> Result<Vec<QuadForm>, ClassGroupError> {
        check_ell(ell)?;
        let l = ell as i64;
        let mut out = BTreeSet::new();
        for b in -l + 1..=l {
            let num = b * b - self.disc;
            if num.rem_euclid(4 * l) == 0 {
                let f = QuadForm { a: l, b, c: num / (4 * l) }.reduce();
                out.insert(f);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// ℓ-part of Cl / ⟨classes of primes above ℓ⟩.
    pub fn cl_prime(&self, ell: u64) -> Result<AbelianLGroup, ClassGroupError> {
        let primes = self.primes_above(ell)?;
        let h_prime = self.prime_to_ell_part(ell);
        let sylow = self.sylow(ell);
        let gens: Vec<QuadForm> = primes.iter().map(|p| p.pow(h_prime)).collect();
        let sub = generate(&gens, self.identity());
        Ok(quotient_structure(&sylow, &sub, ell))
    }
}

/// Subgroup generated by `gens` by closure.
fn generate(gens: &[QuadForm], identity: QuadForm) -> Vec<QuadForm> {
    let mut set = BTreeSet::from([identity]);
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.compose(g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// Invariant factors of the ℓ-group S/H from the counts
/// N_j = #{x ∈ S : x^{ℓ^j} ∈ H} / |H| = ℓ^{Σ_i min(k_i, j)}.
fn quotient_structure(s: &[QuadForm], h: &[QuadForm], ell: u64) -> AbelianLGroup {
    let hset: BTreeSet<QuadForm> = h.iter().copied().collect();
    let total = s.len() / h.len();
    let log = |mut x: usize| {
        let mut k = 0u32;
        while x > 1 {
            x /= ell as usize;
            k += 1;
        }
        k
    };
    // at_least[j] = number of invariant factors of order ≥ ℓ^j
    let mut at_least = Vec::new();
    let mut prev_log = 0u32;
    let mut current: Vec<QuadForm> = s.to_vec();
    loop {
        current = current.iter().map(|x| x.pow(ell)).collect();
        let count = current.iter().filter(|y| hset.contains(y)).count() / h.len();
        let lg = log(count);
        at_least.push(lg - prev_log);
        prev_log = lg;
        if count >= total {
            break;
        }
    }
    let rank = at_least.first().copied().unwrap_or(0) as usize;
    let exps: Vec<u32> = (0..rank)
        .map(|i| at_least.iter().filter(|&&c| c as usize > i).count() as u32)
        .collect();
    AbelianLGroup::from_exponents(ell, exps)
}

/// Reduced forms and the ℓ-part decomposition of the class group of ℚ(√d).
pub fn class_group(d: i64) -> Result<ClassGroup, ClassGroupError> {
    ClassGroup::new(d)
}

pub fn primes_above_ell_classes(d: i64, ell: u64) -> Result<Vec<QuadForm>, ClassGroupError> {
    ClassGroup::new(d)?.primes_above(ell)
}

pub fn cl_prime(d: i64, ell: u64) -> Result<AbelianLGroup, ClassGroupError> {
    ClassGroup::new(d)?.cl_prime(ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(ell: u64, f: &[u64]) -> AbelianLGroup {
        AbelianLGroup::from_factors(ell, f).unwrap()
    }

    #[test]
    fn small_class_numbers() {
        assert_eq!(class_group(-3).unwrap().order(), 1);
        assert_eq!(class_group(-3).unwrap().ell_part(3).unwrap(), group(3, &[]));
        let g = class_group(-23).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.ell_part(3).unwrap(), group(3, &[3]));
        assert_eq!(class_group(-87).unwrap().order(), 6);
        assert_eq!(class_group(-87).unwrap().ell_part(3).unwrap(), group(3, &[3]));
    }

    #[test]
    fn noncyclic_ell_part() {
        // h(−3299) = 27 with 3-part [9, 3]; h(−4027) = 9 with 3-part [3, 3].
        let g = class_group(-3299).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.ell_part(3).unwrap(), group(3, &[9, 3]));
        let g = class_group(-4027).unwrap();
        assert_eq!(g.order(), 9);
        assert_eq!(g.ell_part(3).unwrap(), group(3, &[3, 3]));
    }

    #[test]
    fn primes_above_examples() {
        assert_eq!(primes_above_ell_classes(-14, 3).unwrap().len(), 2);
        assert_eq!(splitting(-14, 3), Splitting::Split);
        assert!(primes_above_ell_classes(-3, 5).unwrap().is_empty());
        assert_eq!(splitting(-3, 5), Splitting::Inert);
        assert_eq!(primes_above_ell_classes(-87, 3).unwrap().len(), 1);
        assert_eq!(splitting(-87, 3), Splitting::Ramified);
    }

    #[test]
    fn cl_prime_examples() {
        assert_eq!(cl_prime(-87, 3).unwrap(), group(3, &[3]));
        assert_eq!(cl_prime(-14, 3).unwrap(), group(3, &[]));
        assert_eq!(cl_prime(-47, 5).unwrap(), group(5, &[5]));
    }

    #[test]
    fn input_validation() {
        assert_eq!(class_group(5).unwrap_err(), ClassGroupError::PositiveD(5));
        assert_eq!(class_group(-12).unwrap_err(), ClassGroupError::NotSquarefree(-12));
        assert!(matches!(class_group(-1_000_003).unwrap_err(), ClassGroupError::DiscriminantTooLarge(_)));
        assert_eq!(cl_prime(-14, 9).unwrap_err(), ClassGroupError::NotPrime(9));
    }

    #[test]
    fn group_shape_validation() {
        assert_eq!(group(3, &[3, 9, 1]).factors(), &[9, 3]);
        assert_eq!(group(3, &[27, 9]).exponent(), 5);
        assert_eq!(
            AbelianLGroup::from_factors(3, &[10]),
            Err(ClassGroupError::InvalidGroupShape { ell: 3, factor: 10 })
        );
        assert_eq!(group(5, &[25, 5]).to_string(), "[25, 5]");
    }

    fn squarefree_negatives(limit: i64) -> impl Iterator<Item = i64> {
        (1..).map(|k| -k).take_while(move |&d| fundamental_discriminant(d).abs() <= limit).filter(|&d| is_squarefree(d))
    }

    #[test]
    fn group_axioms_exhaustive() {
        for d in squarefree_negatives(2000) {
            let g = class_group(d).unwrap();
            let id = g.identity();
            assert!(g.contains(&id));
            for x in g.forms() {
                assert_eq!(x.compose(&id), *x, "identity, d = {d}");
                assert_eq!(x.compose(&x.inverse()), id, "inverse, d = {d}");
                for y in g.forms() {
                    let xy = x.compose(y);
                    assert!(g.contains(&xy));
                    assert_eq!(xy, y.compose(x), "commutativity, d = {d}");
                }
            }
            // associativity on a sample of triples
            let fs = g.forms();
            for (i, x) in fs.iter().enumerate().take(6) {
                for y in fs.iter().skip(i).take(6) {
                    for z in fs.iter().rev().take(6) {
                        assert_eq!(x.compose(y).compose(z), x.compose(&y.compose(z)), "d = {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn sylow_orders_multiply_to_h() {
        for d in squarefree_negatives(5000) {
            let g = class_group(d).unwrap();
            for ell in [3u64, 5, 7] {
                let part = g.ell_part(ell).unwrap();
                let ell_order = ell.pow(part.exponent());
                let mut h = g.order() as u64;
                assert_eq!(h % ell_order, 0);
                h /= ell_order;
                assert_ne!(h % ell, 0, "d = {d}, ℓ = {ell}");
            }
        }
    }
}
