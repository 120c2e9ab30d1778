//! Ramification indices of abelian local fields.
//!
//! An abelian extension K_𝔭/ℚ_p is presented as the fixed field of a subgroup
//! H of the local Galois group D ⊆ (ℤ/m)^× of ℚ_p(μ_m)/ℚ_p. With m = p^k·m′,
//! D = ⟨p mod m′⟩ × (ℤ/p^k)^×, the second factor being inertia. The
//! intersection with the cyclotomic Ẑ-extension of ℚ_p is the fixed field of
//! Δ = μ_{p−1} ⊂ (ℤ/p^k)^× (p odd), which turns e, f, ẽ, f̃ into indices of
//! finite groups.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_prime;

/// Largest modulus accepted; subgroups are stored as explicit element lists.
pub const MAX_MODULUS: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalFieldError {
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus {0} exceeds the supported bound {MAX_MODULUS}")]
    ModulusTooLarge(u64),
    #[error("{0} is not a unit modulo {1}")]
    NotUnit(u64, u64),
    #[error("{0} does not lie in the decomposition group")]
    NotInDecompositionGroup(u64),
}

/// A subgroup of (ℤ/m)^× given by its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    modulus: u64,
    elements: Vec<u64>,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

impl Subgroup {
    pub fn trivial(modulus: u64) -> Self {
        Subgroup { modulus, elements: vec![1 % modulus] }
    }

    fn from_set(modulus: u64, set: impl IntoIterator<Item = u64>) -> Self {
        let mut elements: Vec<u64> = set.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        Subgroup { modulus, elements }
    }

    /// Closure of the given units under multiplication mod m.
    pub fn generated_by(modulus: u64, gens: &[u64]) -> Result<Self, LocalFieldError> {
        if modulus == 0 {
            return Err(LocalFieldError::ZeroModulus);
        }
        let mut seen = BTreeSet::new();
        seen.insert(1 % modulus);
        let mut queue: VecDeque<u64> = VecDeque::from([1 % modulus]);
        let gens: Vec<u64> = gens.iter().map(|g| g % modulus).collect();
        for &g in &gens {
            if g.gcd(&modulus) != 1 && modulus > 1 {
                return Err(LocalFieldError::NotUnit(g, modulus));
            }
        }
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = mulmod(x, g, modulus);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup { modulus, elements: seen.into_iter().collect() })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.modulus)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_set(self.modulus, self.elements.iter().copied().filter(|&x| other.contains(x)))
    }

    /// The product HK, a subgroup because the ambient group is abelian.
    pub fn product(&self, other: &Subgroup) -> Subgroup {
        let mut set = HashSet::with_capacity(self.order() * other.order());
        for &a in &self.elements {
            for &b in &other.elements {
                set.insert(mulmod(a, b, self.modulus));
            }
        }
        Subgroup::from_set(self.modulus, set)
    }

    fn cyclic(&self, g: u64) -> Subgroup {
        let mut out = vec![1 % self.modulus];
        let mut x = g % self.modulus;
        while x != 1 % self.modulus {
            out.push(x);
            x = mulmod(x, g, self.modulus);
        }
        Subgroup::from_set(self.modulus, out)
    }

    /// Every subgroup of this (abelian) group, sorted by order then elements.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        let start = Subgroup::trivial(self.modulus);
        found.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        let cyclics: Vec<Subgroup> = self.elements.iter().map(|&g| self.cyclic(g)).collect();
        while let Some(s) = queue.pop_front() {
            for (i, &g) in self.elements.iter().enumerate() {
                if s.contains(g) {
                    continue;
                }
                let t = s.product(&cyclics[i]);
                if !found.contains(&t) {
                    found.insert(t.clone());
                    queue.push_back(t);
                }
            }
        }
        let mut v: Vec<Subgroup> = found.into_iter().collect();
        v.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        v
    }
}

/// Splits m = p^k·m′ with p ∤ m′.
fn split_modulus(p: u64, m: u64) -> (u32, u64, u64) {
    let mut k = 0;
    let mut pk = 1;
    let mut rest = m;
    while rest % p == 0 {
        rest /= p;
        pk *= p;
        k += 1;
    }
    (k, pk, rest)
}

/// x mod m with x ≡ a mod m1 and x ≡ b mod m2, gcd(m1, m2) = 1.
fn crt(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let m = m1 * m2;
    if m1 == 1 {
        return b % m;
    }
    if m2 == 1 {
        return a % m;
    }
    let e = (m1 as i128).extended_gcd(&(m2 as i128));
    // e.x·m1 + e.y·m2 = 1
    let x = a as i128 * e.y * m2 as i128 + b as i128 * e.x * m1 as i128;
    x.rem_euclid(m as i128) as u64
}

fn validate(p: u64, m: u64) -> Result<(), LocalFieldError> {
    if p == 2 {
        return Err(LocalFieldError::EvenPrime);
    }
    if !is_prime(p) {
        return Err(LocalFieldError::NotPrime(p));
    }
    if m == 0 {
        return Err(LocalFieldError::ZeroModulus);
    }
    if m > MAX_MODULUS {
        return Err(LocalFieldError::ModulusTooLarge(m));
    }
    Ok(())
}

/// D = ⟨p mod m′⟩ × (ℤ/p^k)^× embedded in (ℤ/m)^× by CRT.
pub fn decomposition_group(p: u64, m: u64) -> Result<Subgroup, LocalFieldError> {
    validate(p, m)?;
    let (_, pk, rest) = split_modulus(p, m);
    let frob = Subgroup::generated_by(rest, &[p % rest])?;
    let inertia: Vec<u64> = (0..pk).filter(|&b| pk == 1 || b % p != 0).collect();
    let mut set = Vec::with_capacity(frob.order() * inertia.len());
    for &a in frob.elements() {
        for &b in &inertia {
            set.push(crt(a, rest, b, pk));
        }
    }
    Ok(Subgroup::from_set(m, set))
}

/// The inertia factor (ℤ/p^k)^× inside (ℤ/m)^×: units that are 1 mod m′.
pub fn inertia_group(p: u64, m: u64) -> Result<Subgroup, LocalFieldError> {
    validate(p, m)?;
    let (_, pk, rest) = split_modulus(p, m);
    let set = (0..pk).filter(|&b| pk == 1 || b % p != 0).map(|b| crt(1 % rest, rest, b, pk));
    Ok(Subgroup::from_set(m, set))
}

/// Δ = μ_{p−1} inside the inertia factor; its fixed field is the part of
/// ℚ_p(μ_m) lying in the cyclotomic Ẑ-extension of ℚ_p.
pub fn inertia_torsion(p: u64, m: u64) -> Result<Subgroup, LocalFieldError> {
    let inertia = inertia_group(p, m)?;
    let set = inertia.elements().iter().copied().filter(|&x| powmod(x, p - 1, m) == 1 % m);
    Ok(Subgroup::from_set(m, set.collect::<Vec<_>>()))
}

/// K_𝔭 ⊆ ℚ_p(μ_m): the fixed field of `fixing` inside D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianLocalField {
    p: u64,
    m: u64,
    decomposition: Subgroup,
    fixing: Subgroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexQuadruple {
    pub e: u64,
    pub f: u64,
    pub e_log: u64,
    pub f_log: u64,
}

impl IndexQuadruple {
    pub fn degree(&self) -> u64 {
        self.e * self.f
    }
}

impl AbelianLocalField {
    /// The fixed field of the subgroup generated by `h_generators`.
    pub fn new(p: u64, m: u64, h_generators: &[u64]) -> Result<Self, LocalFieldError> {
        let decomposition = decomposition_group(p, m)?;
        for &g in h_generators {
            if !decomposition.contains(g) {
                return match g.gcd(&m) {
                    1 => Err(LocalFieldError::NotInDecompositionGroup(g)),
                    _ => Err(LocalFieldError::NotUnit(g, m)),
                };
            }
        }
        let fixing = Subgroup::generated_by(m, h_generators)?;
        Ok(AbelianLocalField { p, m, decomposition, fixing })
    }

    pub fn from_subgroup(p: u64, m: u64, fixing: Subgroup) -> Result<Self, LocalFieldError> {
        let decomposition = decomposition_group(p, m)?;
        if let Some(&g) = fixing.elements().iter().find(|&&g| !decomposition.contains(g)) {
            return Err(LocalFieldError::NotInDecompositionGroup(g));
        }
        Ok(AbelianLocalField { p, m, decomposition, fixing })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn decomposition(&self) -> &Subgroup {
        &self.decomposition
    }

    pub fn fixing(&self) -> &Subgroup {
        &self.fixing
    }

    /// Local degree [D : H].
    pub fn degree(&self) -> u64 {
        (self.decomposition.order() / self.fixing.order()) as u64
    }

    pub fn indices(&self) -> IndexQuadruple {
        let n = self.degree();
        let inertia = inertia_group(self.p, self.m).expect("validated at construction");
        let delta = inertia_torsion(self.p, self.m).expect("validated at construction");
        let e = (inertia.order() / inertia.intersect(&self.fixing).order()) as u64;
        let e_log = (self.fixing.product(&delta).order() / self.fixing.order()) as u64;
        IndexQuadruple { e, f: n / e, e_log, f_log: n / e_log }
    }

    /// Relative (ẽ, f̃) of this field over a subfield `base` (the fixed field
    /// of a larger subgroup). L ∩ Q̂^c·K is the fixed field of H_L·(Δ ∩ H_K).
    pub fn relative_log_indices(&self, base: &AbelianLocalField) -> Option<(u64, u64)> {
        if base.p != self.p || base.m != self.m || !self.fixing.is_subgroup_of(&base.fixing) {
            return None;
        }
        let delta = inertia_torsion(self.p, self.m).ok()?;
        let middle = self.fixing.product(&delta.intersect(&base.fixing));
        let e_rel = (middle.order() / self.fixing.order()) as u64;
        let f_rel = (base.fixing.order() / middle.order()) as u64;
        Some((e_rel, f_rel))
    }
}
