use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PadicInt;

/// A finitely supported logarithmic divisor Σ a_p·p with a_p ∈ Z_ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogDivisor {
    ell: u64,
    prec: u32,
    entries: BTreeMap<u64, PadicInt>,
}

impl LogDivisor {
    pub fn new(ell: u64, prec: u32) -> Self {
        LogDivisor { ell, prec, entries: BTreeMap::new() }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Adds a·p; coefficients that cancel to zero are removed.
    pub fn add_term(&mut self, p: u64, a: &PadicInt) {
        let sum = match self.entries.get(&p) {
            Some(old) => old + a,
            None => a.with_prec(self.prec.min(a.prec())),
        };
        if sum.is_zero() {
            self.entries.remove(&p);
        } else {
            self.entries.insert(p, sum);
        }
    }

    pub fn get(&self, p: u64) -> Option<&PadicInt> {
        self.entries.get(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &PadicInt)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &LogDivisor) -> LogDivisor {
        let mut out = self.clone();
        for (&p, a) in other.iter() {
            out.add_term(p, a);
        }
        out
    }
}
