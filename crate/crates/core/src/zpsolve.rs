//! Constructive subset-sum over Z_p.
//!
//! Given a set A of distinct nonzero residues mod p, [`fs_closure`]
//! computes exactly which residues are sums of non-empty subsets of A,
//! together with a predecessor table from which [`FsClosure::witness`]
//! reconstructs one explicit subset per reachable target. This makes the
//! classical fact "if |A| > 2 sqrt(p) then every residue is a subset sum"
//! algorithmic: the guarantee says the witness exists, the DP finds it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modseq::exceeds_sqrt_threshold;

/// An explicit subset of distinct nonzero residues summing to `target` mod p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetWitness {
    pub p: u64,
    pub target: u64,
    /// Ascending, non-empty, duplicate-free subset of the input set.
    pub chosen: Vec<u64>,
}

impl SubsetWitness {
    /// Check the witness without consulting the solver: non-empty,
    /// strictly ascending residues in [1, p), summing to `target` mod p.
    pub fn verify(&self) -> bool {
        if self.p < 2 || self.chosen.is_empty() || self.target >= self.p {
            return false;
        }
        if self.chosen.iter().any(|&a| a == 0 || a >= self.p) {
            return false;
        }
        if self.chosen.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        let sum = self.chosen.iter().fold(0u64, |s, &a| (s + a) % self.p);
        sum == self.target
    }
}

const NONE: u64 = u64::MAX;
/// prev-table marker: this residue was first reached as a singleton
/// (its predecessor is the empty sum).
const FROM_EMPTY: u64 = u64::MAX;

/// The set of subset sums of A mod p with a predecessor table for
/// witness reconstruction.
#[derive(Debug, Clone)]
pub struct FsClosure {
    p: u64,
    elements: Vec<u64>,
    include_empty: bool,
    /// reachable[r] = r is a sum of a NON-empty subset
    reachable: Vec<bool>,
    /// element added at the first reach of r (NONE = unreached)
    via: Vec<u64>,
    /// residue before that element was added (FROM_EMPTY = singleton)
    prev: Vec<u64>,
}

/// Validate A (distinct residues in [1,p)) and return it sorted ascending.
fn validated_elements(a: &[u64], p: u64) -> Result<Vec<u64>> {
    let mut elements = a.to_vec();
    elements.sort_unstable();
    for &x in &elements {
        if x == 0 || x >= p {
            return Err(Error::NonResidueElement { value: x, p });
        }
    }
    for w in elements.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidInput(format!(
                "duplicate element {} in subset-sum input",
                w[0]
            )));
        }
    }
    Ok(elements)
}

/// Dense dynamic program over Z_p: process the elements of A in ascending
/// order; for each, extend every previously reachable sum (and the empty
/// sum) by that element. First reach wins, so witnesses are deterministic.
/// O(|A| * p) time, O(p) memory.
pub fn fs_closure(a: &[u64], p: u64, include_empty: bool) -> Result<FsClosure> {
    assert!(p >= 2, "modulus must be at least 2");
    let elements = validated_elements(a, p)?;
    let n = p as usize;
    let mut reachable = vec![false; n];
    let mut via = vec![NONE; n];
    let mut prev = vec![NONE; n];
    let mut count = 0usize;

    for &elem in &elements {
        if count == n {
            break; // every residue already reached
        }
        // Snapshot of the sums not involving `elem`, so each element is
        // used at most once (0/1 coefficients).
        let old = reachable.clone();
        // The empty sum extends to the singleton {elem}.
        let e = elem as usize;
        if !reachable[e] {
            reachable[e] = true;
            via[e] = elem;
            prev[e] = FROM_EMPTY;
            count += 1;
        }
        for (s, &was_reachable) in old.iter().enumerate() {
            if !was_reachable {
                continue;
            }
            let t = {
                let t = s as u64 + elem;
                (if t >= p { t - p } else { t }) as usize
            };
            if !reachable[t] {
                reachable[t] = true;
                via[t] = elem;
                prev[t] = s as u64;
                count += 1;
            }
        }
    }

    Ok(FsClosure {
        p,
        elements,
        include_empty,
        reachable,
        via,
        prev,
    })
}

impl FsClosure {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn include_empty(&self) -> bool {
        self.include_empty
    }

    /// The validated input set, ascending.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// Is `t` in the closure? Honors `include_empty` for the empty sum 0.
    pub fn contains(&self, t: u64) -> bool {
        if t >= self.p {
            return false;
        }
        if self.include_empty && t == 0 {
            return true;
        }
        self.reachable[t as usize]
    }

    /// Closure members in ascending order.
    pub fn residues_sorted(&self) -> Vec<u64> {
        (0..self.p).filter(|&t| self.contains(t)).collect()
    }

    pub fn size(&self) -> usize {
        (0..self.p).filter(|&t| self.contains(t)).count()
    }

    /// Do the NON-empty subset sums cover all of Z_p?
    pub fn covers_all(&self) -> bool {
        self.reachable.iter().all(|&r| r)
    }

    /// Reconstruct the first-found non-empty subset summing to `t`.
    /// Walking the predecessor chain visits elements in strictly
    /// descending processing order, so it terminates with distinct picks.
    pub fn witness(&self, t: u64) -> Result<SubsetWitness> {
        if t >= self.p || !self.reachable[t as usize] {
            // The Olson guarantee: a set of more than 2*sqrt(p) distinct
            // nonzero residues reaches everything, so landing here with
            // such a set is a solver bug.
            debug_assert!(
                !exceeds_sqrt_threshold(self.elements.len() as u64, 2, self.p),
                "unreachable target {t} despite |A| = {} > 2*sqrt({})",
                self.elements.len(),
                self.p
            );
            return Err(Error::NotReachable {
                target: t,
                p: self.p,
            });
        }
        let mut chosen = Vec::new();
        let mut cur = t;
        loop {
            let a = self.via[cur as usize];
            debug_assert_ne!(a, NONE);
            chosen.push(a);
            let back = self.prev[cur as usize];
            if back == FROM_EMPTY {
                break;
            }
            cur = back;
        }
        chosen.sort_unstable();
        Ok(SubsetWitness {
            p: self.p,
            target: t,
            chosen,
        })
    }
}

/// One-shot convenience: closure of A, then the witness for `t`.
pub fn solve_subset(a: &[u64], p: u64, t: u64) -> Result<SubsetWitness> {
    let closure = fs_closure(a, p, false)?;
    closure.witness(t)
}
