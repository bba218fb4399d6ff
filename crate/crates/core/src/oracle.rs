//! Independent ground truth by exhaustive enumeration.
//!
//! Nothing here shares logic with the solver or the certificate
//! construction: subset sums are enumerated over all 2^|A| masks, and the
//! pair closure over Z_p² is a per-generator reachability sweep with
//! bounded multiplicities. Tests and acceptance runs compare the fast
//! paths against these.

use crate::error::{Error, Result};
use crate::modseq::orbit;
use crate::represent::Family;

/// Exact non-empty subset sums of A mod p by full 2^|A| enumeration.
pub fn oracle_closure_subsets(a: &[u64], p: u64) -> Result<Vec<u64>> {
    assert!(p >= 2, "modulus must be at least 2");
    if a.len() > 20 {
        return Err(Error::TooLarge {
            what: format!("|A| = {} exceeds 20 for 2^|A| enumeration", a.len()),
        });
    }
    for &x in a {
        if x >= p {
            return Err(Error::InvalidInput(format!(
                "element {x} is not a residue mod {p}"
            )));
        }
    }
    let mut seen = vec![false; p as usize];
    for mask in 1u32..(1u32 << a.len()) {
        let mut sum = 0u64;
        for (i, &x) in a.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                sum += x;
            }
        }
        seen[(sum % p) as usize] = true;
    }
    Ok((0..p).filter(|&t| seen[t as usize]).collect())
}

/// Which pairs of Z_p² are non-empty sums of family generators, where each
/// generator (a left-orbit residue paired with a right-orbit residue) may
/// be used up to `multiplicity_cap` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub family: Family,
    pub p: u64,
    pub multiplicity_cap: u64,
    /// reached[v1 * p + v2]
    reached: Vec<bool>,
    pub size: u64,
}

impl ClosureReport {
    pub fn contains(&self, v1: u64, v2: u64) -> bool {
        v1 < self.p && v2 < self.p && self.reached[(v1 * self.p + v2) as usize]
    }

    /// All reached pairs, ascending by (v1, v2).
    pub fn pairs_sorted(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.size as usize);
        for v1 in 0..self.p {
            for v2 in 0..self.p {
                if self.contains(v1, v2) {
                    out.push((v1, v2));
                }
            }
        }
        out
    }
}

/// Extend `reached` (non-empty sums so far) by one generator that may be
/// used 0..=cap times. In Z_p² every nonzero element has order p, so the
/// multiples of g trace cosets of a size-p cyclic subgroup; within each
/// coset the update is a cyclic sliding-window OR of width min(cap, p−1).
fn apply_generator(reached: &mut [bool], p: u64, g: (u64, u64), cap: u64) {
    if g == (0, 0) {
        // adding the zero pair changes no sum but makes 0 a non-empty sum
        reached[0] = true;
        return;
    }
    let n = p as usize;
    let w = cap.min(p - 1) as usize; // count of useful nonzero multiples
    let idx = |x: u64, y: u64| (x * p + y) as usize;

    // Walk each coset {start + t*g : t in 0..p}. A transversal: vary the
    // coordinate that g cannot move on its own.
    let starts: Vec<(u64, u64)> = if g.0 != 0 {
        (0..p).map(|c| (0, c)).collect()
    } else {
        (0..p).map(|c| (c, 0)).collect()
    };

    let mut old = vec![false; n];
    let mut positions = vec![0usize; n];
    for (sx, sy) in starts {
        let (mut x, mut y) = (sx, sy);
        for t in 0..n {
            let pos = idx(x, y);
            positions[t] = pos;
            // the empty sum is a legal source for m >= 1 multiples
            old[t] = reached[pos] || pos == 0;
            x = (x + g.0) % p;
            y = (y + g.1) % p;
        }
        // window for position t covers sources t-1 ..= t-w (cyclic)
        let mut count = 0usize;
        for j in 1..=w {
            if old[(n - j) % n] {
                count += 1;
            }
        }
        for t in 0..n {
            if count > 0 {
                reached[positions[t]] = true;
            }
            // advance window to t+1: gain source t, lose source t-w
            if old[t] {
                count += 1;
            }
            if old[(t + n - w) % n] {
                count -= 1;
            }
        }
    }
}

/// Reachability closure of the family's residue-pair generators over Z_p²
/// with per-generator multiplicity at most `multiplicity_cap`. Cap = p is
/// effectively unbounded, since p·g ≡ 0.
pub fn oracle_closure_pairs(family: Family, p: u64, multiplicity_cap: u64) -> Result<ClosureReport> {
    if p > 101 {
        return Err(Error::TooLarge {
            what: format!("p = {p} exceeds 101 for the pair-closure oracle"),
        });
    }
    if multiplicity_cap == 0 {
        return Err(Error::InvalidInput(
            "multiplicity cap must be positive".to_string(),
        ));
    }
    let left = orbit(family.left_kind(), p)?;
    let right = orbit(family.right_kind(), p)?;

    let mut reached = vec![false; (p * p) as usize];
    for l in left.residues_sorted() {
        for r in right.residues_sorted() {
            apply_generator(&mut reached, p, (l, r), multiplicity_cap);
        }
    }
    let size = reached.iter().filter(|&&b| b).count() as u64;
    Ok(ClosureReport {
        family,
        p,
        multiplicity_cap,
        reached,
        size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpsolve::fs_closure;

    #[test]
    fn subset_oracle_examples() {
        assert_eq!(
            oracle_closure_subsets(&[1, 2, 4], 7).unwrap(),
            vec![0, 1, 2, 3, 4, 5, 6]
        );
        assert_eq!(oracle_closure_subsets(&[1], 3).unwrap(), vec![1]);
        assert_eq!(oracle_closure_subsets(&[1, 2], 5).unwrap(), vec![1, 2, 3]);
        assert!(matches!(
            oracle_closure_subsets(&[1; 21], 97).unwrap_err(),
            Error::TooLarge { .. }
        ));
    }

    #[test]
    fn subset_oracle_agrees_with_solver() {
        let cases: &[(&[u64], u64)] = &[
            (&[1, 2, 4], 7),
            (&[3, 5, 6], 7),
            (&[2, 3, 5, 7, 11], 13),
            (&[1, 4, 9, 16, 25, 36], 41),
        ];
        for &(a, p) in cases {
            let fast = fs_closure(a, p, false).unwrap().residues_sorted();
            let slow = oracle_closure_subsets(a, p).unwrap();
            assert_eq!(fast, slow, "A={a:?} p={p}");
        }
    }

    /// Direct multiplicity-vector enumeration: every m in [0,cap]^G.
    fn brute_pairs(family: Family, p: u64, cap: u64) -> Vec<bool> {
        let left = orbit(family.left_kind(), p).unwrap();
        let right = orbit(family.right_kind(), p).unwrap();
        let gens: Vec<(u64, u64)> = left
            .residues_sorted()
            .into_iter()
            .flat_map(|l| {
                right
                    .residues_sorted()
                    .into_iter()
                    .map(move |r| (l, r))
            })
            .collect();
        let mut reached = vec![false; (p * p) as usize];
        let mut m = vec![0u64; gens.len()];
        loop {
            // advance the odometer
            let mut i = 0;
            loop {
                if i == m.len() {
                    return reached;
                }
                if m[i] < cap {
                    m[i] += 1;
                    break;
                }
                m[i] = 0;
                i += 1;
            }
            let (mut s1, mut s2) = (0u64, 0u64);
            for (mi, g) in m.iter().zip(&gens) {
                s1 = (s1 + mi * g.0) % p;
                s2 = (s2 + mi * g.1) % p;
            }
            reached[(s1 * p + s2) as usize] = true;
        }
    }

    #[test]
    fn pair_closure_matches_brute_force_tiny() {
        // A1 mod 3: 6 generators; caps 1..3 stay enumerable
        for cap in 1..=3u64 {
            let fast = oracle_closure_pairs(Family::A1, 3, cap).unwrap();
            let slow = brute_pairs(Family::A1, 3, cap);
            for v1 in 0..3 {
                for v2 in 0..3 {
                    assert_eq!(
                        fast.contains(v1, v2),
                        slow[(v1 * 3 + v2) as usize],
                        "cap={cap} pair ({v1},{v2})"
                    );
                }
            }
        }
        // A2 mod 5: 16 generators at cap 1 -> 2^16 vectors
        let fast = oracle_closure_pairs(Family::A2, 5, 1).unwrap();
        let slow = brute_pairs(Family::A2, 5, 1);
        for v1 in 0..5 {
            for v2 in 0..5 {
                assert_eq!(fast.contains(v1, v2), slow[(v1 * 5 + v2) as usize]);
            }
        }
    }

    #[test]
    fn pair_closure_examples() {
        let r5 = oracle_closure_pairs(Family::A1, 5, 5).unwrap();
        assert_eq!(r5.size, 25);
        let r11 = oracle_closure_pairs(Family::A1, 11, 11).unwrap();
        assert_eq!(r11.size, 121);
    }

    #[test]
    fn cap_monotone_and_stabilizes_at_p() {
        for p in [5u64, 7, 11] {
            let mut prev: Option<ClosureReport> = None;
            for cap in 1..=p {
                let cur = oracle_closure_pairs(Family::A1, p, cap).unwrap();
                if let Some(prev) = &prev {
                    for v1 in 0..p {
                        for v2 in 0..p {
                            assert!(
                                !prev.contains(v1, v2) || cur.contains(v1, v2),
                                "cap growth lost a pair at p={p} cap={cap}"
                            );
                        }
                    }
                }
                prev = Some(cur);
            }
            let at_p = oracle_closure_pairs(Family::A1, p, p).unwrap();
            let at_2p = oracle_closure_pairs(Family::A1, p, 2 * p).unwrap();
            assert_eq!(at_p.pairs_sorted(), at_2p.pairs_sorted());
        }
    }

    #[test]
    fn input_guards() {
        assert!(matches!(
            oracle_closure_pairs(Family::A1, 103, 1).unwrap_err(),
            Error::TooLarge { .. }
        ));
        assert!(matches!(
            oracle_closure_pairs(Family::A1, 7, 0).unwrap_err(),
            Error::InvalidInput(_)
        ));
        assert_eq!(
            oracle_closure_pairs(Family::a4(7).unwrap(), 7, 1).unwrap_err(),
            Error::BaseDivisible { base: 7, p: 7 }
        );
    }
}
