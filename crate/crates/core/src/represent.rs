//! Product-set certificates over Z_p²: lift-and-split equalization,
//! reserve-set coverage, and independent certificate verification.
//!
//! A family pairs two sequences (powers and/or Fibonacci numbers); its
//! elements are the integer pairs (left(a), right(c)). Given a target
//! (v₁, v₂) in Z_p², [`represent_point`] solves each coordinate as a
//! subset sum over the matching residue orbit, equalizes the two term
//! counts by splitting terms (F_e = F_{e−1} + F_{e−2}; bᵉ = b copies of
//! bᵉ⁻¹ — both sum-preserving), and zips the sides into a list of
//! pairwise-distinct elements whose coordinate sums hit the target mod p.
//! The result is a [`Certificate`] that [`verify_certificate`] checks from
//! scratch. For the base-b × Fibonacci family the b-way split can overshoot
//! the needed count by up to b−2; a reserve of b−1 Fibonacci residues
//! absorbs the excess at the cost of shifting the second coordinate, which
//! is the mechanism behind the p²/b coverage bound of
//! [`coverage_lower_bound`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::modseq::{add_mod, exceeds_sqrt_threshold, orbit, OrbitProfile, SequenceKind};
use crate::zpsolve::{fs_closure, FsClosure};

/// The five product families. A4/A5 carry a base b ≥ 3 (base 2 is A1/A2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// {2ⁿ} × {Fₙ}
    A1,
    /// {2ⁿ} × {2ⁿ}
    A2,
    /// {Fₙ} × {Fₙ}
    A3,
    /// {bⁿ} × {Fₙ}
    A4 { b: u64 },
    /// {bⁿ} × {2ⁿ}
    A5 { b: u64 },
}

impl Family {
    pub fn a4(b: u64) -> Result<Self> {
        if b < 3 {
            return Err(Error::InvalidInput(format!(
                "family A4 requires base >= 3 (base 2 is family A1), got {b}"
            )));
        }
        Ok(Family::A4 { b })
    }

    pub fn a5(b: u64) -> Result<Self> {
        if b < 3 {
            return Err(Error::InvalidInput(format!(
                "family A5 requires base >= 3 (base 2 is family A2), got {b}"
            )));
        }
        Ok(Family::A5 { b })
    }

    /// Build from a name and an optional base, e.g. ("A4", Some(3)).
    /// Names are case-insensitive; A1–A3 reject a base, A4/A5 require one.
    pub fn from_parts(name: &str, b: Option<u64>) -> Result<Self> {
        let upper = name.to_ascii_uppercase();
        match (upper.as_str(), b) {
            ("A1", None) => Ok(Family::A1),
            ("A2", None) => Ok(Family::A2),
            ("A3", None) => Ok(Family::A3),
            ("A1" | "A2" | "A3", Some(_)) => Err(Error::InvalidInput(format!(
                "family {upper} takes no base parameter"
            ))),
            ("A4", Some(b)) => Family::a4(b),
            ("A5", Some(b)) => Family::a5(b),
            ("A4" | "A5", None) => Err(Error::InvalidInput(format!(
                "family {upper} requires --base"
            ))),
            _ => Err(Error::InvalidInput(format!(
                "unknown family {name:?} (expected A1..A5)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::A1 => "A1",
            Family::A2 => "A2",
            Family::A3 => "A3",
            Family::A4 { .. } => "A4",
            Family::A5 { .. } => "A5",
        }
    }

    pub fn base(&self) -> Option<u64> {
        match self {
            Family::A4 { b } | Family::A5 { b } => Some(*b),
            _ => None,
        }
    }

    /// Sequence on the first coordinate.
    pub fn left_kind(&self) -> SequenceKind {
        match self {
            Family::A1 | Family::A2 => SequenceKind::Power { base: 2 },
            Family::A3 => SequenceKind::Fibonacci,
            Family::A4 { b } | Family::A5 { b } => SequenceKind::Power { base: *b },
        }
    }

    /// Sequence on the second coordinate.
    pub fn right_kind(&self) -> SequenceKind {
        match self {
            Family::A1 | Family::A3 | Family::A4 { .. } => SequenceKind::Fibonacci,
            Family::A2 => SequenceKind::Power { base: 2 },
            Family::A5 { .. } => SequenceKind::Power { base: 2 },
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.base() {
            Some(b) => write!(f, "{}(b={b})", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

/// One certificate term: index `a` into the left sequence, index `c` into
/// the right sequence, denoting the integer pair (left(a), right(c)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermPair {
    pub a: u64,
    pub c: u64,
}

/// A verifiable witness that (requested.0, requested.1 + shift_value) is a
/// sum of pairwise-distinct family elements mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub family: Family,
    pub p: u64,
    pub requested: (u64, u64),
    pub achieved: (u64, u64),
    /// Reserve terms consumed (only the base-b × Fibonacci family can
    /// need any; everywhere else this is 0).
    pub shift_class: u64,
    /// Sum mod p of the consumed reserve residues; 0 when shift_class = 0.
    pub shift_value: u64,
    pub terms: Vec<TermPair>,
}

/// JSON wire form: family as a string, base only when the family has one,
/// terms as [a, c] arrays.
#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<u64>,
    p: u64,
    requested: [u64; 2],
    achieved: [u64; 2],
    shift_class: u64,
    shift_value: u64,
    terms: Vec<[u64; 2]>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.doc()).expect("certificate serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.doc()).expect("certificate serialization cannot fail")
    }

    fn doc(&self) -> CertificateDoc {
        CertificateDoc {
            family: self.family.name().to_string(),
            b: self.family.base(),
            p: self.p,
            requested: [self.requested.0, self.requested.1],
            achieved: [self.achieved.0, self.achieved.1],
            shift_class: self.shift_class,
            shift_value: self.shift_value,
            terms: self.terms.iter().map(|t| [t.a, t.c]).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CertificateDoc = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("certificate parse error: {e}")))?;
        let family = Family::from_parts(&doc.family, doc.b)?;
        Ok(Certificate {
            family,
            p: doc.p,
            requested: (doc.requested[0], doc.requested[1]),
            achieved: (doc.achieved[0], doc.achieved[1]),
            shift_class: doc.shift_class,
            shift_value: doc.shift_value,
            terms: doc.terms.iter().map(|t| TermPair { a: t[0], c: t[1] }).collect(),
        })
    }
}

/// Smallest index n >= min_index with n ≡ witness(residue) mod period;
/// by periodicity seq(n) ≡ residue (mod p).
pub fn lift_index(profile: &OrbitProfile, residue: u64, min_index: u64) -> Result<u64> {
    let w = profile
        .witness_index(residue)
        .ok_or(Error::ResidueNotInOrbit {
            residue,
            p: profile.p(),
        })?;
    if w >= min_index {
        return Ok(w);
    }
    let period = profile.period();
    let k = (min_index - w).div_ceil(period);
    Ok(w + k * period)
}

/// Lowest index an expansion chain may touch: Fibonacci splits stay at
/// index 3 and above so generated terms never land on the F₁ = F₂ = 1
/// value ambiguity; power splits may go all the way down to exponent 0.
pub fn expansion_floor(kind: SequenceKind) -> u64 {
    match kind {
        SequenceKind::Fibonacci => 3,
        SequenceKind::Power { .. } => 0,
    }
}

/// Split the first index `steps` times, keeping the value sum invariant.
///
/// Each step replaces the active term of index e by F_{e−1} (new active)
/// plus F_{e−2} (retired) for Fibonacci, or by b copies of index e−1 (one
/// active, b−1 retired) for power(b). Output order: final active term
/// first, then retired terms in creation order, then the untouched rest.
/// Cardinality grows by exactly steps (Fibonacci, power(2)) or
/// steps·(b−1) (power(b)).
pub fn expand_terms(kind: SequenceKind, indices: &[u64], steps: u64) -> Result<Vec<u64>> {
    if indices.is_empty() {
        return Err(Error::InvalidInput(
            "expand_terms needs at least one index".to_string(),
        ));
    }
    if steps == 0 {
        return Ok(indices.to_vec());
    }
    let floor = expansion_floor(kind);
    let head = indices[0];
    if head < steps + floor {
        return Err(Error::IndexUnderflow {
            index: head,
            steps,
            floor,
        });
    }
    let mut retired: Vec<u64> = Vec::new();
    let mut active = head;
    for _ in 0..steps {
        match kind {
            SequenceKind::Fibonacci => {
                // F_active = F_{active-1} + F_{active-2}
                retired.push(active - 2);
                active -= 1;
            }
            SequenceKind::Power { base } => {
                // base^active = base copies of base^{active-1}
                for _ in 0..base - 1 {
                    retired.push(active - 1);
                }
                active -= 1;
            }
        }
    }
    let mut out = Vec::with_capacity(1 + retired.len() + indices.len() - 1);
    out.push(active);
    out.extend(retired);
    out.extend_from_slice(&indices[1..]);
    Ok(out)
}

/// The Fibonacci orbit split into working residues G1 and an ordered
/// reserve G2 of exactly b−1 residues (the largest ones, ascending).
#[derive(Debug, Clone)]
pub struct ReserveSplit {
    pub p: u64,
    pub b: u64,
    /// (residue, minimal witness index), ascending by residue; excludes 0.
    pub g1: Vec<(u64, u64)>,
    /// (residue, minimal witness index), ascending by residue; the b−1
    /// largest nonzero orbit residues.
    pub g2: Vec<(u64, u64)>,
}

impl ReserveSplit {
    pub fn g1_residues(&self) -> Vec<u64> {
        self.g1.iter().map(|&(r, _)| r).collect()
    }

    pub fn g2_residues(&self) -> Vec<u64> {
        self.g2.iter().map(|&(r, _)| r).collect()
    }
}

/// Reserve the b−1 largest nonzero Fibonacci residues as G2; everything
/// else (minus 0) is G1 and must still clear the 2·sqrt(p) subset-sum
/// threshold, or the prime is simply too small for this base.
pub fn reserve_split(fib_orbit: &OrbitProfile, b: u64) -> Result<ReserveSplit> {
    assert!(
        matches!(fib_orbit.kind(), SequenceKind::Fibonacci),
        "reserve_split applies to Fibonacci orbits"
    );
    if b < 3 {
        return Err(Error::InvalidInput(format!(
            "reserve split requires base >= 3, got {b}"
        )));
    }
    let p = fib_orbit.p();
    let reserve = b - 1;
    let nonzero: Vec<(u64, u64)> = fib_orbit
        .residues()
        .filter(|&r| r != 0)
        .map(|r| {
            let w = fib_orbit
                .witness_index(r)
                .expect("orbit residues carry witnesses");
            (r, w)
        })
        .collect();
    if (nonzero.len() as u64) <= reserve {
        return Err(Error::OrbitTooSmall { p, reserve });
    }
    let cut = nonzero.len() - reserve as usize;
    let g1 = nonzero[..cut].to_vec();
    let g2 = nonzero[cut..].to_vec();
    if !exceeds_sqrt_threshold(g1.len() as u64, 2, p) {
        return Err(Error::OrbitTooSmall { p, reserve });
    }
    Ok(ReserveSplit { p, b, g1, g2 })
}

/// Everything fixed per (family, p): orbits, subset-sum closures over the
/// usable residues, and (for the reserve family) the G1/G2 split with
/// ready-to-use reserve indices. Build once, then stamp out certificates
/// for any number of targets.
pub struct FamilyContext {
    family: Family,
    p: u64,
    left_profile: OrbitProfile,
    right_profile: OrbitProfile,
    left_closure: FsClosure,
    right_closure: FsClosure,
    reserve: Option<ReserveSplit>,
    /// Reserve residues paired with indices lifted to >= 3, in G2 order.
    g2_lifted: Vec<(u64, u64)>,
}

impl FamilyContext {
    /// Validate every admissibility gate and precompute the solvers.
    pub fn new(family: Family, p: u64) -> Result<Self> {
        if let Some(b) = family.base() {
            if b < 3 {
                return Err(Error::InvalidInput(format!(
                    "family {} requires base >= 3",
                    family.name()
                )));
            }
        }
        if p < 5 {
            return Err(Error::NotAdmissible {
                family: family.to_string(),
                p,
                reason: "p must be at least 5".to_string(),
            });
        }
        let not_admissible = |reason: String| Error::NotAdmissible {
            family: family.to_string(),
            p,
            reason,
        };

        let left_profile = orbit(family.left_kind(), p)?;
        let right_profile = orbit(family.right_kind(), p)?;

        if !exceeds_sqrt_threshold(left_profile.size() as u64, 2, p) {
            return Err(not_admissible(format!(
                "left orbit has {} residues, not more than 2*sqrt({p})",
                left_profile.size()
            )));
        }

        let mut reserve = None;
        let mut g2_lifted = Vec::new();
        let right_input: Vec<u64> = match family {
            Family::A4 { b } => {
                let split = match reserve_split(&right_profile, b) {
                    Ok(split) => split,
                    Err(Error::OrbitTooSmall { .. }) => {
                        return Err(not_admissible(format!(
                            "fibonacci orbit has {} residues, too few to reserve {} and keep more than 2*sqrt({p})",
                            right_profile.size(),
                            b - 1
                        )));
                    }
                    Err(e) => return Err(e),
                };
                for &(res, _) in &split.g2 {
                    let lifted = lift_index(&right_profile, res, expansion_floor(SequenceKind::Fibonacci))?;
                    g2_lifted.push((res, lifted));
                }
                let residues = split.g1_residues();
                reserve = Some(split);
                residues
            }
            _ => {
                if !exceeds_sqrt_threshold(right_profile.size() as u64, 2, p) {
                    return Err(not_admissible(format!(
                        "right orbit has {} residues, not more than 2*sqrt({p})",
                        right_profile.size()
                    )));
                }
                right_profile.residues().filter(|&r| r != 0).collect()
            }
        };
        let left_input: Vec<u64> = left_profile.residues().filter(|&r| r != 0).collect();

        let left_closure = fs_closure(&left_input, p, false)?;
        let right_closure = fs_closure(&right_input, p, false)?;

        Ok(FamilyContext {
            family,
            p,
            left_profile,
            right_profile,
            left_closure,
            right_closure,
            reserve,
            g2_lifted,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reserve(&self) -> Option<&ReserveSplit> {
        self.reserve.as_ref()
    }

    /// Per-class second-coordinate shifts: prefix sums of the reserve
    /// residues mod p (class 0 shifts by 0). Empty for reserve-free
    /// families.
    pub fn shift_values(&self) -> Vec<u64> {
        let Some(b) = self.family.base() else {
            return Vec::new();
        };
        if matches!(self.family, Family::A5 { .. }) {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(b as usize);
        let mut acc = 0u64;
        out.push(0);
        for &(res, _) in &self.g2_lifted {
            acc = add_mod(acc, res, self.p);
            out.push(acc);
        }
        out
    }

    /// Construct the certificate for one target pair.
    pub fn certificate(&self, v1: u64, v2: u64) -> Result<Certificate> {
        let p = self.p;
        if v1 >= p || v2 >= p {
            return Err(Error::InvalidInput(format!(
                "target ({v1},{v2}) out of range for p = {p}"
            )));
        }
        let left_witness = self.left_closure.witness(v1)?;
        let right_witness = self.right_closure.witness(v2)?;
        let t_count = left_witness.chosen.len();
        let r_count = right_witness.chosen.len();

        let left_canonical = self.canonical_indices(&self.left_profile, &left_witness.chosen);
        let right_canonical = self.canonical_indices(&self.right_profile, &right_witness.chosen);

        let mut shift_class = 0u64;
        let mut shift_value = 0u64;
        // When Some(d), the right list carries one duplicated value at
        // positions 0 and d and the zip must separate those two.
        let mut dup_pos: Option<usize> = None;

        let (left_list, right_list) = if t_count == r_count {
            (left_canonical, right_canonical)
        } else if t_count > r_count {
            // Right side deficient: its sequence (Fibonacci or power(2))
            // gains one term per split, no overshoot possible.
            let steps = (t_count - r_count) as u64;
            let right = self.expand_side(
                self.family.right_kind(),
                &right_witness.chosen,
                &self.right_profile,
                steps,
            )?;
            (left_canonical, right)
        } else {
            let need = (r_count - t_count) as u64;
            match self.family {
                Family::A1 | Family::A2 | Family::A3 => {
                    let left = self.expand_side(
                        self.family.left_kind(),
                        &left_witness.chosen,
                        &self.left_profile,
                        need,
                    )?;
                    (left, right_canonical)
                }
                Family::A4 { b } => {
                    // b-way splits overshoot by r in [0, b−2]; absorb r
                    // into reserve terms appended to the Fibonacci side,
                    // shifting the achieved second coordinate.
                    let steps = need.div_ceil(b - 1);
                    let over = steps * (b - 1) - need;
                    debug_assert!(over <= b - 2);
                    let left = self.expand_side(
                        self.family.left_kind(),
                        &left_witness.chosen,
                        &self.left_profile,
                        steps,
                    )?;
                    let mut right = right_canonical;
                    for &(res, idx) in self.g2_lifted.iter().take(over as usize) {
                        right.push(idx);
                        shift_value = add_mod(shift_value, res, p);
                    }
                    shift_class = over;
                    (left, right)
                }
                Family::A5 { b } => {
                    // No reserve here: bridge the overshoot with extra
                    // power(2) splits on the right so both counts meet at
                    // T' + steps*(b−1) and the target stays unshifted.
                    let mut steps = need.div_ceil(b - 1);
                    let mut over = steps * (b - 1) - need;
                    let mut left = self.expand_side(
                        self.family.left_kind(),
                        &left_witness.chosen,
                        &self.left_profile,
                        steps,
                    )?;
                    if over > 0 {
                        // The bridged right side repeats one value, so the
                        // zip needs two distinct left values to hang the
                        // repeats on. A fully collapsed left expansion
                        // (every index equal) gets one more split.
                        let first = left[0];
                        if left.iter().all(|&i| i == first) {
                            steps += 1;
                            over += b - 1;
                            left = self.expand_side(
                                self.family.left_kind(),
                                &left_witness.chosen,
                                &self.left_profile,
                                steps,
                            )?;
                        }
                        // Lift the bridge chain a full period above the
                        // canonical indices: the only repeated right value
                        // is then the chain's own final index, at
                        // positions 0 and `over`.
                        let min_index = over + self.right_profile.period();
                        let u = lift_index(&self.right_profile, right_witness.chosen[0], min_index)?;
                        let mut indices = Vec::with_capacity(right_witness.chosen.len());
                        indices.push(u);
                        indices.extend_from_slice(&right_canonical[1..]);
                        let right = expand_terms(self.family.right_kind(), &indices, over)?;
                        dup_pos = Some(over as usize);
                        (left, right)
                    } else {
                        (left, right_canonical)
                    }
                }
            }
        };

        debug_assert_eq!(left_list.len(), right_list.len());
        let terms = match dup_pos {
            None => left_list
                .iter()
                .zip(right_list.iter())
                .map(|(&a, &c)| TermPair { a, c })
                .collect(),
            Some(d) => zip_separating_duplicate(&left_list, &right_list, d),
        };

        let cert = Certificate {
            family: self.family,
            p,
            requested: (v1, v2),
            achieved: (v1, add_mod(v2, shift_value, p)),
            shift_class,
            shift_value,
            terms,
        };
        debug_assert_eq!(
            verify_certificate(&cert),
            Ok(()),
            "construction bug for {} p={p} target ({v1},{v2})",
            self.family
        );
        Ok(cert)
    }

    fn canonical_indices(&self, profile: &OrbitProfile, chosen: &[u64]) -> Vec<u64> {
        chosen
            .iter()
            .map(|&r| {
                profile
                    .witness_index(r)
                    .expect("solver inputs come from the orbit")
            })
            .collect()
    }

    /// Lift the first witness term clear of the expansion chain, then split
    /// it `steps` times. Output order is the expansion order.
    fn expand_side(
        &self,
        kind: SequenceKind,
        chosen: &[u64],
        profile: &OrbitProfile,
        steps: u64,
    ) -> Result<Vec<u64>> {
        if steps == 0 {
            return Ok(self.canonical_indices(profile, chosen));
        }
        let lifted = lift_index(profile, chosen[0], steps + expansion_floor(kind))?;
        let mut indices = Vec::with_capacity(chosen.len());
        indices.push(lifted);
        for &r in &chosen[1..] {
            indices.push(
                profile
                    .witness_index(r)
                    .expect("solver inputs come from the orbit"),
            );
        }
        expand_terms(kind, &indices, steps)
    }
}

/// Zip for the one case where both sides carry repeats: `right[0]` and
/// `right[d]` hold the same value, everything else on the right is unique.
/// Pair those two with two provably different left values and distribute
/// the rest in order; all resulting pairs are distinct.
fn zip_separating_duplicate(left: &[u64], right: &[u64], d: usize) -> Vec<TermPair> {
    let n = left.len();
    debug_assert_eq!(n, right.len());
    let j0 = left
        .iter()
        .position(|&x| x != left[0])
        .expect("caller guarantees two distinct left values");
    let mut assign = vec![u64::MAX; n];
    assign[0] = right[0];
    assign[j0] = right[d];
    let mut rest = (1..n).filter(|&i| i != d).map(|i| right[i]);
    for (pos, slot) in assign.iter_mut().enumerate() {
        if pos == 0 || pos == j0 {
            continue;
        }
        *slot = rest.next().expect("left and right lengths match");
    }
    debug_assert!(rest.next().is_none());
    left.iter()
        .zip(assign.iter())
        .map(|(&a, &c)| TermPair { a, c })
        .collect()
}

/// One-shot certificate construction; batch callers should build a
/// [`FamilyContext`] once instead.
pub fn represent_point(family: Family, p: u64, v1: u64, v2: u64) -> Result<Certificate> {
    FamilyContext::new(family, p)?.certificate(v1, v2)
}

/// Why a certificate failed verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateDefect {
    ModulusTooSmall,
    InvalidBase,
    EmptyTerms,
    ResidueOutOfRange,
    ShiftClassOutOfRange,
    ShiftOutsideReserveFamily,
    ShiftValueWithoutClass,
    FirstCoordinateChanged,
    ShiftCongruenceBroken,
    EqualElements { i: usize, j: usize },
    LeftSumMismatch,
    RightSumMismatch,
}

impl std::fmt::Display for CertificateDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertificateDefect::ModulusTooSmall => write!(f, "modulus below 2"),
            CertificateDefect::InvalidBase => write!(f, "family base below 3"),
            CertificateDefect::EmptyTerms => write!(f, "certificate has no terms"),
            CertificateDefect::ResidueOutOfRange => {
                write!(f, "a residue field is not reduced mod p")
            }
            CertificateDefect::ShiftClassOutOfRange => {
                write!(f, "shift class exceeds b-1")
            }
            CertificateDefect::ShiftOutsideReserveFamily => {
                write!(f, "nonzero shift class outside the reserve family")
            }
            CertificateDefect::ShiftValueWithoutClass => {
                write!(f, "nonzero shift value with shift class 0")
            }
            CertificateDefect::FirstCoordinateChanged => {
                write!(f, "achieved first coordinate differs from requested")
            }
            CertificateDefect::ShiftCongruenceBroken => {
                write!(f, "achieved second coordinate is not requested + shift mod p")
            }
            CertificateDefect::EqualElements { i, j } => {
                write!(f, "terms {i} and {j} denote the same integer pair")
            }
            CertificateDefect::LeftSumMismatch => {
                write!(f, "first-coordinate sum does not match the achieved target")
            }
            CertificateDefect::RightSumMismatch => {
                write!(f, "second-coordinate sum does not match the achieved target")
            }
        }
    }
}

/// Equal integer values behind two indices of one sequence. Power values
/// coincide only at equal exponents; Fibonacci values additionally at
/// indices 1 and 2 (F₁ = F₂ = 1).
fn same_value(kind: SequenceKind, x: u64, y: u64) -> bool {
    match kind {
        SequenceKind::Power { .. } => x == y,
        SequenceKind::Fibonacci => x == y || (matches!(x, 1 | 2) && matches!(y, 1 | 2)),
    }
}

/// Re-check every certificate invariant from scratch: structural fields,
/// pairwise distinctness of the denoted integer pairs, and both coordinate
/// sums recomputed from the indices. Independent of the construction —
/// only the sequence primitives are shared.
pub fn verify_certificate(cert: &Certificate) -> std::result::Result<(), CertificateDefect> {
    let p = cert.p;
    if p < 2 {
        return Err(CertificateDefect::ModulusTooSmall);
    }
    if let Some(b) = cert.family.base() {
        if b < 3 {
            return Err(CertificateDefect::InvalidBase);
        }
    }
    if cert.terms.is_empty() {
        return Err(CertificateDefect::EmptyTerms);
    }
    if cert.requested.0 >= p
        || cert.requested.1 >= p
        || cert.achieved.0 >= p
        || cert.achieved.1 >= p
        || cert.shift_value >= p
    {
        return Err(CertificateDefect::ResidueOutOfRange);
    }
    match cert.family {
        Family::A4 { b } => {
            if cert.shift_class > b - 1 {
                return Err(CertificateDefect::ShiftClassOutOfRange);
            }
        }
        _ => {
            if cert.shift_class != 0 {
                return Err(CertificateDefect::ShiftOutsideReserveFamily);
            }
        }
    }
    if cert.shift_class == 0 && cert.shift_value != 0 {
        return Err(CertificateDefect::ShiftValueWithoutClass);
    }
    if cert.achieved.0 != cert.requested.0 {
        return Err(CertificateDefect::FirstCoordinateChanged);
    }
    if cert.achieved.1 != add_mod(cert.requested.1, cert.shift_value, p) {
        return Err(CertificateDefect::ShiftCongruenceBroken);
    }

    let left_kind = cert.family.left_kind();
    let right_kind = cert.family.right_kind();
    for i in 0..cert.terms.len() {
        for j in i + 1..cert.terms.len() {
            if same_value(left_kind, cert.terms[i].a, cert.terms[j].a)
                && same_value(right_kind, cert.terms[i].c, cert.terms[j].c)
            {
                return Err(CertificateDefect::EqualElements { i, j });
            }
        }
    }

    let mut left_sum = 0u64;
    let mut right_sum = 0u64;
    for t in &cert.terms {
        left_sum = add_mod(left_sum, left_kind.value_mod(t.a, p), p);
        right_sum = add_mod(right_sum, right_kind.value_mod(t.c, p), p);
    }
    if left_sum != cert.achieved.0 {
        return Err(CertificateDefect::LeftSumMismatch);
    }
    if right_sum != cert.achieved.1 {
        return Err(CertificateDefect::RightSumMismatch);
    }
    Ok(())
}

/// Result of sweeping all p² targets of the base-b × Fibonacci family:
/// every target falls into the class of its reserve overshoot r, each
/// class translates into the attainable set by its fixed shift, so the
/// biggest class certifies at least ceil(p²/b) attainable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub p: u64,
    pub b: u64,
    /// class_sizes[r] = number of targets with shift class r; length b.
    pub class_sizes: Vec<u64>,
    /// Largest class (smallest r on ties).
    pub best_class: u64,
    pub certified_count: u64,
    /// shift_values[r] = second-coordinate translation of class r; length b.
    pub shift_values: Vec<u64>,
}

/// Classify every (v₁, v₂) in Z_p² by its certificate's shift class and
/// certify the coverage bound |FS| ≥ ceil(p²/b). Rows of v₁ are processed
/// through [`exec::map_ordered`], so the sweep parallelizes with identical
/// output.
pub fn coverage_lower_bound(b: u64, p: u64) -> Result<CoverageReport> {
    let family = Family::a4(b)?;
    let ctx = FamilyContext::new(family, p)?;
    coverage_with_context(&ctx)
}

/// [`coverage_lower_bound`] on an already-built context, so batch callers
/// don't pay for the orbit and closure setup twice.
pub fn coverage_with_context(ctx: &FamilyContext) -> Result<CoverageReport> {
    let Family::A4 { b } = ctx.family() else {
        return Err(Error::InvalidInput(format!(
            "coverage bound applies to family A4, got {}",
            ctx.family()
        )));
    };
    let p = ctx.p();
    let classes = b as usize;

    let rows: Vec<Result<Vec<u64>>> = exec::map_ordered((0..p).collect(), |v1| {
        let mut counts = vec![0u64; classes];
        for v2 in 0..p {
            let cert = ctx.certificate(v1, v2)?;
            counts[cert.shift_class as usize] += 1;
        }
        Ok(counts)
    });

    let mut class_sizes = vec![0u64; classes];
    for row in rows {
        let row = row?;
        for (total, n) in class_sizes.iter_mut().zip(row) {
            *total += n;
        }
    }

    let total: u64 = class_sizes.iter().sum();
    assert_eq!(total, p * p, "every target gets exactly one class");
    let (best_class, &best_size) = class_sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("b >= 3 classes");
    let needed = (p * p).div_ceil(b);
    assert!(
        best_size >= needed,
        "pigeonhole bound violated: max class {best_size} < ceil(p^2/b) = {needed}"
    );

    Ok(CoverageReport {
        p,
        b,
        class_sizes,
        best_class: best_class as u64,
        certified_count: best_size,
        shift_values: ctx.shift_values(),
    })
}
