//! Batch verification sweeps with stable, diffable text reports.
//!
//! [`theorem_sweep`] exhausts all p² targets of a full-representation
//! family for every admissible prime up to a limit, verifying each
//! certificate independently. [`coverage_sweep`] does the analogous run
//! for the reserve family: the p²/b coverage bound per admissible prime,
//! optionally cross-checked against the brute-force pair oracle. Both
//! reports render deterministically (integers only, fixed ordering), so
//! repeated runs — at any parallelism — are byte-identical.

use std::fmt;

use crate::census::sieve_primes;
use crate::error::{Error, Result};
use crate::exec;
use crate::oracle::oracle_closure_pairs;
use crate::represent::{
    coverage_with_context, verify_certificate, Family, FamilyContext,
};

/// Verified grid for one admissible prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeGridResult {
    pub p: u64,
    pub targets: u64,
    pub verified: u64,
    /// First failing target in (v1, v2) order, with the reason.
    pub first_failure: Option<(u64, u64, String)>,
}

/// Exhaustive certificate check over every admissible prime <= the limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub family: Family,
    pub prime_limit: u64,
    /// (p, reason) for primes the admissibility gates reject, ascending.
    pub skipped: Vec<(u64, String)>,
    pub per_prime: Vec<PrimeGridResult>,
    pub all_ok: bool,
}

/// For every prime p <= prime_limit that passes the family's
/// admissibility gates, build and independently verify certificates for
/// all p² targets.
pub fn theorem_sweep(family: Family, prime_limit: u64) -> Result<SweepReport> {
    if prime_limit < 2 {
        return Err(Error::InvalidInput(format!(
            "prime limit must be at least 2, got {prime_limit}"
        )));
    }
    let mut skipped = Vec::new();
    let mut per_prime = Vec::new();
    for p in sieve_primes(prime_limit) {
        let ctx = match FamilyContext::new(family, p) {
            Ok(ctx) => ctx,
            Err(Error::NotAdmissible { reason, .. }) => {
                skipped.push((p, reason));
                continue;
            }
            Err(Error::BaseDivisible { base, .. }) => {
                skipped.push((p, format!("p divides the base {base}")));
                continue;
            }
            Err(e) => return Err(e),
        };
        per_prime.push(grid_check(&ctx));
    }
    let all_ok = per_prime.iter().all(|g| g.verified == g.targets);
    Ok(SweepReport {
        family,
        prime_limit,
        skipped,
        per_prime,
        all_ok,
    })
}

/// Build and verify certificates for all p² targets of one context.
/// Row-parallel; counting and first-failure selection are order-stable.
pub fn grid_check(ctx: &FamilyContext) -> PrimeGridResult {
    let p = ctx.p();
    type Row = (u64, Option<(u64, u64, String)>);
    let rows: Vec<Row> = exec::map_ordered((0..p).collect(), |v1| {
        let mut verified = 0u64;
        let mut first_failure = None;
        for v2 in 0..p {
            let outcome = match ctx.certificate(v1, v2) {
                Ok(cert) => verify_certificate(&cert)
                    .map_err(|defect| defect.to_string()),
                Err(e) => Err(e.to_string()),
            };
            match outcome {
                Ok(()) => verified += 1,
                Err(reason) => {
                    if first_failure.is_none() {
                        first_failure = Some((v1, v2, reason));
                    }
                }
            }
        }
        (verified, first_failure)
    });
    let verified = rows.iter().map(|r| r.0).sum();
    let first_failure = rows.into_iter().find_map(|r| r.1);
    PrimeGridResult {
        p,
        targets: p * p,
        verified,
        first_failure,
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "theorem-check family={} prime-limit={}",
            self.family, self.prime_limit
        )?;
        for (p, reason) in &self.skipped {
            writeln!(f, "  not admissible: p={p} ({reason})")?;
        }
        for g in &self.per_prime {
            write!(f, "  grid p={}: {}/{} verified", g.p, g.verified, g.targets)?;
            match &g.first_failure {
                None => writeln!(f)?,
                Some((v1, v2, reason)) => {
                    writeln!(f, " first failure at ({v1},{v2}): {reason}")?
                }
            }
        }
        let certs: u64 = self.per_prime.iter().map(|g| g.verified).sum();
        writeln!(
            f,
            "result: {} ({} admissible primes, {} certificates verified)",
            if self.all_ok { "PASS" } else { "FAIL" },
            self.per_prime.len(),
            certs
        )
    }
}

/// Coverage outcome for one admissible prime of the reserve family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageOutcome {
    pub p: u64,
    pub certified_count: u64,
    /// ceil(p²/b)
    pub needed: u64,
    pub class_sizes: Vec<u64>,
    /// Size of the brute-force pair closure, when it was run.
    pub oracle_size: Option<u64>,
    /// Whether every achieved pair of every target's certificate lies in
    /// the oracle closure, when the oracle was run.
    pub containment_ok: Option<bool>,
}

/// Coverage bound over every admissible prime <= the limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageSweepReport {
    pub b: u64,
    pub prime_limit: u64,
    pub skipped: Vec<(u64, String)>,
    pub per_prime: Vec<CoverageOutcome>,
    pub all_ok: bool,
}

/// For every admissible prime p <= prime_limit, certify the ceil(p²/b)
/// coverage bound; with `with_oracle` also check every achieved pair
/// against the exhaustive pair closure (possible for p <= 101).
pub fn coverage_sweep(b: u64, prime_limit: u64, with_oracle: bool) -> Result<CoverageSweepReport> {
    let family = Family::a4(b)?;
    let mut skipped = Vec::new();
    let mut per_prime = Vec::new();
    let mut all_ok = true;
    for p in sieve_primes(prime_limit) {
        let ctx = match FamilyContext::new(family, p) {
            Ok(ctx) => ctx,
            Err(Error::NotAdmissible { reason, .. }) => {
                skipped.push((p, reason));
                continue;
            }
            Err(Error::BaseDivisible { base, .. }) => {
                skipped.push((p, format!("p divides the base {base}")));
                continue;
            }
            Err(e) => return Err(e),
        };
        let report = coverage_with_context(&ctx)?;
        let needed = (p * p).div_ceil(b);
        let bound_ok = report.certified_count >= needed;

        let (oracle_size, containment_ok) = if with_oracle && p <= 101 {
            let oracle = oracle_closure_pairs(family, p, p)?;
            let row_ok: Vec<bool> = exec::map_ordered((0..p).collect(), |v1| {
                (0..p).all(|v2| match ctx.certificate(v1, v2) {
                    Ok(cert) => oracle.contains(cert.achieved.0, cert.achieved.1),
                    Err(_) => false,
                })
            });
            let contained = row_ok.into_iter().all(|ok| ok);
            (Some(oracle.size), Some(contained))
        } else {
            (None, None)
        };

        all_ok &= bound_ok && containment_ok.unwrap_or(true);
        per_prime.push(CoverageOutcome {
            p,
            certified_count: report.certified_count,
            needed,
            class_sizes: report.class_sizes,
            oracle_size,
            containment_ok,
        });
    }
    Ok(CoverageSweepReport {
        b,
        prime_limit,
        skipped,
        per_prime,
        all_ok,
    })
}

impl fmt::Display for CoverageSweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "coverage-check base={} prime-limit={}",
            self.b, self.prime_limit
        )?;
        for (p, reason) in &self.skipped {
            writeln!(f, "  not admissible: p={p} ({reason})")?;
        }
        for c in &self.per_prime {
            write!(
                f,
                "  coverage p={}: certified {} >= needed {} (classes {:?})",
                c.p, c.certified_count, c.needed, c.class_sizes
            )?;
            match (c.oracle_size, c.containment_ok) {
                (Some(size), Some(ok)) => writeln!(
                    f,
                    ", oracle size {size}, containment {}",
                    if ok { "ok" } else { "VIOLATED" }
                )?,
                _ => writeln!(f)?,
            }
        }
        writeln!(
            f,
            "result: {} ({} admissible primes)",
            if self.all_ok { "PASS" } else { "FAIL" },
            self.per_prime.len()
        )
    }
}
