//! Constructive subset sums of product sets in Z_p².
//!
//! The library turns three classical facts into checkable computations:
//!
//! * any set of more than 2·sqrt(p) distinct nonzero residues mod p has
//!   every residue as a non-empty subset sum ([`zpsolve`] finds the
//!   subset);
//! * for primes where both sequence orbits clear that threshold, every
//!   pair (v₁, v₂) in Z_p² is a sum of pairwise-distinct elements of the
//!   product families {2ⁿ}×{Fₙ}, {2ⁿ}×{2ⁿ}, {Fₙ}×{Fₙ}, {bⁿ}×{2ⁿ}
//!   ([`represent`] builds an explicit certificate via lift-and-split
//!   term equalization);
//! * for {bⁿ}×{Fₙ} with b ≥ 3 the same machinery certifies at least
//!   ceil(p²/b) attainable pairs through a reserve-residue coloring
//!   ([`represent::coverage_lower_bound`]).
//!
//! [`modseq`] supplies the sequence orbits, [`oracle`] brute-force ground
//! truth, [`census`] a threshold census over primes, and [`check`] batch
//! sweeps with stable reports. Heavy sweeps parallelize through [`exec`]
//! when the `parallel` feature (default) is on; outputs are identical
//! either way.

pub mod census;
pub mod check;
pub mod error;
pub mod exec;
pub mod modseq;
pub mod oracle;
pub mod represent;
pub mod zpsolve;

pub use error::{Error, Result};
