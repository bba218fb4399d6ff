use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The base of a power sequence is divisible by the modulus, so the
    /// sequence has no multiplicative orbit mod p.
    #[error("base {base} is divisible by the prime {p}")]
    BaseDivisible { base: u64, p: u64 },

    /// A subset-sum element lies outside [1, p).
    #[error("element {value} is not a nonzero residue mod {p}")]
    NonResidueElement { value: u64, p: u64 },

    /// The target is not a sum of any non-empty subset of the given set.
    #[error("target {target} is not a non-empty subset sum mod {p}")]
    NotReachable { target: u64, p: u64 },

    /// The residue does not occur in the orbit being indexed.
    #[error("residue {residue} does not occur in the orbit mod {p}")]
    ResidueNotInOrbit { residue: u64, p: u64 },

    /// A split chain would run below the smallest legal index.
    #[error("index {index} cannot absorb {steps} splits (floor {floor})")]
    IndexUnderflow { index: u64, steps: u64, floor: u64 },

    /// The Fibonacci orbit is too small to reserve b-1 residues and still
    /// keep a solver set above the Olson threshold.
    #[error("orbit mod {p} too small to reserve {reserve} residues")]
    OrbitTooSmall { p: u64, reserve: u64 },

    /// An orbit-size precondition fails, so the constructive representation
    /// is not guaranteed for this prime.
    #[error("p = {p} is not admissible for family {family}: {reason}")]
    NotAdmissible {
        family: String,
        p: u64,
        reason: String,
    },

    /// The prime is below the range the census classifies.
    #[error("prime {p} is below the census range (p >= 5)")]
    SmallPrime { p: u64 },

    /// The instance exceeds the size bound of a brute-force routine.
    #[error("instance too large for exhaustive enumeration: {what}")]
    TooLarge { what: String },

    /// A malformed input (bad family tag, bad field combination, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
