//! Fibonacci and power sequences mod p: values, periods, residue orbits.
//!
//! The two sequence families used everywhere else in this crate are
//! `F_0 = 0, F_1 = 1, F_{n+2} = F_{n+1} + F_n` and `b^n` for a fixed base
//! `b >= 2`. Both are eventually periodic mod a prime p (purely periodic,
//! in fact): the Fibonacci sequence with the Pisano period pi(p), the power
//! sequence with the multiplicative order of b. An [`OrbitProfile`] captures
//! one full period: the set of residues attained and, for each residue, the
//! minimal index attaining it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// (a + b) mod p without overflow.
#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

/// (a * b) mod p without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// (a - b) mod p, always in [0, p).
#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    let (a, b) = (a % p, b % p);
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

/// Which sequence a profile or an expansion refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceKind {
    Fibonacci,
    Power { base: u64 },
}

impl SequenceKind {
    /// Power sequence with a validated base.
    pub fn power(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidInput(format!(
                "power base must be >= 2, got {base}"
            )));
        }
        Ok(SequenceKind::Power { base })
    }

    /// n-th sequence value mod p.
    pub fn value_mod(&self, n: u64, p: u64) -> u64 {
        match self {
            SequenceKind::Fibonacci => fib_mod(n, p),
            SequenceKind::Power { base } => pow_mod(*base, n, p),
        }
    }
}

impl std::fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SequenceKind::Fibonacci => write!(f, "fibonacci"),
            SequenceKind::Power { base } => write!(f, "power({base})"),
        }
    }
}

/// F_n mod p by fast doubling: F(2k) = F(k)(2F(k+1) - F(k)) and
/// F(2k+1) = F(k)^2 + F(k+1)^2, folded over the bits of n. Runs in
/// O(log n) so certificate indices far beyond one period stay cheap.
pub fn fib_mod(n: u64, p: u64) -> u64 {
    if p == 1 {
        return 0;
    }
    if n == 0 {
        return 0;
    }
    // (a, b) = (F(k), F(k+1)) for the prefix k of n consumed so far.
    let (mut a, mut b) = (0u64, 1u64);
    let bits = 64 - n.leading_zeros();
    for i in (0..bits).rev() {
        let two_b = add_mod(b, b, p);
        let f2k = mul_mod(a, sub_mod(two_b, a, p), p);
        let f2k1 = add_mod(mul_mod(a, a, p), mul_mod(b, b, p), p);
        a = f2k;
        b = f2k1;
        if (n >> i) & 1 == 1 {
            let t = add_mod(a, b, p);
            a = b;
            b = t;
        }
    }
    a
}

/// b^n mod p by square-and-multiply.
pub fn pow_mod(b: u64, n: u64, p: u64) -> u64 {
    if p == 1 {
        return 0;
    }
    let mut base = b % p;
    let mut exp = n;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Pisano period pi(p): least n > 0 with (F_n, F_{n+1}) = (0, 1) mod p.
/// Plain iteration; the period is at most 6p.
pub fn pisano_period(p: u64) -> u64 {
    assert!(p >= 2, "modulus must be at least 2");
    let (mut a, mut b) = (0u64, 1u64);
    let mut n = 0u64;
    loop {
        let next = add_mod(a, b, p);
        a = b;
        b = next;
        n += 1;
        if a == 0 && b == 1 {
            return n;
        }
    }
}

/// Multiplicative order of b mod p: least t > 0 with b^t = 1.
/// Iterative; errors if p divides b.
pub fn mult_order(b: u64, p: u64) -> Result<u64> {
    let r = b % p;
    if r == 0 {
        return Err(Error::BaseDivisible { base: b, p });
    }
    let mut x = r;
    let mut t = 1u64;
    while x != 1 {
        x = mul_mod(x, r, p);
        t += 1;
    }
    Ok(t)
}

const NO_WITNESS: u64 = u64::MAX;

/// The residue orbit of a sequence mod p over one full period, with the
/// minimal attaining index recorded per residue.
///
/// For `Power`, the orbit never contains 0 and every index is below the
/// multiplicative order. For `Fibonacci` it always contains 0 (from F_0)
/// and 1 (from F_1), and indices are below the Pisano period.
#[derive(Debug, Clone)]
pub struct OrbitProfile {
    p: u64,
    kind: SequenceKind,
    period: u64,
    size: usize,
    // indexed by residue; NO_WITNESS marks residues outside the orbit
    witness: Vec<u64>,
}

impl OrbitProfile {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Number of distinct residues attained.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, residue: u64) -> bool {
        residue < self.p && self.witness[residue as usize] != NO_WITNESS
    }

    /// Minimal index n with seq(n) = residue (mod p), if the residue occurs.
    pub fn witness_index(&self, residue: u64) -> Option<u64> {
        if self.contains(residue) {
            Some(self.witness[residue as usize])
        } else {
            None
        }
    }

    /// Residues in ascending order.
    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        self.witness
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != NO_WITNESS)
            .map(|(r, _)| r as u64)
    }

    pub fn residues_sorted(&self) -> Vec<u64> {
        self.residues().collect()
    }

    /// Sequence value at index n, reduced mod p.
    pub fn value_at(&self, n: u64) -> u64 {
        self.kind.value_mod(n, self.p)
    }
}

/// Walk one full period of the sequence mod p and collect its residue
/// orbit with minimal-index witnesses.
pub fn orbit(kind: SequenceKind, p: u64) -> Result<OrbitProfile> {
    assert!(p >= 2, "modulus must be at least 2");
    let mut witness = vec![NO_WITNESS; p as usize];
    let mut size = 0usize;
    let period;
    match kind {
        SequenceKind::Fibonacci => {
            let (mut a, mut b) = (0u64, 1u64);
            let mut n = 0u64;
            loop {
                if witness[a as usize] == NO_WITNESS {
                    witness[a as usize] = n;
                    size += 1;
                }
                let next = add_mod(a, b, p);
                a = b;
                b = next;
                n += 1;
                if a == 0 && b == 1 {
                    break;
                }
            }
            period = n;
        }
        SequenceKind::Power { base } => {
            let r = base % p;
            if r == 0 {
                return Err(Error::BaseDivisible { base, p });
            }
            let mut x = 1u64;
            let mut n = 0u64;
            loop {
                if witness[x as usize] == NO_WITNESS {
                    witness[x as usize] = n;
                    size += 1;
                }
                x = mul_mod(x, r, p);
                n += 1;
                if x == 1 {
                    break;
                }
            }
            period = n;
        }
    }
    Ok(OrbitProfile {
        p,
        kind,
        period,
        size,
        witness,
    })
}

/// Exact test |orbit| > factor * sqrt(p), evaluated as the integer
/// comparison |orbit|^2 > factor^2 * p so no rounding is involved.
pub fn threshold_check(profile: &OrbitProfile, factor: u64) -> bool {
    exceeds_sqrt_threshold(profile.size() as u64, factor, profile.p())
}

/// size > factor * sqrt(p) via size^2 > factor^2 * p.
pub fn exceeds_sqrt_threshold(size: u64, factor: u64, p: u64) -> bool {
    let lhs = size as u128 * size as u128;
    let rhs = factor as u128 * factor as u128 * p as u128;
    lhs > rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct iterative recurrence, the oracle for fib_mod.
    fn fib_iter_mod(n: u64, p: u64) -> u64 {
        let (mut a, mut b) = (0u64, 1u64);
        for _ in 0..n {
            let next = add_mod(a, b, p);
            a = b;
            b = next;
        }
        a
    }

    fn pow_iter_mod(b: u64, n: u64, p: u64) -> u64 {
        let mut x = 1u64;
        for _ in 0..n {
            x = mul_mod(x, b % p, p);
        }
        x
    }

    fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn fib_mod_spot_values() {
        assert_eq!(fib_mod(0, 7), 0);
        assert_eq!(fib_mod(1, 7), 1);
        // F_10 = 55, 55 mod 7 = 6
        assert_eq!(fib_iter_mod(10, 7), 6);
        assert_eq!(fib_mod(10, 7), 6);
    }

    #[test]
    fn fib_mod_matches_iterative_oracle() {
        for p in [2u64, 3, 5, 7, 11, 13, 23, 47] {
            for n in 0..2000 {
                assert_eq!(fib_mod(n, p), fib_iter_mod(n, p), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn pow_mod_spot_values() {
        assert_eq!(pow_mod(2, 0, 7), 1);
        assert_eq!(pow_iter_mod(2, 3, 7), 1);
        assert_eq!(pow_mod(2, 3, 7), 1);
        assert_eq!(pow_iter_mod(3, 4, 11), 4);
        assert_eq!(pow_mod(3, 4, 11), 4);
    }

    #[test]
    fn pisano_spot_values() {
        assert_eq!(pisano_period(2), 3);
        assert_eq!(pisano_period(5), 20);
        // F_16 = 987 = 0, F_17 = 1597 = 1 (mod 7)
        assert_eq!(pisano_period(7), 16);
    }

    #[test]
    fn mult_order_spot_values() {
        assert_eq!(mult_order(8, 7).unwrap(), 1);
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(2, 11).unwrap(), 10);
        assert_eq!(
            mult_order(14, 7),
            Err(Error::BaseDivisible { base: 14, p: 7 })
        );
    }

    #[test]
    fn orbit_power2_mod7() {
        let prof = orbit(SequenceKind::Power { base: 2 }, 7).unwrap();
        assert_eq!(prof.period(), 3);
        assert_eq!(prof.residues_sorted(), vec![1, 2, 4]);
        assert_eq!(prof.witness_index(1), Some(0));
        assert_eq!(prof.witness_index(2), Some(1));
        assert_eq!(prof.witness_index(4), Some(2));
        assert!(!prof.contains(0));
    }

    #[test]
    fn orbit_fibonacci_mod7_and_mod11() {
        let prof7 = orbit(SequenceKind::Fibonacci, 7).unwrap();
        assert_eq!(prof7.period(), 16);
        assert_eq!(prof7.residues_sorted(), vec![0, 1, 2, 3, 4, 5, 6]);

        let prof11 = orbit(SequenceKind::Fibonacci, 11).unwrap();
        assert_eq!(prof11.period(), 10);
        assert_eq!(prof11.residues_sorted(), vec![0, 1, 2, 3, 5, 8, 10]);
    }

    #[test]
    fn orbit_witnesses_recompute() {
        for p in [2u64, 5, 7, 11, 13, 89, 97] {
            for kind in [
                SequenceKind::Fibonacci,
                SequenceKind::Power { base: 2 },
                SequenceKind::Power { base: 3 },
            ] {
                if let SequenceKind::Power { base } = kind {
                    if base % p == 0 {
                        continue;
                    }
                }
                let prof = orbit(kind, p).unwrap();
                for r in prof.residues() {
                    let w = prof.witness_index(r).unwrap();
                    assert!(w < prof.period());
                    assert_eq!(prof.value_at(w), r, "kind={kind} p={p} r={r}");
                }
                match kind {
                    SequenceKind::Fibonacci => {
                        assert!(prof.contains(0) && (p == 2 || prof.contains(1)));
                        if p == 2 {
                            assert!(prof.contains(1));
                        }
                    }
                    SequenceKind::Power { .. } => {
                        assert!(!prof.contains(0));
                        assert!(prof.contains(1));
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_equals_naive_enumeration() {
        for p in [3u64, 7, 11, 31, 97] {
            let prof = orbit(SequenceKind::Fibonacci, p).unwrap();
            let mut naive: Vec<u64> = (0..prof.period()).map(|n| fib_iter_mod(n, p)).collect();
            naive.sort_unstable();
            naive.dedup();
            assert_eq!(prof.residues_sorted(), naive);
        }
    }

    #[test]
    fn periodicity() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let pi = pisano_period(p);
            for n in 0..60 {
                assert_eq!(fib_mod(n + pi, p), fib_mod(n, p));
                assert_eq!(fib_mod(n + 3 * pi, p), fib_mod(n, p));
            }
            if p != 2 {
                let t = mult_order(2, p).unwrap();
                for n in 0..60 {
                    assert_eq!(pow_mod(2, n + t, p), pow_mod(2, n, p));
                }
            }
        }
    }

    #[test]
    fn pisano_divisibility_sanity() {
        // pi(p) | p-1 when p = +-1 (mod 5), pi(p) | 2(p+1) when p = +-2 (mod 5)
        for p in (7u64..=1000).filter(|&n| is_prime(n)) {
            let pi = pisano_period(p);
            match p % 5 {
                1 | 4 => assert_eq!((p - 1) % pi, 0, "p={p} pi={pi}"),
                2 | 3 => assert_eq!((2 * (p + 1)) % pi, 0, "p={p} pi={pi}"),
                _ => unreachable!("p=5 excluded by the range"),
            }
        }
    }

    #[test]
    fn threshold_examples() {
        let pow7 = orbit(SequenceKind::Power { base: 2 }, 7).unwrap();
        assert!(!threshold_check(&pow7, 2)); // 3^2 = 9 <= 4*7
        let fib7 = orbit(SequenceKind::Fibonacci, 7).unwrap();
        assert!(threshold_check(&fib7, 2)); // 7^2 = 49 > 28
        let fib11 = orbit(SequenceKind::Fibonacci, 11).unwrap();
        assert!(!threshold_check(&fib11, 3)); // 7^2 = 49 <= 99
        assert!(threshold_check(&fib11, 2)); // 49 > 44
    }

    #[test]
    fn threshold_is_monotone_and_integer_only() {
        for p in [7u64, 11, 101] {
            for size in 0..40u64 {
                let a = exceeds_sqrt_threshold(size, 2, p);
                let b = exceeds_sqrt_threshold(size + 1, 2, p);
                assert!(!a || b, "monotone in size");
                let f3 = exceeds_sqrt_threshold(size, 3, p);
                assert!(!f3 || a, "factor 3 implies factor 2");
            }
        }
    }

    #[test]
    fn power_base_validation() {
        assert!(SequenceKind::power(1).is_err());
        assert!(SequenceKind::power(2).is_ok());
    }
}
