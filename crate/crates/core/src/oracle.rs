//! Combinatorial counts of overpartitions, computed without the series engine.
//!
//! Two routes: explicit enumeration of partitions weighted by `2^{#distinct part sizes}`
//! (exponential, for small `n`), and a dynamic program over admissible part sizes.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{check_order, TruncatedSeries};

/// Overpartitions with no part divisible by `ell` or by `mu`, `gcd(ell, mu) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiregularConstraint {
    ell: u64,
    mu: u64,
}

impl BiregularConstraint {
    pub fn new(ell: u64, mu: u64) -> Result<Self> {
        if ell < 2 || mu < 2 {
            return Err(Error::InvalidConstraint { ell, mu });
        }
        if ell.gcd(&mu) != 1 {
            return Err(Error::NotCoprime { ell, mu });
        }
        Ok(Self { ell, mu })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    pub fn allows(&self, part: u64) -> bool {
        !part.is_multiple_of(self.ell) && !part.is_multiple_of(self.mu)
    }
}

/// Which part sizes an oracle may use.
#[derive(Clone, Copy)]
enum Parts {
    All,
    Biregular(BiregularConstraint),
}

impl Parts {
    fn allows(self, s: u64) -> bool {
        match self {
            Parts::All => true,
            Parts::Biregular(c) => c.allows(s),
        }
    }
}

/// Dynamic program: for each admissible size `s`, multiply by `1 + q^s` (the size may
/// appear overlined once or not) and then divide by `1 - q^s` (any number of plain copies).
fn dp_counts(parts: Parts, order: usize) -> Vec<BigUint> {
    let mut b = vec![BigUint::zero(); order];
    b[0] = BigUint::one();
    for s in 1..order {
        if !parts.allows(s as u64) {
            continue;
        }
        for n in (s..order).rev() {
            let (lo, hi) = b.split_at_mut(n);
            hi[0] += &lo[n - s];
        }
        for n in s..order {
            let (lo, hi) = b.split_at_mut(n);
            hi[0] += &lo[n - s];
        }
    }
    b
}

/// Enumerates partitions of `n` into admissible parts (as multiplicity vectors, largest part
/// first) and sums `2^{#distinct sizes}`.
fn enumerate(n: u64, parts: Parts) -> BigUint {
    fn go(rem: u64, max: u64, parts: Parts, distinct: u32, acc: &mut BigUint) {
        if rem == 0 {
            *acc += BigUint::one() << distinct;
            return;
        }
        for s in (1..=max.min(rem)).rev() {
            if !parts.allows(s) {
                continue;
            }
            // take s with multiplicity m >= 1, then continue with strictly smaller parts
            let mut used = s;
            while used <= rem {
                go(rem - used, s - 1, parts, distinct + 1, acc);
                used += s;
            }
        }
    }
    let mut acc = BigUint::zero();
    go(n, n, parts, 0, &mut acc);
    acc
}

/// `p̄(n)`, by dynamic programming.
pub fn count_overpartitions(n: usize) -> BigUint {
    dp_counts(Parts::All, n + 1).pop().expect("order >= 1")
}

/// `p̄(n)` by explicit enumeration. Exponential; meant for `n <= 30` or so.
pub fn enumerate_overpartitions(n: u64) -> BigUint {
    enumerate(n, Parts::All)
}

/// `R̄_{ell,mu}(n)`, by dynamic programming.
pub fn count_biregular(n: usize, c: BiregularConstraint) -> BigUint {
    dp_counts(Parts::Biregular(c), n + 1)
        .pop()
        .expect("order >= 1")
}

/// `R̄_{ell,mu}(n)` by explicit enumeration.
pub fn enumerate_biregular(n: u64, c: BiregularConstraint) -> BigUint {
    enumerate(n, Parts::Biregular(c))
}

/// `sum_{n < order} R̄_{ell,mu}(n) q^n`, built by the dynamic program only.
pub fn oracle_series(c: BiregularConstraint, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    TruncatedSeries::from_coeffs(
        dp_counts(Parts::Biregular(c), order)
            .into_iter()
            .map(BigInt::from),
    )
}

/// `sum_{n < order} p̄(n) q^n`.
pub fn overpartition_series(order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    TruncatedSeries::from_coeffs(dp_counts(Parts::All, order).into_iter().map(BigInt::from))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(l: u64, m: u64) -> BiregularConstraint {
        BiregularConstraint::new(l, m).unwrap()
    }

    #[test]
    fn overpartition_values() {
        assert_eq!(count_overpartitions(0), BigUint::from(1u32));
        assert_eq!(count_overpartitions(3), BigUint::from(8u32));
        // (4):2, (3,1):4, (2,2):2, (2,1,1):4, (1^4):2
        assert_eq!(count_overpartitions(4), BigUint::from(14u32));
        assert_eq!(enumerate_overpartitions(3), BigUint::from(8u32));
        assert_eq!(enumerate_overpartitions(4), BigUint::from(14u32));
    }

    #[test]
    fn biregular_values() {
        assert_eq!(count_biregular(0, c(2, 3)), BigUint::one());
        assert_eq!(count_biregular(2, c(2, 3)), BigUint::from(2u32));
        // admissible parts <= 6 are {1, 5}: (5,1) -> 4, (1^6) -> 2
        assert_eq!(count_biregular(6, c(2, 3)), BigUint::from(6u32));
        assert_eq!(enumerate_biregular(6, c(2, 3)), BigUint::from(6u32));
    }

    #[test]
    fn constraint_validation() {
        assert_eq!(
            BiregularConstraint::new(2, 4),
            Err(Error::NotCoprime { ell: 2, mu: 4 })
        );
        assert!(matches!(
            BiregularConstraint::new(1, 3),
            Err(Error::InvalidConstraint { .. })
        ));
        assert!(c(4, 9).allows(7));
        assert!(!c(4, 9).allows(18));
    }

    #[test]
    fn enumeration_agrees_with_dp() {
        for n in 0..=30u64 {
            assert_eq!(
                enumerate_overpartitions(n),
                count_overpartitions(n as usize),
                "n = {n}"
            );
        }
        for (l, m) in [(2, 3), (4, 3), (4, 9)] {
            let series = oracle_series(c(l, m), 31).unwrap();
            for n in 0..=30u64 {
                assert_eq!(
                    BigInt::from(enumerate_biregular(n, c(l, m))),
                    series.coeffs()[n as usize]
                );
            }
        }
    }

    #[test]
    fn large_constraint_is_unrestricted() {
        let big = c(101, 103);
        for n in 0..60 {
            assert_eq!(count_biregular(n, big), count_overpartitions(n));
        }
    }

    #[test]
    fn relaxing_never_decreases() {
        // forbidden multiples shrink along this chain: 2 -> 4 -> 8 -> 16, 3 -> 9 -> 27 -> 81
        let chain = [c(2, 3), c(4, 3), c(4, 9), c(8, 27), c(16, 81)];
        let series: Vec<_> = chain
            .iter()
            .map(|&k| oracle_series(k, 80).unwrap())
            .collect();
        for w in series.windows(2) {
            for (a, b) in w[0].coeffs().iter().zip(w[1].coeffs()) {
                assert!(a <= b);
            }
        }
        for s in &series {
            assert_eq!(s.coeffs()[0], BigInt::one());
            assert!(s.coeffs().iter().all(|x| *x >= BigInt::zero()));
        }
    }
}
