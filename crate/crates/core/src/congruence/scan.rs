//! Search for progressions `An + B` on which every computed coefficient is divisible by `M`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::BiregularConstraint;

use super::{checked_count, GeneratingFunctionCache};

/// Each candidate must be supported by at least this many coefficients.
pub const MIN_CHECKED: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScanCandidate {
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub checked_count: usize,
}

impl ScanCandidate {
    /// `self` implies `(a, b, m)`: the progression `a n + b` lies inside `self.a n + self.b`
    /// and `m` divides `self.m`.
    pub fn implies(&self, a: u64, b: u64, m: u64) -> bool {
        a.is_multiple_of(self.a) && b % self.a == self.b && self.m.is_multiple_of(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub ell: u64,
    pub mu: u64,
    pub max_a: u64,
    pub moduli: Vec<u64>,
    #[serde(rename = "N")]
    pub order: usize,
    /// Candidates not implied by any other candidate, sorted by `(A, B, M)`.
    pub candidates: Vec<ScanCandidate>,
}

impl ScanReport {
    /// Whether `(a, b, m)` was found, either verbatim or as a consequence of a stronger
    /// candidate.
    pub fn covers(&self, a: u64, b: u64, m: u64) -> bool {
        self.candidates.iter().any(|c| c.implies(a, b, m))
    }
}

pub fn scan(
    c: BiregularConstraint,
    max_a: u64,
    moduli: &[u64],
    order: usize,
) -> Result<ScanReport> {
    scan_with(GeneratingFunctionCache::global(), c, max_a, moduli, order)
}

pub fn scan_with(
    cache: &GeneratingFunctionCache,
    c: BiregularConstraint,
    max_a: u64,
    moduli: &[u64],
    order: usize,
) -> Result<ScanReport> {
    if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidModulus(m as i64));
    }
    if max_a == 0 {
        return Err(Error::InvalidClaim("maxA must be positive".into()));
    }
    let needed = MIN_CHECKED * max_a as usize - 1;
    if order <= needed {
        return Err(Error::TruncationTooSmall { order, needed });
    }
    let gf = cache.get(c, order)?;
    let coeffs = gf.coeffs();

    let mut found = Vec::new();
    for a in 1..=max_a {
        for b in 0..a {
            let g = coeffs
                .iter()
                .skip(b as usize)
                .step_by(a as usize)
                .fold(BigInt::zero(), |g, v| g.gcd(v))
                .abs();
            for &m in moduli {
                if g.is_multiple_of(&BigInt::from(m)) {
                    found.push(ScanCandidate {
                        a,
                        b,
                        m,
                        checked_count: checked_count(a as usize, b as usize, order),
                    });
                }
            }
        }
    }

    let mut candidates: Vec<ScanCandidate> = found
        .iter()
        .filter(|x| {
            !found
                .iter()
                .any(|y| (y.a, y.b, y.m) != (x.a, x.b, x.m) && y.implies(x.a, x.b, x.m))
        })
        .copied()
        .collect();
    candidates.sort();
    candidates.dedup();

    let mut moduli = moduli.to_vec();
    moduli.sort_unstable();
    moduli.dedup();
    Ok(ScanReport {
        ell: c.ell(),
        mu: c.mu(),
        max_a,
        moduli,
        order,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(l: u64, m: u64) -> BiregularConstraint {
        BiregularConstraint::new(l, m).unwrap()
    }

    #[test]
    fn finds_the_mod_six_family() {
        let rep = scan(c(2, 3), 9, &[2, 3, 6], 400).unwrap();
        assert!(rep.covers(9, 6, 6));
        assert!(rep.covers(9, 6, 3));
        assert!(!rep.covers(9, 1, 3));
        for x in &rep.candidates {
            assert!(x.checked_count >= MIN_CHECKED);
        }
    }

    #[test]
    fn dedup_keeps_only_strongest() {
        let rep = scan(c(4, 9), 12, &[2, 4, 8], 600).unwrap();
        for x in &rep.candidates {
            for y in &rep.candidates {
                if x != y {
                    assert!(!y.implies(x.a, x.b, x.m), "{y:?} implies {x:?}");
                }
            }
        }
        for b in [3, 7, 11] {
            assert!(rep.covers(12, b, 8));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(scan(c(2, 3), 5, &[1], 100), Err(Error::InvalidModulus(1)));
        assert_eq!(
            scan(c(2, 3), 20, &[2], 100),
            Err(Error::TruncationTooSmall {
                order: 100,
                needed: 199
            })
        );
    }

    #[test]
    fn implication_rule() {
        let x = ScanCandidate {
            a: 4,
            b: 3,
            m: 8,
            checked_count: 10,
        };
        assert!(x.implies(12, 3, 8));
        assert!(x.implies(12, 7, 4));
        assert!(x.implies(12, 11, 2));
        assert!(!x.implies(12, 5, 8));
        assert!(!x.implies(6, 3, 8));
        assert!(!x.implies(12, 3, 16));
    }
}
