//! Congruences `R̄_{ell,mu}(An + B) ≡ 0 (mod M)`: the claim catalog, numerical verification
//! against the generating function, the quadratic-form residue argument, a mod-8 second
//! verifier, and a scanner for new candidates.

mod cache;
pub mod mod8;
pub mod residues;
pub mod scan;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::BiregularConstraint;
use crate::products::{eta_quotient, ProductSpec};
use crate::series::{check_order, TruncatedSeries};

pub use cache::GeneratingFunctionCache;

/// Default truncation order for verification runs.
pub const DEFAULT_ORDER: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Theorem,
    Implied,
    ConjecturedElementary,
}

/// `R̄_{ell,mu}(An + B) ≡ 0 (mod M)` for all `n >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceClaim {
    pub ell: u64,
    pub mu: u64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<ClaimStatus>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub anchor: String,
}

impl CongruenceClaim {
    pub fn new(ell: u64, mu: u64, a: u64, b: u64, m: u64) -> Self {
        Self {
            ell,
            mu,
            a,
            b,
            m,
            status: None,
            anchor: String::new(),
        }
    }

    fn with(mut self, status: ClaimStatus, anchor: &str) -> Self {
        self.status = Some(status);
        self.anchor = anchor.into();
        self
    }

    pub fn constraint(&self) -> Result<BiregularConstraint> {
        BiregularConstraint::new(self.ell, self.mu)
    }

    /// Checks `A >= 1`, `B < A`, `M >= 2` and the constraint.
    pub fn validate(&self) -> Result<BiregularConstraint> {
        let c = self.constraint()?;
        if self.a == 0 {
            return Err(Error::InvalidClaim("A must be positive".into()));
        }
        if self.b >= self.a {
            return Err(Error::InvalidClaim(format!(
                "B = {} must be less than A = {}",
                self.b, self.a
            )));
        }
        if self.m < 2 {
            return Err(Error::InvalidModulus(self.m as i64));
        }
        Ok(c)
    }

    /// Number of `n` with `An + B < order`.
    pub fn checked_count(&self, order: usize) -> usize {
        checked_count(self.a as usize, self.b as usize, order)
    }
}

pub(crate) fn checked_count(a: usize, b: usize, order: usize) -> usize {
    if b >= order {
        0
    } else {
        (order - 1 - b) / a + 1
    }
}

impl std::fmt::Display for CongruenceClaim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "R({},{}; {}n+{}) = 0 mod {}",
            self.ell, self.mu, self.a, self.b, self.m
        )
    }
}

pub fn claim_catalog() -> Vec<CongruenceClaim> {
    use ClaimStatus::*;
    let c = CongruenceClaim::new;
    vec![
        c(2, 3, 9, 6, 6).with(
            Theorem,
            "R(2,3; 9n+6) = 0 mod 6, theta and dissection identities",
        ),
        c(4, 3, 12, 7, 8).with(Theorem, "R(4,3; 12n+7) = 0 mod 8, residue forms mod 12"),
        c(4, 3, 12, 11, 8).with(Theorem, "R(4,3; 12n+11) = 0 mod 8, residue forms mod 12"),
        c(4, 3, 9, 3, 6).with(Theorem, "R(4,3; 9n+3) = 0 mod 6, 3-dissections"),
        c(4, 3, 12, 11, 9).with(Theorem, "R(4,3; 12n+11) = 0 mod 9, 2- and 3-dissections"),
        c(4, 9, 12, 3, 8).with(Theorem, "R(4,9; 12n+3) = 0 mod 8, residue forms mod 12"),
        c(4, 9, 12, 7, 8).with(Theorem, "R(4,9; 12n+7) = 0 mod 8, residue forms mod 12"),
        c(4, 9, 12, 11, 8).with(Theorem, "R(4,9; 12n+11) = 0 mod 8, residue forms mod 12"),
        c(4, 9, 18, 12, 3).with(Theorem, "R(4,9; 18n+12) = 0 mod 3, 3-dissections"),
        c(4, 9, 18, 15, 3).with(Theorem, "R(4,9; 18n+15) = 0 mod 3, 3-dissections"),
        c(8, 27, 36, 15, 8).with(Theorem, "R(8,27; 36n+15) = 0 mod 8, residue forms mod 36"),
        c(16, 81, 36, 33, 8).with(Theorem, "R(16,81; 36n+33) = 0 mod 8, residue forms mod 36"),
        c(4, 3, 12, 7, 24).with(
            Implied,
            "R(4,3; 12n+7) = 0 mod 24, combined with known mod 3",
        ),
        c(4, 3, 12, 11, 72).with(
            Implied,
            "R(4,3; 12n+11) = 0 mod 72, mod 8 and mod 9 combined",
        ),
        c(4, 9, 18, 12, 24).with(
            Implied,
            "R(4,9; 18n+12) = 0 mod 24, combined with known mod 8",
        ),
        c(4, 9, 18, 15, 24).with(
            Implied,
            "R(4,9; 18n+15) = 0 mod 24, combined with known mod 8",
        ),
        c(8, 27, 36, 15, 3).with(
            ConjecturedElementary,
            "R(8,27; 36n+15) = 0 mod 3, no elementary proof known",
        ),
        c(16, 81, 36, 33, 6).with(
            ConjecturedElementary,
            "R(16,81; 36n+33) = 0 mod 6, no elementary proof known",
        ),
        c(8, 27, 36, 15, 24).with(
            ConjecturedElementary,
            "R(8,27; 36n+15) = 0 mod 24, elementary once mod 3 is",
        ),
        c(16, 81, 36, 33, 48).with(
            ConjecturedElementary,
            "R(16,81; 36n+33) = 0 mod 48, elementary once mod 6 is",
        ),
    ]
}

/// `f2 f_ell^2 f_mu^2 f_{2 ell mu} / (f1^2 f_{2 ell} f_{2 mu} f_{ell mu}^2)`.
pub fn gen_function_spec(c: BiregularConstraint) -> ProductSpec {
    let (l, m) = (c.ell() as usize, c.mu() as usize);
    ProductSpec::new([
        (2, 1),
        (l, 2),
        (m, 2),
        (2 * l * m, 1),
        (1, -2),
        (2 * l, -1),
        (2 * m, -1),
        (l * m, -2),
    ])
    .expect("positive scales")
}

/// `sum R̄_{ell,mu}(n) q^n` mod `q^order`, uncached.
pub fn gen_function(c: BiregularConstraint, order: usize) -> Result<TruncatedSeries> {
    eta_quotient(&gen_function_spec(c), order)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: u64,
    /// The coefficient `R̄(An + B)` as a decimal string.
    pub value: String,
}

/// Numerical evidence for a claim: all coefficients on the progression below `order`
/// were checked. This is not a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: CongruenceClaim,
    #[serde(rename = "N")]
    pub order: usize,
    pub checked_count: usize,
    pub holds: bool,
    pub first_counterexample: Option<Counterexample>,
    pub kind: String,
}

pub const REPORT_KIND: &str = "verified-to-order";

/// Verifies using the process-wide generating-function cache.
pub fn verify_claim(claim: &CongruenceClaim, order: usize) -> Result<VerificationReport> {
    verify_claim_with(GeneratingFunctionCache::global(), claim, order)
}

pub fn verify_claim_with(
    cache: &GeneratingFunctionCache,
    claim: &CongruenceClaim,
    order: usize,
) -> Result<VerificationReport> {
    let c = claim.validate()?;
    check_order(order)?;
    if order <= claim.b as usize {
        return Err(Error::TruncationTooSmall {
            order,
            needed: claim.b as usize,
        });
    }
    let series = cache.get(c, order)?;
    let modulus = BigInt::from(claim.m);
    let (a, b) = (claim.a as usize, claim.b as usize);
    let first_counterexample = series
        .coeffs()
        .iter()
        .skip(b)
        .step_by(a)
        .enumerate()
        .find(|(_, v)| !v.is_multiple_of(&modulus))
        .map(|(n, v)| Counterexample {
            n: n as u64,
            value: v.to_string(),
        });
    Ok(VerificationReport {
        claim: claim.clone(),
        order,
        checked_count: claim.checked_count(order),
        holds: first_counterexample.is_none(),
        first_counterexample,
        kind: REPORT_KIND.into(),
    })
}
