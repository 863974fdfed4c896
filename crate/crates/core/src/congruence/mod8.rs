//! An independent check of the mod-8 congruences that avoids the eta-quotient expansion.
//!
//! Modulo 8, `1/phi(-q) ≡ phi(q) phi(q^2)^2`, so the generating function is congruent to
//! `phi(q) phi(q^2)^2 phi(-q^ell) phi(-q^mu) / phi(-q^{ell mu})`. The denominator is a series
//! in `q^{ell mu}`, so when `A | ell mu` the `A`-dissection components of the numerator
//! decide the congruence on their own. The numerator is built from theta sums only.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::BiregularConstraint;
use crate::products::{theta_expand, Sign, ThetaSpec};
use crate::series::{check_order, TruncatedSeries};

use super::GeneratingFunctionCache;

const EIGHT: i64 = 8;

/// `phi(q) phi(q^2)^2 phi(-q^ell) phi(-q^mu)` mod 8, from the sum forms of `phi`.
pub fn mod8_numerator(c: BiregularConstraint, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    let phi = |sign, t| theta_expand(&ThetaSpec::phi(sign, t), order);
    let p2 = phi(Sign::Plus, 2)?.reduce_mod(EIGHT)?;
    let mut acc = phi(Sign::Plus, 1)?;
    for f in [
        p2.clone(),
        p2,
        phi(Sign::Minus, c.ell() as usize)?,
        phi(Sign::Minus, c.mu() as usize)?,
    ] {
        acc = acc.mul(&f).reduce_mod(EIGHT)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod8Residue {
    pub residue: u64,
    /// Every coefficient of the numerator's component is divisible by 8.
    pub numerator_vanishes: bool,
    pub numerator_first_bad: Option<u64>,
    /// The same statement checked directly on the generating function.
    pub gen_function_vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod8Report {
    pub ell: u64,
    pub mu: u64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "N")]
    pub order: usize,
    /// Whether the generating function agrees mod 8 with numerator / phi(-q^{ell mu}).
    pub quotient_congruent: bool,
    pub residues: Vec<Mod8Residue>,
}

impl Mod8Report {
    pub fn holds(&self) -> bool {
        self.quotient_congruent
            && self
                .residues
                .iter()
                .all(|r| r.numerator_vanishes && r.gen_function_vanishes)
    }
}

fn first_nonmultiple(s: &TruncatedSeries, m: &BigInt) -> Option<u64> {
    s.coeffs()
        .iter()
        .position(|v| !v.is_multiple_of(m))
        .map(|i| i as u64)
}

pub fn mod8_route(
    c: BiregularConstraint,
    a: u64,
    targets: &[u64],
    order: usize,
) -> Result<Mod8Report> {
    mod8_route_with(GeneratingFunctionCache::global(), c, a, targets, order)
}

pub fn mod8_route_with(
    cache: &GeneratingFunctionCache,
    c: BiregularConstraint,
    a: u64,
    targets: &[u64],
    order: usize,
) -> Result<Mod8Report> {
    check_order(order)?;
    let lm = c.ell() * c.mu();
    if a == 0 || !lm.is_multiple_of(a) {
        return Err(Error::Mod8Inapplicable(format!(
            "A = {a} does not divide ell*mu = {lm}"
        )));
    }
    if let Some(&t) = targets.iter().find(|&&t| t >= a) {
        return Err(Error::InvalidClaim(format!(
            "residue {t} is not below A = {a}"
        )));
    }
    let max_target = targets.iter().copied().max().unwrap_or(0) as usize;
    if order <= max_target {
        return Err(Error::TruncationTooSmall {
            order,
            needed: max_target,
        });
    }

    let numerator = mod8_numerator(c, order)?;
    let denominator = theta_expand(&ThetaSpec::phi(Sign::Minus, lm as usize), order)?;
    let quotient = numerator.mul(&denominator.invert()?);
    let gf = cache.get(c, order)?;
    let quotient_congruent = gf.congruent(&quotient, EIGHT)?;

    let eight = BigInt::from(EIGHT);
    let num_parts = numerator.dissect(a as usize)?;
    let gf_parts = gf.dissect(a as usize)?;
    let residues = targets
        .iter()
        .map(|&r| {
            let first = first_nonmultiple(num_parts.part(r as usize), &eight);
            Mod8Residue {
                residue: r,
                numerator_vanishes: first.is_none(),
                numerator_first_bad: first,
                gen_function_vanishes: first_nonmultiple(gf_parts.part(r as usize), &eight)
                    .is_none(),
            }
        })
        .collect();
    Ok(Mod8Report {
        ell: c.ell(),
        mu: c.mu(),
        a,
        order,
        quotient_congruent,
        residues,
    })
}

/// The four mod-8 families: `(ell, mu, A, residues)`.
pub fn mod8_cases() -> Vec<(BiregularConstraint, u64, Vec<u64>)> {
    let c = |l, m| BiregularConstraint::new(l, m).expect("coprime");
    vec![
        (c(4, 3), 12, vec![7, 11]),
        (c(4, 9), 12, vec![3, 7, 11]),
        (c(8, 27), 36, vec![15]),
        (c(16, 81), 36, vec![33]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_holds_for_all_families() {
        for (c, a, targets) in mod8_cases() {
            let rep = mod8_route(c, a, &targets, 600).unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
    }

    #[test]
    fn numerator_is_reduced_and_starts_at_one() {
        let c = BiregularConstraint::new(4, 3).unwrap();
        let n = mod8_numerator(c, 50).unwrap();
        assert_eq!(n.coeffs()[0], BigInt::from(1));
        assert!(n
            .coeffs()
            .iter()
            .all(|v| *v >= BigInt::from(0) && *v < BigInt::from(8)));
    }

    #[test]
    fn nontarget_residue_is_reported() {
        let c = BiregularConstraint::new(4, 3).unwrap();
        let rep = mod8_route(c, 12, &[1], 200).unwrap();
        assert!(rep.quotient_congruent);
        assert!(!rep.residues[0].numerator_vanishes);
        assert_eq!(rep.residues[0].numerator_first_bad, Some(0));
        assert!(!rep.holds());
    }

    #[test]
    fn inapplicable_when_a_does_not_divide() {
        let c = BiregularConstraint::new(2, 3).unwrap();
        assert!(matches!(
            mod8_route(c, 9, &[6], 100),
            Err(Error::Mod8Inapplicable(_))
        ));
        assert!(matches!(
            mod8_route(c, 6, &[6], 100),
            Err(Error::InvalidClaim(_))
        ));
    }
}
