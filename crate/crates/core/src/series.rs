//! Formal power series in `q` with exact integer coefficients, known modulo `q^N`.
//!
//! Every binary operation truncates to the smaller of its operand orders, so a
//! result never claims more coefficients than its inputs determine.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A power series `c_0 + c_1 q + ... + c_{N-1} q^{N-1} + O(q^N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn from_coeffs<I, T>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coeffs: Vec<BigInt> = values.into_iter().map(Into::into).collect();
        if coeffs.is_empty() {
            return Err(Error::InvalidOrder);
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_vec(coeffs: Vec<BigInt>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(Self {
            coeffs: vec![BigInt::zero(); order],
        })
    }

    pub fn one(order: usize) -> Result<Self> {
        Self::monomial(BigInt::one(), 0, order)
    }

    /// `c * q^exp` to the given order (zero if `exp >= order`).
    pub fn monomial(c: impl Into<BigInt>, exp: usize, order: usize) -> Result<Self> {
        let mut s = Self::zero(order)?;
        if exp < order {
            s.coeffs[exp] = c.into();
        }
        Ok(s)
    }

    /// Builds a series from `(exponent, coefficient)` pairs; terms at or past `order` are dropped
    /// and repeated exponents accumulate.
    pub fn from_terms<I, T>(terms: I, order: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, T)>,
        T: Into<BigInt>,
    {
        let mut s = Self::zero(order)?;
        for (e, c) in terms {
            if e < order {
                s.coeffs[e] += c.into();
            }
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^i`; `None` when `i` lies beyond the truncation.
    pub fn coeff(&self, i: usize) -> Option<&BigInt> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        check_order(order)?;
        let n = order.min(self.order());
        Ok(Self {
            coeffs: self.coeffs[..n].to_vec(),
        })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `q^j`, keeping the order (high terms fall off).
    pub fn shift(&self, j: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![BigInt::zero(); n];
        if j < n {
            coeffs[j..].clone_from_slice(&self.coeffs[..n - j]);
        }
        Self { coeffs }
    }

    /// Substitutes `q -> q^k`. A series known mod `q^m` becomes known mod `q^{km}`, so the
    /// result order is `min(order, k * self.order())`.
    pub fn dilate(&self, k: usize, order: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidBase);
        }
        check_order(order)?;
        let known = k * self.order();
        let order = order.min(known);
        let mut coeffs = vec![BigInt::zero(); order];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = i * k;
            if e >= order {
                break;
            }
            coeffs[e] = c.clone();
        }
        Ok(Self { coeffs })
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        // Iterate over the sparser operand in the outer loop; theta series are mostly zeros.
        let (sparse, dense) = if self.nonzero_count(n) <= other.nonzero_count(n) {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in sparse.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if a.is_one() {
                for (o, b) in out[i..].iter_mut().zip(&dense.coeffs[..n - i]) {
                    *o += b;
                }
            } else {
                for (o, b) in out[i..].iter_mut().zip(&dense.coeffs[..n - i]) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        Self { coeffs: out }
    }

    fn nonzero_count(&self, n: usize) -> usize {
        self.coeffs[..n].iter().filter(|c| !c.is_zero()).count()
    }

    /// Multiplicative inverse mod `q^N`; requires a constant term of `+1` or `-1`.
    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if !(a0.is_one() || (-a0).is_one()) {
            return Err(Error::NotInvertible {
                constant: a0.to_string(),
            });
        }
        let n = self.order();
        // a0^{-1} = a0 for a unit.
        let negate = a0.is_negative();
        let mut b: Vec<BigInt> = Vec::with_capacity(n);
        b.push(a0.clone());
        for m in 1..n {
            let mut acc = BigInt::zero();
            for i in 1..=m {
                let ai = &self.coeffs[i];
                if !ai.is_zero() {
                    acc += ai * &b[m - i];
                }
            }
            // b_m = -a0^{-1} * acc
            b.push(if negate { acc } else { -acc });
        }
        Ok(Self { coeffs: b })
    }

    /// `self^k` by square-and-multiply; negative `k` inverts first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let n = self.order();
        if k == 0 {
            return Self::one(n);
        }
        let mut base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("k != 0"))
    }

    pub fn dissect(&self, k: usize) -> Result<DissectionParts> {
        DissectionParts::from_series(self, k)
    }

    /// Least nonnegative residues of every coefficient.
    pub fn reduce_mod(&self, m: i64) -> Result<Self> {
        let m = check_modulus(m)?;
        Ok(Self {
            coeffs: self.coeffs.iter().map(|c| c.mod_floor(&m)).collect(),
        })
    }

    /// Whether `self - other` vanishes mod `m` on the common truncation range.
    pub fn congruent(&self, other: &Self, m: i64) -> Result<bool> {
        Ok(self.first_incongruence(other, m)?.is_none())
    }

    /// Smallest exponent where `self` and `other` differ mod `m`.
    pub fn first_incongruence(&self, other: &Self, m: i64) -> Result<Option<usize>> {
        let m = check_modulus(m)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| !(a - b).is_multiple_of(&m)))
    }

    /// Smallest exponent where the two series differ exactly.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }
}

pub(crate) fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        Err(Error::InvalidOrder)
    } else {
        Ok(())
    }
}

fn check_modulus(m: i64) -> Result<BigInt> {
    if m < 2 {
        Err(Error::InvalidModulus(m))
    } else {
        Ok(BigInt::from(m))
    }
}

/// Free-function form of [`TruncatedSeries::congruent`].
pub fn series_congruent(a: &TruncatedSeries, b: &TruncatedSeries, m: i64) -> Result<bool> {
    a.congruent(b, m)
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({self})")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}q^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::neg(self)
    }
}

/// JSON shape: `{"order": N, "coeffs": ["1", "-2", ...]}` with decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: usize,
    pub coeffs: Vec<String>,
}

impl From<&TruncatedSeries> for SeriesJson {
    fn from(s: &TruncatedSeries) -> Self {
        Self {
            order: s.order(),
            coeffs: s.coeffs.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<SeriesJson> for TruncatedSeries {
    type Error = Error;

    fn try_from(js: SeriesJson) -> Result<Self> {
        if js.order != js.coeffs.len() {
            return Err(Error::parse(
                0,
                format!(
                    "order {} does not match {} coefficients",
                    js.order,
                    js.coeffs.len()
                ),
            ));
        }
        let coeffs = js
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.parse::<BigInt>()
                    .map_err(|_| Error::parse(i, format!("bad coefficient `{c}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::from_coeffs(coeffs)
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let js = SeriesJson::deserialize(d)?;
        TruncatedSeries::try_from(js).map_err(serde::de::Error::custom)
    }
}

/// The `k` sub-series of a series split by exponent residue mod `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissectionParts {
    base: usize,
    // exponents below this are determined by the parts
    order: usize,
    parts: Vec<TruncatedSeries>,
}

impl DissectionParts {
    fn from_series(a: &TruncatedSeries, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidBase);
        }
        let parts = (0..k)
            .map(|r| {
                let coeffs: Vec<BigInt> = a.coeffs.iter().skip(r).step_by(k).cloned().collect();
                if coeffs.is_empty() {
                    // r >= order: no coefficient of this class is known. The placeholder
                    // keeps order >= 1; `order` below stops reassemble from trusting it.
                    TruncatedSeries::from_vec(vec![BigInt::zero()])
                } else {
                    TruncatedSeries::from_vec(coeffs)
                }
            })
            .collect();
        Ok(Self {
            base: k,
            order: a.order(),
            parts,
        })
    }

    /// Builds parts directly; `parts.len()` becomes the base.
    pub fn new(parts: Vec<TruncatedSeries>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidBase);
        }
        let k = parts.len();
        let order = parts
            .iter()
            .enumerate()
            .map(|(r, p)| k * p.order() + r)
            .min()
            .expect("nonempty");
        Ok(Self {
            base: k,
            order,
            parts,
        })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Order of the series these parts describe.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn parts(&self) -> &[TruncatedSeries] {
        &self.parts
    }

    pub fn part(&self, r: usize) -> &TruncatedSeries {
        &self.parts[r]
    }

    /// Interleaves the parts back into one series, `S[kn + r] = parts[r][n]`.
    ///
    /// The result is known up to the first exponent some part cannot supply.
    pub fn reassemble(&self) -> TruncatedSeries {
        let k = self.base;
        let order = self.order;
        let mut coeffs = vec![BigInt::zero(); order];
        for (r, p) in self.parts.iter().enumerate() {
            for (i, c) in p.coeffs.iter().enumerate() {
                let e = k * i + r;
                if e < order {
                    coeffs[e] = c.clone();
                }
            }
        }
        TruncatedSeries::from_vec(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(v.iter().copied()).unwrap()
    }

    #[test]
    fn from_coeffs_cases() {
        assert_eq!(s(&[1]).order(), 1);
        let a = s(&[1, -1, -1, 0, 0, 1]);
        assert_eq!(a.order(), 6);
        assert_eq!(a.to_string(), "1 - q - q^2 + q^5 + O(q^6)");
        assert_eq!(s(&[0, 2]).to_string(), "2q + O(q^2)");
        assert_eq!(
            TruncatedSeries::from_coeffs(Vec::<i64>::new()),
            Err(Error::InvalidOrder)
        );
    }

    #[test]
    fn add_cases() {
        assert_eq!(s(&[1, 1]).add(&s(&[1, -1])), s(&[2, 0]));
        let a = s(&[3, -4, 7]);
        assert_eq!(&a + &TruncatedSeries::zero(3).unwrap(), a);
        assert_eq!(s(&[1, -1, -1]).add(&s(&[0, 1, 1])), s(&[1, 0, 0]));
        // order = min
        assert_eq!(s(&[1, 1, 1]).add(&s(&[1])).order(), 1);
    }

    #[test]
    fn mul_cases() {
        let geo = s(&[1; 10]);
        assert_eq!(
            s(&[1, -1, 0, 0, 0, 0, 0, 0, 0, 0]).mul(&geo),
            TruncatedSeries::one(10).unwrap()
        );
        assert_eq!(s(&[1, 2, 0]).mul(&s(&[1, 2, 0])), s(&[1, 4, 4]));
    }

    #[test]
    fn invert_cases() {
        assert_eq!(s(&[1, -1, 0, 0, 0]).invert().unwrap(), s(&[1, 1, 1, 1, 1]));
        assert_eq!(s(&[-1, 1, 0]).invert().unwrap(), s(&[-1, -1, -1]));
        assert!(matches!(
            s(&[2, 1]).invert(),
            Err(Error::NotInvertible { .. })
        ));
        assert!(matches!(
            s(&[0, 1]).invert(),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn pow_cases() {
        assert_eq!(s(&[1, 1, 0]).pow(2).unwrap(), s(&[1, 2, 1]));
        assert_eq!(s(&[5, 3, 2]).pow(0).unwrap(), s(&[1, 0, 0]));
        assert_eq!(s(&[1, -1, 0, 0]).pow(-2).unwrap(), s(&[1, 2, 3, 4]));
        assert!(s(&[3, 1]).pow(-1).is_err());
    }

    #[test]
    fn dissect_cases() {
        let a = s(&[10, 11, 12, 13, 14, 15]);
        let d = a.dissect(2).unwrap();
        assert_eq!(d.part(0), &s(&[10, 12, 14]));
        assert_eq!(d.part(1), &s(&[11, 13, 15]));
        assert_eq!(a.dissect(1).unwrap().part(0), &a);
        assert_eq!(a.dissect(0), Err(Error::InvalidBase));
        // unequal orders, no padding: ceil((7 - r) / 3)
        let b = s(&[0, 1, 2, 3, 4, 5, 6]);
        let d = b.dissect(3).unwrap();
        let orders: Vec<_> = d.parts().iter().map(|p| p.order()).collect();
        assert_eq!(orders, vec![3, 2, 2]);
    }

    #[test]
    fn reassemble_cases() {
        let d = DissectionParts::new(vec![s(&[1, 1]), s(&[0, 0])]).unwrap();
        assert_eq!(d.reassemble(), s(&[1, 0, 1, 0]));
        let b = s(&[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(b.dissect(3).unwrap().reassemble(), b);
        let short = s(&[7, 8]);
        assert_eq!(short.dissect(5).unwrap().reassemble(), short);
    }

    #[test]
    fn reduce_mod_cases() {
        assert_eq!(s(&[1, -1, -1]).reduce_mod(2).unwrap(), s(&[1, 1, 1]));
        let a = s(&[-7, 15, 4]);
        let r = a.reduce_mod(5).unwrap();
        assert_eq!(r, s(&[3, 0, 4]));
        assert_eq!(r.reduce_mod(5).unwrap(), r);
        assert_eq!(a.reduce_mod(1), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn congruent_cases() {
        let a = s(&[4, 9, -2]);
        assert!(series_congruent(&a, &a, 7).unwrap());
        assert!(!series_congruent(&s(&[1, 0]), &s(&[1, 1]), 2).unwrap());
        assert!(series_congruent(&s(&[1, 3]), &s(&[1, 1]), 2).unwrap());
        assert_eq!(series_congruent(&a, &a, 0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn shift_and_dilate() {
        assert_eq!(s(&[1, 2, 3]).shift(1), s(&[0, 1, 2]));
        assert_eq!(s(&[1, 2, 3]).dilate(2, 5).unwrap(), s(&[1, 0, 2, 0, 3]));
        // cannot claim coefficients beyond what the source determines
        assert_eq!(s(&[1, 2]).dilate(3, 10).unwrap().order(), 6);
    }

    #[test]
    fn json_roundtrip() {
        let a = s(&[1, -2, 0, 123456789]);
        let js = SeriesJson::from(&a);
        assert_eq!(js.coeffs, vec!["1", "-2", "0", "123456789"]);
        assert_eq!(TruncatedSeries::try_from(js).unwrap(), a);
    }
}
