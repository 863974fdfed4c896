//! Eta products `f_n^k = prod_{j>=1} (1 - q^{jn})^k`, their quotients, and the theta
//! functions `phi`, `psi`, `chi`, `f(a, b)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{check_order, TruncatedSeries};

/// Sparse expansion of `f_1 = prod (1 - q^j)` by the pentagonal number theorem:
/// `sum_j (-1)^j q^{j(3j-1)/2}` over all integers `j`. Returns `(exponent, sign)` pairs
/// with exponent `< order`, ascending.
pub fn pentagonal_terms(order: usize) -> Vec<(usize, i64)> {
    let mut terms = vec![(0, 1)];
    for j in 1usize.. {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let lo = j * (3 * j - 1) / 2;
        let hi = j * (3 * j + 1) / 2;
        if lo >= order {
            break;
        }
        terms.push((lo, sign));
        if hi < order {
            terms.push((hi, sign));
        }
    }
    terms
}

/// `a^k` for a series given by sparse `(exponent, coefficient)` terms with constant term 1.
///
/// Uses the recurrence from `q (a^k)' a = k q a' a^k`:
/// `m b_m = sum_{i=1..m} ((k + 1) i - m) a_i b_{m-i}`. The division by `m` is exact.
/// Cost is `O(order * terms)`, which for the pentagonal series is `O(order^{3/2})`.
fn sparse_unit_pow(terms: &[(usize, i64)], k: i64, order: usize) -> Vec<BigInt> {
    debug_assert_eq!(terms.first(), Some(&(0, 1)));
    let tail = &terms[1..];
    let mut b: Vec<BigInt> = Vec::with_capacity(order);
    b.push(BigInt::from(1));
    for m in 1..order {
        let mut acc = BigInt::zero();
        for &(i, ai) in tail {
            if i > m {
                break;
            }
            let w = (k + 1) * i as i64 - m as i64;
            if w != 0 && !b[m - i].is_zero() {
                acc += &b[m - i] * (w * ai);
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(m));
        debug_assert!(rem.is_zero(), "non-integral power coefficient");
        b.push(quot);
    }
    b
}

/// Expansion of `f_n^k` mod `q^order`.
pub fn eta_power(n: usize, k: i64, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    if n == 0 {
        return Err(Error::InvalidBase);
    }
    if k == 0 {
        return TruncatedSeries::one(order);
    }
    // Only exponents jn < order matter, so expand f_1^k to ceil(order / n) and spread it out.
    let inner = order.div_ceil(n);
    let base = TruncatedSeries::from_vec(sparse_unit_pow(&pentagonal_terms(inner), k, inner));
    if n == 1 {
        Ok(base)
    } else {
        base.dilate(n, order)
    }
}

/// A finite eta quotient `prod f_n^k`, stored canonically: ascending scale, one entry per
/// scale, no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ProductSpec {
    factors: Vec<(usize, i64)>,
}

impl ProductSpec {
    pub fn new<I>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
        for (n, k) in factors {
            if n == 0 {
                return Err(Error::InvalidBase);
            }
            *merged.entry(n).or_insert(0) += k;
        }
        Ok(Self {
            factors: merged.into_iter().filter(|&(_, k)| k != 0).collect(),
        })
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[(usize, i64)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Every scale multiplied by `t` (the substitution `q -> q^t`).
    pub fn rescale(&self, t: usize) -> Self {
        Self {
            factors: self.factors.iter().map(|&(n, k)| (n * t, k)).collect(),
        }
    }

    pub fn times(&self, other: &Self) -> Self {
        Self::new(self.factors.iter().chain(&other.factors).copied())
            .expect("scales already validated")
    }

    pub fn power(&self, e: i64) -> Self {
        Self::new(self.factors.iter().map(|&(n, k)| (n, k * e))).expect("scales already validated")
    }

    pub fn expand(&self, order: usize) -> Result<TruncatedSeries> {
        eta_quotient(self, order)
    }
}

impl fmt::Display for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(n, k)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if k == 1 {
                write!(f, "f{n}")?;
            } else {
                write!(f, "f{n}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Expands `prod f_n^k` to `order`: the positive-exponent block first, then the
/// negative block (each factor of which is already an inverse series).
pub fn eta_quotient(spec: &ProductSpec, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    let (pos, neg): (Vec<_>, Vec<_>) = spec.factors.iter().partition(|&&(_, k)| k > 0);
    let block = |fs: &[&(usize, i64)]| -> Result<Option<TruncatedSeries>> {
        let mut acc: Option<TruncatedSeries> = None;
        for &&(n, k) in fs {
            let s = eta_power(n, k, order)?;
            acc = Some(match acc {
                None => s,
                Some(a) => a.mul(&s),
            });
        }
        Ok(acc)
    };
    match (block(&pos)?, block(&neg)?) {
        (None, None) => TruncatedSeries::one(order),
        (Some(a), None) | (None, Some(a)) => Ok(a),
        (Some(a), Some(b)) => Ok(a.mul(&b)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `sign^e` as +1/-1.
    fn pow(self, e: usize) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus if e.is_multiple_of(2) => 1,
            Sign::Minus => -1,
        }
    }
}

/// The argument `±q^t` of a theta function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QArg {
    pub sign: Sign,
    pub exp: usize,
}

impl QArg {
    pub fn new(sign: Sign, exp: usize) -> Self {
        Self { sign, exp }
    }

    pub fn plus(exp: usize) -> Self {
        Self::new(Sign::Plus, exp)
    }

    pub fn minus(exp: usize) -> Self {
        Self::new(Sign::Minus, exp)
    }
}

impl fmt::Display for QArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Minus {
            f.write_str("-")?;
        }
        match self.exp {
            1 => f.write_str("q"),
            e => write!(f, "q^{e}"),
        }
    }
}

/// Ramanujan's theta functions, each at an argument `±q^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThetaSpec {
    /// `phi(x) = f(x, x)`
    Phi(QArg),
    /// `psi(x) = f(x, x^3)`
    Psi(QArg),
    /// `chi(x) = (-x; x^2)_inf`
    Chi(QArg),
    /// `f(a, b) = sum_k a^{k(k+1)/2} b^{k(k-1)/2}`
    General(QArg, QArg),
}

impl ThetaSpec {
    pub fn phi(sign: Sign, t: usize) -> Self {
        Self::Phi(QArg::new(sign, t))
    }

    pub fn psi(sign: Sign, t: usize) -> Self {
        Self::Psi(QArg::new(sign, t))
    }

    pub fn chi(sign: Sign, t: usize) -> Self {
        Self::Chi(QArg::new(sign, t))
    }

    pub fn general(a: QArg, b: QArg) -> Self {
        Self::General(a, b)
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSpec::Phi(x) => write!(f, "phi({x})"),
            ThetaSpec::Psi(x) => write!(f, "psi({x})"),
            ThetaSpec::Chi(x) => write!(f, "chi({x})"),
            ThetaSpec::General(a, b) => write!(f, "f({a},{b})"),
        }
    }
}

/// Sum expansion of a theta function (product form for `chi`, which has no sum form here).
pub fn theta_expand(spec: &ThetaSpec, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    match *spec {
        ThetaSpec::Phi(QArg { sign, exp: t }) => {
            check_scale(spec, t)?;
            // 1 + 2 sum_{n>=1} sign^{n^2} q^{t n^2}
            let terms = (1..)
                .map(|n: usize| (n * n, n))
                .take_while(|&(sq, _)| sq * t < order)
                .map(|(sq, n)| (sq * t, 2 * sign.pow(n * n)));
            TruncatedSeries::from_terms(std::iter::once((0, 1)).chain(terms), order)
        }
        ThetaSpec::Psi(QArg { sign, exp: t }) => {
            check_scale(spec, t)?;
            let terms = (0..)
                .map(|n: usize| n * (n + 1) / 2)
                .take_while(|&tri| tri * t < order)
                .map(|tri| (tri * t, sign.pow(tri)));
            TruncatedSeries::from_terms(terms, order)
        }
        ThetaSpec::Chi(_) => eta_quotient(&theta_product_form(spec)?, order),
        ThetaSpec::General(a, b) => general_theta(spec, a, b, order),
    }
}

fn check_scale(spec: &ThetaSpec, t: usize) -> Result<()> {
    if t == 0 {
        Err(Error::DivergentSpec(spec.to_string()))
    } else {
        Ok(())
    }
}

fn general_theta(spec: &ThetaSpec, a: QArg, b: QArg, order: usize) -> Result<TruncatedSeries> {
    let (r, s) = (a.exp, b.exp);
    if r + s == 0 {
        return Err(Error::DivergentSpec(spec.to_string()));
    }
    // Term k: a^{k(k+1)/2} b^{k(k-1)/2}. For k >= 0 and for k < 0 the exponent
    // r k(k+1)/2 + s k(k-1)/2 is nondecreasing in |k|, so each direction stops at the
    // first exponent >= order.
    let mut terms = Vec::new();
    for dir in [1i64, -1] {
        let start = if dir == 1 { 0 } else { 1 };
        for m in start.. {
            let k = dir * m;
            let ea = (k * (k + 1) / 2) as usize;
            let eb = (k * (k - 1) / 2) as usize;
            let e = r * ea + s * eb;
            if e >= order {
                break;
            }
            terms.push((e, a.sign.pow(ea) * b.sign.pow(eb)));
        }
    }
    TruncatedSeries::from_terms(terms, order)
}

/// The q-Pochhammer symbol `(x; y)_inf = prod_{j>=0} (1 - x y^j)` for `x = ±q^a`,
/// `y = ±q^b`, expanded by multiplying in one binomial at a time.
pub fn pochhammer(x: QArg, y: QArg, order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    if y.exp == 0 {
        return Err(Error::DivergentSpec(format!("poch({x},{y})")));
    }
    let mut out = vec![BigInt::zero(); order];
    out[0] = BigInt::from(1);
    for j in 0usize.. {
        let e = x.exp + y.exp * j;
        if e >= order {
            break;
        }
        // 1 - x y^j = 1 + c q^e
        let c = -(x.sign.pow(1) * y.sign.pow(j));
        if e == 0 {
            let scale = BigInt::from(1 + c);
            out.iter_mut().for_each(|v| *v *= &scale);
            continue;
        }
        for i in (e..order).rev() {
            if !out[i - e].is_zero() {
                let add = &out[i - e] * c;
                out[i] += add;
            }
        }
    }
    Ok(TruncatedSeries::from_vec(out))
}

/// Product form of `phi`, `psi`, `chi` at `±q^t` as an eta quotient.
pub fn theta_product_form(spec: &ThetaSpec) -> Result<ProductSpec> {
    let (x, base): (QArg, &[(usize, i64)]) = match *spec {
        ThetaSpec::Phi(x) if x.sign == Sign::Plus => (x, &[(2, 5), (1, -2), (4, -2)]),
        ThetaSpec::Phi(x) => (x, &[(1, 2), (2, -1)]),
        ThetaSpec::Psi(x) if x.sign == Sign::Plus => (x, &[(2, 2), (1, -1)]),
        ThetaSpec::Psi(x) => (x, &[(1, 1), (4, 1), (2, -1)]),
        ThetaSpec::Chi(x) if x.sign == Sign::Plus => (x, &[(2, 2), (1, -1), (4, -1)]),
        ThetaSpec::Chi(x) => (x, &[(1, 1), (2, -1)]),
        ThetaSpec::General(..) => return Err(Error::NoProductForm(spec.to_string())),
    };
    check_scale(spec, x.exp)?;
    Ok(ProductSpec::new(base.iter().copied())?.rescale(x.exp))
}
