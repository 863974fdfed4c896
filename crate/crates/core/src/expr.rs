//! Text form of series expressions.
//!
//! ```text
//! expr    := [+|-] term ((+|-) term)*
//! term    := factor ((*|/) factor)*
//! factor  := primary [^ [-]INT]
//! primary := INT | q | fN | f(qarg) | f(qarg, qarg) | phi(qarg) | psi(qarg) | chi(qarg)
//!          | poch(qarg, qarg) | extract(expr, k, r) | (expr)
//! qarg    := [+|-] q [^ INT]
//! ```
//!
//! Whitespace is ignored. `fN` is the eta product `f_N`; `f(-q^t)` is the same as `ft`.
//! `poch(x, y)` is the infinite product `(x; y)_inf`.
//! `extract(e, k, r)` is the series `sum_n c_{kn+r} q^n` of the coefficients `c` of `e`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::products::{eta_quotient, pochhammer, theta_expand, ProductSpec, QArg, Sign, ThetaSpec};
use crate::series::{check_order, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    /// `q^j`
    QPow(usize),
    /// `f_n`
    Eta(usize),
    Theta(ThetaSpec),
    /// `(x; y)_inf`
    Poch(QArg, QArg),
    Extract {
        inner: Box<Expr>,
        base: usize,
        residue: usize,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser::new(text);
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(Error::parse(
                p.pos,
                format!("unexpected `{}`", p.rest_char()),
            ));
        }
        Ok(e)
    }

    /// Expands the expression mod `q^order`.
    pub fn eval(&self, order: usize) -> Result<TruncatedSeries> {
        check_order(order)?;
        match self {
            Expr::Int(c) => TruncatedSeries::monomial(c.clone(), 0, order),
            Expr::QPow(j) => TruncatedSeries::monomial(1, *j, order),
            Expr::Eta(n) => eta_quotient(&ProductSpec::new([(*n, 1)])?, order),
            Expr::Theta(t) => theta_expand(t, order),
            Expr::Poch(x, y) => pochhammer(*x, *y, order),
            Expr::Extract {
                inner,
                base,
                residue,
            } => {
                if *base == 0 {
                    return Err(Error::InvalidBase);
                }
                let full = inner.eval(base * order)?;
                Ok(full.dissect(*base)?.part(*residue).clone())
            }
            Expr::Neg(e) => Ok(e.eval(order)?.neg()),
            Expr::Add(a, b) => Ok(a.eval(order)?.add(&b.eval(order)?)),
            Expr::Sub(a, b) => Ok(a.eval(order)?.sub(&b.eval(order)?)),
            Expr::Mul(..) | Expr::Pow(..) => self.eval_product(order),
        }
    }

    /// Flattens a product so eta factors go through one `eta_quotient`, integers become a
    /// scalar and `q^j` a shift.
    fn eval_product(&self, order: usize) -> Result<TruncatedSeries> {
        let mut factors = Vec::new();
        self.collect_factors(1, &mut factors);
        let mut scalar = BigInt::one();
        let mut shift = 0usize;
        let mut etas = Vec::new();
        let mut others: Vec<(&Expr, i64)> = Vec::new();
        for (f, k) in factors {
            match f {
                Expr::Int(c) => {
                    if k < 0 && !(c.is_one() || (-c).is_one()) {
                        return Err(Error::FactorNotInvertible {
                            factor: f.to_string(),
                            constant: c.to_string(),
                        });
                    }
                    scalar *= num_traits::pow(c.clone(), k.unsigned_abs() as usize);
                }
                Expr::QPow(j) => {
                    if k < 0 && *j > 0 {
                        return Err(Error::FactorNotInvertible {
                            factor: f.to_string(),
                            constant: "0".into(),
                        });
                    }
                    shift += j * k.unsigned_abs() as usize;
                }
                Expr::Eta(n) => etas.push((*n, k)),
                _ => others.push((f, k)),
            }
        }
        let mut acc = eta_quotient(&ProductSpec::new(etas)?, order)?;
        for (f, k) in others {
            let s = f.eval(order)?;
            let p = s.pow(k).map_err(|e| match e {
                Error::NotInvertible { constant } => Error::FactorNotInvertible {
                    factor: f.to_string(),
                    constant,
                },
                other => other,
            })?;
            acc = acc.mul(&p);
        }
        if !scalar.is_one() {
            acc = acc.scale(&scalar);
        }
        if shift > 0 {
            acc = acc.shift(shift);
        }
        Ok(acc)
    }

    fn collect_factors<'a>(&'a self, k: i64, out: &mut Vec<(&'a Expr, i64)>) {
        match self {
            Expr::Mul(a, b) => {
                a.collect_factors(k, out);
                b.collect_factors(k, out);
            }
            Expr::Pow(a, e) => a.collect_factors(k * e, out),
            other => out.push((other, k)),
        }
    }

    /// The expression as an eta quotient, when it is one.
    pub fn as_product_spec(&self) -> Option<ProductSpec> {
        let mut factors = Vec::new();
        self.collect_factors(1, &mut factors);
        let mut etas = Vec::new();
        for (f, k) in factors {
            match f {
                Expr::Eta(n) => etas.push((*n, k)),
                Expr::Int(c) if c.is_one() => {}
                _ => return None,
            }
        }
        ProductSpec::new(etas).ok()
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Neg(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

impl FromStr for ProductSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)?
            .as_product_spec()
            .ok_or_else(|| Error::parse(0, format!("`{s}` is not an eta quotient")))
    }
}

impl FromStr for ThetaSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match Expr::parse(s)? {
            Expr::Theta(t) => Ok(t),
            _ => Err(Error::parse(0, format!("`{s}` is not a theta function"))),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Int(c) if c.is_negative() => write!(f, "({c})"),
            Expr::Int(c) => write!(f, "{c}"),
            Expr::QPow(1) => f.write_str("q"),
            Expr::QPow(j) => write!(f, "q^{j}"),
            Expr::Eta(n) => write!(f, "f{n}"),
            Expr::Theta(t) => write!(f, "{t}"),
            Expr::Poch(x, y) => write!(f, "poch({x},{y})"),
            Expr::Extract {
                inner,
                base,
                residue,
            } => write!(f, "extract({inner}, {base}, {residue})"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, 2)
            }
            Expr::Add(a, b) => {
                write!(f, "{a} + ")?;
                wrap(f, b, 1)
            }
            Expr::Sub(a, b) => {
                write!(f, "{a} - ")?;
                wrap(f, b, 1)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 2)?;
                f.write_str(" * ")?;
                wrap(f, b, 3)
            }
            Expr::Pow(a, k) => {
                wrap(f, a, 4)?;
                write!(f, "^{k}")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn rest_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or(' ')
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn error(&mut self, msg: impl Into<String>) -> Error {
        self.skip_ws();
        Error::parse(self.pos, msg)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        self.pos += digits;
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn small_uint(&mut self) -> Result<usize> {
        let at = self.pos;
        self.uint()?
            .to_usize()
            .ok_or_else(|| Error::parse(at, "integer too large"))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let at = self.pos;
        let v = self
            .uint()?
            .to_i64()
            .ok_or_else(|| Error::parse(at, "exponent too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
            } else if self.eat('/') {
                let d = self.factor()?;
                acc = Expr::Mul(Box::new(acc), Box::new(Expr::Pow(Box::new(d), -1)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos;
        let k = self.signed_int()?;
        match base {
            Expr::QPow(j) => {
                if k < 0 {
                    return Err(Error::parse(at, "negative powers of q are not supported"));
                }
                Ok(Expr::QPow(j * k as usize))
            }
            Expr::Int(c) if k >= 0 => Ok(Expr::Int(num_traits::pow(c, k as usize))),
            other => Ok(Expr::Pow(Box::new(other), k)),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.uint()?)),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(_) => self.named(),
        }
    }

    fn named(&mut self) -> Result<Expr> {
        let start = self.pos;
        if self.eat_word("extract") {
            self.expect('(')?;
            let inner = self.expr()?;
            self.expect(',')?;
            let base = self.small_uint()?;
            self.expect(',')?;
            let residue = self.small_uint()?;
            self.expect(')')?;
            if base == 0 || residue >= base {
                return Err(Error::parse(
                    start,
                    "extract needs base >= 1 and residue < base",
                ));
            }
            return Ok(Expr::Extract {
                inner: Box::new(inner),
                base,
                residue,
            });
        }
        if self.eat_word("poch") {
            self.expect('(')?;
            let x = self.qarg()?;
            self.expect(',')?;
            let y = self.qarg()?;
            self.expect(')')?;
            if y.exp == 0 {
                return Err(Error::parse(start, "poch(x, y) needs y = ±q^b with b >= 1"));
            }
            return Ok(Expr::Poch(x, y));
        }
        for (name, ctor) in [
            ("phi", ThetaSpec::Phi as fn(QArg) -> ThetaSpec),
            ("psi", ThetaSpec::Psi),
            ("chi", ThetaSpec::Chi),
        ] {
            if self.eat_word(name) {
                self.expect('(')?;
                let x = self.qarg()?;
                self.expect(')')?;
                return Ok(Expr::Theta(ctor(x)));
            }
        }
        if self.eat_word("f") {
            if self.eat('(') {
                let a = self.qarg()?;
                if self.eat(')') {
                    // f(-q^t) = f_t
                    return match a.sign {
                        Sign::Minus => Ok(Expr::Eta(a.exp)),
                        Sign::Plus => Err(Error::parse(start, "one-argument f needs -q^t")),
                    };
                }
                self.expect(',')?;
                let b = self.qarg()?;
                self.expect(')')?;
                if a.exp + b.exp == 0 {
                    return Err(Error::parse(start, "f(a,b) needs |ab| < 1"));
                }
                return Ok(Expr::Theta(ThetaSpec::General(a, b)));
            }
            let n = self.small_uint()?;
            if n == 0 {
                return Err(Error::parse(start, "eta scale must be positive"));
            }
            return Ok(Expr::Eta(n));
        }
        if self.eat_word("q") {
            return Ok(Expr::QPow(1));
        }
        Err(self.error(format!("unexpected `{}`", self.rest_char())))
    }

    fn qarg(&mut self) -> Result<QArg> {
        let sign = if self.eat('-') {
            Sign::Minus
        } else {
            self.eat('+');
            Sign::Plus
        };
        if !self.eat_word("q") {
            return Err(self.error("expected q"));
        }
        let exp = if self.eat('^') { self.small_uint()? } else { 1 };
        Ok(QArg::new(sign, exp))
    }
}

/// Parses and expands in one step.
pub fn expand(text: &str, order: usize) -> Result<TruncatedSeries> {
    Expr::parse(text)?.eval(order)
}
