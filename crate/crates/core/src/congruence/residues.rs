//! Residues of diagonal quadratic forms, used to show that certain theta-series terms
//! never land in a target progression.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One variable's contribution `coeff * x^2`, with `x` ranging from `from` upwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTerm {
    pub var: char,
    pub coeff: u64,
    pub from: u64,
}

/// A diagonal form `sum c_k x_k^2` reduced mod `modulus`.
///
/// Text syntax: `3i^2+4j^2`, `2(i^2+j^2)`, `n^2`. Coefficients of a repeated variable add up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticFormSpec {
    pub terms: Vec<FormTerm>,
    pub modulus: u64,
}

impl QuadraticFormSpec {
    pub fn new(terms: Vec<FormTerm>, modulus: u64) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::InvalidModulus(modulus as i64));
        }
        if terms.is_empty() {
            return Err(Error::parse(0, "a form needs at least one term"));
        }
        Ok(Self { terms, modulus })
    }

    /// Parses `text` and sets every variable's lower bound to `from`.
    pub fn parse(text: &str, modulus: u64, from: u64) -> Result<Self> {
        let mut terms = parse_form(text)?;
        for t in &mut terms {
            t.from = from;
        }
        Self::new(terms, modulus)
    }
}

impl fmt::Display for QuadraticFormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.coeff != 1 {
                write!(f, "{}", t.coeff)?;
            }
            write!(f, "{}^2", t.var)?;
        }
        write!(f, " (mod {})", self.modulus)
    }
}

/// The parsed form without a modulus; `from` defaults to 0.
impl FromStr for QuadraticFormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_form(s)?, 1)
    }
}

fn parse_form(text: &str) -> Result<Vec<FormTerm>> {
    let mut p = FormParser {
        src: text.as_bytes(),
        pos: 0,
        acc: BTreeMap::new(),
    };
    p.sum(1)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(p.acc
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(var, coeff)| FormTerm {
            var,
            coeff,
            from: 0,
        })
        .collect())
}

struct FormParser<'a> {
    src: &'a [u8],
    pos: usize,
    acc: BTreeMap<char, u64>,
}

impl FormParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", b as char)))
        }
    }

    fn int(&mut self) -> Option<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn sum(&mut self, mult: u64) -> Result<()> {
        self.term(mult)?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            self.term(mult)?;
        }
        Ok(())
    }

    fn term(&mut self, mult: u64) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        let coeff = self.int().unwrap_or(1);
        if self.pos > start && self.peek() == Some(b'*') {
            self.pos += 1;
        }
        let mult = mult
            .checked_mul(coeff)
            .ok_or_else(|| Error::parse(start, "coefficient overflow"))?;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.sum(mult)?;
                self.expect(b')')
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                self.expect(b'^')?;
                let at = self.pos;
                if self.int() != Some(2) {
                    return Err(Error::parse(at, "only squares are supported"));
                }
                *self.acc.entry(c as char).or_default() += mult;
                Ok(())
            }
            _ => Err(Error::parse(self.pos, "expected a variable or '('")),
        }
    }
}

/// All values of the form mod `m`.
///
/// Each variable runs over one full period `from..from + m`; since `x^2 mod m` depends only
/// on `x mod m`, this is exhaustive.
pub fn residues_of_form(form: &QuadraticFormSpec) -> BTreeSet<u64> {
    residues_over(form, 1)
}

/// As [`residues_of_form`] but each variable runs over `periods` full periods.
pub fn residues_over(form: &QuadraticFormSpec, periods: u64) -> BTreeSet<u64> {
    let m = form.modulus;
    let mut set = BTreeSet::from([0u64]);
    for t in &form.terms {
        let squares: BTreeSet<u64> = (t.from..t.from + periods * m)
            .map(|x| ((x % m) * (x % m) % m) * (t.coeff % m) % m)
            .collect();
        set = set
            .iter()
            .flat_map(|s| squares.iter().map(move |v| (s + v) % m))
            .collect();
    }
    set
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormHit {
    pub form: String,
    pub attained_targets: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissReport {
    pub modulus: u64,
    pub targets: Vec<u64>,
    /// True when no form attains any target residue.
    pub missed: bool,
    pub per_form: Vec<FormHit>,
}

pub fn check_missed_residues(
    forms: &[QuadraticFormSpec],
    modulus: u64,
    targets: &[u64],
) -> Result<MissReport> {
    if modulus < 2 {
        return Err(Error::InvalidModulus(modulus as i64));
    }
    let mut per_form = Vec::with_capacity(forms.len());
    for f in forms {
        if f.modulus != modulus {
            return Err(Error::ModulusMismatch {
                expected: modulus,
                found: f.modulus,
            });
        }
        let res = residues_of_form(f);
        per_form.push(FormHit {
            form: f.to_string(),
            attained_targets: targets
                .iter()
                .copied()
                .filter(|t| res.contains(&(t % modulus)))
                .collect(),
        });
    }
    Ok(MissReport {
        modulus,
        targets: targets.to_vec(),
        missed: per_form.iter().all(|h| h.attained_targets.is_empty()),
        per_form,
    })
}

/// The exponent forms that appear in the mod-8 expansions of the numerator
/// `phi(q) phi(q^2)^2 phi(-q^ell) phi(-q^mu)`, together with the residues they must avoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormList {
    pub name: &'static str,
    pub ell: u64,
    pub mu: u64,
    pub modulus: u64,
    pub targets: Vec<u64>,
    pub forms: Vec<QuadraticFormSpec>,
}

pub fn proof_form_lists() -> Vec<FormList> {
    let list = |name, ell, mu, modulus, targets: &[u64], forms: &[&str]| FormList {
        name,
        ell,
        mu,
        modulus,
        targets: targets.to_vec(),
        forms: forms
            .iter()
            .map(|f| QuadraticFormSpec::parse(f, modulus, 1).expect("valid built-in form"))
            .collect(),
    };
    vec![
        list(
            "ell=4,mu=3",
            4,
            3,
            12,
            &[11],
            &[
                "n^2",
                "2n^2",
                "3n^2",
                "4n^2",
                "2(i^2+j^2)",
                "i^2+4j^2",
                "i^2+3j^2",
                "3i^2+4j^2",
            ],
        ),
        list(
            "ell=4,mu=9",
            4,
            9,
            12,
            &[3, 7, 11],
            &[
                "n^2",
                "2n^2",
                "4n^2",
                "9n^2",
                "2(i^2+j^2)",
                "i^2+4j^2",
                "4i^2+9j^2",
                "i^2+9j^2",
            ],
        ),
        list(
            "ell=8,mu=27",
            8,
            27,
            36,
            &[15],
            &[
                "n^2",
                "2n^2",
                "8n^2",
                "27n^2",
                "2(i^2+j^2)",
                "i^2+27j^2",
                "8i^2+27j^2",
                "8i^2+j^2",
            ],
        ),
        list(
            "ell=16,mu=81",
            16,
            81,
            36,
            &[33],
            &[
                "n^2",
                "2n^2",
                "16n^2",
                "81n^2",
                "2(i^2+j^2)",
                "i^2+16j^2",
                "16i^2+81j^2",
                "i^2+81j^2",
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn parse_forms() {
        let f = QuadraticFormSpec::parse("3i^2+4j^2", 12, 1).unwrap();
        assert_eq!(
            f.terms,
            vec![
                FormTerm {
                    var: 'i',
                    coeff: 3,
                    from: 1
                },
                FormTerm {
                    var: 'j',
                    coeff: 4,
                    from: 1
                }
            ]
        );
        let g = QuadraticFormSpec::parse("2(i^2 + j^2)", 12, 0).unwrap();
        assert_eq!(
            g.terms.iter().map(|t| t.coeff).collect::<Vec<_>>(),
            vec![2, 2]
        );
        let h: QuadraticFormSpec = "i^2 + 2*i^2".parse().unwrap();
        assert_eq!(
            h.terms,
            vec![FormTerm {
                var: 'i',
                coeff: 3,
                from: 0
            }]
        );
        assert_eq!(f.to_string(), "3i^2 + 4j^2 (mod 12)");
        assert!(matches!(
            "i^3".parse::<QuadraticFormSpec>(),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!("3i^2 +".parse::<QuadraticFormSpec>().is_err());
        assert!("(i^2".parse::<QuadraticFormSpec>().is_err());
    }

    #[test]
    fn known_residue_sets() {
        let r = |s, m, from| residues_of_form(&QuadraticFormSpec::parse(s, m, from).unwrap());
        assert_eq!(r("n^2", 12, 0), set(&[0, 1, 4, 9]));
        assert_eq!(r("3i^2+4j^2", 12, 1), set(&[0, 3, 4, 7]));
        assert_eq!(r("i^2+3j^2", 12, 1), set(&[0, 1, 3, 4, 7, 9]));
        assert_eq!(r("2(i^2+j^2)", 12, 1), set(&[0, 2, 4, 6, 8, 10]));
        // quadratic residues mod 36
        assert_eq!(r("n^2", 36, 1), set(&[0, 1, 4, 9, 13, 16, 25, 28]));
    }

    #[test]
    fn longer_ranges_change_nothing() {
        for list in proof_form_lists() {
            for f in &list.forms {
                assert_eq!(residues_of_form(f), residues_over(f, 3), "{f}");
            }
        }
        let f = QuadraticFormSpec::parse("5a^2+7b^2+11c^2", 24, 0).unwrap();
        assert_eq!(residues_of_form(&f), residues_over(&f, 2));
    }

    #[test]
    fn matches_brute_force() {
        let f = QuadraticFormSpec::parse("3i^2+4j^2", 12, 1).unwrap();
        let mut brute = BTreeSet::new();
        for i in 1..60u64 {
            for j in 1..60u64 {
                brute.insert((3 * i * i + 4 * j * j) % 12);
            }
        }
        assert_eq!(residues_of_form(&f), brute);
    }

    #[test]
    fn proof_lists_miss_targets() {
        for list in proof_form_lists() {
            let rep = check_missed_residues(&list.forms, list.modulus, &list.targets).unwrap();
            assert!(rep.missed, "{}: {:?}", list.name, rep.per_form);
        }
    }

    #[test]
    fn seven_is_hit_for_four_three() {
        let list = &proof_form_lists()[0];
        let rep = check_missed_residues(&list.forms, 12, &[7, 11]).unwrap();
        assert!(!rep.missed);
        let hitters: Vec<_> = rep
            .per_form
            .iter()
            .filter(|h| h.attained_targets == vec![7])
            .map(|h| h.form.as_str())
            .collect();
        assert_eq!(hitters, vec!["i^2 + 3j^2 (mod 12)", "3i^2 + 4j^2 (mod 12)"]);
    }

    #[test]
    fn mismatch_and_bad_modulus() {
        let f = QuadraticFormSpec::parse("n^2", 12, 0).unwrap();
        assert_eq!(
            check_missed_residues(std::slice::from_ref(&f), 36, &[1]),
            Err(Error::ModulusMismatch {
                expected: 36,
                found: 12
            })
        );
        assert_eq!(
            check_missed_residues(&[f], 1, &[0]),
            Err(Error::InvalidModulus(1))
        );
    }
}
