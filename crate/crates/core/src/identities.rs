//! Registry of theta-function and dissection identities, each stored as two
//! independently expandable sides and checked coefficient by coefficient.

use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::series::{check_order, TruncatedSeries};

/// One `lhs = rhs` (or `lhs ≡ rhs (mod m)`) instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCase {
    pub label: Option<String>,
    pub lhs: String,
    pub rhs: String,
    pub modulus: Option<i64>,
}

/// The `k`-dissection written out by the identity: `lhs = sum_r q^r C_r(q^k)`, with each
/// `C_r` given in the variable `q` (after `q^k -> q`). `"0"` marks an absent class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissectionSpec {
    pub base: usize,
    pub components: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityRecord {
    pub id: String,
    pub anchor: String,
    pub cases: Vec<IdentityCase>,
    pub dissection: Option<DissectionSpec>,
}

impl IdentityRecord {
    fn exact(id: &str, anchor: &str, lhs: &str, rhs: &str) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            cases: vec![IdentityCase {
                label: None,
                lhs: lhs.into(),
                rhs: rhs.into(),
                modulus: None,
            }],
            dissection: None,
        }
    }

    fn with_modulus(mut self, m: i64) -> Self {
        for c in &mut self.cases {
            c.modulus = Some(m);
        }
        self
    }

    fn dissected(mut self, base: usize, components: &[&str]) -> Self {
        self.dissection = Some(DissectionSpec {
            base,
            components: components.iter().map(|s| s.to_string()).collect(),
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub order: usize,
    pub holds: bool,
    /// Label of the failing case for multi-case records.
    pub case: Option<String>,
    pub modulus: Option<i64>,
    pub first_bad_exponent: Option<usize>,
    #[serde(serialize_with = "opt_bigint")]
    pub lhs_coeff: Option<BigInt>,
    #[serde(serialize_with = "opt_bigint")]
    pub rhs_coeff: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DissectionReport {
    pub id: String,
    pub base: usize,
    pub residue: usize,
    pub order: usize,
    pub holds: bool,
    pub first_bad_exponent: Option<usize>,
    #[serde(serialize_with = "opt_bigint")]
    pub part_coeff: Option<BigInt>,
    #[serde(serialize_with = "opt_bigint")]
    pub component_coeff: Option<BigInt>,
}

fn opt_bigint<S: serde::Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_str(&b.to_string()),
        None => s.serialize_none(),
    }
}

/// Flat export row: one per identity case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExportEntry {
    pub id: String,
    pub case: Option<String>,
    pub lhs: String,
    pub rhs: String,
    pub modulus: Option<i64>,
    pub paper_anchor: String,
}

pub fn list_identities() -> &'static [IdentityRecord] {
    static CATALOG: OnceLock<Vec<IdentityRecord>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

fn build_catalog() -> Vec<IdentityRecord> {
    use IdentityRecord as R;
    let mut v = vec![
        R::exact(
            "phi_prod",
            "phi(q) = f(q,q) = f2^5/(f1^2 f4^2), Jacobi triple product",
            "phi(q)",
            "f2^5 / (f1^2 * f4^2)",
        ),
        R::exact(
            "psi_prod",
            "psi(q) = f(q,q^3) = f2^2/f1, Jacobi triple product",
            "psi(q)",
            "f2^2 / f1",
        ),
        R::exact(
            "chi_prod",
            "chi(q) = (-q;q^2)_inf = f2^2/(f1 f4)",
            "poch(-q, q^2)",
            "f2^2 / (f1 * f4)",
        ),
        R::exact(
            "chi_neg_prod",
            "chi(-q) = (q;q^2)_inf = f1/f2",
            "poch(q, q^2)",
            "f1 / f2",
        ),
        R::exact("phi_neg", "phi(-q) = f1^2/f2", "phi(-q)", "f1^2 / f2"),
        R::exact("psi_neg", "psi(-q) = f1 f4/f2", "psi(-q)", "f1 * f4 / f2"),
        R::exact(
            "phipsi",
            "phi(-q) psi(q) = f1 f2",
            "phi(-q) * psi(q)",
            "f1 * f2",
        ),
        R::exact(
            "lemma21_a",
            "f(q,q^5) = psi(-q^3) chi(q), Berndt",
            "f(q,q^5)",
            "psi(-q^3) * chi(q)",
        ),
        R::exact(
            "lemma21_b",
            "f(q,q^2) = phi(-q^3)/chi(-q), Berndt",
            "f(q,q^2)",
            "phi(-q^3) / chi(-q)",
        ),
        R::exact(
            "dis_f1_4",
            "2-dissection of f1^4",
            "f1^4",
            "f4^10 / (f2^2 * f8^4) - 4 * q * f2^2 * f8^4 / f4^2",
        )
        .dissected(2, &["f2^10 / (f1^2 * f4^4)", "-4 * f1^2 * f4^4 / f2^2"]),
        R::exact(
            "dis_inv_f1_4",
            "2-dissection of 1/f1^4",
            "f1^-4",
            "f4^14 / (f2^14 * f8^4) + 4 * q * f4^2 * f8^4 / f2^10",
        )
        .dissected(2, &["f2^14 / (f1^14 * f4^4)", "4 * f2^2 * f4^4 / f1^10"]),
        R::exact(
            "guad_a",
            "2-dissection of f3/f1^3, Guadalupe",
            "f3 / f1^3",
            "f4^6 * f6^3 / (f2^9 * f12^2) + 3 * q * f4^2 * f6 * f12^2 / f2^7",
        )
        .dissected(
            2,
            &["f2^6 * f3^3 / (f1^9 * f6^2)", "3 * f2^2 * f3 * f6^2 / f1^7"],
        ),
        R::exact(
            "guad_b",
            "2-dissection of f3^3/f1, Guadalupe",
            "f3^3 / f1",
            "f4^3 * f6^2 / (f2^2 * f12) + q * f12^3 / f4",
        )
        .dissected(2, &["f2^3 * f3^2 / (f1^2 * f6)", "f6^3 / f2"]),
        R::exact(
            "tri_phi",
            "3-dissection phi(q) = phi(q^9) + 2q f(q^3,q^15), Berndt",
            "phi(q)",
            "phi(q^9) + 2 * q * f(q^3, q^15)",
        )
        .dissected(3, &["phi(q^3)", "2 * f(q, q^5)", "0"]),
        R::exact(
            "tri_psi",
            "3-dissection psi(q) = f(q^3,q^6) + q psi(q^9), Berndt",
            "psi(q)",
            "f(q^3, q^6) + q * psi(q^9)",
        )
        .dissected(3, &["f(q, q^2)", "psi(q^3)", "0"]),
        R::exact(
            "hirsch_a",
            "3-dissection of f1^2/f2, Hirschhorn",
            "f1^2 / f2",
            "f9^2 / f18 - 2 * q * f3 * f18^2 / (f6 * f9)",
        )
        .dissected(3, &["f3^2 / f6", "-2 * f1 * f6^2 / (f2 * f3)", "0"]),
        R::exact(
            "hirsch_b",
            "3-dissection of f2^2/f1, Hirschhorn",
            "f2^2 / f1",
            "f6 * f9^2 / (f3 * f18) + q * f18^2 / f9",
        )
        .dissected(3, &["f2 * f3^2 / (f1 * f6)", "f6^2 / f3", "0"]),
        R::exact(
            "toh",
            "3-dissection of f2/(f1 f4) (distinct odd parts), Toh",
            "f2 / (f1 * f4)",
            "f18^9 / (f3^2 * f9^3 * f12^2 * f36^3) + q * f6^2 * f18^3 / (f3^3 * f12^3) \
             + q^2 * f6^4 * f9^3 * f36^3 / (f3^4 * f12^4 * f18^3)",
        )
        .dissected(
            3,
            &[
                "f6^9 / (f1^2 * f3^3 * f4^2 * f12^3)",
                "f2^2 * f6^3 / (f1^3 * f4^3)",
                "f2^4 * f3^3 * f12^3 / (f1^4 * f4^4 * f6^3)",
            ],
        ),
        R::exact(
            "ahs",
            "3-dissection of f4/f1 (distinct even parts), Andrews-Hirschhorn-Sellers",
            "f4 / f1",
            "f12 * f18^4 / (f3^3 * f36^2) + q * f6^2 * f9^3 * f36 / (f3^4 * f18^2) \
             + 2 * q^2 * f6 * f18 * f36 / f3^3",
        )
        .dissected(
            3,
            &[
                "f4 * f6^4 / (f1^3 * f12^2)",
                "f2^2 * f3^3 * f12 / (f1^4 * f6^2)",
                "2 * f2 * f6 * f12 / f1^3",
            ],
        ),
        R::exact(
            "lem22",
            "3-dissection of f2/f1^2, Guadalupe",
            "f2 / f1^2",
            "f6^4 * f9^6 / (f3^8 * f18^3) + 2 * q * f6^3 * f9^3 / f3^7 \
             + 4 * q^2 * f6^2 * f18^3 / f3^6",
        )
        .dissected(
            3,
            &[
                "f2^4 * f3^6 / (f1^8 * f6^3)",
                "2 * f2^3 * f3^3 / f1^7",
                "4 * f2^2 * f6^3 / f1^6",
            ],
        ),
    ];

    let mut frob = IdentityRecord {
        id: "frobenius_mod_p".into(),
        anchor: "f_k^p = f_{pk} (mod p) for prime p".into(),
        cases: Vec::new(),
        dissection: None,
    };
    for p in [2i64, 3, 5] {
        for k in 1..=4i64 {
            frob.cases.push(IdentityCase {
                label: Some(format!("p={p},k={k}")),
                lhs: format!("f{k}^{p}"),
                rhs: format!("f{}", p * k),
                modulus: Some(p),
            });
        }
    }
    v.push(frob);

    v.push(
        R::exact(
            "phi_inverse_mod8",
            "1/phi(-q) = phi(q) phi(q^2)^2 phi(q^4)^4 ..., with phi(q^i)^j = 1 (mod 8) for even j >= 4",
            "1 / phi(-q)",
            "phi(q) * phi(q^2)^2",
        )
        .with_modulus(8),
    );
    v
}

pub fn find_identity(id: &str) -> Result<&'static IdentityRecord> {
    list_identities()
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

pub fn check_identity(id: &str, order: usize) -> Result<IdentityReport> {
    check_record(find_identity(id)?, order)
}

/// Expands both sides of every case and reports the first disagreement, if any.
pub fn check_record(record: &IdentityRecord, order: usize) -> Result<IdentityReport> {
    check_order(order)?;
    let mut report = IdentityReport {
        id: record.id.clone(),
        order,
        holds: true,
        case: None,
        modulus: None,
        first_bad_exponent: None,
        lhs_coeff: None,
        rhs_coeff: None,
    };
    for case in &record.cases {
        let lhs = Expr::parse(&case.lhs)?.eval(order)?;
        let rhs = Expr::parse(&case.rhs)?.eval(order)?;
        if let Some(bad) = first_mismatch(&lhs, &rhs, case.modulus)? {
            report.holds = false;
            report.case = case.label.clone();
            report.modulus = case.modulus;
            report.first_bad_exponent = Some(bad);
            report.lhs_coeff = Some(lhs.coeffs()[bad].clone());
            report.rhs_coeff = Some(rhs.coeffs()[bad].clone());
            return Ok(report);
        }
        report.modulus = case.modulus;
    }
    Ok(report)
}

fn first_mismatch(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    m: Option<i64>,
) -> Result<Option<usize>> {
    match m {
        Some(m) => a.first_incongruence(b, m),
        None => Ok(a.first_difference(b)),
    }
}

pub fn check_all(order: usize) -> Result<Vec<IdentityReport>> {
    list_identities()
        .iter()
        .map(|r| check_record(r, order))
        .collect()
}

/// Dissects the left side of the record's first case and compares each part with the
/// corresponding component. Records without a dissection give an empty list.
pub fn check_dissection(record: &IdentityRecord, order: usize) -> Result<Vec<DissectionReport>> {
    check_order(order)?;
    let Some(spec) = &record.dissection else {
        return Ok(Vec::new());
    };
    let case = &record.cases[0];
    let lhs = Expr::parse(&case.lhs)?.eval(order)?;
    let parts = lhs.dissect(spec.base)?;
    let mut out = Vec::with_capacity(spec.base);
    for (r, text) in spec.components.iter().enumerate() {
        let part = parts.part(r);
        let comp = Expr::parse(text)?.eval(part.order())?;
        let bad = first_mismatch(part, &comp, case.modulus)?;
        out.push(DissectionReport {
            id: record.id.clone(),
            base: spec.base,
            residue: r,
            order: part.order(),
            holds: bad.is_none(),
            first_bad_exponent: bad,
            part_coeff: bad.map(|i| part.coeffs()[i].clone()),
            component_coeff: bad.map(|i| comp.coeffs()[i].clone()),
        });
    }
    Ok(out)
}

pub fn export() -> Vec<ExportEntry> {
    list_identities()
        .iter()
        .flat_map(|r| {
            r.cases.iter().map(move |c| ExportEntry {
                id: r.id.clone(),
                case: c.label.clone(),
                lhs: c.lhs.clone(),
                rhs: c.rhs.clone(),
                modulus: c.modulus,
                paper_anchor: r.anchor.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    const REQUIRED: [&str; 22] = [
        "phi_prod",
        "psi_prod",
        "chi_prod",
        "chi_neg_prod",
        "phi_neg",
        "psi_neg",
        "phipsi",
        "lemma21_a",
        "lemma21_b",
        "dis_f1_4",
        "dis_inv_f1_4",
        "guad_a",
        "guad_b",
        "tri_phi",
        "tri_psi",
        "hirsch_a",
        "hirsch_b",
        "toh",
        "ahs",
        "lem22",
        "frobenius_mod_p",
        "phi_inverse_mod8",
    ];

    #[test]
    fn catalog_shape() {
        let cat = list_identities();
        assert!(cat.len() >= 21);
        let ids: HashSet<_> = cat.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids.len(), cat.len(), "ids are unique");
        for id in REQUIRED {
            assert!(ids.contains(id), "missing {id}");
        }
        assert!(cat.iter().all(|r| !r.anchor.is_empty()));
        let frob = find_identity("frobenius_mod_p").unwrap();
        assert_eq!(frob.cases.len(), 12);
    }

    #[test]
    fn named_checks_hold() {
        assert!(check_identity("phipsi", 200).unwrap().holds);
        assert!(check_identity("dis_f1_4", 200).unwrap().holds);
        assert!(check_identity("phi_inverse_mod8", 200).unwrap().holds);
    }

    #[test]
    fn all_hold_at_low_orders() {
        for n in [1, 2, 7, 60] {
            let reports = check_all(n).unwrap();
            assert_eq!(reports.len(), list_identities().len());
            for r in reports {
                assert!(r.holds, "{r:?}");
            }
        }
    }

    #[test]
    fn corrupted_record_fails_at_zero() {
        let mut rec = find_identity("phipsi").unwrap().clone();
        rec.cases[0].rhs = format!("2 * ({})", rec.cases[0].rhs);
        let r = check_record(&rec, 50).unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_bad_exponent, Some(0));
        assert_eq!(r.lhs_coeff, Some(BigInt::from(1)));
        assert_eq!(r.rhs_coeff, Some(BigInt::from(2)));
    }

    #[test]
    fn wrong_modular_record_reports_case() {
        let mut rec = find_identity("frobenius_mod_p").unwrap().clone();
        rec.cases[5].modulus = Some(7);
        let r = check_record(&rec, 40).unwrap();
        assert!(!r.holds);
        assert_eq!(r.case.as_deref(), Some("p=3,k=2"));
    }

    #[test]
    fn unknown_identity() {
        assert_eq!(
            check_identity("nope", 10),
            Err(Error::UnknownIdentity("nope".into()))
        );
    }

    #[test]
    fn dissection_components() {
        for rec in list_identities().iter().filter(|r| r.dissection.is_some()) {
            for d in check_dissection(rec, 90).unwrap() {
                assert!(d.holds, "{d:?}");
            }
        }
        let plain = find_identity("phipsi").unwrap();
        assert!(check_dissection(plain, 10).unwrap().is_empty());
    }

    #[test]
    fn export_rows() {
        let rows = export();
        assert_eq!(rows.len(), list_identities().len() - 1 + 12);
        assert!(rows
            .iter()
            .any(|r| r.id == "tri_psi" && r.rhs.contains("psi(q^9)")));
    }
}
