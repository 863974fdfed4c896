//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits non-zero if any
//! criterion fails. All comparisons are exact.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use qcong_core::congruence::mod8::{mod8_cases, mod8_route};
use qcong_core::congruence::residues::{
    check_missed_residues, proof_form_lists, residues_of_form, QuadraticFormSpec,
};
use qcong_core::congruence::{claim_catalog, gen_function, verify_claim, ClaimStatus};
use qcong_core::identities::{check_all, check_dissection, list_identities};
use qcong_core::oracle::{
    count_biregular, count_overpartitions, enumerate_biregular, enumerate_overpartitions,
    oracle_series,
};
use qcong_core::props::{run_properties, DEFAULT_SEED};
use qcong_core::BiregularConstraint;

const N: usize = 2000;
const PAIRS: [(u64, u64); 5] = [(2, 3), (4, 3), (4, 9), (8, 27), (16, 81)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verify_all(tuples: &[(u64, u64, u64, u64, u64)], status: &[ClaimStatus]) -> Outcome {
    let catalog = claim_catalog();
    let selected: Vec<_> = catalog
        .iter()
        .filter(|c| tuples.contains(&(c.ell, c.mu, c.a, c.b, c.m)))
        .collect();
    ensure(selected.len() == tuples.len(), || {
        format!(
            "catalog has {} of {} expected claims",
            selected.len(),
            tuples.len()
        )
    })?;
    for c in &selected {
        ensure(c.status.is_some_and(|s| status.contains(&s)), || {
            format!("{c} has status {:?}", c.status)
        })?;
    }
    let mut checked = 0;
    for c in selected {
        let r = verify_claim(c, N).map_err(|e| format!("{c}: {e}"))?;
        ensure(r.holds, || {
            format!("{c}: counterexample {:?}", r.first_counterexample)
        })?;
        checked += r.checked_count;
    }
    Ok(format!(
        "{} claims, {checked} coefficients, N = {N}",
        tuples.len()
    ))
}

fn theorem_suite() -> Outcome {
    let expected = [
        (2, 3, 9, 6, 6),
        (4, 3, 12, 7, 8),
        (4, 3, 12, 11, 8),
        (4, 3, 9, 3, 6),
        (4, 3, 12, 11, 9),
        (4, 9, 12, 3, 8),
        (4, 9, 12, 7, 8),
        (4, 9, 12, 11, 8),
        (4, 9, 18, 12, 3),
        (4, 9, 18, 15, 3),
        (8, 27, 36, 15, 8),
        (16, 81, 36, 33, 8),
    ];
    let theorems = claim_catalog()
        .into_iter()
        .filter(|c| c.status == Some(ClaimStatus::Theorem))
        .count();
    ensure(theorems == expected.len(), || {
        format!("catalog lists {theorems} theorems")
    })?;
    verify_all(&expected, &[ClaimStatus::Theorem])
}

fn composite_suite() -> Outcome {
    verify_all(
        &[
            (4, 3, 12, 7, 24),
            (4, 3, 12, 11, 72),
            (4, 9, 18, 12, 24),
            (4, 9, 18, 15, 24),
            (8, 27, 36, 15, 24),
            (16, 81, 36, 33, 48),
        ],
        &[ClaimStatus::Implied, ClaimStatus::ConjecturedElementary],
    )
}

fn identity_suite() -> Outcome {
    let reports = check_all(500).map_err(|e| e.to_string())?;
    ensure(reports.len() >= 21, || {
        format!("only {} identities", reports.len())
    })?;
    for r in &reports {
        ensure(r.holds, || format!("{} fails: {r:?}", r.id))?;
    }
    let mut components = 0;
    for rec in list_identities().iter().filter(|r| r.dissection.is_some()) {
        for d in check_dissection(rec, 150).map_err(|e| e.to_string())? {
            ensure(d.holds, || {
                format!("{} component {} fails: {d:?}", d.id, d.residue)
            })?;
            components += 1;
        }
    }
    Ok(format!(
        "{} identities at N = 500, {components} dissection components at N = 150",
        reports.len()
    ))
}

fn oracle_equivalence() -> Outcome {
    for (l, m) in PAIRS {
        let c = BiregularConstraint::new(l, m).map_err(|e| e.to_string())?;
        let eta = gen_function(c, 60).map_err(|e| e.to_string())?;
        let dp = oracle_series(c, 60).map_err(|e| e.to_string())?;
        ensure(eta == dp, || {
            format!("({l},{m}) differs at q^{:?}", eta.first_difference(&dp))
        })?;
        for n in 0..=30u64 {
            ensure(
                enumerate_biregular(n, c) == count_biregular(n as usize, c),
                || format!("({l},{m}) enumeration differs at n = {n}"),
            )?;
        }
    }
    for n in 0..=30u64 {
        ensure(
            enumerate_overpartitions(n) == count_overpartitions(n as usize),
            || format!("overpartition enumeration differs at n = {n}"),
        )?;
    }
    let p3 = count_overpartitions(3);
    ensure(p3 == 8u32.into(), || format!("overpartitions of 3: {p3}"))?;
    Ok("5 pairs to N = 60, enumeration = DP for n <= 30, overpartitions of 3 = 8".into())
}

fn residue_classes() -> Outcome {
    let squares = |m| residues_of_form(&QuadraticFormSpec::parse("n^2", m, 0).unwrap());
    let s12 = squares(12);
    let s36 = squares(36);
    ensure(s12 == BTreeSet::from([0, 1, 4, 9]), || {
        format!("squares mod 12: {s12:?}")
    })?;
    ensure(s36 == BTreeSet::from([0, 1, 4, 9, 13, 16, 25, 28]), || {
        format!("squares mod 36: {s36:?}")
    })?;
    let lists = proof_form_lists();
    for list in &lists {
        let rep = check_missed_residues(&list.forms, list.modulus, &list.targets)
            .map_err(|e| e.to_string())?;
        ensure(rep.missed, || {
            format!("{} hits a target: {:?}", list.name, rep.per_form)
        })?;
    }
    Ok(format!(
        "squares mod 12 and 36, {} form lists miss their targets",
        lists.len()
    ))
}

fn mod8_cross_check() -> Outcome {
    let mut classes = 0;
    for (c, a, targets) in mod8_cases() {
        let rep = mod8_route(c, a, &targets, N).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("{rep:?}"))?;
        for &b in &targets {
            let direct = claim_catalog()
                .into_iter()
                .find(|x| (x.ell, x.mu, x.a, x.b, x.m) == (c.ell(), c.mu(), a, b, 8))
                .ok_or_else(|| format!("no catalog claim for ({c:?}, {a}n+{b})"))?;
            let r = verify_claim(&direct, N).map_err(|e| e.to_string())?;
            ensure(r.holds, || {
                format!("direct verification disagrees for {direct}")
            })?;
            classes += 1;
        }
    }
    Ok(format!(
        "{classes} residue classes vanish mod 8 to N = {N}, agreeing with direct checks"
    ))
}

fn property_tier() -> Outcome {
    let rep = run_properties(DEFAULT_SEED, 200);
    for o in &rep.outcomes {
        ensure(o.cases >= 200, || {
            format!("{} ran {} cases", o.name, o.cases)
        })?;
        ensure(o.passed(), || format!("{}: {:?}", o.name, o.first_failure))?;
    }
    Ok(format!(
        "{} properties x 200 cases, seed {}",
        rep.outcomes.len(),
        rep.seed
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("theorem suite", theorem_suite),
        ("composite suite", composite_suite),
        ("identity suite", identity_suite),
        ("oracle equivalence", oracle_equivalence),
        ("residue classes", residue_classes),
        ("mod-8 cross-check", mod8_cross_check),
        ("property tier", property_tier),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
