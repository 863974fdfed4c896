mod args;
mod claims;

use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use args::{Cli, Command, Format, IdentitiesCommand, OracleCommand, RunConfig};
use qcong_core::congruence::mod8::{mod8_cases, mod8_route, Mod8Report};
use qcong_core::congruence::residues::{
    check_missed_residues, residues_of_form, QuadraticFormSpec,
};
use qcong_core::congruence::scan::scan;
use qcong_core::congruence::{claim_catalog, gen_function, verify_claim, VerificationReport};
use qcong_core::identities::{self, IdentityRecord, IdentityReport};
use qcong_core::oracle::{self, BiregularConstraint};
use qcong_core::props::run_properties;
use qcong_core::{expand, TruncatedSeries};

/// `println!` that treats a closed stdout (e.g. piping into `head`) as a normal exit.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

/// Exit status 2: bad input or a precondition that makes the request meaningless.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("qcong: error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let cfg = &cli.run;
    match &cli.command {
        Command::Expand { expr } => {
            print_series(&expand(expr, cfg.order())?, cfg.format);
            Ok(true)
        }
        Command::Identities(IdentitiesCommand::Check { ids, dissections }) => {
            identities_check(cfg, ids, *dissections)
        }
        Command::Identities(IdentitiesCommand::Export) => {
            out!("{}", serde_json::to_string_pretty(&identities::export())?);
            Ok(true)
        }
        Command::Verify { claims } => {
            let claims = match claims {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                    claims::parse_claims(&text)
                        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?
                }
                None => claim_catalog(),
            };
            verify(cfg, &claims)
        }
        Command::Oracle(cmd) => oracle_cmd(cfg, cmd),
        Command::Residues {
            form,
            modulus,
            from,
            targets,
        } => residues(cfg, form, *modulus, *from, targets),
        Command::Scan {
            pair,
            max_a,
            moduli,
        } => {
            let rep = scan(constraint(*pair)?, *max_a, moduli, cfg.order())?;
            match cfg.format {
                Format::Json => out!("{}", serde_json::to_string(&rep)?),
                Format::Text => {
                    out!(
                        "({},{}) A <= {} moduli {:?} N = {}: {} candidates",
                        rep.ell,
                        rep.mu,
                        rep.max_a,
                        rep.moduli,
                        rep.order,
                        rep.candidates.len()
                    );
                    for c in &rep.candidates {
                        out!(
                            "R({},{}; {}n+{}) = 0 mod {}  [{} coefficients]",
                            rep.ell,
                            rep.mu,
                            c.a,
                            c.b,
                            c.m,
                            c.checked_count
                        );
                    }
                }
            }
            Ok(true)
        }
        Command::Mod8 { pair, a, residues } => {
            let cases = match (pair, a) {
                (Some(p), Some(a)) => vec![(constraint(*p)?, *a, residues.clone())],
                _ => mod8_cases(),
            };
            let reports = par_map(cfg.parallelism, &cases, |(c, a, r)| {
                mod8_route(*c, *a, r, cfg.order())
            })?
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
            for r in &reports {
                emit(cfg.format, r, || mod8_text(r));
            }
            Ok(reports.iter().all(Mod8Report::holds))
        }
        Command::Props { seed, cases } => {
            let rep = run_properties(*seed, *cases);
            match cfg.format {
                Format::Json => out!("{}", serde_json::to_string(&rep)?),
                Format::Text => {
                    out!("seed {}", rep.seed);
                    for o in &rep.outcomes {
                        let status = if o.passed() { "PASS" } else { "FAIL" };
                        match &o.first_failure {
                            Some(f) => out!(
                                "{status} {} ({} cases, {} failed; first: {f})",
                                o.name,
                                o.cases,
                                o.failures
                            ),
                            None => out!("{status} {} ({} cases)", o.name, o.cases),
                        }
                    }
                }
            }
            Ok(rep.passed())
        }
    }
}

fn constraint((l, m): (u64, u64)) -> Result<BiregularConstraint, UsageError> {
    Ok(BiregularConstraint::new(l, m)?)
}

/// Maps in parallel on a pool of the requested size; results keep the input order.
fn par_map<T: Sync, R: Send>(
    parallelism: usize,
    items: &[T],
    f: impl Fn(&T) -> R + Sync + Send,
) -> Result<Vec<R>, UsageError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => out!(
            "{}",
            serde_json::to_string(value).expect("reports serialize")
        ),
        Format::Text => out!("{}", text()),
    }
}

fn print_series(s: &TruncatedSeries, format: Format) {
    match format {
        Format::Text => {
            for (n, c) in s.coeffs().iter().enumerate() {
                out!("{n} {c}");
            }
        }
        Format::Json => {
            let items: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
            out!("[{}]", items.join(","));
        }
    }
}

fn identities_check(cfg: &RunConfig, ids: &[String], dissections: bool) -> CmdResult {
    let records: Vec<&IdentityRecord> = if ids.is_empty() {
        identities::list_identities().iter().collect()
    } else {
        ids.iter()
            .map(|id| identities::find_identity(id))
            .collect::<Result<_, _>>()?
    };
    let reports = par_map(cfg.parallelism, &records, |r| {
        identities::check_record(r, cfg.order())
    })?
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut ok = true;
    for r in &reports {
        ok &= r.holds;
        emit(cfg.format, r, || identity_text(r));
    }
    if dissections {
        let with_parts: Vec<_> = records
            .into_iter()
            .filter(|r| r.dissection.is_some())
            .collect();
        let all = par_map(cfg.parallelism, &with_parts, |r| {
            identities::check_dissection(r, cfg.order())
        })?;
        for reps in all {
            for d in reps? {
                ok &= d.holds;
                emit(cfg.format, &d, || {
                    let status = if d.holds { "PASS" } else { "FAIL" };
                    let mut line = format!(
                        "{status} {} component {} mod {} (N = {})",
                        d.id, d.residue, d.base, d.order
                    );
                    if let (Some(e), Some(p), Some(c)) =
                        (d.first_bad_exponent, &d.part_coeff, &d.component_coeff)
                    {
                        line += &format!(": q^{e} has {p}, component gives {c}");
                    }
                    line
                });
            }
        }
    }
    Ok(ok)
}

fn identity_text(r: &IdentityReport) -> String {
    let status = if r.holds { "PASS" } else { "FAIL" };
    let mut line = format!("{status} {} (N = {}", r.id, r.order);
    if let Some(m) = r.modulus {
        line += &format!(", mod {m}");
    }
    line.push(')');
    if let Some(case) = &r.case {
        line += &format!(" case {case}");
    }
    if let (Some(e), Some(l), Some(rc)) = (r.first_bad_exponent, &r.lhs_coeff, &r.rhs_coeff) {
        line += &format!(": q^{e} has lhs {l}, rhs {rc}");
    }
    line
}

fn verify(cfg: &RunConfig, claims: &[qcong_core::CongruenceClaim]) -> CmdResult {
    let results = par_map(cfg.parallelism, claims, |c| verify_claim(c, cfg.order()))?;
    let mut reports = Vec::with_capacity(results.len());
    for (i, (claim, r)) in claims.iter().zip(results).enumerate() {
        reports.push(r.map_err(|e| UsageError(format!("claim {} ({claim}): {e}", i + 1)))?);
    }
    for r in &reports {
        emit(cfg.format, r, || verify_text(r));
    }
    Ok(reports.iter().all(|r| r.holds))
}

fn verify_text(r: &VerificationReport) -> String {
    match &r.first_counterexample {
        None => format!(
            "PASS {}  [{} coefficients to N = {}]",
            r.claim, r.checked_count, r.order
        ),
        Some(c) => format!(
            "FAIL {}  first counterexample n = {}: coefficient {} is {}",
            r.claim,
            c.n,
            r.claim.a * c.n + r.claim.b,
            c.value
        ),
    }
}

fn mod8_text(r: &Mod8Report) -> String {
    let mut lines = vec![format!(
        "({},{}) A = {} N = {}: quotient {}",
        r.ell,
        r.mu,
        r.a,
        r.order,
        if r.quotient_congruent {
            "agrees mod 8"
        } else {
            "DISAGREES mod 8"
        }
    )];
    for x in &r.residues {
        let status = if x.numerator_vanishes && x.gen_function_vanishes {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!("  {status} {}n+{}: numerator ", r.a, x.residue);
        line += match x.numerator_first_bad {
            None => "vanishes mod 8".to_string(),
            Some(n) => format!("nonzero mod 8 at n = {n}"),
        }
        .as_str();
        if !x.gen_function_vanishes {
            line += ", generating function nonzero mod 8";
        }
        lines.push(line);
    }
    lines.join("\n")
}

#[derive(Serialize)]
struct CompareReport {
    ell: u64,
    mu: u64,
    #[serde(rename = "N")]
    order: usize,
    identical: bool,
    first_difference: Option<usize>,
    oracle_coeff: Option<String>,
    eta_coeff: Option<String>,
}

#[derive(Serialize)]
struct CountReport {
    n: u64,
    ell: Option<u64>,
    mu: Option<u64>,
    method: &'static str,
    value: String,
}

#[derive(Serialize)]
struct ResidueReport {
    form: String,
    modulus: u64,
    from: u64,
    residues: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    targets: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    attained_targets: Vec<u64>,
}

const CATALOG_PAIRS: [(u64, u64); 5] = [(2, 3), (4, 3), (4, 9), (8, 27), (16, 81)];

fn oracle_cmd(cfg: &RunConfig, cmd: &OracleCommand) -> CmdResult {
    match cmd {
        OracleCommand::Compare { pair } => {
            let pairs = if pair.is_empty() {
                CATALOG_PAIRS.to_vec()
            } else {
                pair.clone()
            };
            let cs = pairs
                .into_iter()
                .map(constraint)
                .collect::<Result<Vec<_>, _>>()?;
            let mut ok = true;
            for c in cs {
                let o = oracle::oracle_series(c, cfg.order())?;
                let e = gen_function(c, cfg.order())?;
                let diff = o.first_difference(&e);
                let rep = CompareReport {
                    ell: c.ell(),
                    mu: c.mu(),
                    order: cfg.order(),
                    identical: diff.is_none(),
                    first_difference: diff,
                    oracle_coeff: diff.map(|i| o.coeffs()[i].to_string()),
                    eta_coeff: diff.map(|i| e.coeffs()[i].to_string()),
                };
                ok &= rep.identical;
                emit(cfg.format, &rep, || match diff {
                    None => format!("({},{}) identical to N = {}", rep.ell, rep.mu, rep.order),
                    Some(i) => format!(
                        "({},{}) differ at q^{i}: oracle {}, eta quotient {}",
                        rep.ell,
                        rep.mu,
                        o.coeffs()[i],
                        e.coeffs()[i]
                    ),
                });
            }
            Ok(ok)
        }
        OracleCommand::Count { n, pair, enumerate } => {
            let c = pair.map(constraint).transpose()?;
            let value = match (c, enumerate) {
                (None, false) => oracle::count_overpartitions(*n as usize),
                (None, true) => oracle::enumerate_overpartitions(*n),
                (Some(c), false) => oracle::count_biregular(*n as usize, c),
                (Some(c), true) => oracle::enumerate_biregular(*n, c),
            };
            let rep = CountReport {
                n: *n,
                ell: c.map(|c| c.ell()),
                mu: c.map(|c| c.mu()),
                method: if *enumerate {
                    "enumeration"
                } else {
                    "dynamic-program"
                },
                value: value.to_string(),
            };
            emit(cfg.format, &rep, || rep.value.clone());
            Ok(true)
        }
        OracleCommand::Series { pair } => {
            let s = match pair {
                Some(p) => oracle::oracle_series(constraint(*p)?, cfg.order())?,
                None => oracle::overpartition_series(cfg.order())?,
            };
            print_series(&s, cfg.format);
            Ok(true)
        }
    }
}

fn residues(cfg: &RunConfig, form: &str, modulus: u64, from: u64, targets: &[u64]) -> CmdResult {
    if modulus < 2 {
        return Err(UsageError(format!("modulus {modulus} must be at least 2")));
    }
    let spec = QuadraticFormSpec::parse(form, modulus, from)?;
    let set: Vec<u64> = residues_of_form(&spec).into_iter().collect();
    let attained = if targets.is_empty() {
        Vec::new()
    } else {
        check_missed_residues(std::slice::from_ref(&spec), modulus, targets)?
            .per_form
            .remove(0)
            .attained_targets
    };
    let rep = ResidueReport {
        form: spec.to_string(),
        modulus,
        from,
        residues: set,
        targets: targets.to_vec(),
        attained_targets: attained,
    };
    emit(cfg.format, &rep, || {
        let items: Vec<String> = rep.residues.iter().map(u64::to_string).collect();
        let mut text = format!("{}: {{{}}}", rep.form, items.join(", "));
        if !rep.targets.is_empty() {
            if rep.attained_targets.is_empty() {
                text += &format!("\nmisses all targets {:?}", rep.targets);
            } else {
                text += &format!("\nattains targets {:?}", rep.attained_targets);
            }
        }
        text
    });
    Ok(rep.attained_targets.is_empty())
}
