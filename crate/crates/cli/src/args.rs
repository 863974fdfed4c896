use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qcong",
    version,
    about = "Exact q-series expansions and congruence checks for biregular overpartitions"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Truncation order N: coefficients q^0 .. q^(N-1) are computed
    #[arg(
        short = 'N',
        long = "order",
        global = true,
        env = "QCONG_ORDER",
        default_value_t = 2000,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    pub order: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for claim and identity checks (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    pub parallelism: usize,
}

impl RunConfig {
    pub fn order(&self) -> usize {
        self.order as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand a product or theta expression, e.g. "f2 * f1^-2" or "phi(-q)"
    Expand { expr: String },

    /// Check or export the theta/dissection identity registry
    #[command(subcommand)]
    Identities(IdentitiesCommand),

    /// Verify congruence claims from the built-in catalog or a claim file
    Verify {
        /// JSON claim file: one object, an array, or one object per line
        #[arg(long)]
        claims: Option<PathBuf>,
    },

    /// Combinatorial oracle: direct counts independent of the series engine
    #[command(subcommand)]
    Oracle(OracleCommand),

    /// Residues of a diagonal quadratic form, e.g. "3i^2+4j^2"
    Residues {
        form: String,
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        /// Lower bound of every variable (0 or 1); the residue set is the same either way
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=1))]
        from: u64,
        /// Report whether the form attains any of these residues
        #[arg(long, value_delimiter = ',')]
        targets: Vec<u64>,
    },

    /// Search for progressions An+B with every coefficient divisible by M
    Scan {
        #[arg(long, value_parser = parse_pair)]
        pair: (u64, u64),
        #[arg(long = "maxA", value_name = "A")]
        max_a: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        moduli: Vec<u64>,
    },

    /// Second verification of the mod-8 congruences through theta sums
    Mod8 {
        /// Defaults to the four built-in families
        #[arg(long, value_parser = parse_pair, requires_all = ["a", "residues"])]
        pair: Option<(u64, u64)>,
        #[arg(short = 'A', value_name = "A")]
        a: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        residues: Vec<u64>,
    },

    /// Randomized algebraic property checks with a fixed seed
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum IdentitiesCommand {
    /// Check every identity (or the named ones) to the truncation order
    Check {
        ids: Vec<String>,
        /// Also check each dissection component separately
        #[arg(long)]
        dissections: bool,
    },
    /// Print the registry as JSON
    Export,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Compare the oracle against the eta-quotient expansion
    Compare {
        /// Defaults to all five catalog pairs
        #[arg(long, value_parser = parse_pair)]
        pair: Vec<(u64, u64)>,
    },
    /// Count one value; without --pair counts all overpartitions
    Count {
        n: u64,
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(u64, u64)>,
        /// Enumerate partitions explicitly instead of the dynamic program
        #[arg(long)]
        enumerate: bool,
    },
    /// Print the oracle series to the truncation order
    Series {
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(u64, u64)>,
    },
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (l, m) = s
        .split_once(',')
        .ok_or_else(|| format!("expected L,M but got `{s}`"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|e| format!("`{t}` in pair: {e}"))
    };
    Ok((num(l)?, num(m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("4,9"), Ok((4, 9)));
        assert_eq!(parse_pair(" 2 , 3"), Ok((2, 3)));
        assert!(parse_pair("4").is_err());
        assert!(parse_pair("a,3").is_err());
    }
}
