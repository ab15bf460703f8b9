use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hadamard_core::closure::{ClosureRules, DensityMode};
use hadamard_core::figure::CurveId;

#[derive(Debug, Parser)]
#[command(
    name = "hadorders",
    version,
    about = "Hadamard order enumeration, closures and density curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the orders produced by a list of construction families.
    Orders(OrdersArgs),
    /// Close a generator set under the product rules and cache the result.
    Closure(ClosureArgs),
    /// Density curves of the Paley, product and combined order sets.
    Figure(FigureArgs),
    /// Compare an empirical counting function with the asymptotic bounds.
    Bounds(BoundsArgs),
    /// Run the randomized property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Upper bound on orders, e.g. 1000000 or 2^26.
    #[arg(long, value_parser = parse_limit, default_value = "2^26")]
    pub limit: u64,
    /// Known-orders table: lines "g t_min", orders 2^t g for t >= t_min.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Worker threads for the prime sieve.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
    /// Largest bitmap allocation allowed, in bytes (accepts 2^k).
    #[arg(long, value_parser = parse_limit)]
    pub max_memory: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrdersArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated families: paley, paley2, c1..c7, table.
    #[arg(long, default_value = "paley")]
    pub families: String,
}

#[derive(Debug, Args)]
pub struct ClosureArgs {
    #[command(flatten)]
    pub common: Common,
    /// Generator families; ignored when --generators is given.
    #[arg(long, default_value = "paley")]
    pub families: String,
    /// Explicit generators, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub generators: Option<Vec<u64>>,
    #[arg(long, value_parser = parse_rules, default_value = "kron,r2,r4")]
    pub rules: ClosureRules,
    /// Cache file for the closure bitmap.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Recompute even when the cache matches.
    #[arg(long)]
    pub force: bool,
    #[arg(long, value_parser = parse_mode, default_value = "from4")]
    pub mode: DensityMode,
}

#[derive(Debug, Args)]
pub struct Grid {
    /// log2 x sample points: values and ranges, e.g. "2..30" or "6,8.5,10".
    #[arg(long, conflicts_with = "xs")]
    pub samples: Option<String>,
    /// Explicit x values, comma-separated (accepts 2^k).
    #[arg(long, value_delimiter = ',', value_parser = parse_limit)]
    pub xs: Option<Vec<u64>>,
    #[arg(long, value_parser = parse_mode, default_value = "from4")]
    pub mode: DensityMode,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: Grid,
    /// Curves to compute, comma-separated; all three by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_curve)]
    pub curve: Option<Vec<CurveId>>,
    /// Double every Paley order as well.
    #[arg(long)]
    pub paley_doubled: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: Grid,
    /// Curve whose counting function is reported.
    #[arg(long, value_parser = parse_curve, default_value = "products")]
    pub curve: CurveId,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Value substituted for the bounded error term of the exponent.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub o1: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated suites: oracle, window, coefficients, exp, partitions.
    #[arg(long)]
    pub suites: Option<String>,
    /// Corrupt every fast closure before comparing it; the run must fail.
    #[arg(long)]
    pub self_test_negative: bool,
    /// Also write the JSON summary here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses a plain integer or a power such as `2^30`.
pub fn parse_limit(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.parse().map_err(|_| format!("bad base in '{s}'"))?;
        let exp: u32 = exp.parse().map_err(|_| format!("bad exponent in '{s}'"))?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| format!("'{s}' overflows 64 bits"));
    }
    s.parse()
        .map_err(|_| format!("expected an integer or b^k, got '{s}'"))
}

fn parse_rules(s: &str) -> Result<ClosureRules, String> {
    let rules: ClosureRules = s.parse().map_err(|e: hadamard_core::Error| e.to_string())?;
    if rules.is_empty() {
        return Err("at least one rule is required".into());
    }
    Ok(rules)
}

fn parse_mode(s: &str) -> Result<DensityMode, String> {
    s.parse().map_err(|e: hadamard_core::Error| e.to_string())
}

fn parse_curve(s: &str) -> Result<CurveId, String> {
    s.parse().map_err(|e: hadamard_core::Error| e.to_string())
}

/// Expands a sample list such as `2..10,12.5` into `log2 x` values.
pub fn parse_samples(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u32 = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad range start in '{part}'"))?;
            let hi: u32 = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad range end in '{part}'"))?;
            if lo > hi {
                return Err(format!("empty range '{part}'"));
            }
            out.extend((lo..=hi).map(f64::from));
        } else {
            let v: f64 = part.parse().map_err(|_| format!("bad sample '{part}'"))?;
            if !v.is_finite() {
                return Err(format!("bad sample '{part}'"));
            }
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err("the sample list is empty".into());
    }
    Ok(out)
}
