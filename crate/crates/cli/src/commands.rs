use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use hadamard_core::analysis::{ford_v_estimate, main_bound, paley_bound, BoundParams, PaleyVariant};
use hadamard_core::arith::SieveConfig;
use hadamard_core::closure::{
    config_hash, density, read_cache, rule_closure_of, write_cache, DensityMode, OrderSet,
};
use hadamard_core::constructions::{
    families_orders, ingest_known_orders, parse_families, KnownOrdersTable, PaleyPolicy,
};
use hadamard_core::figure::{
    compute_curves, figure_rows, samples_to_x, CurveId, FigureConfig, DENSITY_SCALE, X_SCALE,
};
use hadamard_core::verify::{parse_suites, run_verification, VerifyConfig};
use hadamard_core::MemoryBudget;

use crate::args::{parse_samples, BoundsArgs, ClosureArgs, Common, FigureArgs, Grid, OrdersArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Verify(String),
    BrokenPipe,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BrokenPipe => 0,
            CliError::Usage(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Verify(_) => 3,
        }
    }
}

impl From<hadamard_core::Error> for CliError {
    fn from(e: hadamard_core::Error) -> Self {
        use hadamard_core::Error as E;
        match e {
            E::Domain(_) | E::Parse { .. } => CliError::Usage(e.to_string()),
            E::Io(io) => io.into(),
            _ => CliError::Resource(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            CliError::BrokenPipe
        } else {
            CliError::Resource(format!("i/o error: {e}"))
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io.into(),
            other => CliError::Resource(format!("csv error: {other:?}")),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn open_out(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::Resource(format!("cannot create {}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn budget(common: &Common) -> MemoryBudget {
    common.max_memory.map(MemoryBudget).unwrap_or_default()
}

fn sieve_config(common: &Common) -> SieveConfig {
    SieveConfig {
        threads: usize::from(common.threads),
        budget: budget(common),
        ..SieveConfig::default()
    }
}

fn load_table(common: &Common) -> CliResult<Option<Arc<KnownOrdersTable>>> {
    match &common.table {
        Some(path) => Ok(Some(Arc::new(ingest_known_orders(path)?))),
        None => Ok(None),
    }
}

fn check_limit(limit: u64, min: u64) -> CliResult {
    if limit < min {
        return Err(CliError::Usage(format!(
            "--limit must be at least {min}, got {limit}"
        )));
    }
    Ok(())
}

pub fn orders(args: &OrdersArgs) -> CliResult {
    let common = &args.common;
    check_limit(common.limit, 4)?;
    let families = parse_families(&args.families, load_table(common)?)?;
    let set = families_orders(&families, common.limit, &sieve_config(common))?;
    write_orders(&set, common.out.as_deref())
}

fn write_orders(set: &OrderSet, out: Option<&Path>) -> CliResult {
    let mut w = csv::Writer::from_writer(open_out(out)?);
    w.write_record(["order"])?;
    for n in set.iter() {
        w.write_record([n.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn closure(args: &ClosureArgs) -> CliResult {
    let common = &args.common;
    check_limit(common.limit, 4)?;
    let budget = budget(common);
    let description = closure_description(args)?;
    let hash = config_hash(&description);

    let cached = match &args.cache {
        Some(path) if path.exists() && !args.force => {
            let file = read_cache(path)?;
            if file.config_hash != hash || file.rules != args.rules || file.set.limit() != common.limit {
                return Err(CliError::Resource(format!(
                    "cache {} was written for a different configuration (limit {}, rules {}, hash {:016x}; \
                     requested limit {}, rules {}, hash {hash:016x}); pass --force to overwrite",
                    path.display(),
                    file.set.limit(),
                    file.rules,
                    file.config_hash,
                    common.limit,
                    args.rules,
                )));
            }
            eprintln!("cache hit: {}", path.display());
            Some(file.set)
        }
        _ => None,
    };
    let set = match cached {
        Some(set) => set,
        None => {
            let gens = closure_generators(args)?;
            let set = rule_closure_of(&gens, args.rules, budget)?;
            if let Some(path) = &args.cache {
                let tmp = path.with_extension("partial");
                write_cache(&tmp, &set, args.rules, hash)?;
                fs::rename(&tmp, path)?;
                eprintln!("cache written: {}", path.display());
            }
            set
        }
    };

    let limit = set.limit();
    let members = set.iter_range(4, limit).count();
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "limit: {limit}")?;
    writeln!(stdout, "rules: {}", args.rules)?;
    writeln!(stdout, "config hash: {hash:016x}")?;
    writeln!(stdout, "members: {}", set.len())?;
    writeln!(stdout, "members in [4, {limit}]: {members}")?;
    writeln!(stdout, "density: {}", fmt6(density(&set, limit, args.mode)?))?;
    if let Some(out) = &common.out {
        write_orders(&set, Some(out))?;
    }
    Ok(())
}

fn closure_description(args: &ClosureArgs) -> CliResult<String> {
    let source = match &args.generators {
        Some(gens) => {
            let mut gens = gens.clone();
            gens.sort_unstable();
            gens.dedup();
            let list: Vec<String> = gens.iter().map(u64::to_string).collect();
            format!("generators={}", list.join(","))
        }
        None => {
            let table = match &args.common.table {
                Some(path) => {
                    let bytes = fs::read(path)
                        .map_err(|e| CliError::Resource(format!("cannot read {}: {e}", path.display())))?;
                    format!("{:016x}", config_hash(&String::from_utf8_lossy(&bytes)))
                }
                None => "none".to_string(),
            };
            format!("families={};table={table}", args.families)
        }
    };
    Ok(format!(
        "limit={};rules={};{source}",
        args.common.limit, args.rules
    ))
}

fn closure_generators(args: &ClosureArgs) -> CliResult<OrderSet> {
    let common = &args.common;
    match &args.generators {
        Some(gens) => {
            if gens.contains(&0) {
                return Err(CliError::Usage("generators must be positive".into()));
            }
            let mut set = OrderSet::with_budget(common.limit, budget(common))?;
            for &g in gens.iter().filter(|&&g| g <= common.limit) {
                set.insert(g);
            }
            Ok(set)
        }
        None => {
            let families = parse_families(&args.families, load_table(common)?)?;
            Ok(families_orders(&families, common.limit, &sieve_config(common))?)
        }
    }
}

/// Sample points as `x` values, checked against the limit.
fn grid_points(grid: &Grid, limit: u64, default_from: u32) -> CliResult<Vec<u64>> {
    let xs = match (&grid.samples, &grid.xs) {
        (_, Some(xs)) => xs.clone(),
        (Some(s), None) => {
            let samples = parse_samples(s).map_err(CliError::Usage)?;
            let max = (limit as f64).log2();
            if let Some(bad) = samples.iter().find(|&&s| s > max + 1e-9) {
                return Err(CliError::Usage(format!(
                    "sample log2 x = {bad} exceeds log2 of the limit ({max:.3})"
                )));
            }
            samples_to_x(&samples)?
        }
        (None, None) => (default_from..=limit.ilog2()).map(|k| 1u64 << k).collect(),
    };
    if let Some(&bad) = xs.iter().find(|&&x| x == 0 || x > limit) {
        return Err(CliError::Usage(format!(
            "sample x = {bad} is outside [1, {limit}]"
        )));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("sample points must be strictly ascending".into()));
    }
    Ok(xs)
}

fn mode_name(mode: DensityMode) -> &'static str {
    match mode {
        DensityMode::From4 => "from4",
        DensityMode::All => "all",
    }
}

pub fn figure(args: &FigureArgs) -> CliResult {
    let common = &args.common;
    check_limit(common.limit, 64)?;
    let xs = grid_points(&args.grid, common.limit, 2)?;
    let curves = args.curve.clone().unwrap_or_else(|| CurveId::ALL.to_vec());
    let policy = if args.paley_doubled {
        PaleyPolicy::AllTwoPowers
    } else {
        PaleyPolicy::Pure
    };
    let config = FigureConfig {
        limit: common.limit,
        paley_policy: policy,
        table: load_table(common)?,
        sieve: sieve_config(common),
    };
    let sets = compute_curves(&config, &curves)?;
    let rows = figure_rows(&sets, &curves, &xs, args.grid.mode)?;

    let mut out = open_out(common.out.as_deref())?;
    writeln!(
        out,
        "# hadorders figure limit={} mode={} paley={}",
        common.limit,
        mode_name(args.grid.mode),
        if args.paley_doubled { "doubled" } else { "pure" }
    )?;
    writeln!(
        out,
        "# reference columns: plot point (u, v) read as x = 2^({X_SCALE}u), density = v/{DENSITY_SCALE}; \
         empty where the plot has no point at x"
    )?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x".to_string(), "log2_x".to_string()];
    header.extend(curves.iter().map(|c| c.name().to_string()));
    for c in &curves {
        header.push(format!("{}_ref", c.name()));
        header.push(format!("{}_delta", c.name()));
    }
    w.write_record(&header)?;
    for row in &rows {
        let mut rec = vec![row.x.to_string(), fmt6(row.log2_x)];
        rec.extend(
            curves
                .iter()
                .map(|&c| row.density(c).map(fmt6).unwrap_or_default()),
        );
        for &c in &curves {
            rec.push(row.reference(c).map(fmt6).unwrap_or_default());
            rec.push(row.delta(c).map(fmt6).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn bounds(args: &BoundsArgs) -> CliResult {
    let common = &args.common;
    check_limit(common.limit, 4)?;
    let xs = grid_points(&args.grid, common.limit, 2)?;
    let params = BoundParams {
        epsilon: args.epsilon,
        o1: args.o1,
        ..BoundParams::default()
    };
    params.validate()?;
    let config = FigureConfig {
        limit: common.limit,
        paley_policy: PaleyPolicy::Pure,
        table: load_table(common)?,
        sieve: sieve_config(common),
    };
    let sets = compute_curves(&config, &[args.curve])?;
    let set = sets.get(args.curve);

    let mut out = open_out(common.out.as_deref())?;
    writeln!(
        out,
        "# hadorders bounds limit={} curve={} mode={} C={} D={} epsilon={} o1={}",
        common.limit,
        args.curve.name(),
        mode_name(args.grid.mode),
        params.c,
        params.d,
        params.epsilon,
        params.o1
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "x",
        "count",
        "paley_simple",
        "paley_doubled",
        "main_bound",
        "ford_v",
    ])?;
    // first error message per column, reported as footnotes
    let mut notes: BTreeMap<&str, String> = BTreeMap::new();
    let mut cell = |column: &'static str, value: hadamard_core::Result<f64>| match value {
        Ok(v) => fmt6(v),
        Err(e) => {
            notes.entry(column).or_insert_with(|| e.to_string());
            String::new()
        }
    };
    for &x in &xs {
        let count = match args.grid.mode {
            DensityMode::All => set.count_up_to(x),
            DensityMode::From4 => set.count_up_to(x) - set.count_up_to(3.min(x)),
        };
        let xf = x as f64;
        let rec = [
            x.to_string(),
            count.to_string(),
            cell("paley_simple", paley_bound(xf, PaleyVariant::Simple)),
            cell("paley_doubled", paley_bound(xf, PaleyVariant::Doubled)),
            cell("main_bound", main_bound(xf, &params)),
            cell("ford_v", ford_v_estimate(xf, &params)),
        ];
        w.write_record(&rec)?;
    }
    w.flush()?;
    let mut out = w.into_inner().map_err(|e| CliError::from(e.into_error()))?;
    for (column, message) in &notes {
        writeln!(
            out,
            "# {column}: empty cells are outside the formula's domain ({message})"
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> CliResult {
    let mut config = VerifyConfig::default();
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(list) = &args.suites {
        config.suites = parse_suites(list)?;
    }
    config.inject_fault = args.self_test_negative;
    let report = run_verification(&config)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Resource(format!("cannot serialize the report: {e}")))?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{json}")?;
    stdout.flush()?;
    if let Some(path) = &args.out {
        fs::write(path, format!("{json}\n"))?;
    }
    if report.passed() {
        return Ok(());
    }
    let failed: Vec<String> = report
        .suites
        .iter()
        .filter(|s| !s.passed)
        .map(|s| match &s.failure {
            Some(f) => format!("{}: {} (generators {:?})", s.suite, f.invariant, f.generators),
            None => s.suite.to_string(),
        })
        .collect();
    Err(CliError::Verify(failed.join("; ")))
}
