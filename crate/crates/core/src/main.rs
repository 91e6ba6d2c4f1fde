use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modorbit::analytic::{abel_identity_check, density_eps, density_gamma, log_grid, s_partial};
use modorbit::baseline::{compare_census, sample_rho_with_jobs, RhoSample};
use modorbit::dynamics::{parse_map, parse_point};
use modorbit::experiments::{
    calibrate, parse_checkpoints, statistic_table, table1, table2, ExperimentConfig, OutputFormat,
    Table, REPRODUCTION_TOLERANCE, TABLE1, TABLE1_CHECKPOINTS, TABLE2, TABLE2_CHECKPOINTS,
};
use modorbit::heights::{d_m, dm_equivalence_check, min_loglog_ratio, DmGrowth, DmGrowthPoint, ExactOrbit};
use modorbit::orbit::{orbit_census_with, Census, CensusOptions, Convention, CycleMethod};
use modorbit::{Error, Result};

const REPRODUCTION_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "modorbit", version, about = "Orbit sizes of rational maps modulo primes")]
struct Cli {
    /// Worker threads for parallel work.
    #[arg(long, global = true, env = "MODORBIT_JOBS")]
    jobs: Option<usize>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true)]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// `z^2+1`, `affine c0 c1 ...` or a `map PN` block.
    #[arg(long, default_value = "z^2+1")]
    map: String,

    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    start: String,

    #[arg(long = "X", default_value_t = 10_000)]
    x: u64,

    #[arg(long, default_value = "orbit")]
    convention: Convention,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    map: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,

    #[arg(long)]
    convention: Option<Convention>,

    /// Comma-separated checkpoints; only used together with `--map`.
    #[arg(long = "X")]
    checkpoints: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit sizes modulo every prime up to X, as CSV.
    Census {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "hashset", value_parser = ["hashset", "brent"])]
        method: String,
    },
    /// The five-map table of (1/log X) sum log p / m_p^2.
    Table1(TableArgs),
    /// The same statistic for z^2+1 up to X = 50000.
    Table2(TableArgs),
    /// Search start points and conventions that reproduce the tables.
    Calibrate,
    /// Growth of D(m) and the divisibility check against a census.
    Dm {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 10)]
        mmax: usize,
        /// Also print every D(m) in decimal on stderr.
        #[arg(long)]
        decimal: bool,
    },
    /// Weighted densities of large orbit sizes.
    Density {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0.9)]
        gamma: f64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Partial sums S(lambda, s) with the Abel rearrangement residual.
    Ssum {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Comma-separated values; defaults to 20 log-spaced points in [1e-3, 1].
        #[arg(long)]
        s: Option<String>,
    },
    /// Mean rho length of random self-maps.
    Baseline {
        /// Comma-separated domain sizes.
        #[arg(long, default_value = "10000")]
        n: String,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Compare this map's orbit sizes with sqrt p instead.
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        start: String,
        #[arg(long = "X", default_value_t = 10_000)]
        x: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn options(jobs: Option<usize>) -> CensusOptions {
    CensusOptions {
        jobs,
        ..CensusOptions::default()
    }
}

fn build_census(source: &Source, options: CensusOptions) -> Result<Census> {
    let phi = parse_map(&source.map)?;
    let start = parse_point(&source.start)?;
    Ok(orbit_census_with(&phi, &start, source.x, options)?.with_convention(source.convention))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} `{}`", t.trim())))
        })
        .collect()
}

fn report_table(table: &Table, golden: Option<Vec<Vec<f64>>>) -> u8 {
    let Some(golden) = golden else {
        return 0;
    };
    let deviations = table.column_deviation(&golden);
    let mut failed = false;
    for (label, dev) in table.columns.iter().zip(&deviations) {
        let ok = *dev <= REPRODUCTION_TOLERANCE;
        failed |= !ok;
        eprintln!(
            "{label}: max deviation {dev:.6} ({})",
            if ok { "reproduced" } else { "NOT reproduced" }
        );
    }
    if !table.columns_nondecreasing() {
        eprintln!("warning: a column decreases");
    }
    if failed { REPRODUCTION_FAILED } else { 0 }
}

fn run_table(args: TableArgs, second: bool, cli_jobs: Option<usize>, cli_format: Option<OutputFormat>, out: &Option<PathBuf>) -> Result<ExitCode> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = args.start {
        config.start = Some(s);
    }
    if let Some(c) = args.convention {
        config.convention = c;
    }
    if let Some(m) = args.map {
        config.map = Some(m);
    }
    if let Some(x) = args.checkpoints {
        config.checkpoints = Some(parse_checkpoints(&x)?);
    }
    let jobs = cli_jobs.or(config.jobs);
    let format = cli_format.unwrap_or(config.format);
    let start = config.start_point()?;
    let opts = options(jobs);
    let (table, golden) = match (&config.map, second) {
        (Some(map), _) => {
            let phi = parse_map(map)?;
            let default: &[u64] = if second { &TABLE2_CHECKPOINTS } else { &TABLE1_CHECKPOINTS };
            let checkpoints = config.checkpoints.clone().unwrap_or_else(|| default.to_vec());
            let table = statistic_table(&[(phi.to_string(), phi)], &start, &checkpoints, config.convention, config.exponent, opts)?;
            (table, None)
        }
        (None, false) => (
            table1(&start, config.convention, opts)?,
            Some(TABLE1.iter().map(|r| r.to_vec()).collect()),
        ),
        (None, true) => (
            table2(&start, config.convention, opts)?,
            Some(TABLE2.iter().map(|&v| vec![v]).collect()),
        ),
    };
    emit(out, &table.render(format))?;
    Ok(ExitCode::from(report_table(&table, golden)))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let opts = options(cli.jobs);
    match cli.command {
        Command::Census { source, method } => {
            let method = if method == "brent" { CycleMethod::Brent } else { CycleMethod::HashSet };
            let census = build_census(&source, CensusOptions { method, ..opts })?;
            emit(&cli.out, &census.to_csv_string())?;
            eprintln!(
                "{} primes up to {}, {} with infinite orbit size",
                census.records.len(),
                census.limit,
                census.exceptional().len()
            );
        }
        Command::Table1(args) => return run_table(args, false, cli.jobs, cli.format, &cli.out),
        Command::Table2(args) => return run_table(args, true, cli.jobs, cli.format, &cli.out),
        Command::Calibrate => {
            let report = calibrate(opts)?;
            emit(&cli.out, &report.to_string())?;
            if !report.all_reproduced() {
                return Ok(ExitCode::from(REPRODUCTION_FAILED));
            }
        }
        Command::Dm { source, mmax, decimal } => {
            let phi = parse_map(&source.map)?;
            let start = parse_point(&source.start)?;
            let census = orbit_census_with(&phi, &start, source.x, opts)?;
            let mut orbit = ExactOrbit::new(&phi, start)?;
            let mut points = Vec::with_capacity(mmax);
            let mut failed = false;
            for m in 1..=mmax {
                let dm = d_m(&mut orbit, m)?;
                let report = dm_equivalence_check(&dm, &census);
                eprintln!(
                    "m={m}: {} violations, {} outside the exceptional set",
                    report.violations.len(),
                    report.unexplained.len()
                );
                failed |= !report.holds();
                if decimal {
                    eprintln!("D({m}) = {}", dm.d);
                }
                points.push(DmGrowthPoint {
                    m,
                    num_factors: dm.factors.len(),
                    bits: dm.d.bits(),
                    loglog: dm.loglog_d(),
                });
            }
            let growth = DmGrowth { points };
            let mut buf = Vec::new();
            growth.write_csv(&mut buf)?;
            emit(&cli.out, &String::from_utf8_lossy(&buf))?;
            if let Some(slope) = growth.slope(8, mmax.min(14)) {
                eprintln!("slope of log log D(m) over m in [8, {}]: {slope:.4}", mmax.min(14));
            }
            if failed {
                return Ok(ExitCode::from(REPRODUCTION_FAILED));
            }
        }
        Command::Density { source, gamma, eps } => {
            let census = build_census(&source, opts)?;
            let mut text = String::from("predicate,X,mass\n");
            for d in [density_gamma(&census, gamma)?, density_eps(&census, eps)?] {
                let _ = writeln!(text, "{},{},{}", d.predicate, d.limit, d.mass);
            }
            emit(&cli.out, &text)?;
            if let Some(r) = min_loglog_ratio(&census) {
                eprintln!("min m_p / log log p = {:.6} at p = {}", r.value, r.p);
            }
        }
        Command::Ssum { source, lambda, s } => {
            let census = build_census(&source, opts)?;
            let grid = match s {
                Some(list) => parse_list(&list, "s")?,
                None => log_grid(1e-3, 1.0, 20),
            };
            let mut text = String::from("lambda,s,S,scaled,abel_residual\n");
            let mut scaled = Vec::with_capacity(grid.len());
            for &s in &grid {
                let sum = s_partial(&census, lambda, s)?;
                let abel = abel_identity_check(&census, lambda, s)?;
                let v = s.powf(1.0 / lambda) * sum.value;
                scaled.push(v);
                let _ = writeln!(text, "{lambda},{s},{},{v},{:e}", sum.value, abel.residual);
            }
            emit(&cli.out, &text)?;
            let max = scaled.iter().copied().fold(f64::MIN, f64::max);
            let min = scaled.iter().copied().fold(f64::MAX, f64::min);
            eprintln!("max/min of s^(1/lambda) S over the grid: {:.4}", max / min);
        }
        Command::Baseline { n, trials, seed, map, start, x } => {
            let sizes: Vec<u64> = parse_list(&n, "n")?;
            let samples = sizes
                .iter()
                .map(|&n| sample_rho_with_jobs(n, trials, seed, cli.jobs))
                .collect::<Result<Vec<_>>>()?;
            for s in &samples {
                eprintln!("n={}: mean_rho/sqrt(n) = {:.4}", s.n, s.mean_rho / (s.n as f64).sqrt());
            }
            let mut buf = Vec::new();
            match map {
                Some(map) => {
                    let source = Source { map, start, x, convention: Convention::Orbit };
                    let cmp = compare_census(&build_census(&source, opts)?, &samples);
                    cmp.write_csv(&mut buf)?;
                    for (q, v) in &cmp.quantiles {
                        eprintln!("weighted quantile {q}: m_p/sqrt(p) = {v:.4}");
                    }
                }
                None => RhoSample::write_csv(&samples, &mut buf)?,
            }
            emit(&cli.out, &String::from_utf8_lossy(&buf))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
