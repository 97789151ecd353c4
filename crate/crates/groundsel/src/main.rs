//! Experiment-harness CLI. The library does the work; this binary loads a
//! config (embedded default or `--config`), applies flag overrides, runs
//! the experiment, writes the report, and prints a summary.
//!
//! Exit codes: 0 on full success, 1 on configuration or usage errors,
//! 2 when some cells failed but the run completed.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use groundsel::bench::{
    emit_report, fit_scaling_exponent, fmt_sig12, run_experiment, ExperimentConfig,
    ExperimentKind, ExperimentReport, ReportFormat,
};

const DEFAULT_SCALING: &str = include_str!("../configs/scaling.toml");
const DEFAULT_LAZY_PROFILE: &str = include_str!("../configs/lazy_profile.toml");
const DEFAULT_EPSILON_SWEEP: &str = include_str!("../configs/epsilon_sweep.toml");
const DEFAULT_MONTE_CARLO: &str = include_str!("../configs/monte_carlo.toml");
const DEFAULT_SBM: &str = include_str!("../configs/sbm.toml");

/// Environment variable overriding the report output directory.
const OUT_ENV: &str = "GROUNDSEL_OUT";

#[derive(Parser)]
#[command(
    name = "groundsel",
    version,
    about = "Leader-selection experiment harness: greedy optimizer scaling, optimality, and distributed studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wall-time and call-count scaling over network size
    Scaling(RunArgs),
    /// Lazy-greedy speedup profile across topologies and k
    LazyProfile(RunArgs),
    /// Stochastic-greedy optimality deviation across epsilon values
    EpsilonSweep(RunArgs),
    /// Deviation distribution of stochastic greedy over many seeds
    MonteCarlo(RunArgs),
    /// Distributed two-stage greedy on stochastic-block-model graphs
    Sbm(RunArgs),
    /// Fit y = a * x^d to (x, y) points from a CSV file
    Fit(FitArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment config; the built-in default is used otherwise
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (precedence: this flag, $GROUNDSEL_OUT, config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the configured seed list with this single seed
    #[arg(long)]
    seed: Option<u64>,
    /// Report format (default from config, else json)
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads for independent experiment cells
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Print the effective config and exit
    #[arg(long)]
    print_config: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct FitArgs {
    /// CSV file with a header line naming the columns
    #[arg(long)]
    input: PathBuf,
    /// Column holding the x values
    #[arg(long, default_value = "n")]
    x_col: String,
    /// Column holding the y values
    #[arg(long, default_value = "y")]
    y_col: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage and flag errors share the config-error exit code; help
            // and --version exit cleanly.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (kind, args) = match cli.command {
        Command::Scaling(args) => (ExperimentKind::Scaling, args),
        Command::LazyProfile(args) => (ExperimentKind::LazyProfile, args),
        Command::EpsilonSweep(args) => (ExperimentKind::EpsilonSweep, args),
        Command::MonteCarlo(args) => (ExperimentKind::MonteCarlo, args),
        Command::Sbm(args) => (ExperimentKind::Sbm, args),
        Command::Fit(args) => {
            return match run_fit(&args) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run_kind(kind, &args) {
        Ok(report) if report.has_failures() => {
            eprintln!(
                "warning: {} of {} cells failed",
                report.failed_cells,
                report.cells.len()
            );
            ExitCode::from(2)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn default_config_text(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::Scaling => DEFAULT_SCALING,
        ExperimentKind::LazyProfile => DEFAULT_LAZY_PROFILE,
        ExperimentKind::EpsilonSweep => DEFAULT_EPSILON_SWEEP,
        ExperimentKind::MonteCarlo => DEFAULT_MONTE_CARLO,
        ExperimentKind::Sbm => DEFAULT_SBM,
    }
}

fn load_config(kind: ExperimentKind, args: &RunArgs) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            ExperimentConfig::from_toml(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => ExperimentConfig::from_toml(default_config_text(kind))
            .context("parsing built-in config")?,
    };
    if cfg.kind != kind {
        bail!(
            "config declares kind '{}' but the subcommand is '{}'",
            cfg.kind,
            kind
        );
    }
    if let Some(seed) = args.seed {
        cfg.seeds = vec![seed];
        cfg.seed_range = None;
        if cfg.kind == ExperimentKind::MonteCarlo {
            cfg.graph_seed = Some(seed);
        }
    }
    // Output directory precedence: --out, $GROUNDSEL_OUT, config, default.
    cfg.output.dir = args
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .or(cfg.output.dir)
        .or_else(|| Some(PathBuf::from("groundsel-out")));
    if let Some(format) = args.format {
        cfg.output.format = Some(match format {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        });
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_kind(kind: ExperimentKind, args: &RunArgs) -> anyhow::Result<ExperimentReport> {
    let cfg = load_config(kind, args)?;
    if args.print_config {
        print!("{}", toml::to_string_pretty(&cfg)?);
        return Ok(ExperimentReport {
            config: cfg,
            cells: Vec::new(),
            aggregates: Vec::new(),
            fits: Vec::new(),
            failed_cells: 0,
        });
    }
    if args.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .context("building worker pool")?;
    let report = pool.install(|| run_experiment(&cfg))?;

    let dir = cfg.output.dir.clone().expect("resolved above");
    let format = cfg.output.format.unwrap_or(ReportFormat::Json);
    let files = emit_report(&report, format, &dir)?;
    print_summary(&report, &files);
    Ok(report)
}

fn print_summary(report: &ExperimentReport, files: &[PathBuf]) {
    let ok = report.cells.len() - report.failed_cells;
    println!(
        "{}: {} cells ({} ok, {} failed)",
        report.config.kind,
        report.cells.len(),
        ok,
        report.failed_cells
    );
    let mut last_table = String::new();
    for row in &report.aggregates {
        if row.table != last_table {
            println!("  [{}]", row.table);
            last_table = row.table.clone();
        }
        let labels = row
            .labels
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let metrics = row
            .metrics
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt_sig12(*v)))
            .collect::<Vec<_>>()
            .join(" ");
        println!("    {labels}: {metrics}");
    }
    for fit in &report.fits {
        let labels = fit
            .labels
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        println!(
            "  fit [{}] {labels}: y = {} * n^{} (r2 = {}, d in [{}, {}])",
            fit.table,
            fmt_sig12(fit.fit.coefficient),
            fmt_sig12(fit.fit.exponent),
            fmt_sig12(fit.fit.r_squared),
            fmt_sig12(fit.fit.exponent_ci95.0),
            fmt_sig12(fit.fit.exponent_ci95.1),
        );
        for p in &fit.predictions {
            println!("      predicted at n={}: {}", p.n, fmt_sig12(p.value));
        }
    }
    for file in files {
        println!("wrote {}", file.display());
    }
}

fn run_fit(args: &FitArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let points = parse_points(&text, &args.x_col, &args.y_col)?;
    let fit = fit_scaling_exponent(&points)?;
    println!(
        "y = {} * x^{}",
        fmt_sig12(fit.coefficient),
        fmt_sig12(fit.exponent)
    );
    println!("r_squared = {}", fmt_sig12(fit.r_squared));
    println!(
        "exponent 95% CI = [{}, {}] (stderr {})",
        fmt_sig12(fit.exponent_ci95.0),
        fmt_sig12(fit.exponent_ci95.1),
        fmt_sig12(fit.exponent_stderr)
    );
    println!("points = {}", fit.points);
    Ok(())
}

fn parse_points(text: &str, x_col: &str, y_col: &str) -> anyhow::Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().context("empty input")?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let find = |name: &str| -> anyhow::Result<usize> {
        columns
            .iter()
            .position(|c| *c == name)
            .with_context(|| format!("column '{name}' not found in header '{header}'"))
    };
    let xi = find(x_col)?;
    let yi = find(y_col)?;
    let mut points = Vec::new();
    for (no, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |i: usize| -> anyhow::Result<f64> {
            fields
                .get(i)
                .with_context(|| format!("line {}: missing field {i}", no + 2))?
                .parse()
                .with_context(|| format!("line {}: invalid number", no + 2))
        };
        points.push((get(xi)?, get(yi)?));
    }
    Ok(points)
}
