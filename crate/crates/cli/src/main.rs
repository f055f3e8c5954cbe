mod config;
mod error;
mod output;
mod scenario;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qmirror::{minkowski_scan, ElementBudget};

use config::ScenarioConfig;
use error::CliError;

/// Single-photon reflection off a quantum mirror.
#[derive(Parser)]
#[command(name = "qmirror", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its record.
    Run { config: PathBuf },
    /// Run a scenario for each value along one axis.
    Sweep {
        config: PathBuf,
        /// sigma_x_over_lambda, frac_bandwidth, bounces or refr_index
        #[arg(long)]
        axis: String,
        #[arg(long, allow_negative_numbers = true, requires_all = ["to", "points"], conflicts_with = "values")]
        from: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Explicit axis values, instead of --from/--to/--points.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Option<Vec<f64>>,
    },
    /// Delta-mirror and monochromatic limit diagnostics.
    Limits { config: PathBuf },
    /// Momentum kick against refractive index at fixed frequency.
    Minkowski {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<f64>,
    },
}

fn budget() -> Result<ElementBudget, CliError> {
    match std::env::var("QMIRROR_GRID_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&b| b > 0)
            .map(ElementBudget)
            .ok_or_else(|| CliError::Config(format!("QMIRROR_GRID_BUDGET must be a positive integer, got `{v}`"))),
        Err(_) => Ok(ElementBudget::default()),
    }
}

fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let loaded = config::load(path)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    Ok(loaded.config)
}

fn emit(c: &ScenarioConfig, text: &str) -> Result<(), CliError> {
    match &c.path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    let budget = budget()?;
    match cli.command {
        Command::Run { config } => {
            let c = load(&config)?;
            let record = scenario::run(&c, budget, true)?;
            emit(&c, &output::run_record(c.format, &record))?;
            if let Some(problem) = record.problem() {
                return Err(CliError::Resolution(problem));
            }
            Ok(0)
        }
        Command::Sweep {
            config,
            axis,
            from,
            to,
            points,
            values,
        } => {
            let c = load(&config)?;
            let axis = sweep::Axis::parse(&axis)?;
            let values = match (values, from, to, points) {
                (Some(v), ..) => v,
                (None, Some(f), Some(t), Some(n)) => sweep::linspace(f, t, n)?,
                _ => return Err(CliError::Config("give --values or all of --from, --to and --points".into())),
            };
            let rows = sweep::run(&c, axis, &values, budget)?;
            emit(&c, &output::sweep(c.format, &rows))?;
            let failed: Vec<&sweep::SweepRow> = rows.iter().filter(|r| r.error.is_some()).collect();
            for r in &failed {
                eprintln!("{} = {}: {}", axis.name(), r.value, r.error.as_deref().unwrap_or(""));
            }
            Ok(rows.iter().map(|r| r.code).max().unwrap_or(0))
        }
        Command::Limits { config } => {
            let c = load(&config)?;
            let records = scenario::limits(&c, budget)?;
            emit(&c, &output::limits(c.format, &records))?;
            for r in records.iter().filter(|r| !r.holds) {
                eprintln!("note: the {} limit does not hold for this config", r.limit);
            }
            Ok(0)
        }
        Command::Minkowski { config, n_list } => {
            let c = load(&config)?;
            if let Some(n) = n_list.iter().find(|n| !(**n >= 1.0 && n.is_finite())) {
                return Err(CliError::Config(format!("refractive index {n} must be at least 1")));
            }
            let scan = minkowski_scan(1.0, c.theta_deg.to_radians(), &n_list)?;
            emit(&c, &output::minkowski(c.format, &scan))?;
            eprintln!(
                "slope {} (expected 2ω cos θ = {}), relative error {:e}",
                output::num(scan.slope),
                output::num(scan.slope_expected),
                scan.slope_relative_error()
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qmirror: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
