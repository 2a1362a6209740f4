//! Command-line entry point: single runs, scenario sweeps, survival-table
//! estimation from cohort data, and default-survival calibration.
//!
//! Exit statuses: 0 success, 2 configuration or validation failure, 3 I/O
//! failure, 4 calibration finished outside tolerance.

use clap::{Parser, Subcommand};
use foxpop::config::{ConfigDocument, ConfigError};
use foxpop::csvout;
use foxpop::experiments::{
    calibrate_defaults, run_sweep, CalibrationSearch, CalibrationTarget, RunRecord, SweepAxis,
    TargetError,
};
use foxpop::survival::{direct_estimate, estimate_bayes, CohortCounts, CohortError, SurvivalTable};
use foxpop::run_simulation;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "foxpop", version, about = "Individual-based island fox population simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one simulation run and write its result (and optionally its
    /// trajectory) as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Run seed; FOXPOP_SEED supplies the default.
        #[arg(long, env = "FOXPOP_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the year-by-year trajectory.
        #[arg(long)]
        trajectories: bool,
    },
    /// Run one sweep axis: many seeded runs per scenario value, with
    /// per-run and per-scenario CSV output.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Axis to vary: initial-n, cub-survival, yearling-survival or
        /// adult-survival. Falls back to the config's sweep section.
        #[arg(long)]
        axis: Option<String>,
        /// Runs per scenario (default: config, then 100).
        #[arg(long)]
        runs: Option<u32>,
        /// Sweep base seed; FOXPOP_SEED supplies the default.
        #[arg(long, env = "FOXPOP_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: machine parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// Also write every run's trajectory.
        #[arg(long)]
        trajectories: bool,
    },
    /// Estimate the survival table from a cohort CSV
    /// (`age_class,sex,survived,died`).
    Estimate {
        #[arg(long)]
        cohort: PathBuf,
        /// bayes (independence decomposition) or direct (per-cell ratio).
        #[arg(long, default_value = "bayes")]
        method: String,
        /// Write the table as a JSON config fragment.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for survival defaults that reproduce target outcome
    /// fractions on the cub-survival axis.
    Calibrate {
        #[arg(long)]
        config: PathBuf,
        /// Target rows: `delta,pct_extinct,pct_max_limit` with a delta=0
        /// baseline.
        #[arg(long)]
        targets: PathBuf,
        /// Output path for the winning table (JSON config fragment).
        #[arg(long)]
        out: PathBuf,
        /// Runs per target row when scoring finalists.
        #[arg(long, default_value_t = 100)]
        runs: u32,
        /// Acceptable absolute error per fraction.
        #[arg(long, default_value_t = 0.10)]
        tolerance: f64,
        /// Search seed; FOXPOP_SEED supplies the default.
        #[arg(long, env = "FOXPOP_SEED")]
        seed: Option<u64>,
        /// Worker threads (default: machine parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// Smoke-test mode: a minimal search lattice instead of the full
        /// grid-plus-refine.
        #[arg(long)]
        quick: bool,
    },
}

enum CliError {
    Config(String),
    Io(String),
    OutOfTolerance,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::OutOfTolerance => 4,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io(io) => CliError::Io(format!("config: {io}")),
            invalid => CliError::Config(invalid.to_string()),
        }
    }
}

impl From<CohortError> for CliError {
    fn from(e: CohortError) -> Self {
        match e {
            CohortError::Io(io) => CliError::Io(format!("cohort: {io}")),
            malformed => CliError::Config(malformed.to_string()),
        }
    }
}

impl From<TargetError> for CliError {
    fn from(e: TargetError) -> Self {
        match e {
            TargetError::Io(io) => CliError::Io(format!("targets: {io}")),
            malformed => CliError::Config(malformed.to_string()),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))
}

fn parse_axis(axis: Option<&str>) -> Result<Option<SweepAxis>, CliError> {
    match axis {
        None => Ok(None),
        Some(slug) => SweepAxis::from_slug(slug).map(Some).ok_or_else(|| {
            CliError::Config(format!(
                "unknown axis `{slug}` (expected one of {})",
                SweepAxis::ALL.map(|a| a.slug()).join(", ")
            ))
        }),
    }
}

fn cmd_run(
    config: &Path,
    seed: Option<u64>,
    out: &Path,
    trajectories: bool,
) -> Result<(), CliError> {
    let document = ConfigDocument::from_json_path(config)?;
    let seed = seed.unwrap_or(0);
    let result = run_simulation(&document.model, &document.init, seed);

    ensure_out_dir(out)?;
    let record = RunRecord {
        scenario: "single".into(),
        axis_value: 0.0,
        run_index: 0,
        seed,
        outcome: result.outcome,
        years: result.years(),
        lambda: result.lambda,
        final_n: result.final_n(),
    };
    write_file(&out.join("run.csv"), &csvout::run_records_csv(&[record]))?;
    if trajectories {
        let record = foxpop::experiments::TrajectoryRecord {
            scenario: "single".into(),
            run_index: 0,
            trajectory: result.trajectory.clone(),
        };
        write_file(&out.join("trajectory.csv"), &csvout::trajectories_csv(&[record]))?;
    }

    println!("outcome: {}", result.outcome);
    println!("years: {}", result.years());
    match result.lambda {
        Some(lambda) => println!("lambda: {lambda}"),
        None => println!("lambda: undefined (trajectory shorter than burn-in window)"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config: &Path,
    axis: Option<&str>,
    runs: Option<u32>,
    seed: Option<u64>,
    out: &Path,
    workers: Option<usize>,
    trajectories: bool,
) -> Result<(), CliError> {
    let document = ConfigDocument::from_json_path(config)?;
    let spec = document.sweep_spec(parse_axis(axis)?, runs, seed)?;
    let pool = thread_pool(workers)?;
    let result = pool
        .install(|| run_sweep(&spec, &document.model, &document.init, trajectories))
        .map_err(|e| CliError::Config(e.to_string()))?;

    ensure_out_dir(out)?;
    write_file(&out.join("runs.csv"), &csvout::run_records_csv(&result.per_run))?;
    write_file(
        &out.join("scenarios.csv"),
        &csvout::scenario_stats_csv(&result.per_scenario),
    )?;
    if trajectories {
        write_file(
            &out.join("trajectories.csv"),
            &csvout::trajectories_csv(&result.trajectories),
        )?;
    }
    print!("{}", csvout::summary_table(&result.per_scenario));
    Ok(())
}

/// JSON fragment matching the `model.survival` subtree of a config
/// document, so estimates and calibration output can be pasted in directly.
#[derive(Serialize)]
struct SurvivalFragment<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    notes: Option<&'a str>,
    survival: SurvivalTable,
}

fn survival_fragment_json(table: SurvivalTable, notes: Option<&str>) -> String {
    let mut text = serde_json::to_string_pretty(&SurvivalFragment { notes, survival: table })
        .expect("fragment serializes");
    text.push('\n');
    text
}

fn print_table(table: &SurvivalTable) {
    for (age_class, sex) in foxpop::survival::all_cells() {
        println!("{}_{} = {}", age_class, sex, table.get(age_class, sex));
    }
}

fn cmd_estimate(cohort: &Path, method: &str, out: Option<&Path>) -> Result<(), CliError> {
    let counts = CohortCounts::from_csv_path(cohort)?;
    let table = match method {
        "bayes" => {
            let (table, diagnostics) =
                estimate_bayes(&counts).map_err(|e| CliError::Config(e.to_string()))?;
            print_table(&table);
            if diagnostics.clamped_cells.is_empty() {
                println!("clamped cells: none");
            } else {
                for (age_class, sex) in &diagnostics.clamped_cells {
                    println!(
                        "clamped: ({age_class}, {sex}) raw value {} brought into [0, 1]",
                        diagnostics.raw_value(*age_class, *sex)
                    );
                }
            }
            table
        }
        "direct" => {
            let table = direct_estimate(&counts).map_err(|e| CliError::Config(e.to_string()))?;
            print_table(&table);
            table
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown method `{other}` (expected bayes or direct)"
            )))
        }
    };
    if let Some(path) = out {
        write_file(path, &survival_fragment_json(table, None))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_calibrate(
    config: &Path,
    targets: &Path,
    out: &Path,
    runs: u32,
    tolerance: f64,
    seed: Option<u64>,
    workers: Option<usize>,
    quick: bool,
) -> Result<(), CliError> {
    if runs == 0 {
        return Err(CliError::Config("--runs must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&tolerance) {
        return Err(CliError::Config("--tolerance must be a fraction in [0, 1]".into()));
    }
    let document = ConfigDocument::from_json_path(config)?;
    let target = CalibrationTarget::from_csv_path(targets, tolerance)?;
    let mut search = if quick {
        CalibrationSearch {
            grid_step: 0.35,
            male_deficits: vec![0.0, 0.3],
            coarse_runs: 8,
            refine_runs: 8,
            keep_top: 2,
            ..CalibrationSearch::default()
        }
    } else {
        CalibrationSearch::default()
    };
    search.final_runs = runs;
    if let Some(seed) = seed {
        search.base_seed = seed;
    }

    let pool = thread_pool(workers)?;
    let outcome = pool.install(|| calibrate_defaults(&target, &search, &document.model, &document.init));

    let mut report = String::new();
    writeln!(
        report,
        "{:>6} {:>15} {:>17} {:>17} {:>19}",
        "delta", "target_extinct", "achieved_extinct", "target_max_limit", "achieved_max_limit"
    )
    .expect("write to string");
    for row in &outcome.achieved {
        writeln!(
            report,
            "{:>6} {:>15} {:>17} {:>17} {:>19}",
            row.delta,
            row.target_extinct,
            row.achieved_extinct,
            row.target_max_limit,
            row.achieved_max_limit
        )
        .expect("write to string");
    }
    print!("{report}");
    println!("sse: {}", outcome.sse);
    print_table(&outcome.table);

    let notes = format!(
        "calibrated against {} with {} runs per row (base seed {}); sse {}",
        targets.display(),
        runs,
        search.base_seed,
        outcome.sse
    );
    write_file(out, &survival_fragment_json(outcome.table, Some(&notes)))?;

    if outcome.within_tolerance {
        println!("within tolerance: yes");
        Ok(())
    } else {
        println!("within tolerance: no (best candidate still written)");
        Err(CliError::OutOfTolerance)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            config,
            seed,
            out,
            trajectories,
        } => cmd_run(config, *seed, out, *trajectories),
        Command::Sweep {
            config,
            axis,
            runs,
            seed,
            out,
            workers,
            trajectories,
        } => cmd_sweep(config, axis.as_deref(), *runs, *seed, out, *workers, *trajectories),
        Command::Estimate { cohort, method, out } => {
            cmd_estimate(cohort, method, out.as_deref())
        }
        Command::Calibrate {
            config,
            targets,
            out,
            runs,
            tolerance,
            seed,
            workers,
            quick,
        } => cmd_calibrate(config, targets, out, *runs, *tolerance, *seed, *workers, *quick),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            match &error {
                CliError::Config(message) | CliError::Io(message) => eprintln!("error: {message}"),
                CliError::OutOfTolerance => {}
            }
            ExitCode::from(error.code())
        }
    }
}
