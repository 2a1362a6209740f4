//! Byte-stable CSV rendering for run, scenario, and trajectory records.
//!
//! Files use `\n` separators, end with a trailing newline, and format reals
//! with Rust's shortest round-trip representation, so identical inputs
//! always produce identical bytes. Absent growth rates render as empty
//! fields.

use crate::experiments::{RunRecord, ScenarioStats, TrajectoryRecord};
use std::fmt::Write;

pub const RUN_HEADER: &str = "scenario,axis_value,run_index,seed,outcome,years,lambda,final_n";
pub const SCENARIO_HEADER: &str =
    "scenario,axis_value,n_runs,pct_extinct,pct_max_limit,lambda_mean,lambda_median,lambda_std";
pub const TRAJECTORY_HEADER: &str = "scenario,run_index,year,n,n_cubs,n_yearlings,n_adults";

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn run_records_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(RUN_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scenario,
            r.axis_value,
            r.run_index,
            r.seed,
            r.outcome,
            r.years,
            opt(r.lambda),
            r.final_n
        )
        .expect("write to string");
    }
    out
}

pub fn scenario_stats_csv(stats: &[ScenarioStats]) -> String {
    let mut out = String::from(SCENARIO_HEADER);
    out.push('\n');
    for s in stats {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.scenario,
            s.axis_value,
            s.n_runs,
            s.pct_extinct,
            s.pct_max_limit,
            opt(s.lambda_mean),
            opt(s.lambda_median),
            opt(s.lambda_std)
        )
        .expect("write to string");
    }
    out
}

pub fn trajectories_csv(trajectories: &[TrajectoryRecord]) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for t in trajectories {
        for record in &t.trajectory {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                t.scenario,
                t.run_index,
                record.year,
                record.n_non_cub,
                record.n_cubs,
                record.n_yearlings,
                record.n_adults
            )
            .expect("write to string");
        }
    }
    out
}

/// Human-oriented scenario summary for standard output.
pub fn summary_table(stats: &[ScenarioStats]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<24} {:>6} {:>12} {:>14} {:>12}",
        "scenario", "runs", "pct_extinct", "pct_max_limit", "lambda_mean"
    )
    .expect("write to string");
    for s in stats {
        writeln!(
            out,
            "{:<24} {:>6} {:>12} {:>14} {:>12}",
            s.scenario,
            s.n_runs,
            format!("{:.2}", s.pct_extinct),
            format!("{:.2}", s.pct_max_limit),
            s.lambda_mean
                .map(|l| format!("{l:.4}"))
                .unwrap_or_else(|| "-".into()),
        )
        .expect("write to string");
    }
    out
}
