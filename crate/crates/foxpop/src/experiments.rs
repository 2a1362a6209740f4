//! Scenario sweeps, outcome aggregation, default-survival calibration, and
//! the critical-mass estimator.
//!
//! A sweep varies exactly one axis (initial population or one age class's
//! survival, both sexes together) while everything else stays at its base
//! value. Every (scenario, run) pair gets a seed derived from the sweep's
//! base seed, so results are independent of worker count and scheduling.

use crate::engine::{run_simulation, InitParams, ModelParams, RunOutcome, YearRecord};
use crate::population::AgeClass;
use crate::rng::derive_run_seed;
use crate::survival::SurvivalTable;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;
use thiserror::Error;

/// The one parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    InitialN,
    CubSurvival,
    YearlingSurvival,
    AdultSurvival,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 4] = [
        SweepAxis::InitialN,
        SweepAxis::CubSurvival,
        SweepAxis::YearlingSurvival,
        SweepAxis::AdultSurvival,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            SweepAxis::InitialN => "initial-n",
            SweepAxis::CubSurvival => "cub-survival",
            SweepAxis::YearlingSurvival => "yearling-survival",
            SweepAxis::AdultSurvival => "adult-survival",
        }
    }

    pub fn from_slug(slug: &str) -> Option<SweepAxis> {
        SweepAxis::ALL.into_iter().find(|a| a.slug() == slug)
    }

    /// The standard scenario grid: initial populations 20..=470 in steps of
    /// 50, survival deltas -0.20..=+0.20 in steps of 0.05.
    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepAxis::InitialN => (0..10).map(|k| 20.0 + 50.0 * k as f64).collect(),
            _ => (-4..=4).map(|k| k as f64 / 20.0).collect(),
        }
    }

    fn survival_class(self) -> Option<AgeClass> {
        match self {
            SweepAxis::InitialN => None,
            SweepAxis::CubSurvival => Some(AgeClass::Cub),
            SweepAxis::YearlingSurvival => Some(AgeClass::Yearling),
            SweepAxis::AdultSurvival => Some(AgeClass::Adult),
        }
    }
}

/// Label used in output files: `<axis>=<value>`, e.g. `cub-survival=0.05`.
pub fn scenario_label(axis: SweepAxis, value: f64) -> String {
    format!("{}={}", axis.slug(), value)
}

/// A sweep definition.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub runs_per_scenario: u32,
    pub base_seed: u64,
}

impl SweepSpec {
    pub fn with_default_values(axis: SweepAxis, runs_per_scenario: u32, base_seed: u64) -> Self {
        SweepSpec {
            axis,
            values: axis.default_values(),
            runs_per_scenario,
            base_seed,
        }
    }
}

/// One row of the per-run output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub scenario: String,
    pub axis_value: f64,
    pub run_index: u32,
    pub seed: u64,
    pub outcome: RunOutcome,
    pub years: u32,
    pub lambda: Option<f64>,
    pub final_n: u32,
}

/// Aggregate over one scenario's runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioStats {
    pub scenario: String,
    pub axis_value: f64,
    pub n_runs: u32,
    /// Fraction of runs ending extinct, in [0, 1].
    pub pct_extinct: f64,
    /// Fraction of runs reaching the population cap, in [0, 1].
    pub pct_max_limit: f64,
    pub lambda_mean: Option<f64>,
    pub lambda_median: Option<f64>,
    pub lambda_std: Option<f64>,
}

/// One recorded trajectory, value-qualified through the scenario label.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub scenario: String,
    pub run_index: u32,
    pub trajectory: Vec<YearRecord>,
}

/// Full sweep output. `trajectories` stays empty unless requested.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub per_run: Vec<RunRecord>,
    pub per_scenario: Vec<ScenarioStats>,
    pub trajectories: Vec<TrajectoryRecord>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error("sweep values must be nonempty")]
    NoValues,
    #[error("runs_per_scenario must be at least 1")]
    NoRuns,
    #[error("cannot aggregate an empty run list")]
    EmptyAggregate,
}

/// Applies one scenario value on top of the base configuration.
pub fn scenario_setup(
    axis: SweepAxis,
    value: f64,
    base_params: &ModelParams,
    base_init: &InitParams,
) -> (ModelParams, InitParams) {
    let mut params = base_params.clone();
    let mut init = base_init.clone();
    match axis.survival_class() {
        Some(class) => params.survival = params.survival.shifted(class, value),
        None => init.n0 = value.round() as u32,
    }
    (params, init)
}

/// Executes the sweep: `runs_per_scenario` independent seeded runs per
/// scenario value, in parallel, then a deterministic reduction into
/// per-scenario statistics.
pub fn run_sweep(
    spec: &SweepSpec,
    base_params: &ModelParams,
    base_init: &InitParams,
    keep_trajectories: bool,
) -> Result<SweepResult, ExperimentError> {
    if spec.values.is_empty() {
        return Err(ExperimentError::NoValues);
    }
    if spec.runs_per_scenario == 0 {
        return Err(ExperimentError::NoRuns);
    }

    let scenarios: Vec<(ModelParams, InitParams)> = spec
        .values
        .iter()
        .map(|&v| scenario_setup(spec.axis, v, base_params, base_init))
        .collect();

    let runs = spec.runs_per_scenario as usize;
    let total = spec.values.len() * runs;
    let results: Vec<(RunRecord, Option<TrajectoryRecord>)> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let scenario_index = flat / runs;
            let run_index = flat % runs;
            let value = spec.values[scenario_index];
            let (params, init) = &scenarios[scenario_index];
            let seed = derive_run_seed(spec.base_seed, scenario_index as u64, run_index as u64);
            let result = run_simulation(params, init, seed);
            let label = scenario_label(spec.axis, value);
            let record = RunRecord {
                scenario: label.clone(),
                axis_value: value,
                run_index: run_index as u32,
                seed,
                outcome: result.outcome,
                years: result.years(),
                lambda: result.lambda,
                final_n: result.final_n(),
            };
            let trajectory = keep_trajectories.then_some(TrajectoryRecord {
                scenario: label,
                run_index: run_index as u32,
                trajectory: result.trajectory,
            });
            (record, trajectory)
        })
        .collect();

    let mut per_run = Vec::with_capacity(total);
    let mut trajectories = Vec::new();
    for (record, trajectory) in results {
        per_run.push(record);
        trajectories.extend(trajectory);
    }

    let per_scenario = per_run
        .chunks(runs)
        .map(aggregate)
        .collect::<Result<Vec<_>, _>>()?;

    Ok(SweepResult {
        per_run,
        per_scenario,
        trajectories,
    })
}

/// Reduces one scenario's run records to outcome fractions and growth-rate
/// statistics. The lambda statistics cover only runs with a defined rate.
pub fn aggregate(records: &[RunRecord]) -> Result<ScenarioStats, ExperimentError> {
    let first = records.first().ok_or(ExperimentError::EmptyAggregate)?;
    let n = records.len() as f64;
    let extinct = records
        .iter()
        .filter(|r| r.outcome == RunOutcome::Extinct)
        .count() as f64;
    let max_limit = records
        .iter()
        .filter(|r| r.outcome == RunOutcome::MaxLimit)
        .count() as f64;

    let mut lambdas: Vec<f64> = records.iter().filter_map(|r| r.lambda).collect();
    lambdas.sort_by(|a, b| a.total_cmp(b));
    let (lambda_mean, lambda_median, lambda_std) = if lambdas.is_empty() {
        (None, None, None)
    } else {
        let count = lambdas.len() as f64;
        let mean = lambdas.iter().sum::<f64>() / count;
        let median = if lambdas.len() % 2 == 1 {
            lambdas[lambdas.len() / 2]
        } else {
            (lambdas[lambdas.len() / 2 - 1] + lambdas[lambdas.len() / 2]) / 2.0
        };
        let std = if lambdas.len() < 2 {
            0.0
        } else {
            let var = lambdas.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (count - 1.0);
            var.sqrt()
        };
        (Some(mean), Some(median), Some(std))
    };

    Ok(ScenarioStats {
        scenario: first.scenario.clone(),
        axis_value: first.axis_value,
        n_runs: records.len() as u32,
        pct_extinct: extinct / n,
        pct_max_limit: max_limit / n,
        lambda_mean,
        lambda_median,
        lambda_std,
    })
}

/// Smallest initial population whose extinction fraction falls below one
/// half; `None` when no scenario crosses.
pub fn detect_critical_mass(stats: &[ScenarioStats]) -> Option<u32> {
    let mut sorted: Vec<&ScenarioStats> = stats.iter().collect();
    sorted.sort_by(|a, b| a.axis_value.total_cmp(&b.axis_value));
    sorted
        .iter()
        .find(|s| s.pct_extinct < 0.5)
        .map(|s| s.axis_value.round() as u32)
}

/// One calibration target row: outcome fractions for a cub-survival delta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetRow {
    pub delta: f64,
    pub pct_extinct: f64,
    pub pct_max_limit: f64,
}

/// What the default-survival calibration must reproduce on the cub-survival
/// axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationTarget {
    /// Extinction fraction at the unshifted default scenario.
    pub baseline_extinction: f64,
    /// Nonzero-delta rows.
    pub rows: Vec<TargetRow>,
    /// Acceptable absolute error per fraction, e.g. 0.10 for ten
    /// percentage points.
    pub tolerance: f64,
}

#[derive(Debug, Error)]
pub enum TargetError {
    #[error("targets file: {0}")]
    Io(#[from] std::io::Error),
    #[error("targets row {row}: {message}")]
    Malformed { row: usize, message: String },
    #[error("targets must include a delta=0 baseline row")]
    MissingBaseline,
}

impl CalibrationTarget {
    /// The reference outcome fractions the shipped defaults were fitted to
    /// (also available as `targets/cub_survival.csv`).
    pub fn reference_cub_targets() -> CalibrationTarget {
        CalibrationTarget {
            baseline_extinction: 0.99,
            rows: vec![
                TargetRow { delta: 0.05, pct_extinct: 0.55, pct_max_limit: 0.0 },
                TargetRow { delta: 0.10, pct_extinct: 0.01, pct_max_limit: 0.95 },
                TargetRow { delta: 0.15, pct_extinct: 0.0, pct_max_limit: 1.0 },
                TargetRow { delta: 0.20, pct_extinct: 0.0, pct_max_limit: 1.0 },
            ],
            tolerance: 0.10,
        }
    }

    /// All objective rows, baseline included, sorted by delta.
    pub fn objective_rows(&self) -> Vec<TargetRow> {
        let mut rows = vec![TargetRow {
            delta: 0.0,
            pct_extinct: self.baseline_extinction,
            pct_max_limit: 0.0,
        }];
        rows.extend(self.rows.iter().copied());
        rows.sort_by(|a, b| a.delta.total_cmp(&b.delta));
        rows
    }

    /// Reads `delta,pct_extinct,pct_max_limit` rows; the delta=0 row is the
    /// baseline and must be present.
    pub fn from_csv_reader<R: Read>(reader: R, tolerance: f64) -> Result<CalibrationTarget, TargetError> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        {
            let headers = csv_reader.headers().map_err(|e| TargetError::Malformed {
                row: 0,
                message: e.to_string(),
            })?;
            let got: Vec<&str> = headers.iter().collect();
            if got != ["delta", "pct_extinct", "pct_max_limit"] {
                return Err(TargetError::Malformed {
                    row: 0,
                    message: format!(
                        "header must be `delta,pct_extinct,pct_max_limit`, got `{}`",
                        got.join(",")
                    ),
                });
            }
        }
        let mut baseline = None;
        let mut rows = Vec::new();
        for (i, record) in csv_reader.records().enumerate() {
            let row = i + 1;
            let record = record.map_err(|e| TargetError::Malformed {
                row,
                message: e.to_string(),
            })?;
            let parse = |idx: usize| -> Result<f64, TargetError> {
                record
                    .get(idx)
                    .ok_or_else(|| TargetError::Malformed {
                        row,
                        message: "expected 3 fields".into(),
                    })?
                    .parse::<f64>()
                    .map_err(|e| TargetError::Malformed {
                        row,
                        message: format!("bad number: {e}"),
                    })
            };
            let (delta, pct_extinct, pct_max_limit) = (parse(0)?, parse(1)?, parse(2)?);
            for (name, v) in [("pct_extinct", pct_extinct), ("pct_max_limit", pct_max_limit)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(TargetError::Malformed {
                        row,
                        message: format!("{name} must be a fraction in [0, 1], got {v}"),
                    });
                }
            }
            if delta == 0.0 {
                if pct_max_limit != 0.0 {
                    return Err(TargetError::Malformed {
                        row,
                        message: "the delta=0 baseline is an extinction target; its pct_max_limit must be 0"
                            .into(),
                    });
                }
                baseline = Some(pct_extinct);
            } else {
                rows.push(TargetRow {
                    delta,
                    pct_extinct,
                    pct_max_limit,
                });
            }
        }
        Ok(CalibrationTarget {
            baseline_extinction: baseline.ok_or(TargetError::MissingBaseline)?,
            rows,
            tolerance,
        })
    }

    pub fn from_csv_path(path: &Path, tolerance: f64) -> Result<CalibrationTarget, TargetError> {
        Self::from_csv_reader(std::fs::File::open(path)?, tolerance)
    }
}

/// Search strategy for [`calibrate_defaults`]: either an explicit candidate
/// list, or a coarse lattice followed by two local refinement passes around
/// the leaders.
///
/// The lattice is four-dimensional: per-class survival levels for cubs
/// (sexes equal), female yearlings, and female adults, plus a male survival
/// deficit subtracted from the yearling and adult male entries. Deficit zero
/// is the sexes-equal subspace, so symmetric tables compete on equal
/// footing and the targets decide whether sex asymmetry is warranted.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSearch {
    /// Evaluate exactly these tables and skip the grid stages.
    pub candidates: Option<Vec<SurvivalTable>>,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_step: f64,
    /// Male survival deficits explored in the coarse pass.
    pub male_deficits: Vec<f64>,
    /// Runs per target row in the coarse pass.
    pub coarse_runs: u32,
    /// Runs per target row in the first refinement pass.
    pub refine_runs: u32,
    /// Runs per target row when scoring finalists.
    pub final_runs: u32,
    /// How many leaders survive into each refinement pass.
    pub keep_top: usize,
    pub base_seed: u64,
}

impl Default for CalibrationSearch {
    fn default() -> Self {
        CalibrationSearch {
            candidates: None,
            grid_min: 0.2,
            grid_max: 0.9,
            grid_step: 0.1,
            male_deficits: vec![0.0, 0.1, 0.2, 0.3],
            coarse_runs: 16,
            refine_runs: 32,
            final_runs: 100,
            keep_top: 6,
            base_seed: 0x0f0f_0f0f,
        }
    }
}

impl CalibrationSearch {
    /// Degenerate search over an explicit list, mostly for tests.
    pub fn over_candidates(candidates: Vec<SurvivalTable>, runs: u32, base_seed: u64) -> Self {
        CalibrationSearch {
            candidates: Some(candidates),
            final_runs: runs,
            base_seed,
            ..CalibrationSearch::default()
        }
    }
}

/// Point in the calibration search space.
#[derive(Debug, Clone, Copy, PartialEq)]
struct CandidatePoint {
    cub: f64,
    yearling_f: f64,
    adult_f: f64,
    male_deficit: f64,
}

impl CandidatePoint {
    fn clamped(self) -> CandidatePoint {
        CandidatePoint {
            cub: self.cub.clamp(0.0, 1.0),
            yearling_f: self.yearling_f.clamp(0.0, 1.0),
            adult_f: self.adult_f.clamp(0.0, 1.0),
            male_deficit: self.male_deficit.clamp(0.0, 1.0),
        }
    }

    fn table(self) -> SurvivalTable {
        SurvivalTable::new([
            [self.cub, self.cub],
            [self.yearling_f, (self.yearling_f - self.male_deficit).max(0.0)],
            [self.adult_f, (self.adult_f - self.male_deficit).max(0.0)],
        ])
        .expect("clamped candidate entries lie in [0, 1]")
    }

    fn key(self) -> (i64, i64, i64, i64) {
        let k = |v: f64| (v * 1000.0).round() as i64;
        (
            k(self.cub),
            k(self.yearling_f),
            k(self.adult_f),
            k(self.male_deficit),
        )
    }
}

/// Achieved-versus-target fractions for one calibration row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AchievedRow {
    pub delta: f64,
    pub target_extinct: f64,
    pub achieved_extinct: f64,
    pub target_max_limit: f64,
    pub achieved_max_limit: f64,
}

/// Calibration result: the winning table, its achieved fractions at
/// `final_runs` runs per row, and whether every row landed within
/// tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationOutcome {
    pub table: SurvivalTable,
    pub achieved: Vec<AchievedRow>,
    pub sse: f64,
    pub within_tolerance: bool,
}

/// Scores one candidate: common derived seeds across candidates so the
/// comparison is paired, fractions per objective row, summed squared error.
fn score_candidate(
    table: &SurvivalTable,
    rows: &[TargetRow],
    runs: u32,
    base_seed: u64,
    base_params: &ModelParams,
    init: &InitParams,
) -> (Vec<AchievedRow>, f64) {
    let mut achieved = Vec::with_capacity(rows.len());
    let mut sse = 0.0;
    for (row_index, row) in rows.iter().enumerate() {
        let params = ModelParams {
            survival: table.shifted(AgeClass::Cub, row.delta),
            ..base_params.clone()
        };
        let mut extinct = 0u32;
        let mut max_limit = 0u32;
        for run in 0..runs {
            let seed = derive_run_seed(base_seed, row_index as u64, u64::from(run));
            match run_simulation(&params, init, seed).outcome {
                RunOutcome::Extinct => extinct += 1,
                RunOutcome::MaxLimit => max_limit += 1,
                RunOutcome::HorizonReached => {}
            }
        }
        let achieved_extinct = f64::from(extinct) / f64::from(runs);
        let achieved_max_limit = f64::from(max_limit) / f64::from(runs);
        sse += (achieved_extinct - row.pct_extinct).powi(2)
            + (achieved_max_limit - row.pct_max_limit).powi(2);
        achieved.push(AchievedRow {
            delta: row.delta,
            target_extinct: row.pct_extinct,
            achieved_extinct,
            target_max_limit: row.pct_max_limit,
            achieved_max_limit,
        });
    }
    (achieved, sse)
}

/// Ranks `candidates` by SSE at `runs` runs per row; returns (table, sse)
/// sorted best-first. Ties resolve to the earlier candidate.
fn rank_candidates(
    candidates: &[SurvivalTable],
    rows: &[TargetRow],
    runs: u32,
    base_seed: u64,
    base_params: &ModelParams,
    init: &InitParams,
) -> Vec<(SurvivalTable, f64)> {
    let mut scored: Vec<(usize, SurvivalTable, f64)> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, table)| {
            let (_, sse) = score_candidate(table, rows, runs, base_seed, base_params, init);
            (i, *table, sse)
        })
        .collect();
    scored.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
    scored.into_iter().map(|(_, t, s)| (t, s)).collect()
}

/// Ranks points of the 4-parameter lattice; same contract as
/// [`rank_candidates`].
fn rank_points(
    points: &[CandidatePoint],
    rows: &[TargetRow],
    runs: u32,
    base_seed: u64,
    base_params: &ModelParams,
    init: &InitParams,
) -> Vec<(CandidatePoint, f64)> {
    let mut scored: Vec<(usize, CandidatePoint, f64)> = points
        .par_iter()
        .enumerate()
        .map(|(i, point)| {
            let (_, sse) =
                score_candidate(&point.table(), rows, runs, base_seed, base_params, init);
            (i, *point, sse)
        })
        .collect();
    scored.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
    scored.into_iter().map(|(_, p, s)| (p, s)).collect()
}

fn neighborhood(
    seeds: &[CandidatePoint],
    level_offsets: &[f64],
    deficit_offsets: &[f64],
) -> Vec<CandidatePoint> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for seed in seeds {
        for &dc in level_offsets {
            for &dy in level_offsets {
                for &da in level_offsets {
                    for &dd in deficit_offsets {
                        let point = CandidatePoint {
                            cub: seed.cub + dc,
                            yearling_f: seed.yearling_f + dy,
                            adult_f: seed.adult_f + da,
                            male_deficit: seed.male_deficit + dd,
                        }
                        .clamped();
                        if seen.insert(point.key()) {
                            out.push(point);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Recovers default survival probabilities by matching the target outcome
/// fractions on the cub-survival axis. Grid-plus-refine: a coarse lattice
/// over per-class levels and the male deficit, two shrinking local passes
/// around the leaders, then a final scoring of the survivors at full run
/// count.
pub fn calibrate_defaults(
    target: &CalibrationTarget,
    search: &CalibrationSearch,
    base_params: &ModelParams,
    init: &InitParams,
) -> CalibrationOutcome {
    let rows = target.objective_rows();

    let finalists: Vec<SurvivalTable> = match &search.candidates {
        Some(explicit) => explicit.clone(),
        None => {
            let mut lattice = Vec::new();
            let steps = ((search.grid_max - search.grid_min) / search.grid_step).round() as usize;
            let level = |i: usize| search.grid_min + i as f64 * search.grid_step;
            for c in 0..=steps {
                for y in 0..=steps {
                    for a in 0..=steps {
                        for &d in &search.male_deficits {
                            lattice.push(
                                CandidatePoint {
                                    cub: level(c),
                                    yearling_f: level(y),
                                    adult_f: level(a),
                                    male_deficit: d,
                                }
                                .clamped(),
                            );
                        }
                    }
                }
            }
            let coarse = rank_points(
                &lattice,
                &rows,
                search.coarse_runs,
                search.base_seed,
                base_params,
                init,
            );
            let leaders: Vec<CandidatePoint> =
                coarse.iter().take(search.keep_top).map(|(p, _)| *p).collect();

            let refine_pool = neighborhood(
                &leaders,
                &[-0.05, -0.025, 0.0, 0.025, 0.05],
                &[-0.05, 0.0, 0.05],
            );
            let refined = rank_points(
                &refine_pool,
                &rows,
                search.refine_runs,
                search.base_seed,
                base_params,
                init,
            );
            let refined_leaders: Vec<CandidatePoint> =
                refined.iter().take(search.keep_top).map(|(p, _)| *p).collect();

            neighborhood(&refined_leaders, &[-0.01, 0.0, 0.01], &[-0.02, 0.0, 0.02])
                .into_iter()
                .map(CandidatePoint::table)
                .collect()
        }
    };

    let ranked = rank_candidates(
        &finalists,
        &rows,
        search.final_runs,
        search.base_seed,
        base_params,
        init,
    );
    let (winner, _) = ranked.first().expect("search space is never empty");
    let (achieved, sse) = score_candidate(
        winner,
        &rows,
        search.final_runs,
        search.base_seed,
        base_params,
        init,
    );
    let within_tolerance = achieved.iter().all(|r| {
        (r.achieved_extinct - r.target_extinct).abs() <= target.tolerance
            && (r.achieved_max_limit - r.target_max_limit).abs() <= target.tolerance
    });
    CalibrationOutcome {
        table: *winner,
        achieved,
        sse,
        within_tolerance,
    }
}
