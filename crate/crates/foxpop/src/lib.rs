//! foxpop: a discrete-time, individual-based simulator of a small island
//! Arctic fox population.
//!
//! Each fox is an agent with sex, age, residency status, and a home range.
//! A simulated year applies winter survival (Bernoulli per agent, with
//! age/sex-conditional probabilities), aging with elimination past the
//! maximum age, rule-based dispersal of floaters, and stochastic
//! reproduction. Runs stop at extinction, at the island's assumed capacity,
//! or at the horizon.
//!
//! On top of single runs sit an experiment harness (scenario sweeps over
//! initial population and per-class survival shifts, with deterministic
//! per-run seeding), estimators that recover the survival table from tagged
//! cohort counts, and a calibration search for the unpublished default
//! survival probabilities.

pub mod config;
pub mod csvout;
pub mod engine;
pub mod experiments;
pub mod lifecycle;
pub mod population;
pub mod rng;
pub mod survival;

pub use engine::{
    compute_lambda, init_population, run_simulation, step_year, InitParams, ModelParams,
    RunOutcome, RunResult, YearRecord,
};
pub use experiments::{
    aggregate, calibrate_defaults, detect_critical_mass, run_sweep, CalibrationOutcome,
    CalibrationSearch, CalibrationTarget, RunRecord, ScenarioStats, SweepAxis, SweepSpec,
};
pub use lifecycle::{
    aging_phase, dispersal_phase, reproduction_phase, survival_phase, PhaseEvents, ReproParams,
};
pub use population::{classify_age, Agent, AgeClass, HomeRange, PopulationState, RangeId, Sex};
pub use rng::{derive_run_seed, SimRng};
pub use survival::{
    direct_estimate, estimate_bayes, shift_table, CohortCounts, SurvivalDiagnostics, SurvivalTable,
};
