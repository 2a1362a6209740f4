//! Annual step composition, run loop with stopping rules, deterministic
//! seeding, and trajectory recording.

use crate::lifecycle::{
    aging_phase, dispersal_phase, reproduction_phase, survival_phase, PhaseEvents, ReproParams,
};
use crate::population::{PopulationState, RangeId, Sex};
use crate::rng::SimRng;
use crate::survival::SurvivalTable;
use rand::Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Everything a single run needs besides the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub num_ranges: u32,
    pub survival: SurvivalTable,
    pub repro: ReproParams,
    pub max_age: u32,
    /// Non-cub population below this ends the run as extinct.
    pub extinction_threshold: u32,
    /// Non-cub population reaching this ends the run at the assumed
    /// ecological capacity.
    pub max_population: u32,
    /// Maximum simulated years per run.
    pub horizon: u32,
    /// Years excluded from the front of the growth-rate window.
    pub burn_in: u32,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            num_ranges: 60,
            survival: SurvivalTable::default_calibrated(),
            repro: ReproParams::default(),
            max_age: 12,
            extinction_threshold: 10,
            max_population: 500,
            horizon: 50,
            burn_in: 3,
        }
    }
}

impl SurvivalTable {
    /// The shipped default survival probabilities. These are not field
    /// measurements: they were recovered by `foxpop calibrate` against
    /// `targets/cub_survival.csv` (see the README) so that the default
    /// scenario reproduces the reference outcome fractions. Male yearling
    /// and adult survival sit below female survival; that asymmetry is what
    /// gives small populations their accelerated decline.
    pub fn default_calibrated() -> SurvivalTable {
        SurvivalTable::new([[0.225, 0.225], [0.84, 0.74], [0.785, 0.685]])
            .expect("calibrated entries lie in [0, 1]")
    }
}

/// Initial population composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitParams {
    /// Initial yearling + adult head count.
    pub n0: u32,
    /// Share of adults in the full initial population, cubs included.
    pub prop_adult: f64,
    pub prop_yearling: f64,
    pub prop_cub: f64,
    pub adult_age_min: u32,
    pub adult_age_max: u32,
}

impl Default for InitParams {
    fn default() -> Self {
        InitParams {
            n0: 120,
            prop_adult: 0.24,
            prop_yearling: 0.15,
            prop_cub: 0.61,
            adult_age_min: 2,
            adult_age_max: 8,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InitError {
    #[error("num_ranges must be at least 1")]
    NoRanges,
    #[error("prop_adult + prop_yearling must be positive when n0 > 0")]
    NoNonCubShare,
}

/// Builds the year-0 population. The three proportions describe the full
/// population including cubs while `n0` counts only yearlings and adults, so
/// the cub head count is scaled by the same non-cub denominator:
/// adults = round(n0 * prop_adult / (prop_adult + prop_yearling)),
/// yearlings = n0 - adults,
/// cubs = round(n0 * prop_cub / (prop_adult + prop_yearling)).
///
/// Sexes are i.i.d. fair, adult ages uniform on
/// [adult_age_min, adult_age_max], every agent lands on a uniformly random
/// range, and all residency flags start false (the first dispersal sets
/// them).
pub fn init_population(
    init: &InitParams,
    num_ranges: u32,
    rng: &mut SimRng,
) -> Result<PopulationState, InitError> {
    if num_ranges == 0 {
        return Err(InitError::NoRanges);
    }
    let mut state = PopulationState::new(num_ranges);
    if init.n0 == 0 {
        return Ok(state);
    }
    let non_cub_share = init.prop_adult + init.prop_yearling;
    if non_cub_share <= 0.0 {
        return Err(InitError::NoNonCubShare);
    }
    let n0 = f64::from(init.n0);
    let adults = (n0 * init.prop_adult / non_cub_share).round() as u32;
    let yearlings = init.n0 - adults.min(init.n0);
    let cubs = (n0 * init.prop_cub / non_cub_share).round() as u32;

    let draw_sex = |rng: &mut SimRng| {
        if rng.random_bool(0.5) {
            Sex::Female
        } else {
            Sex::Male
        }
    };
    for _ in 0..adults {
        let sex = draw_sex(rng);
        let age = rng.random_range(init.adult_age_min..=init.adult_age_max);
        let range = RangeId(rng.random_range(0..num_ranges));
        state.spawn_agent(sex, age, false, range);
    }
    for _ in 0..yearlings {
        let sex = draw_sex(rng);
        let range = RangeId(rng.random_range(0..num_ranges));
        state.spawn_agent(sex, 1, false, range);
    }
    for _ in 0..cubs {
        let sex = draw_sex(rng);
        let range = RangeId(rng.random_range(0..num_ranges));
        state.spawn_agent(sex, 0, false, range);
    }
    Ok(state)
}

/// One simulated year: winter survival, aging with elimination, dispersal,
/// reproduction. Increments the year counter and returns the merged events.
pub fn step_year(
    state: &mut PopulationState,
    params: &ModelParams,
    rng: &mut SimRng,
) -> PhaseEvents {
    let mut events = survival_phase(state, &params.survival, rng);
    events.absorb(aging_phase(state, params.max_age));
    events.absorb(dispersal_phase(state, rng));
    events.absorb(reproduction_phase(state, &params.repro, rng));
    state.year += 1;
    events
}

/// Population composition snapshot recorded once per year.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearRecord {
    pub year: u32,
    pub n_non_cub: u32,
    pub n_cubs: u32,
    pub n_yearlings: u32,
    pub n_adults: u32,
}

impl YearRecord {
    pub fn of(state: &PopulationState) -> YearRecord {
        let (cubs, yearlings, adults) = state.stage_counts();
        YearRecord {
            year: state.year,
            n_non_cub: yearlings + adults,
            n_cubs: cubs,
            n_yearlings: yearlings,
            n_adults: adults,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunOutcome {
    Extinct,
    MaxLimit,
    HorizonReached,
}

impl RunOutcome {
    /// Stable code used in CSV output.
    pub fn code(self) -> &'static str {
        match self {
            RunOutcome::Extinct => "extinct",
            RunOutcome::MaxLimit => "max_limit",
            RunOutcome::HorizonReached => "horizon_reached",
        }
    }
}

impl std::fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Outcome of a full run. `trajectory[0]` is the post-initialization state.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub seed: u64,
    pub trajectory: Vec<YearRecord>,
    pub outcome: RunOutcome,
    /// Averaged annual growth rate; absent when the run ended before the
    /// post-burn-in window had two usable records.
    pub lambda: Option<f64>,
}

impl RunResult {
    /// Number of simulated years (the final record's year).
    pub fn years(&self) -> u32 {
        self.trajectory.last().map_or(0, |r| r.year)
    }

    pub fn final_n(&self) -> u32 {
        self.trajectory.last().map_or(0, |r| r.n_non_cub)
    }
}

/// Runs one simulation to completion. The stopping rule is evaluated once
/// per year after reproduction: extinct below `extinction_threshold`
/// non-cubs, capacity at `max_population` or more, otherwise until
/// `horizon`.
///
/// The seed fully determines the result. Panics only on invalid parameters
/// (zero ranges or a zero non-cub initialization share); validate
/// configurations before calling.
pub fn run_simulation(params: &ModelParams, init: &InitParams, seed: u64) -> RunResult {
    let mut rng = SimRng::seed_from_u64(seed);
    let mut state = init_population(init, params.num_ranges, &mut rng)
        .expect("run_simulation requires validated parameters");
    let mut trajectory = vec![YearRecord::of(&state)];

    let outcome = loop {
        if state.year >= params.horizon {
            break RunOutcome::HorizonReached;
        }
        step_year(&mut state, params, &mut rng);
        trajectory.push(YearRecord::of(&state));
        let n = state.count_non_cubs() as u32;
        if n < params.extinction_threshold {
            break RunOutcome::Extinct;
        }
        if n >= params.max_population {
            break RunOutcome::MaxLimit;
        }
    };

    let counts: Vec<f64> = trajectory.iter().map(|r| f64::from(r.n_non_cub)).collect();
    let lambda = compute_lambda(&counts, params.burn_in as usize);
    RunResult {
        seed,
        trajectory,
        outcome,
        lambda,
    }
}

/// Averaged annual growth rate: the arithmetic mean over t >= burn_in of
/// (n[t+1] - n[t]) / n[t]. A zero count terminates the usable window; a
/// window with no usable rate yields `None`.
pub fn compute_lambda(counts: &[f64], burn_in: usize) -> Option<f64> {
    if counts.len() < burn_in + 2 {
        return None;
    }
    let mut sum = 0.0;
    let mut terms = 0usize;
    for t in burn_in..counts.len() - 1 {
        if counts[t] == 0.0 {
            break;
        }
        sum += (counts[t + 1] - counts[t]) / counts[t];
        terms += 1;
    }
    if terms == 0 {
        None
    } else {
        Some(sum / terms as f64)
    }
}
