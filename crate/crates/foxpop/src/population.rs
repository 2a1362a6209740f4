//! Domain types and population-state bookkeeping shared by all phases.
//!
//! A [`PopulationState`] holds the agent roster plus one [`HomeRange`] per
//! territory. Ranges cache non-cub occupancy counts by sex because dispersal
//! reads them in a hot loop; [`PopulationState::rebuild_counts`] recomputes
//! them from the roster and is the oracle the incremental updates are tested
//! against.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Oldest age an agent can reach; anyone older is eliminated during aging.
pub const MAX_AGE: u32 = 12;

/// Unique per-run agent identifier, assigned from a monotone counter and
/// never reused.
pub type AgentId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sex {
    Female,
    Male,
}

impl Sex {
    pub fn opposite(self) -> Sex {
        match self {
            Sex::Female => Sex::Male,
            Sex::Male => Sex::Female,
        }
    }

    /// Short code used in file formats: `f` or `m`.
    pub fn code(self) -> &'static str {
        match self {
            Sex::Female => "f",
            Sex::Male => "m",
        }
    }
}

impl std::fmt::Display for Sex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Developmental stage, always derived from age and never stored separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgeClass {
    Cub,
    Yearling,
    Adult,
}

impl AgeClass {
    pub const ALL: [AgeClass; 3] = [AgeClass::Cub, AgeClass::Yearling, AgeClass::Adult];

    /// Short code used in file formats: `cub`, `yearling`, or `adult`.
    pub fn code(self) -> &'static str {
        match self {
            AgeClass::Cub => "cub",
            AgeClass::Yearling => "yearling",
            AgeClass::Adult => "adult",
        }
    }
}

impl std::fmt::Display for AgeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("age {age} outside [0, {MAX_AGE}]; over-age agents must be eliminated first")]
pub struct AgeOutOfRange {
    pub age: u32,
}

/// Maps an age in years to its class: 0 is a cub, 1 a yearling, 2..=12 adult.
pub fn classify_age(age: u32) -> Result<AgeClass, AgeOutOfRange> {
    match age {
        0 => Ok(AgeClass::Cub),
        1 => Ok(AgeClass::Yearling),
        2..=MAX_AGE => Ok(AgeClass::Adult),
        _ => Err(AgeOutOfRange { age }),
    }
}

/// Index of a home range, stable for the whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RangeId(pub u32);

impl RangeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for RangeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// One fox.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub id: AgentId,
    pub sex: Sex,
    pub age: u32,
    /// `true` for residents, `false` for floaters. Cubs are always floaters.
    pub resident: bool,
    pub home_range: RangeId,
}

impl Agent {
    /// Age class of this agent. Ages stay within `[0, MAX_AGE]` at every
    /// observable point, so the classification cannot fail.
    pub fn age_class(&self) -> AgeClass {
        classify_age(self.age).expect("agent age within [0, MAX_AGE] between phases")
    }

    pub fn is_cub(&self) -> bool {
        self.age == 0
    }
}

/// One territory with cached non-cub occupancy counts by sex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomeRange {
    pub id: RangeId,
    pub n_total: u32,
    pub n_male: u32,
    pub n_female: u32,
}

impl HomeRange {
    fn empty(id: RangeId) -> Self {
        HomeRange {
            id,
            n_total: 0,
            n_male: 0,
            n_female: 0,
        }
    }

    pub fn count(&self, sex: Sex) -> u32 {
        match sex {
            Sex::Female => self.n_female,
            Sex::Male => self.n_male,
        }
    }

    pub(crate) fn add(&mut self, sex: Sex) {
        match sex {
            Sex::Female => self.n_female += 1,
            Sex::Male => self.n_male += 1,
        }
        self.n_total += 1;
    }

    pub(crate) fn remove(&mut self, sex: Sex) {
        match sex {
            Sex::Female => self.n_female -= 1,
            Sex::Male => self.n_male -= 1,
        }
        self.n_total -= 1;
    }
}

/// The full simulation state at one point in time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationState {
    pub year: u32,
    pub agents: Vec<Agent>,
    pub ranges: Vec<HomeRange>,
    next_id: AgentId,
}

impl PopulationState {
    pub fn new(num_ranges: u32) -> Self {
        PopulationState {
            year: 0,
            agents: Vec::new(),
            ranges: (0..num_ranges).map(|i| HomeRange::empty(RangeId(i))).collect(),
            next_id: 0,
        }
    }

    /// Adds an agent and keeps the cached range counts consistent.
    /// Returns the id assigned from the run-wide monotone counter.
    pub fn spawn_agent(&mut self, sex: Sex, age: u32, resident: bool, home_range: RangeId) -> AgentId {
        debug_assert!(age <= MAX_AGE);
        debug_assert!(home_range.index() < self.ranges.len());
        let id = self.next_id;
        self.next_id += 1;
        if age >= 1 {
            self.ranges[home_range.index()].add(sex);
        }
        self.agents.push(Agent {
            id,
            sex,
            age,
            resident,
            home_range,
        });
        id
    }

    /// Number of agents with age >= 1.
    pub fn count_non_cubs(&self) -> usize {
        self.agents.iter().filter(|a| !a.is_cub()).count()
    }

    /// Recomputes every range's occupancy counts from the agent roster,
    /// excluding cubs. This is the reference the incremental phase updates
    /// must agree with.
    pub fn rebuild_counts(&mut self) {
        for range in &mut self.ranges {
            range.n_total = 0;
            range.n_male = 0;
            range.n_female = 0;
        }
        for agent in &self.agents {
            if !agent.is_cub() {
                self.ranges[agent.home_range.index()].add(agent.sex);
            }
        }
    }

    /// `true` when the cached counts match a fresh roster scan.
    pub fn counts_match_roster(&self) -> bool {
        let mut fresh = self.clone();
        fresh.rebuild_counts();
        fresh.ranges == self.ranges
    }

    /// Population composition by age class: (cubs, yearlings, adults).
    pub fn stage_counts(&self) -> (u32, u32, u32) {
        let mut cubs = 0;
        let mut yearlings = 0;
        let mut adults = 0;
        for agent in &self.agents {
            match agent.age_class() {
                AgeClass::Cub => cubs += 1,
                AgeClass::Yearling => yearlings += 1,
                AgeClass::Adult => adults += 1,
            }
        }
        (cubs, yearlings, adults)
    }
}
