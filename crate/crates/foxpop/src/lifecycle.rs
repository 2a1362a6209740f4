//! The annual phases: winter survival, aging with over-age elimination,
//! dispersal, and reproduction.
//!
//! Each phase is a pure state transition given an explicit RNG stream:
//! replaying the same (state, params, stream) reproduces the same
//! [`PhaseEvents`]. Agents are processed sequentially in a uniformly
//! shuffled order, and range counts are updated immediately so later agents
//! in the same phase observe the new occupancy.

use crate::population::{AgeClass, AgentId, PopulationState, RangeId, Sex};
use crate::rng::SimRng;
use crate::survival::SurvivalTable;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Reproduction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproParams {
    /// Probability an adult female with a co-located male reproduces.
    pub p_adult: f64,
    /// Probability a yearling female with a co-located male reproduces.
    pub p_yearling: f64,
    /// Mean litter size (cubs).
    pub litter_mean: f64,
    /// Litter size standard deviation (cubs).
    pub litter_sd: f64,
    /// Probability a newborn is female.
    pub p_sex_female: f64,
}

impl Default for ReproParams {
    fn default() -> Self {
        ReproParams {
            p_adult: 0.5,
            p_yearling: 0.1,
            litter_mean: 4.0,
            litter_sd: 1.0,
            p_sex_female: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveEvent {
    pub agent: AgentId,
    pub from: RangeId,
    pub to: RangeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LitterEvent {
    pub mother: AgentId,
    pub range: RangeId,
    /// Number of cubs; zero-size litters are recorded too.
    pub size: u32,
}

/// What happened during one phase (or one whole year when merged).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhaseEvents {
    pub deaths: u32,
    pub eliminations_over_age: u32,
    pub moves: Vec<MoveEvent>,
    pub litters: Vec<LitterEvent>,
}

impl PhaseEvents {
    pub fn absorb(&mut self, other: PhaseEvents) {
        self.deaths += other.deaths;
        self.eliminations_over_age += other.eliminations_over_age;
        self.moves.extend(other.moves);
        self.litters.extend(other.litters);
    }
}

/// Winter survival: every agent, visited in a uniformly shuffled order,
/// survives independently with its (age class, sex) probability.
/// Non-survivors are removed and range counts updated.
pub fn survival_phase(
    state: &mut PopulationState,
    table: &SurvivalTable,
    rng: &mut SimRng,
) -> PhaseEvents {
    let mut events = PhaseEvents::default();
    let mut order: Vec<usize> = (0..state.agents.len()).collect();
    order.shuffle(rng);

    let mut dead = vec![false; state.agents.len()];
    for idx in order {
        let agent = &state.agents[idx];
        let p = table.get(agent.age_class(), agent.sex);
        if !rng.random_bool(p) {
            dead[idx] = true;
            events.deaths += 1;
            if !agent.is_cub() {
                state.ranges[agent.home_range.index()].remove(agent.sex);
            }
        }
    }
    let mut idx = 0;
    state.agents.retain(|_| {
        let keep = !dead[idx];
        idx += 1;
        keep
    });
    events
}

/// Ages every agent by one year. Agents exceeding `max_age` are eliminated;
/// new yearlings start counting toward range occupancy.
pub fn aging_phase(state: &mut PopulationState, max_age: u32) -> PhaseEvents {
    let mut events = PhaseEvents::default();
    let ranges = &mut state.ranges;
    state.agents.retain_mut(|agent| {
        agent.age += 1;
        if agent.age > max_age {
            // Anything over the cap was already a counted non-cub.
            ranges[agent.home_range.index()].remove(agent.sex);
            events.eliminations_over_age += 1;
            false
        } else {
            if agent.age == 1 {
                ranges[agent.home_range.index()].add(agent.sex);
            }
            true
        }
    });
    events
}

/// Ranges a floater of `sex` may move to from `origin`: first any range
/// holding the opposite sex and none of its own, otherwise the emptiest
/// other ranges. `None` only when there is no other range at all.
fn destination_candidates(
    ranges: &[crate::population::HomeRange],
    sex: Sex,
    origin: RangeId,
) -> Option<Vec<RangeId>> {
    let mate_ranges: Vec<RangeId> = ranges
        .iter()
        .filter(|r| r.id != origin && r.count(sex.opposite()) > 0 && r.count(sex) == 0)
        .map(|r| r.id)
        .collect();
    if !mate_ranges.is_empty() {
        return Some(mate_ranges);
    }
    let min_total = ranges
        .iter()
        .filter(|r| r.id != origin)
        .map(|r| r.n_total)
        .min()?;
    Some(
        ranges
            .iter()
            .filter(|r| r.id != origin && r.n_total == min_total)
            .map(|r| r.id)
            .collect(),
    )
}

/// Residency check and forced relocation of floaters.
///
/// An adult sharing its range with at least one opposite-sex non-cub stays
/// as a resident. Everyone else (yearlings always, lone adults) becomes a
/// floater and must change range: the mover first leaves its origin counts,
/// then picks uniformly among candidate destinations.
pub fn dispersal_phase(state: &mut PopulationState, rng: &mut SimRng) -> PhaseEvents {
    let mut events = PhaseEvents::default();
    let mut order: Vec<usize> = (0..state.agents.len()).collect();
    order.shuffle(rng);

    for idx in order {
        let (id, sex, age_class, origin) = {
            let a = &state.agents[idx];
            debug_assert!(!a.is_cub(), "cubs must not be present during dispersal");
            (a.id, a.sex, a.age_class(), a.home_range)
        };
        if age_class == AgeClass::Adult && state.ranges[origin.index()].count(sex.opposite()) > 0 {
            state.agents[idx].resident = true;
            continue;
        }
        state.agents[idx].resident = false;
        state.ranges[origin.index()].remove(sex);
        match destination_candidates(&state.ranges, sex, origin) {
            Some(candidates) => {
                let dest = candidates[rng.random_range(0..candidates.len())];
                state.ranges[dest.index()].add(sex);
                state.agents[idx].home_range = dest;
                events.moves.push(MoveEvent {
                    agent: id,
                    from: origin,
                    to: dest,
                });
            }
            None => {
                // Single-range world: nowhere else to go.
                state.ranges[origin.index()].add(sex);
            }
        }
    }
    events
}

/// Litter size draw: a normal sample rounded half away from zero, floored
/// at zero.
pub fn sample_litter_size(litter: &Normal<f64>, rng: &mut SimRng) -> u32 {
    litter.sample(rng).round().max(0.0) as u32
}

/// Reproduction: each adult or yearling female in a range holding at least
/// one male, visited in shuffled order, litters with her class probability.
/// Newborns take the mother's range, never act within the phase, and stay
/// out of the range counts.
pub fn reproduction_phase(
    state: &mut PopulationState,
    params: &ReproParams,
    rng: &mut SimRng,
) -> PhaseEvents {
    let mut events = PhaseEvents::default();
    let mut mothers: Vec<usize> = (0..state.agents.len())
        .filter(|&i| {
            let a = &state.agents[i];
            a.sex == Sex::Female
                && !a.is_cub()
                && state.ranges[a.home_range.index()].n_male > 0
        })
        .collect();
    mothers.shuffle(rng);

    let litter = Normal::new(params.litter_mean, params.litter_sd)
        .expect("litter_sd must be finite and non-negative");
    for idx in mothers {
        let (id, age_class, range) = {
            let a = &state.agents[idx];
            (a.id, a.age_class(), a.home_range)
        };
        let p = match age_class {
            AgeClass::Yearling => params.p_yearling,
            AgeClass::Adult => params.p_adult,
            AgeClass::Cub => unreachable!("cubs filtered out of the mother set"),
        };
        if rng.random_bool(p) {
            let size = sample_litter_size(&litter, rng);
            events.litters.push(LitterEvent {
                mother: id,
                range,
                size,
            });
            for _ in 0..size {
                let sex = if rng.random_bool(params.p_sex_female) {
                    Sex::Female
                } else {
                    Sex::Male
                };
                state.spawn_agent(sex, 0, false, range);
            }
        }
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::{Agent, PopulationState};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn state_with(agents: &[(Sex, u32, u32)], num_ranges: u32) -> PopulationState {
        let mut state = PopulationState::new(num_ranges);
        for &(sex, age, range) in agents {
            state.spawn_agent(sex, age, false, RangeId(range));
        }
        state
    }

    fn rng(seed: u64) -> SimRng {
        SimRng::seed_from_u64(seed)
    }

    #[test]
    fn certain_survival_changes_nothing() {
        let mut state = state_with(
            &[(Sex::Male, 3, 0), (Sex::Female, 1, 1), (Sex::Female, 0, 1)],
            3,
        );
        let before = state.agents.clone();
        let events = survival_phase(&mut state, &SurvivalTable::uniform(1.0), &mut rng(1));
        assert_eq!(events.deaths, 0);
        assert_eq!(state.agents, before);
        assert!(state.counts_match_roster());
    }

    #[test]
    fn certain_death_empties_the_population() {
        let mut state = state_with(&[(Sex::Male, 3, 0), (Sex::Female, 0, 2), (Sex::Female, 7, 1)], 3);
        let events = survival_phase(&mut state, &SurvivalTable::uniform(0.0), &mut rng(2));
        assert_eq!(events.deaths, 3);
        assert!(state.agents.is_empty());
        assert!(state.counts_match_roster());
    }

    #[test]
    fn survivor_fraction_concentrates_around_the_bernoulli_rate() {
        let n = 10_000usize;
        let agents: Vec<(Sex, u32, u32)> = (0..n).map(|i| (Sex::Male, 5, (i % 10) as u32)).collect();
        let mut state = state_with(&agents, 10);
        survival_phase(&mut state, &SurvivalTable::uniform(0.7), &mut rng(42));
        let fraction = state.agents.len() as f64 / n as f64;
        let sigma = (0.7 * 0.3 / n as f64).sqrt();
        assert!(
            (fraction - 0.7).abs() < 3.0 * sigma,
            "fraction {fraction} outside 0.7 ± {}",
            3.0 * sigma
        );
    }

    #[test]
    fn aging_promotes_cubs_into_range_counts() {
        let mut state = state_with(&[(Sex::Female, 0, 2)], 3);
        assert_eq!(state.ranges[2].n_total, 0);
        let events = aging_phase(&mut state, 12);
        assert_eq!(events.eliminations_over_age, 0);
        assert_eq!(state.agents[0].age, 1);
        assert_eq!(state.ranges[2].n_female, 1);
        assert!(state.counts_match_roster());
    }

    #[test]
    fn aging_eliminates_agents_past_the_cap() {
        let mut state = state_with(&[(Sex::Male, 12, 0), (Sex::Female, 11, 0)], 1);
        let events = aging_phase(&mut state, 12);
        assert_eq!(events.eliminations_over_age, 1);
        assert_eq!(state.agents.len(), 1);
        assert_eq!(state.agents[0].age, 12);
        assert!(state.counts_match_roster());
    }

    #[test]
    fn aging_an_empty_state_is_a_no_op() {
        let mut state = PopulationState::new(2);
        let events = aging_phase(&mut state, 12);
        assert_eq!(events, PhaseEvents::default());
        assert!(state.agents.is_empty());
    }

    #[test]
    fn paired_adult_female_stays_resident() {
        let mut state = state_with(&[(Sex::Female, 4, 0), (Sex::Male, 4, 0)], 4);
        let events = dispersal_phase(&mut state, &mut rng(3));
        assert!(events.moves.is_empty());
        assert!(state.agents.iter().all(|a| a.resident));
        assert!(state.counts_match_roster());
    }

    #[test]
    fn lone_adults_converge_on_the_unique_mate_range() {
        // A lone male and a lone female: whichever floater acts first sees
        // exactly one range holding the opposite sex and none of its own,
        // and must move there; the other then has a mate at home and stays
        // resident. Either order leaves the two co-located.
        for seed in 0..50 {
            let mut state = state_with(&[(Sex::Male, 4, 0), (Sex::Female, 4, 2)], 5);
            let events = dispersal_phase(&mut state, &mut rng(seed));
            assert_eq!(events.moves.len(), 1, "seed {seed}");
            let mover = events.moves[0];
            let stayer = state.agents.iter().find(|a| a.id != mover.agent).unwrap();
            assert_eq!(mover.to, stayer.home_range, "seed {seed}");
            assert!(stayer.resident, "seed {seed}");
            assert_eq!(
                state.agents[0].home_range, state.agents[1].home_range,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn min_occupancy_tie_break_is_uniform() {
        // A single male with no females anywhere: the mate-seeking set is
        // empty and he falls back to the emptiest other ranges, 1 and 2,
        // which tie at zero.
        let trials = 10_000usize;
        let mut to_range_1 = 0usize;
        for seed in 0..trials {
            let mut state = state_with(&[(Sex::Male, 4, 0)], 3);
            let events = dispersal_phase(&mut state, &mut rng(seed as u64 + 1000));
            assert_eq!(events.moves.len(), 1);
            if events.moves[0].to == RangeId(1) {
                to_range_1 += 1;
            } else {
                assert_eq!(events.moves[0].to, RangeId(2));
            }
        }
        let p = to_range_1 as f64 / trials as f64;
        let sigma = (0.25 / trials as f64).sqrt();
        assert!((p - 0.5).abs() < 3.0 * sigma, "tie-break fraction {p}");
    }

    #[test]
    fn yearlings_always_float_and_move() {
        let mut state = state_with(&[(Sex::Female, 1, 0), (Sex::Male, 4, 0)], 3);
        let events = dispersal_phase(&mut state, &mut rng(9));
        let yearling = state.agents.iter().find(|a| a.age == 1).unwrap();
        assert!(!yearling.resident);
        assert!(events.moves.iter().any(|m| m.agent == yearling.id && m.from == RangeId(0)));
        assert_ne!(yearling.home_range, RangeId(0));
    }

    #[test]
    fn female_without_males_never_reproduces() {
        let mut state = state_with(&[(Sex::Female, 4, 0), (Sex::Female, 4, 0)], 2);
        let params = ReproParams {
            p_adult: 1.0,
            ..ReproParams::default()
        };
        let events = reproduction_phase(&mut state, &params, &mut rng(4));
        assert!(events.litters.is_empty());
        assert_eq!(state.agents.len(), 2);
    }

    #[test]
    fn zero_reproduction_probabilities_mean_zero_litters() {
        let mut state = state_with(&[(Sex::Female, 4, 0), (Sex::Male, 4, 0), (Sex::Female, 1, 0)], 2);
        let params = ReproParams {
            p_adult: 0.0,
            p_yearling: 0.0,
            ..ReproParams::default()
        };
        let events = reproduction_phase(&mut state, &params, &mut rng(5));
        assert!(events.litters.is_empty());
    }

    #[test]
    fn newborns_take_the_mothers_range_and_stay_out_of_counts() {
        let mut state = state_with(&[(Sex::Female, 4, 1), (Sex::Male, 4, 1)], 2);
        let params = ReproParams {
            p_adult: 1.0,
            litter_mean: 6.0,
            litter_sd: 0.0,
            ..ReproParams::default()
        };
        let events = reproduction_phase(&mut state, &params, &mut rng(6));
        assert_eq!(events.litters.len(), 1);
        assert_eq!(events.litters[0].size, 6);
        let cubs: Vec<&Agent> = state.agents.iter().filter(|a| a.is_cub()).collect();
        assert_eq!(cubs.len(), 6);
        assert!(cubs.iter().all(|c| c.home_range == RangeId(1) && !c.resident));
        assert_eq!(state.ranges[1].n_total, 2);
        assert!(state.counts_match_roster());
    }

    #[test]
    fn litter_draws_concentrate_on_the_normal_mean() {
        let normal = Normal::new(4.0, 1.0).unwrap();
        let mut r = rng(7);
        let n = 100_000usize;
        let mut sum = 0u64;
        let mut within = 0usize;
        for _ in 0..n {
            let size = sample_litter_size(&normal, &mut r);
            sum += u64::from(size);
            if size <= 8 {
                within += 1;
            }
        }
        let mean = sum as f64 / n as f64;
        assert!((mean - 4.0).abs() < 0.02, "mean litter {mean}");
        assert!(within as f64 / n as f64 >= 0.999);
    }

    #[test]
    fn phases_replay_identically_from_the_same_stream() {
        let build = || {
            state_with(
                &[
                    (Sex::Male, 2, 0),
                    (Sex::Female, 1, 1),
                    (Sex::Female, 6, 2),
                    (Sex::Male, 1, 2),
                    (Sex::Female, 3, 3),
                ],
                5,
            )
        };
        let table = SurvivalTable::by_age_class(0.5, 0.6, 0.7);
        let params = ReproParams::default();
        let run = |seed: u64| {
            let mut state = build();
            let mut r = rng(seed);
            let mut events = survival_phase(&mut state, &table, &mut r);
            events.absorb(aging_phase(&mut state, 12));
            events.absorb(dispersal_phase(&mut state, &mut r));
            events.absorb(reproduction_phase(&mut state, &params, &mut r));
            (state.agents.clone(), events)
        };
        assert_eq!(run(11), run(11));
    }

    fn non_cub_state() -> impl Strategy<Value = PopulationState> {
        (2u32..8, proptest::collection::vec((1u32..=12, any::<bool>(), 0u32..8), 1..30)).prop_map(
            |(num_ranges, roster)| {
                let mut state = PopulationState::new(num_ranges);
                for (age, male, range) in roster {
                    let sex = if male { Sex::Male } else { Sex::Female };
                    state.spawn_agent(sex, age, false, RangeId(range % num_ranges));
                }
                state
            },
        )
    }

    fn any_state() -> impl Strategy<Value = PopulationState> {
        (2u32..8, proptest::collection::vec((0u32..=12, any::<bool>(), 0u32..8), 0..30)).prop_map(
            |(num_ranges, roster)| {
                let mut state = PopulationState::new(num_ranges);
                for (age, male, range) in roster {
                    let sex = if male { Sex::Male } else { Sex::Female };
                    state.spawn_agent(sex, age, false, RangeId(range % num_ranges));
                }
                state
            },
        )
    }

    proptest! {
        #[test]
        fn survival_keeps_counts_consistent_and_touches_nothing_else(
            state in any_state(), seed in any::<u64>(), p in 0.0f64..=1.0
        ) {
            let mut state = state;
            let before: std::collections::HashMap<_, _> = state
                .agents.iter().map(|a| (a.id, (a.age, a.sex, a.home_range))).collect();
            survival_phase(&mut state, &SurvivalTable::uniform(p), &mut rng(seed));
            prop_assert!(state.counts_match_roster());
            for agent in &state.agents {
                prop_assert_eq!(before[&agent.id], (agent.age, agent.sex, agent.home_range));
            }
        }

        #[test]
        fn aging_keeps_counts_consistent_and_preserves_sex_and_range(
            state in any_state()
        ) {
            let mut state = state;
            let before: std::collections::HashMap<_, _> = state
                .agents.iter().map(|a| (a.id, (a.sex, a.home_range, a.age))).collect();
            aging_phase(&mut state, 12);
            prop_assert!(state.counts_match_roster());
            for agent in &state.agents {
                let (sex, range, age) = before[&agent.id];
                prop_assert_eq!(agent.sex, sex);
                prop_assert_eq!(agent.home_range, range);
                prop_assert_eq!(agent.age, age + 1);
                prop_assert!(agent.age <= 12);
            }
        }

        #[test]
        fn dispersal_keeps_counts_consistent_and_never_changes_ages(
            state in non_cub_state(), seed in any::<u64>()
        ) {
            let mut state = state;
            let before: std::collections::HashMap<_, _> = state
                .agents.iter().map(|a| (a.id, (a.age, a.sex))).collect();
            let events = dispersal_phase(&mut state, &mut rng(seed));
            prop_assert!(state.counts_match_roster());
            prop_assert_eq!(state.agents.len(), before.len());
            let moved: std::collections::HashSet<_> = events.moves.iter().map(|m| m.agent).collect();
            for agent in &state.agents {
                prop_assert_eq!(before[&agent.id], (agent.age, agent.sex));
                if !agent.resident {
                    prop_assert!(moved.contains(&agent.id), "floater {} did not move", agent.id);
                }
                // A mover never lands back on its origin.
                if let Some(mv) = events.moves.iter().find(|m| m.agent == agent.id) {
                    prop_assert_ne!(mv.from, mv.to);
                    prop_assert_eq!(agent.home_range, mv.to);
                }
            }
        }

        #[test]
        fn reproduction_only_adds_newborn_cubs(
            state in non_cub_state(), seed in any::<u64>()
        ) {
            let mut state = state;
            let before: std::collections::HashMap<_, _> = state
                .agents.iter().map(|a| (a.id, a.clone())).collect();
            let events = reproduction_phase(&mut state, &ReproParams::default(), &mut rng(seed));
            prop_assert!(state.counts_match_roster());
            let born: u32 = events.litters.iter().map(|l| l.size).sum();
            prop_assert_eq!(state.agents.len(), before.len() + born as usize);
            for agent in &state.agents {
                match before.get(&agent.id) {
                    Some(prev) => prop_assert_eq!(prev, agent),
                    None => {
                        prop_assert_eq!(agent.age, 0);
                        prop_assert!(!agent.resident);
                    }
                }
            }
        }
    }
}
