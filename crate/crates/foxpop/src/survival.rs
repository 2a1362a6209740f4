//! Age/sex-conditional survival: the six-entry table, its estimators over
//! tagged-cohort count data, and the additive shifts used by scenario sweeps.
//!
//! Two estimation routes are provided. [`direct_estimate`] is the plain
//! per-cell frequency. [`estimate_bayes`] decomposes the conditional through
//! the cohort marginals under the assumption that age class and sex are
//! independent; when that assumption is violated the product can leave
//! [0, 1], so raw values are clamped and every clamp is reported in
//! [`SurvivalDiagnostics`] instead of being hidden.

use crate::population::{AgeClass, Sex};
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;
use thiserror::Error;

fn age_index(age_class: AgeClass) -> usize {
    match age_class {
        AgeClass::Cub => 0,
        AgeClass::Yearling => 1,
        AgeClass::Adult => 2,
    }
}

fn sex_index(sex: Sex) -> usize {
    match sex {
        Sex::Female => 0,
        Sex::Male => 1,
    }
}

/// All (age class, sex) cells in a fixed iteration order.
pub fn all_cells() -> impl Iterator<Item = (AgeClass, Sex)> {
    AgeClass::ALL
        .into_iter()
        .flat_map(|a| [Sex::Female, Sex::Male].into_iter().map(move |s| (a, s)))
}

/// Survived/died observation counts per (age class, sex) cell. Each
/// (animal, year) transition contributes one observation, so multi-year
/// histories appear as one row per survival trial.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CohortCounts {
    survived: [[u64; 2]; 3],
    died: [[u64; 2]; 3],
}

#[derive(Debug, Error)]
pub enum CohortError {
    #[error("cohort file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cohort row {row}: {message}")]
    Malformed { row: usize, message: String },
}

impl CohortCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, age_class: AgeClass, sex: Sex, survived: u64, died: u64) {
        self.survived[age_index(age_class)][sex_index(sex)] += survived;
        self.died[age_index(age_class)][sex_index(sex)] += died;
    }

    pub fn survived(&self, age_class: AgeClass, sex: Sex) -> u64 {
        self.survived[age_index(age_class)][sex_index(sex)]
    }

    pub fn died(&self, age_class: AgeClass, sex: Sex) -> u64 {
        self.died[age_index(age_class)][sex_index(sex)]
    }

    pub fn cell_total(&self, age_class: AgeClass, sex: Sex) -> u64 {
        self.survived(age_class, sex) + self.died(age_class, sex)
    }

    pub fn total(&self) -> u64 {
        all_cells().map(|(a, s)| self.cell_total(a, s)).sum()
    }

    pub fn total_survived(&self) -> u64 {
        all_cells().map(|(a, s)| self.survived(a, s)).sum()
    }

    /// Multiplies every count by `factor` (used by scale-invariance tests).
    pub fn scaled(&self, factor: u64) -> CohortCounts {
        let mut out = self.clone();
        for (a, s) in all_cells() {
            out.survived[age_index(a)][sex_index(s)] *= factor;
            out.died[age_index(a)][sex_index(s)] *= factor;
        }
        out
    }

    /// Reads `age_class,sex,survived,died` rows. Repeated cells accumulate.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<CohortCounts, CohortError> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        {
            let headers = csv_reader.headers().map_err(|e| CohortError::Malformed {
                row: 0,
                message: e.to_string(),
            })?;
            let expected = ["age_class", "sex", "survived", "died"];
            let got: Vec<&str> = headers.iter().collect();
            if got != expected {
                return Err(CohortError::Malformed {
                    row: 0,
                    message: format!("header must be `age_class,sex,survived,died`, got `{}`", got.join(",")),
                });
            }
        }
        let mut cohort = CohortCounts::new();
        for (i, record) in csv_reader.records().enumerate() {
            let row = i + 1;
            let record = record.map_err(|e| CohortError::Malformed {
                row,
                message: e.to_string(),
            })?;
            let field = |idx: usize| -> Result<&str, CohortError> {
                record.get(idx).ok_or_else(|| CohortError::Malformed {
                    row,
                    message: "expected 4 fields".into(),
                })
            };
            let age_class = match field(0)? {
                "cub" => AgeClass::Cub,
                "yearling" => AgeClass::Yearling,
                "adult" => AgeClass::Adult,
                other => {
                    return Err(CohortError::Malformed {
                        row,
                        message: format!("unknown age class `{other}` (expected cub|yearling|adult)"),
                    })
                }
            };
            let sex = match field(1)? {
                "f" => Sex::Female,
                "m" => Sex::Male,
                other => {
                    return Err(CohortError::Malformed {
                        row,
                        message: format!("unknown sex `{other}` (expected f|m)"),
                    })
                }
            };
            let parse_count = |idx: usize| -> Result<u64, CohortError> {
                field(idx)?.parse::<u64>().map_err(|e| CohortError::Malformed {
                    row,
                    message: format!("bad count: {e}"),
                })
            };
            cohort.add(age_class, sex, parse_count(2)?, parse_count(3)?);
        }
        Ok(cohort)
    }

    pub fn from_csv_path(path: &Path) -> Result<CohortCounts, CohortError> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }
}

/// The six Bernoulli survival parameters, one per (age class, sex).
/// Every entry is guaranteed to lie in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalTable {
    p: [[f64; 2]; 3],
}

#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("survival probability for ({age_class}, {sex}) is {value}, outside [0, 1]")]
    OutOfRange {
        age_class: AgeClass,
        sex: Sex,
        value: f64,
    },
}

impl SurvivalTable {
    /// Builds a table, rejecting entries outside [0, 1] or non-finite values.
    pub fn new(entries: [[f64; 2]; 3]) -> Result<SurvivalTable, TableError> {
        for (a, s) in all_cells() {
            let value = entries[age_index(a)][sex_index(s)];
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(TableError::OutOfRange {
                    age_class: a,
                    sex: s,
                    value,
                });
            }
        }
        Ok(SurvivalTable { p: entries })
    }

    /// Same probability for every cell.
    pub fn uniform(p: f64) -> SurvivalTable {
        SurvivalTable::new([[p; 2]; 3]).expect("uniform probability within [0, 1]")
    }

    /// One probability per age class, sexes equal.
    pub fn by_age_class(cub: f64, yearling: f64, adult: f64) -> SurvivalTable {
        SurvivalTable::new([[cub; 2], [yearling; 2], [adult; 2]])
            .expect("per-class probabilities within [0, 1]")
    }

    pub fn get(&self, age_class: AgeClass, sex: Sex) -> f64 {
        self.p[age_index(age_class)][sex_index(sex)]
    }

    /// Adds `delta` to both sex entries of `age_class`, clamping to [0, 1].
    pub fn shifted(&self, age_class: AgeClass, delta: f64) -> SurvivalTable {
        let mut p = self.p;
        for sex in [Sex::Female, Sex::Male] {
            let cell = &mut p[age_index(age_class)][sex_index(sex)];
            *cell = (*cell + delta).clamp(0.0, 1.0);
        }
        SurvivalTable { p }
    }
}

/// Free-function form of [`SurvivalTable::shifted`].
pub fn shift_table(table: &SurvivalTable, age_class: AgeClass, delta: f64) -> SurvivalTable {
    table.shifted(age_class, delta)
}

/// Serialized form: six flat keys as used in config documents.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRepr {
    cub_f: f64,
    cub_m: f64,
    yearling_f: f64,
    yearling_m: f64,
    adult_f: f64,
    adult_m: f64,
}

impl Serialize for SurvivalTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TableRepr {
            cub_f: self.get(AgeClass::Cub, Sex::Female),
            cub_m: self.get(AgeClass::Cub, Sex::Male),
            yearling_f: self.get(AgeClass::Yearling, Sex::Female),
            yearling_m: self.get(AgeClass::Yearling, Sex::Male),
            adult_f: self.get(AgeClass::Adult, Sex::Female),
            adult_m: self.get(AgeClass::Adult, Sex::Male),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SurvivalTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TableRepr::deserialize(deserializer)?;
        SurvivalTable::new([
            [repr.cub_f, repr.cub_m],
            [repr.yearling_f, repr.yearling_m],
            [repr.adult_f, repr.adult_m],
        ])
        .map_err(serde::de::Error::custom)
    }
}

/// How far outside [0, 1] a raw value must fall before it is reported as
/// clamped. Products of empirical frequencies land a few ulps above 1.0
/// when the true value is exactly 1, and that is not model misfit.
pub const CLAMP_REPORT_EPSILON: f64 = 1e-9;

/// Raw pre-clamp estimator outputs plus the list of cells that needed
/// clamping. `clamped_cells` is nonempty exactly when some raw value left
/// [0, 1] by more than [`CLAMP_REPORT_EPSILON`].
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalDiagnostics {
    raw: [[f64; 2]; 3],
    pub clamped_cells: Vec<(AgeClass, Sex)>,
}

impl SurvivalDiagnostics {
    pub fn raw_value(&self, age_class: AgeClass, sex: Sex) -> f64 {
        self.raw[age_index(age_class)][sex_index(sex)]
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EstimationError {
    #[error("age class `{0}` has no observations; its marginal probability would be zero")]
    EmptyAgeClass(AgeClass),
    #[error("sex `{0}` has no observations; its marginal probability would be zero")]
    EmptySex(Sex),
    #[error("cohort cell ({age_class}, {sex}) has no observations")]
    EmptyCell { age_class: AgeClass, sex: Sex },
    #[error("cohort is empty")]
    EmptyCohort,
}

/// Estimates the table through the independence decomposition
/// `p(A|φ=1) p(s|φ=1) p(φ=1) / (p(A) p(s))` where every component is an
/// empirical frequency over the pooled cohort. Raw products are clamped to
/// [0, 1] with the clamping reported. An all-dead cohort yields an all-zero
/// table with empty diagnostics.
pub fn estimate_bayes(
    cohort: &CohortCounts,
) -> Result<(SurvivalTable, SurvivalDiagnostics), EstimationError> {
    let total = cohort.total();
    if total == 0 {
        return Err(EstimationError::EmptyCohort);
    }

    // Marginal exposure totals; any empty marginal is a divide-by-zero.
    let mut age_totals = [0u64; 3];
    let mut sex_totals = [0u64; 2];
    let mut age_survivors = [0u64; 3];
    let mut sex_survivors = [0u64; 2];
    for (a, s) in all_cells() {
        age_totals[age_index(a)] += cohort.cell_total(a, s);
        sex_totals[sex_index(s)] += cohort.cell_total(a, s);
        age_survivors[age_index(a)] += cohort.survived(a, s);
        sex_survivors[sex_index(s)] += cohort.survived(a, s);
    }
    for a in AgeClass::ALL {
        if age_totals[age_index(a)] == 0 {
            return Err(EstimationError::EmptyAgeClass(a));
        }
    }
    for s in [Sex::Female, Sex::Male] {
        if sex_totals[sex_index(s)] == 0 {
            return Err(EstimationError::EmptySex(s));
        }
    }

    let survivors = cohort.total_survived();
    let mut raw = [[0.0f64; 2]; 3];
    if survivors > 0 {
        let n = total as f64;
        let p_phi = survivors as f64 / n;
        for (a, s) in all_cells() {
            let p_age_given_phi = age_survivors[age_index(a)] as f64 / survivors as f64;
            let p_sex_given_phi = sex_survivors[sex_index(s)] as f64 / survivors as f64;
            let p_age = age_totals[age_index(a)] as f64 / n;
            let p_sex = sex_totals[sex_index(s)] as f64 / n;
            raw[age_index(a)][sex_index(s)] =
                p_age_given_phi * p_sex_given_phi * p_phi / (p_age * p_sex);
        }
    }

    let mut clamped_cells = Vec::new();
    let mut p = raw;
    for (a, s) in all_cells() {
        let cell = &mut p[age_index(a)][sex_index(s)];
        if !(0.0..=1.0).contains(cell) {
            if *cell < -CLAMP_REPORT_EPSILON || *cell > 1.0 + CLAMP_REPORT_EPSILON {
                clamped_cells.push((a, s));
            }
            *cell = cell.clamp(0.0, 1.0);
        }
    }

    Ok((
        SurvivalTable { p },
        SurvivalDiagnostics { raw, clamped_cells },
    ))
}

/// Plain per-cell frequency `survived / (survived + died)`. Every cell must
/// have at least one observation.
pub fn direct_estimate(cohort: &CohortCounts) -> Result<SurvivalTable, EstimationError> {
    let mut p = [[0.0f64; 2]; 3];
    for (a, s) in all_cells() {
        let total = cohort.cell_total(a, s);
        if total == 0 {
            return Err(EstimationError::EmptyCell {
                age_class: a,
                sex: s,
            });
        }
        p[age_index(a)][sex_index(s)] = cohort.survived(a, s) as f64 / total as f64;
    }
    Ok(SurvivalTable { p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Builds a cohort whose cell totals and survivor counts both factorize
    /// over age class and sex, which is exactly the regime where the
    /// independence assumption holds and the two estimators must agree.
    pub(crate) fn factorized_cohort(
        age_weights: [u64; 3],
        sex_weights: [u64; 2],
        age_surv: [u64; 3],
        sex_surv: [u64; 2],
    ) -> Option<CohortCounts> {
        let mut cohort = CohortCounts::new();
        for (a, s) in all_cells() {
            let total = age_weights[age_index(a)] * sex_weights[sex_index(s)];
            let survived = age_surv[age_index(a)] * sex_surv[sex_index(s)];
            if survived > total || total == 0 {
                return None;
            }
            cohort.add(a, s, survived, total - survived);
        }
        Some(cohort)
    }

    #[test]
    fn uniform_cells_reduce_to_the_marginal_ratio() {
        let mut cohort = CohortCounts::new();
        for (a, s) in all_cells() {
            cohort.add(a, s, 6, 4);
        }
        let (table, diagnostics) = estimate_bayes(&cohort).unwrap();
        for (a, s) in all_cells() {
            assert!((table.get(a, s) - 0.6).abs() < 1e-15);
            assert!((diagnostics.raw_value(a, s) - 0.6).abs() < 1e-15);
        }
        assert!(diagnostics.clamped_cells.is_empty());
    }

    /// Independent oracle: expand the cohort to individual observations,
    /// count every frequency explicitly, and multiply/divide per the
    /// decomposition. No shared code with `estimate_bayes`.
    fn brute_force_bayes(cohort: &CohortCounts) -> [[f64; 2]; 3] {
        let mut observations: Vec<(AgeClass, Sex, bool)> = Vec::new();
        for (a, s) in all_cells() {
            for _ in 0..cohort.survived(a, s) {
                observations.push((a, s, true));
            }
            for _ in 0..cohort.died(a, s) {
                observations.push((a, s, false));
            }
        }
        let n = observations.len() as f64;
        let survivors: Vec<_> = observations.iter().filter(|o| o.2).collect();
        let p_phi = survivors.len() as f64 / n;
        let mut out = [[0.0; 2]; 3];
        for (a, s) in all_cells() {
            let p_age = observations.iter().filter(|o| o.0 == a).count() as f64 / n;
            let p_sex = observations.iter().filter(|o| o.1 == s).count() as f64 / n;
            let p_age_phi = survivors.iter().filter(|o| o.0 == a).count() as f64 / survivors.len() as f64;
            let p_sex_phi = survivors.iter().filter(|o| o.1 == s).count() as f64 / survivors.len() as f64;
            out[age_index(a)][sex_index(s)] = p_age_phi * p_sex_phi * p_phi / (p_age * p_sex);
        }
        out
    }

    #[test]
    fn bayes_matches_brute_force_counting_on_a_multiplicative_cohort() {
        // Survival depends multiplicatively on an age factor and a sex factor.
        let cohort = factorized_cohort([20, 10, 30], [2, 3], [12, 8, 15], [1, 2]).unwrap();
        let (table, diagnostics) = estimate_bayes(&cohort).unwrap();
        let oracle = brute_force_bayes(&cohort);
        for (a, s) in all_cells() {
            assert!(
                (diagnostics.raw_value(a, s) - oracle[age_index(a)][sex_index(s)]).abs() <= 1e-12,
                "raw mismatch at ({a}, {s})"
            );
            assert!((table.get(a, s) - oracle[age_index(a)][sex_index(s)].clamp(0.0, 1.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn adversarial_cohort_is_clamped_and_reported() {
        // Brute-force search over small count tables until the product
        // formula overshoots 1.0 for (Adult, Female).
        let mut found = None;
        'search: for adult_f_surv in 1..6u64 {
            for other_surv in 0..3u64 {
                for adult_f_died in 0..2u64 {
                    for other_died in 1..4u64 {
                        let mut cohort = CohortCounts::new();
                        for (a, s) in all_cells() {
                            if a == AgeClass::Adult && s == Sex::Female {
                                cohort.add(a, s, adult_f_surv, adult_f_died);
                            } else {
                                cohort.add(a, s, other_surv, other_died);
                            }
                        }
                        if let Ok((_, diagnostics)) = estimate_bayes(&cohort) {
                            if diagnostics.raw_value(AgeClass::Adult, Sex::Female) > 1.0 {
                                found = Some(cohort);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        let cohort = found.expect("search space contains an overshooting cohort");
        let (table, diagnostics) = estimate_bayes(&cohort).unwrap();
        assert!(diagnostics.raw_value(AgeClass::Adult, Sex::Female) > 1.0);
        assert_eq!(table.get(AgeClass::Adult, Sex::Female), 1.0);
        assert!(diagnostics
            .clamped_cells
            .contains(&(AgeClass::Adult, Sex::Female)));
    }

    #[test]
    fn direct_estimate_is_the_cell_ratio() {
        let mut cohort = CohortCounts::new();
        for (a, s) in all_cells() {
            cohort.add(a, s, 8, 2);
        }
        let table = direct_estimate(&cohort).unwrap();
        assert!((table.get(AgeClass::Cub, Sex::Female) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn direct_estimate_handles_zero_survivors_in_a_cell() {
        let mut cohort = CohortCounts::new();
        for (a, s) in all_cells() {
            cohort.add(a, s, if a == AgeClass::Cub { 0 } else { 3 }, 5);
        }
        let table = direct_estimate(&cohort).unwrap();
        assert_eq!(table.get(AgeClass::Cub, Sex::Male), 0.0);
    }

    #[test]
    fn direct_estimate_names_the_empty_cell() {
        let mut cohort = CohortCounts::new();
        for (a, s) in all_cells() {
            if !(a == AgeClass::Adult && s == Sex::Male) {
                cohort.add(a, s, 2, 2);
            }
        }
        assert_eq!(
            direct_estimate(&cohort),
            Err(EstimationError::EmptyCell {
                age_class: AgeClass::Adult,
                sex: Sex::Male
            })
        );
    }

    #[test]
    fn bayes_names_an_empty_marginal() {
        let mut cohort = CohortCounts::new();
        for s in [Sex::Female, Sex::Male] {
            cohort.add(AgeClass::Cub, s, 3, 2);
            cohort.add(AgeClass::Adult, s, 3, 2);
        }
        assert!(matches!(
            estimate_bayes(&cohort),
            Err(EstimationError::EmptyAgeClass(AgeClass::Yearling))
        ));
    }

    #[test]
    fn all_dead_cohort_yields_zero_table_without_error() {
        let mut cohort = CohortCounts::new();
        for (a, s) in all_cells() {
            cohort.add(a, s, 0, 4);
        }
        let (table, diagnostics) = estimate_bayes(&cohort).unwrap();
        for (a, s) in all_cells() {
            assert_eq!(table.get(a, s), 0.0);
        }
        assert!(diagnostics.clamped_cells.is_empty());
    }

    #[test]
    fn shift_applies_to_both_sexes_of_one_class() {
        let table = SurvivalTable::by_age_class(0.45, 0.5, 0.6);
        let shifted = table.shifted(AgeClass::Cub, 0.05);
        assert!((shifted.get(AgeClass::Cub, Sex::Female) - 0.5).abs() < 1e-15);
        assert!((shifted.get(AgeClass::Cub, Sex::Male) - 0.5).abs() < 1e-15);
        assert_eq!(shifted.get(AgeClass::Yearling, Sex::Female), 0.5);
        assert_eq!(shifted.get(AgeClass::Adult, Sex::Male), 0.6);
    }

    #[test]
    fn shift_by_zero_is_identity_and_clamping_caps_at_one() {
        let table = SurvivalTable::by_age_class(0.45, 0.5, 0.9);
        assert_eq!(table.shifted(AgeClass::Yearling, 0.0), table);
        let capped = table.shifted(AgeClass::Adult, 0.2);
        assert_eq!(capped.get(AgeClass::Adult, Sex::Female), 1.0);
        assert_eq!(capped.get(AgeClass::Adult, Sex::Male), 1.0);
    }

    #[test]
    fn cohort_csv_round_trips_and_rejects_bad_rows() {
        let csv = "age_class,sex,survived,died\ncub,f,10,5\ncub,m,9,6\nyearling,f,7,3\nyearling,m,6,4\nadult,f,20,10\nadult,m,18,12\n";
        let cohort = CohortCounts::from_csv_reader(csv.as_bytes()).unwrap();
        assert_eq!(cohort.survived(AgeClass::Cub, Sex::Female), 10);
        assert_eq!(cohort.cell_total(AgeClass::Adult, Sex::Male), 30);

        let bad = "age_class,sex,survived,died\nkitten,f,1,1\n";
        assert!(matches!(
            CohortCounts::from_csv_reader(bad.as_bytes()),
            Err(CohortError::Malformed { row: 1, .. })
        ));
    }

    fn factorized_strategy() -> impl Strategy<Value = CohortCounts> {
        (
            proptest::array::uniform3(1u64..8),
            proptest::array::uniform2(1u64..8),
            proptest::array::uniform3(0u64..8),
            proptest::array::uniform2(0u64..8),
        )
            .prop_filter_map("survivors must fit in cells", |(aw, sw, asur, ssur)| {
                factorized_cohort(aw, sw, asur, ssur)
            })
    }

    proptest! {
        #[test]
        fn bayes_equals_direct_under_independence(cohort in factorized_strategy()) {
            prop_assume!(all_cells().all(|(a, s)| cohort.cell_total(a, s) > 0));
            let (bayes, diagnostics) = estimate_bayes(&cohort).unwrap();
            let direct = direct_estimate(&cohort).unwrap();
            for (a, s) in all_cells() {
                prop_assert!((bayes.get(a, s) - direct.get(a, s)).abs() <= 1e-12,
                    "cell ({}, {}): bayes {} vs direct {}", a, s, bayes.get(a, s), direct.get(a, s));
            }
            prop_assert!(diagnostics.clamped_cells.is_empty());
        }

        #[test]
        fn estimates_stay_in_unit_interval_and_clamps_are_reported(
            cells in proptest::array::uniform6((0u64..30, 0u64..30))
        ) {
            let mut cohort = CohortCounts::new();
            for ((a, s), (survived, died)) in all_cells().zip(cells) {
                cohort.add(a, s, survived, died);
            }
            if let Ok((table, diagnostics)) = estimate_bayes(&cohort) {
                for (a, s) in all_cells() {
                    let p = table.get(a, s);
                    prop_assert!((0.0..=1.0).contains(&p));
                    let raw = diagnostics.raw_value(a, s);
                    let clamped = diagnostics.clamped_cells.contains(&(a, s));
                    let outside = !(-CLAMP_REPORT_EPSILON..=1.0 + CLAMP_REPORT_EPSILON).contains(&raw);
                    prop_assert_eq!(clamped, outside);
                }
            }
        }

        #[test]
        fn bayes_is_invariant_under_uniform_count_scaling(
            cohort in factorized_strategy(),
            factor in 2u64..6,
        ) {
            prop_assume!(cohort.total_survived() > 0);
            let (base, _) = estimate_bayes(&cohort).unwrap();
            let (scaled, _) = estimate_bayes(&cohort.scaled(factor)).unwrap();
            for (a, s) in all_cells() {
                prop_assert!((base.get(a, s) - scaled.get(a, s)).abs() <= 1e-12);
            }
        }
    }
}
