//! JSON configuration documents: schema, parsing with path-qualified
//! errors, and cross-field validation.

use crate::engine::{InitParams, ModelParams};
use crate::experiments::{SweepAxis, SweepSpec};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Optional sweep section of a config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs_per_scenario: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
}

/// A full configuration document. Unknown keys anywhere are rejected with
/// the offending path named.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    /// Free-form provenance note, e.g. how the survival defaults were
    /// produced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub model: ModelParams,
    pub init: InitParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config {path}: {message}")]
    Invalid { path: String, message: String },
    #[error("config: {0}")]
    Io(#[from] std::io::Error),
}

impl ConfigError {
    fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

impl ConfigDocument {
    /// The built-in defaults; `config/default.json` in the repository is
    /// this document serialized.
    pub fn default_document() -> ConfigDocument {
        ConfigDocument {
            notes: Some(
                "Survival defaults recovered by `foxpop calibrate` against \
                 targets/cub_survival.csv (fitted to reported outcome fractions, \
                 not directly measured); see README."
                    .to_string(),
            ),
            model: ModelParams::default(),
            init: InitParams::default(),
            sweep: None,
        }
    }

    pub fn from_json_str(text: &str) -> Result<ConfigDocument, ConfigError> {
        let deserializer = &mut serde_json::Deserializer::from_str(text);
        let document: ConfigDocument =
            serde_path_to_error::deserialize(deserializer).map_err(|e| ConfigError::Invalid {
                path: e.path().to_string(),
                message: e.inner().to_string(),
            })?;
        document.validate()?;
        Ok(document)
    }

    pub fn from_json_path(path: &Path) -> Result<ConfigDocument, ConfigError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_pretty(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("config serializes");
        text.push('\n');
        text
    }

    /// Cross-field checks that the schema alone cannot express.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = &self.model;
        if m.num_ranges == 0 {
            return Err(ConfigError::invalid("model.num_ranges", "must be at least 1"));
        }
        if m.max_age < 1 || m.max_age > crate::population::MAX_AGE {
            return Err(ConfigError::invalid(
                "model.max_age",
                format!("must be in [1, {}]", crate::population::MAX_AGE),
            ));
        }
        if m.extinction_threshold >= m.max_population {
            return Err(ConfigError::invalid(
                "model.extinction_threshold",
                "must be below model.max_population",
            ));
        }
        if m.horizon <= m.burn_in {
            return Err(ConfigError::invalid("model.horizon", "must exceed model.burn_in"));
        }
        for (path, value) in [
            ("model.repro.p_adult", m.repro.p_adult),
            ("model.repro.p_yearling", m.repro.p_yearling),
            ("model.repro.p_sex_female", m.repro.p_sex_female),
        ] {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::invalid(path, "must be a probability in [0, 1]"));
            }
        }
        if !m.repro.litter_mean.is_finite() {
            return Err(ConfigError::invalid("model.repro.litter_mean", "must be finite"));
        }
        if !m.repro.litter_sd.is_finite() || m.repro.litter_sd < 0.0 {
            return Err(ConfigError::invalid(
                "model.repro.litter_sd",
                "must be finite and non-negative",
            ));
        }

        let i = &self.init;
        for (path, value) in [
            ("init.prop_adult", i.prop_adult),
            ("init.prop_yearling", i.prop_yearling),
            ("init.prop_cub", i.prop_cub),
        ] {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::invalid(path, "must be a fraction in [0, 1]"));
            }
        }
        let prop_sum = i.prop_adult + i.prop_yearling + i.prop_cub;
        if (prop_sum - 1.0).abs() > 1e-9 {
            return Err(ConfigError::invalid(
                "init.prop_adult/prop_yearling/prop_cub",
                format!("must sum to 1 (got {prop_sum})"),
            ));
        }
        if i.n0 > 0 && i.prop_adult + i.prop_yearling <= 0.0 {
            return Err(ConfigError::invalid(
                "init.prop_adult",
                "adult + yearling share must be positive when n0 > 0",
            ));
        }
        if i.adult_age_min < 2 {
            return Err(ConfigError::invalid("init.adult_age_min", "adults start at age 2"));
        }
        if i.adult_age_min > i.adult_age_max || i.adult_age_max > m.max_age {
            return Err(ConfigError::invalid(
                "init.adult_age_max",
                "need adult_age_min <= adult_age_max <= model.max_age",
            ));
        }

        if let Some(sweep) = &self.sweep {
            if SweepAxis::from_slug(&sweep.axis).is_none() {
                return Err(ConfigError::invalid(
                    "sweep.axis",
                    format!(
                        "unknown axis `{}` (expected one of {})",
                        sweep.axis,
                        SweepAxis::ALL.map(|a| a.slug()).join(", ")
                    ),
                ));
            }
            if matches!(&sweep.values, Some(v) if v.is_empty()) {
                return Err(ConfigError::invalid("sweep.values", "must be nonempty when given"));
            }
            if sweep.runs_per_scenario == Some(0) {
                return Err(ConfigError::invalid("sweep.runs_per_scenario", "must be at least 1"));
            }
        }
        Ok(())
    }

    /// Builds the effective sweep spec, letting CLI overrides win over the
    /// document and falling back to the axis's standard grid.
    pub fn sweep_spec(
        &self,
        axis_override: Option<SweepAxis>,
        runs_override: Option<u32>,
        seed_override: Option<u64>,
    ) -> Result<SweepSpec, ConfigError> {
        let section = self.sweep.as_ref();
        let axis = match axis_override {
            Some(axis) => axis,
            None => section
                .map(|s| SweepAxis::from_slug(&s.axis).expect("validated axis"))
                .ok_or_else(|| {
                    ConfigError::invalid("sweep.axis", "no axis given (use --axis or a sweep section)")
                })?,
        };
        let configured_values = section.and_then(|s| {
            let matches_axis = SweepAxis::from_slug(&s.axis) == Some(axis);
            matches_axis.then(|| s.values.clone()).flatten()
        });
        Ok(SweepSpec {
            axis,
            values: configured_values.unwrap_or_else(|| axis.default_values()),
            runs_per_scenario: runs_override
                .or_else(|| section.and_then(|s| s.runs_per_scenario))
                .unwrap_or(100),
            base_seed: seed_override
                .or_else(|| section.and_then(|s| s.base_seed))
                .unwrap_or(0),
        })
    }
}
