//! Scenario configuration files: JSON with field names mirroring the model's
//! symbols. The ten reference parameter sets ship as a bundled config.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sishd_core::actuarial::BenefitSchedule;
use sishd_core::model::{ModelParams, State};

use crate::CliError;

/// Bundled scenario grid: parameter sets A1-A5 and B1-B5, each with the five
/// shared initial states; B sets carry the benefit schedule and premium
/// multipliers used by the premium tables.
pub const BUNDLED_CONFIG: &str = include_str!("data/published_scenarios.json");

/// Grid step used when a scenario omits one.
pub const DEFAULT_STEP: f64 = 1e-3;

fn default_step() -> f64 {
    DEFAULT_STEP
}

/// Time grid of a scenario; each initial state is integrated over the same
/// grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub t0: f64,
    pub t_end: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

/// One named experiment: a parameter set, a list of initial states, a time
/// grid, and optionally a benefit schedule with premium multipliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub params: ModelParams<f64>,
    pub initials: Vec<State<f64>>,
    pub sim: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benefits: Option<BenefitSchedule<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premium_multipliers: Option<Vec<f64>>,
}

impl Scenario {
    /// Multipliers applied to the minimal admissible premium when emitting
    /// reserve columns and charts; a lone 1.0 when unspecified.
    pub fn effective_multipliers(&self) -> Vec<f64> {
        self.premium_multipliers
            .clone()
            .unwrap_or_else(|| vec![1.0])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    scenarios: Vec<Scenario>,
}

/// Parses and validates a config from its text.
pub fn parse_config(text: &str) -> Result<Vec<Scenario>, CliError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
        CliError::Config(format!(
            "config parse error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    validate_scenarios(&file.scenarios)?;
    Ok(file.scenarios)
}

/// Loads and validates a config file, also returning the raw text so callers
/// can hash it into provenance records.
pub fn load_config_with_text(path: &Path) -> Result<(Vec<Scenario>, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let scenarios = parse_config(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    Ok((scenarios, text))
}

/// Loads and validates a config file.
pub fn load_config(path: &Path) -> Result<Vec<Scenario>, CliError> {
    load_config_with_text(path).map(|(scenarios, _)| scenarios)
}

/// The bundled reference scenarios.
pub fn bundled_scenarios() -> Vec<Scenario> {
    parse_config(BUNDLED_CONFIG).expect("bundled config is valid")
}

fn validate_scenarios(scenarios: &[Scenario]) -> Result<(), CliError> {
    if scenarios.is_empty() {
        return Err(CliError::Config("no scenarios".to_string()));
    }
    let mut names = HashSet::new();
    for scenario in scenarios {
        let context = |msg: String| CliError::Config(format!("scenario {}: {msg}", scenario.name));
        if scenario.name.is_empty() {
            return Err(CliError::Config("scenario with empty name".to_string()));
        }
        if !names.insert(scenario.name.as_str()) {
            return Err(CliError::Config(format!(
                "duplicate scenario name {}",
                scenario.name
            )));
        }
        scenario
            .params
            .validate()
            .map_err(|e| context(e.to_string()))?;
        if scenario.initials.is_empty() {
            return Err(context("initials must be nonempty".to_string()));
        }
        for (k, state) in scenario.initials.iter().enumerate() {
            state
                .validate()
                .map_err(|e| context(format!("initial {}: {e}", k + 1)))?;
        }
        if !(scenario.sim.t_end.is_finite() && scenario.sim.t_end > scenario.sim.t0) {
            return Err(context(format!(
                "sim.t_end must exceed t0, got [{}, {}]",
                scenario.sim.t0, scenario.sim.t_end
            )));
        }
        if !(scenario.sim.step.is_finite() && scenario.sim.step > 0.0) {
            return Err(context(format!(
                "sim.step must be positive, got {}",
                scenario.sim.step
            )));
        }
        if let Some(benefits) = &scenario.benefits {
            benefits.validate().map_err(|e| context(e.to_string()))?;
        }
        if let Some(multipliers) = &scenario.premium_multipliers {
            if multipliers.is_empty() {
                return Err(context("premium_multipliers must be nonempty".to_string()));
            }
            for &m in multipliers {
                if !(m.is_finite() && m > 0.0) {
                    return Err(context(format!("premium multiplier {m} must be positive")));
                }
            }
        }
    }
    Ok(())
}
