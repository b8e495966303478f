//! Runs a list of scenarios: analysis for every scenario, integration and
//! optional pricing for every (scenario, initial) pair. Rows are assembled
//! in (scenario name, initial index) order so output is independent of
//! execution order; failures are collected without aborting the batch.

use sishd_core::actuarial::{
    minimal_admissible_premium_with, price_with, reserve_curve_with, PricingOptions, PricingReport,
    ReserveCurve,
};
use sishd_core::analysis::{classify_stability, sensitivity_indices};
use sishd_core::model::State;
use sishd_core::simulate::{integrate, SimConfig, Trajectory};
use sishd_core::{AnalysisReportF64, SensitivityReportF64};

use crate::config::Scenario;
use crate::CliError;

/// What the batch does beyond analysis and integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BatchMode {
    /// Integrate only.
    Simulate,
    /// Integrate, then price every scenario that carries a benefit schedule.
    Price(PricingOptions<f64>),
}

/// Grid overrides applied uniformly to every scenario.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridOverrides {
    pub step: Option<f64>,
    pub horizon: Option<f64>,
}

/// Compact per-pair record of a finished integration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySummary {
    pub nodes: usize,
    pub t_end: f64,
    pub final_state: State<f64>,
    pub cum_s: f64,
    pub cum_i: f64,
    pub cum_h: f64,
    pub cum_deaths: f64,
}

impl TrajectorySummary {
    fn of(traj: &Trajectory<f64>) -> Self {
        TrajectorySummary {
            nodes: traj.len(),
            t_end: traj.t_end(),
            final_state: *traj.final_state(),
            cum_s: *traj.cum_s.last().expect("nonempty"),
            cum_i: *traj.cum_i.last().expect("nonempty"),
            cum_h: *traj.cum_h.last().expect("nonempty"),
            cum_deaths: *traj.cum_deaths.last().expect("nonempty"),
        }
    }
}

/// Compact per-pair pricing record.
#[derive(Debug, Clone, PartialEq)]
pub struct PricingSummary {
    pub pi_zero_profit: f64,
    pub pi_star: f64,
    /// Minimum of the reserve under the zero-profit premium.
    pub reserve_min_t: f64,
    pub reserve_min_value: f64,
}

/// Full pricing output for one pair, handed to the observer while the
/// trajectory is still alive.
#[derive(Debug, Clone, PartialEq)]
pub struct PricedCurves {
    pub report: PricingReport<f64>,
    /// Multipliers applied to the minimal admissible premium, paired with
    /// the reserve curve at each multiplied premium.
    pub multipliers: Vec<f64>,
    pub curves: Vec<ReserveCurve<f64>>,
}

/// One finished (scenario, initial) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchRow {
    pub scenario: String,
    /// Zero-based index into the scenario's initials.
    pub initial_index: usize,
    pub analysis: AnalysisReportF64,
    pub sensitivity: SensitivityReportF64,
    pub trajectory: TrajectorySummary,
    pub pricing: Option<PricingSummary>,
}

/// One failed pair; the batch carries on past it.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchFailure {
    pub scenario: String,
    pub initial_index: usize,
    pub error: CliError,
}

/// Inputs recorded alongside results so a run can be reproduced.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// FNV-1a hash of the raw config text, as 16 hex digits.
    pub config_hash: String,
    /// Effective grid step, or "mixed" when scenarios differ.
    pub step: String,
    pub version: String,
}

/// Everything a batch produced.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchResult {
    pub rows: Vec<BatchRow>,
    pub failures: Vec<BatchFailure>,
    pub provenance: Provenance,
}

impl BatchResult {
    /// The failure with the highest exit code, if any failed.
    pub fn worst_failure(&self) -> Option<&BatchFailure> {
        self.failures.iter().max_by_key(|f| f.error.exit_code())
    }
}

/// Live view of one pair offered to the observer before its trajectory is
/// dropped; full trajectories are too large to keep for a whole batch.
pub struct PairOutput<'a> {
    pub scenario: &'a Scenario,
    pub initial_index: usize,
    pub trajectory: &'a Trajectory<f64>,
    pub pricing: Option<&'a PricedCurves>,
}

/// 64-bit FNV-1a hash.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn effective_step(scenario: &Scenario, overrides: &GridOverrides) -> f64 {
    overrides.step.unwrap_or(scenario.sim.step)
}

fn build_provenance(
    config_text: &str,
    scenarios: &[Scenario],
    overrides: &GridOverrides,
) -> Provenance {
    let mut steps = scenarios
        .iter()
        .map(|s| effective_step(s, overrides))
        .collect::<Vec<_>>();
    steps.dedup();
    let step = match steps.as_slice() {
        [only] => format!("{only}"),
        _ => "mixed".to_string(),
    };
    Provenance {
        config_hash: format!("{:016x}", fnv1a64(config_text.as_bytes())),
        step,
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// Runs every (scenario, initial) pair sequentially, calling `observer` with
/// each finished pair. Integration or pricing failures are collected;
/// observer errors (I/O) abort the batch.
pub fn run_batch(
    scenarios: &[Scenario],
    config_text: &str,
    mode: BatchMode,
    overrides: &GridOverrides,
    mut observer: impl FnMut(&PairOutput<'_>) -> Result<(), CliError>,
) -> Result<BatchResult, CliError> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();

    for scenario in scenarios {
        let analysis = classify_stability(&scenario.params);
        let sensitivity = sensitivity_indices(&scenario.params);
        let step = effective_step(scenario, overrides);
        let t_end = overrides.horizon.unwrap_or(scenario.sim.t_end);

        for (initial_index, initial) in scenario.initials.iter().enumerate() {
            let pair = || format!("{}/IC{}", scenario.name, initial_index + 1);
            let config = match SimConfig::new(scenario.sim.t0, t_end, step, *initial) {
                Ok(c) => c,
                Err(e) => {
                    failures.push(BatchFailure {
                        scenario: scenario.name.clone(),
                        initial_index,
                        error: CliError::Config(format!("{}: {e}", pair())),
                    });
                    continue;
                }
            };
            let traj = match integrate(&scenario.params, &config) {
                Ok(t) => t,
                Err(e) => {
                    let mapped = CliError::from(e);
                    let error = match mapped {
                        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", pair())),
                        CliError::Numerical(msg) => {
                            CliError::Numerical(format!("{}: {msg}", pair()))
                        }
                        other => other,
                    };
                    failures.push(BatchFailure {
                        scenario: scenario.name.clone(),
                        initial_index,
                        error,
                    });
                    continue;
                }
            };

            let priced = match (&mode, &scenario.benefits) {
                (BatchMode::Price(options), Some(benefits)) => {
                    match price_pair(&traj, benefits, options, scenario) {
                        Ok(p) => Some(p),
                        Err(e) => {
                            failures.push(BatchFailure {
                                scenario: scenario.name.clone(),
                                initial_index,
                                error: CliError::Numerical(format!("{}: {e}", pair())),
                            });
                            continue;
                        }
                    }
                }
                _ => None,
            };

            observer(&PairOutput {
                scenario,
                initial_index,
                trajectory: &traj,
                pricing: priced.as_ref(),
            })?;

            let pricing = priced.map(|p| {
                let (t, v) = p.report.reserve.min();
                PricingSummary {
                    pi_zero_profit: p.report.pi_zero_profit,
                    pi_star: p.report.pi_star,
                    reserve_min_t: t,
                    reserve_min_value: v,
                }
            });
            rows.push(BatchRow {
                scenario: scenario.name.clone(),
                initial_index,
                analysis: analysis.clone(),
                sensitivity: sensitivity.clone(),
                trajectory: TrajectorySummary::of(&traj),
                pricing,
            });
        }
    }

    rows.sort_by(|a, b| {
        (a.scenario.as_str(), a.initial_index).cmp(&(b.scenario.as_str(), b.initial_index))
    });
    failures.sort_by(|a, b| {
        (a.scenario.as_str(), a.initial_index).cmp(&(b.scenario.as_str(), b.initial_index))
    });
    Ok(BatchResult {
        rows,
        failures,
        provenance: build_provenance(config_text, scenarios, overrides),
    })
}

fn price_pair(
    traj: &Trajectory<f64>,
    benefits: &sishd_core::actuarial::BenefitSchedule<f64>,
    options: &PricingOptions<f64>,
    scenario: &Scenario,
) -> Result<PricedCurves, sishd_core::actuarial::ActuarialError> {
    let report = price_with(traj, benefits, options)?;
    let pi_star = minimal_admissible_premium_with(traj, benefits, options)?;
    let multipliers = scenario.effective_multipliers();
    let curves = multipliers
        .iter()
        .map(|m| reserve_curve_with(traj, benefits, m * pi_star, options))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PricedCurves {
        report,
        multipliers,
        curves,
    })
}
