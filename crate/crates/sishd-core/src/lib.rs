//! Dynamics, stability analysis, simulation, and insurance pricing for the
//! SISHD compartmental epidemic model.
//!
//! The model tracks susceptible (S), infected (I), hospitalized (H), and
//! cumulatively dead (D) populations:
//!
//! ```text
//! S' = Lambda - beta*I*S - beta*epsilon*H*S + alpha_I*I - mu*S + alpha_H*H
//! I' = beta*I*S + beta*epsilon*H*S - (alpha_I + gamma_I + mu + delta)*I
//! H' = delta*I - (gamma_H + mu + alpha_H)*H
//! D' = gamma_I*I + gamma_H*H
//! ```
//!
//! The crate is organized in four layers:
//!
//! - [`model`]: parameter/state records, the vector field, and the invariant
//!   feasible region.
//! - [`analysis`]: basic reproduction number (closed form and next-generation
//!   matrix), equilibria, Routh-Hurwitz stability classification, global
//!   stability conditions for the disease-free equilibrium, and normalized
//!   sensitivity indices.
//! - [`simulate`]: fixed-step classical RK4 integration of an augmented
//!   8-dimensional system that carries the running integrals of S, I, H, and
//!   the disease-death flow alongside the state.
//! - [`actuarial`]: equivalence-principle premium, reserve curve, and the
//!   minimal premium keeping the reserve nonnegative over the policy horizon.
//!
//! All numerical code is generic over the floating-point scalar via
//! [`RealScalar`]; `f64` aliases for the main types are exported at the crate
//! root.

pub mod actuarial;
pub mod analysis;
pub mod model;
pub mod scalar;
pub mod simulate;

pub use scalar::RealScalar;

/// Double-precision model parameters.
pub type ModelParamsF64 = model::ModelParams<f64>;
/// Double-precision compartment state.
pub type StateF64 = model::State<f64>;
/// Double-precision analysis report.
pub type AnalysisReportF64 = analysis::AnalysisReport<f64>;
/// Double-precision sensitivity report.
pub type SensitivityReportF64 = analysis::SensitivityReport<f64>;
/// Double-precision simulation configuration.
pub type SimConfigF64 = simulate::SimConfig<f64>;
/// Double-precision trajectory with cumulative integrals.
pub type TrajectoryF64 = simulate::Trajectory<f64>;
/// Double-precision benefit schedule.
pub type BenefitScheduleF64 = actuarial::BenefitSchedule<f64>;
/// Double-precision pricing report.
pub type PricingReportF64 = actuarial::PricingReport<f64>;
