//! Premium and reserve calculations on top of a simulated trajectory.
//!
//! Premium income accrues at rate pi*S(t); benefits pay out continuously at
//! rate b_I*I(t) + b_H*H(t) plus a death benefit. The zero-profit premium
//! balances the two over the whole coverage term. The reserve V(t) is
//! prospective: future premium income minus future benefit outgo on [t, T],
//! so it vanishes at the end of the term for every premium. The minimal
//! admissible premium is the smallest rate keeping V(t) nonnegative
//! throughout the term.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::RealScalar;
use crate::simulate::Trajectory;

/// Grid-relative floor under the remaining premium exposure; tails thinner
/// than this are quadrature noise, not priceable exposure.
pub const TAIL_EXPOSURE_FLOOR: f64 = 1e-12;

/// Errors raised by pricing operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActuarialError {
    /// The benefit schedule is unusable.
    #[error("invalid benefit schedule: {field} = {value} must be finite and nonnegative")]
    InvalidBenefit { field: &'static str, value: String },
    /// The trajectory cannot support pricing.
    #[error("degenerate trajectory: {reason}")]
    DegenerateTrajectory { reason: String },
    /// No part of the run carries enough premium exposure to price against.
    #[error("premium exposure underflow: integral of S over the whole term is {value}")]
    TailUnderflow { value: String },
}

/// Continuous benefit rates: b_I per infected, b_H per hospitalized, and d
/// per death.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: RealScalar + Deserialize<'de>"
))]
pub struct BenefitSchedule<T> {
    #[serde(rename = "b_I")]
    pub b_i: T,
    #[serde(rename = "b_H")]
    pub b_h: T,
    pub d: T,
}

impl<T: RealScalar> BenefitSchedule<T> {
    pub fn new(b_i: T, b_h: T, d: T) -> Result<Self, ActuarialError> {
        let schedule = BenefitSchedule { b_i, b_h, d };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<(), ActuarialError> {
        for (field, value) in [("b_I", self.b_i), ("b_H", self.b_h), ("d", self.d)] {
            if !(value.is_finite() && value >= T::zero()) {
                return Err(ActuarialError::InvalidBenefit {
                    field,
                    value: value.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// How the death benefit accrues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeathBenefit {
    /// d per death as it occurs: the payout rate is
    /// d*(gamma_I*I + gamma_H*H). This is the form the premium tables use.
    #[default]
    Flow,
    /// d per unit of accumulated deaths per unit time: the payout rate is
    /// d*D(t). Kept as an alternative reading of the death term.
    Stock,
}

/// Knobs for the pricing integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: RealScalar + Deserialize<'de>"
))]
pub struct PricingOptions<T> {
    pub death_benefit: DeathBenefit,
    /// Constant force of interest; both premium and benefit flows are
    /// discounted to the start of the term. Zero by default.
    pub force_of_interest: T,
}

impl<T: RealScalar> Default for PricingOptions<T> {
    fn default() -> Self {
        PricingOptions {
            death_benefit: DeathBenefit::Flow,
            force_of_interest: T::zero(),
        }
    }
}

/// Prospective reserve sampled on the trajectory grid; the final value is
/// always zero because no flows remain past the end of the term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: RealScalar + Deserialize<'de>"
))]
pub struct ReserveCurve<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
}

impl<T: RealScalar> ReserveCurve<T> {
    /// Time and value of the reserve minimum.
    pub fn min(&self) -> (T, T) {
        self.values.iter().zip(&self.times).fold(
            (self.times[0], self.values[0]),
            |acc, (&v, &t)| {
                if v < acc.1 {
                    (t, v)
                } else {
                    acc
                }
            },
        )
    }

    /// Reserve at the end of the term.
    pub fn terminal(&self) -> T {
        *self.values.last().expect("curve is never empty")
    }
}

/// Premiums and the zero-profit reserve for one trajectory and schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: RealScalar + Deserialize<'de>"
))]
pub struct PricingReport<T> {
    /// Premium rate at which income exactly covers benefits over the term.
    pub pi_zero_profit: T,
    /// Smallest premium rate keeping every tail of the contract
    /// self-supporting; never below the zero-profit rate.
    pub pi_star: T,
    /// Reserve under the zero-profit premium.
    pub reserve: ReserveCurve<T>,
    /// Length of the coverage term.
    pub horizon: T,
}

/// Cumulative premium exposure and cumulative benefit outgo on the grid,
/// discounted to the start of the term.
struct ExposureSeries<T> {
    base: Vec<T>,
    benefit: Vec<T>,
}

fn exposure_series<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
    options: &PricingOptions<T>,
) -> ExposureSeries<T> {
    let n = traj.len();
    if options.force_of_interest == T::zero() && options.death_benefit == DeathBenefit::Flow {
        // The integrator already carries these integrals at full order.
        let benefit = (0..n)
            .map(|k| {
                schedule.b_i * traj.cum_i[k]
                    + schedule.b_h * traj.cum_h[k]
                    + schedule.d * traj.cum_deaths[k]
            })
            .collect();
        return ExposureSeries {
            base: traj.cum_s.clone(),
            benefit,
        };
    }

    // General path: trapezoid accumulation of the discounted flows.
    let r = options.force_of_interest;
    let t0 = traj.times[0];
    let half = T::lit(0.5);
    let rate = |k: usize| -> (T, T) {
        let x = &traj.states[k];
        let disc = (-r * (traj.times[k] - t0)).exp();
        let death = match options.death_benefit {
            DeathBenefit::Flow => traj.params.gamma_i * x.i + traj.params.gamma_h * x.h,
            DeathBenefit::Stock => x.d,
        };
        (
            disc * x.s,
            disc * (schedule.b_i * x.i + schedule.b_h * x.h + schedule.d * death),
        )
    };

    let mut base = Vec::with_capacity(n);
    let mut benefit = Vec::with_capacity(n);
    base.push(T::zero());
    benefit.push(T::zero());
    let (mut prev_base, mut prev_ben) = rate(0);
    for k in 1..n {
        let dt = traj.times[k] - traj.times[k - 1];
        let (cur_base, cur_ben) = rate(k);
        base.push(base[k - 1] + half * dt * (prev_base + cur_base));
        benefit.push(benefit[k - 1] + half * dt * (prev_ben + cur_ben));
        prev_base = cur_base;
        prev_ben = cur_ben;
    }
    ExposureSeries { base, benefit }
}

fn check_priceable<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
) -> Result<(), ActuarialError> {
    schedule.validate()?;
    if traj.len() < 2 {
        return Err(ActuarialError::DegenerateTrajectory {
            reason: format!("need at least 2 grid nodes, got {}", traj.len()),
        });
    }
    Ok(())
}

/// Premium rate at which accumulated income equals accumulated benefits at
/// the end of the term, under default options.
pub fn zero_profit_premium<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
) -> Result<T, ActuarialError> {
    zero_profit_premium_with(traj, schedule, &PricingOptions::default())
}

/// Zero-profit premium under explicit options.
pub fn zero_profit_premium_with<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
    options: &PricingOptions<T>,
) -> Result<T, ActuarialError> {
    check_priceable(traj, schedule)?;
    let series = exposure_series(traj, schedule, options);
    let base = *series.base.last().expect("nonempty");
    if base <= T::zero() {
        return Err(ActuarialError::TailUnderflow {
            value: base.to_string(),
        });
    }
    Ok(*series.benefit.last().expect("nonempty") / base)
}

/// Prospective reserve under premium rate `premium` and default options.
pub fn reserve_curve<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
    premium: T,
) -> Result<ReserveCurve<T>, ActuarialError> {
    reserve_curve_with(traj, schedule, premium, &PricingOptions::default())
}

/// Prospective reserve under explicit options:
/// `V(t) = premium * base[t, T] - benefit[t, T]`, the value at time t of the
/// remaining premium income minus the remaining benefit outgo. Under a
/// nonzero force of interest the tail integrals carry discount factors
/// anchored at the start of the term, so the difference is accumulated back
/// to time t.
pub fn reserve_curve_with<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
    premium: T,
    options: &PricingOptions<T>,
) -> Result<ReserveCurve<T>, ActuarialError> {
    check_priceable(traj, schedule)?;
    let series = exposure_series(traj, schedule, options);
    let base_total = *series.base.last().expect("nonempty");
    let benefit_total = *series.benefit.last().expect("nonempty");
    let r = options.force_of_interest;
    let t0 = traj.times[0];
    let values = series
        .base
        .iter()
        .zip(&series.benefit)
        .zip(&traj.times)
        .map(|((&b, &out), &t)| {
            let accumulate = (r * (t - t0)).exp();
            accumulate * (premium * (base_total - b) - (benefit_total - out))
        })
        .collect();
    Ok(ReserveCurve {
        times: traj.times.clone(),
        values,
    })
}

/// Smallest premium rate whose prospective reserve stays nonnegative over
/// the whole term, under default options.
///
/// For each grid node t the tail ratio (remaining benefits over remaining
/// premium exposure) is the premium that breaks even on [t, T]; the result
/// is the maximum over nodes, together with the t -> T limit of the ratio,
/// which is the instantaneous benefit-to-exposure rate at the endpoint. The
/// node at t = 0 makes the result at least the zero-profit premium. Nodes
/// whose remaining exposure sits below a grid-scaled floor are noise and are
/// skipped.
pub fn minimal_admissible_premium<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
) -> Result<T, ActuarialError> {
    minimal_admissible_premium_with(traj, schedule, &PricingOptions::default())
}

/// Minimal admissible premium under explicit options.
pub fn minimal_admissible_premium_with<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
    options: &PricingOptions<T>,
) -> Result<T, ActuarialError> {
    check_priceable(traj, schedule)?;
    let series = exposure_series(traj, schedule, options);
    let n = traj.len();
    let base_total = series.base[n - 1];
    let benefit_total = series.benefit[n - 1];
    if base_total <= T::zero() {
        return Err(ActuarialError::TailUnderflow {
            value: base_total.to_string(),
        });
    }

    let floor = T::lit(TAIL_EXPOSURE_FLOOR) * (traj.params.lambda / traj.params.mu) * traj.step;
    let mut best = T::zero();
    for k in 0..n - 1 {
        let tail_base = base_total - series.base[k];
        if tail_base <= floor {
            continue;
        }
        let ratio = (benefit_total - series.benefit[k]) / tail_base;
        best = best.max(ratio);
    }

    // t -> T limit: discounting cancels, leaving the terminal rate ratio.
    let x = traj.final_state();
    if x.s > T::zero() {
        let death = match options.death_benefit {
            DeathBenefit::Flow => traj.params.gamma_i * x.i + traj.params.gamma_h * x.h,
            DeathBenefit::Stock => x.d,
        };
        let limit = (schedule.b_i * x.i + schedule.b_h * x.h + schedule.d * death) / x.s;
        best = best.max(limit);
    }
    Ok(best)
}

/// Zero-profit premium, minimal admissible premium, and the zero-profit
/// reserve in one report, under default options.
pub fn price<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
) -> Result<PricingReport<T>, ActuarialError> {
    price_with(traj, schedule, &PricingOptions::default())
}

/// Full pricing report under explicit options.
pub fn price_with<T: RealScalar>(
    traj: &Trajectory<T>,
    schedule: &BenefitSchedule<T>,
    options: &PricingOptions<T>,
) -> Result<PricingReport<T>, ActuarialError> {
    let pi_zero_profit = zero_profit_premium_with(traj, schedule, options)?;
    let pi_star = minimal_admissible_premium_with(traj, schedule, options)?;
    let reserve = reserve_curve_with(traj, schedule, pi_zero_profit, options)?;
    Ok(PricingReport {
        pi_zero_profit,
        pi_star,
        reserve,
        horizon: traj.t_end() - traj.t0(),
    })
}
