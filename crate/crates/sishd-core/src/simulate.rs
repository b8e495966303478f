//! Fixed-step fourth-order Runge-Kutta integration of the model, with the
//! cumulative exposures needed by the actuarial layer carried as extra
//! quadrature components of the same order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{vector_field_unchecked, ModelParams, State};
use crate::scalar::RealScalar;

/// Compartment values more negative than this abort the run; smaller
/// excursions are ordinary roundoff near the boundary.
pub const POSITIVITY_TOL: f64 = -1e-9;

/// Upper bound on the number of grid steps a single run may request.
pub const MAX_STEPS: u64 = 200_000_000;

/// Errors raised by the integrator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    /// The run configuration is unusable.
    #[error("invalid simulation config: {reason}")]
    InvalidConfig { reason: String },
    /// A state component left the representable range.
    #[error("non-finite state at t = {t}")]
    NonFinite { t: String },
    /// A compartment crossed the positivity tolerance.
    #[error("positivity breach at t = {t}: {component} = {value}")]
    PositivityBreach {
        t: String,
        component: &'static str,
        value: String,
    },
    /// A query time lies outside the simulated span.
    #[error("time {t} outside simulated span [{t0}, {t_end}]")]
    OutOfRange {
        t: String,
        t0: String,
        t_end: String,
    },
}

/// Time grid and initial condition for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: RealScalar + Deserialize<'de>"
))]
pub struct SimConfig<T> {
    pub t0: T,
    pub t_end: T,
    pub step: T,
    pub initial: State<T>,
}

impl<T: RealScalar> SimConfig<T> {
    pub fn new(t0: T, t_end: T, step: T, initial: State<T>) -> Result<Self, SimError> {
        let config = SimConfig {
            t0,
            t_end,
            step,
            initial,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |reason: String| Err(SimError::InvalidConfig { reason });
        if !self.t0.is_finite() || !self.t_end.is_finite() {
            return invalid(format!(
                "span endpoints must be finite, got [{}, {}]",
                self.t0, self.t_end
            ));
        }
        if self.t_end <= self.t0 {
            return invalid(format!(
                "t_end must exceed t0, got [{}, {}]",
                self.t0, self.t_end
            ));
        }
        if !(self.step.is_finite() && self.step > T::zero()) {
            return invalid(format!(
                "step must be finite and positive, got {}",
                self.step
            ));
        }
        if let Err(e) = self.initial.validate() {
            return invalid(format!("initial state: {e}"));
        }
        if step_count(self.t0, self.t_end, self.step).is_none() {
            return invalid(format!(
                "span [{}, {}] at step {} exceeds the {MAX_STEPS}-step budget",
                self.t0, self.t_end, self.step
            ));
        }
        Ok(())
    }
}

/// Compartment state together with its running integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: RealScalar + Deserialize<'de>"
))]
pub struct AugmentedState<T> {
    pub state: State<T>,
    /// Integral of S over elapsed time.
    pub cum_s: T,
    /// Integral of I over elapsed time.
    pub cum_i: T,
    /// Integral of H over elapsed time.
    pub cum_h: T,
    /// Integral of the death flow gamma_I*I + gamma_H*H; equals D(t) - D(0)
    /// along exact solutions.
    pub cum_deaths: T,
}

impl<T: RealScalar> AugmentedState<T> {
    /// Starts the integrals at zero.
    pub fn from_state(state: State<T>) -> Self {
        AugmentedState {
            state,
            cum_s: T::zero(),
            cum_i: T::zero(),
            cum_h: T::zero(),
            cum_deaths: T::zero(),
        }
    }

    fn to_array(self) -> [T; 8] {
        [
            self.state.s,
            self.state.i,
            self.state.h,
            self.state.d,
            self.cum_s,
            self.cum_i,
            self.cum_h,
            self.cum_deaths,
        ]
    }

    fn from_array(y: [T; 8]) -> Self {
        AugmentedState {
            state: State {
                s: y[0],
                i: y[1],
                h: y[2],
                d: y[3],
            },
            cum_s: y[4],
            cum_i: y[5],
            cum_h: y[6],
            cum_deaths: y[7],
        }
    }
}

/// Solution on a uniform grid (plus one shortened final step when the span
/// is not an exact multiple of the step).
///
/// Invariants on construction: times are strictly increasing from t0 to
/// t_end, every cumulative series starts at zero and is nondecreasing for
/// nonnegative trajectories, and `cum_deaths[k]` tracks `D(k) - D(0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: RealScalar + Deserialize<'de>"
))]
pub struct Trajectory<T> {
    /// Parameters the run used; pricing needs them again.
    pub params: ModelParams<T>,
    /// Nominal grid step.
    pub step: T,
    pub times: Vec<T>,
    pub states: Vec<State<T>>,
    pub cum_s: Vec<T>,
    pub cum_i: Vec<T>,
    pub cum_h: Vec<T>,
    pub cum_deaths: Vec<T>,
}

/// Remaining exposure integrals from a query time to the end of the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailIntegrals<T> {
    pub s: T,
    pub i: T,
    pub h: T,
    pub deaths: T,
}

impl<T: RealScalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t0(&self) -> T {
        self.times[0]
    }

    pub fn t_end(&self) -> T {
        *self.times.last().expect("trajectory is never empty")
    }

    pub fn final_state(&self) -> &State<T> {
        self.states.last().expect("trajectory is never empty")
    }

    /// Integrals of S, I, H, and the death flow over [t, t_end], with linear
    /// interpolation of the cumulants between grid nodes.
    pub fn tail_integrals(&self, t: T) -> Result<TailIntegrals<T>, SimError> {
        let (t0, t_end) = (self.t0(), self.t_end());
        if !(t >= t0 && t <= t_end) {
            return Err(SimError::OutOfRange {
                t: t.to_string(),
                t0: t0.to_string(),
                t_end: t_end.to_string(),
            });
        }
        let at = |series: &[T]| -> T {
            let total = *series.last().expect("trajectory is never empty");
            total - interpolate(&self.times, series, t)
        };
        Ok(TailIntegrals {
            s: at(&self.cum_s),
            i: at(&self.cum_i),
            h: at(&self.cum_h),
            deaths: at(&self.cum_deaths),
        })
    }
}

/// Value of a piecewise-linear series at `t`; `t` must lie within the grid.
fn interpolate<T: RealScalar>(times: &[T], series: &[T], t: T) -> T {
    let idx = times.partition_point(|&node| node < t);
    if idx == 0 {
        return series[0];
    }
    if idx == times.len() {
        return *series.last().expect("nonempty");
    }
    let (tl, tr) = (times[idx - 1], times[idx]);
    let (vl, vr) = (series[idx - 1], series[idx]);
    let w = (t - tl) / (tr - tl);
    vl + w * (vr - vl)
}

fn derivative8<T: RealScalar>(p: &ModelParams<T>, y: &[T; 8]) -> [T; 8] {
    let state = State {
        s: y[0],
        i: y[1],
        h: y[2],
        d: y[3],
    };
    let f = vector_field_unchecked(p, &state);
    [
        f.ds,
        f.di,
        f.dh,
        f.dd,
        y[0],
        y[1],
        y[2],
        p.gamma_i * y[1] + p.gamma_h * y[2],
    ]
}

fn rk4_array<T: RealScalar>(p: &ModelParams<T>, y: &[T; 8], h: T) -> [T; 8] {
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let two = T::lit(2.0);

    let k1 = derivative8(p, y);
    let mut stage = *y;
    for j in 0..8 {
        stage[j] = y[j] + half * h * k1[j];
    }
    let k2 = derivative8(p, &stage);
    for j in 0..8 {
        stage[j] = y[j] + half * h * k2[j];
    }
    let k3 = derivative8(p, &stage);
    for j in 0..8 {
        stage[j] = y[j] + h * k3[j];
    }
    let k4 = derivative8(p, &stage);

    let mut out = *y;
    for j in 0..8 {
        out[j] = y[j] + h * sixth * (k1[j] + two * k2[j] + two * k3[j] + k4[j]);
    }
    out
}

/// One classical Runge-Kutta step of size `h` from `y`, advancing the
/// compartments and their running integrals together.
pub fn rk4_step<T: RealScalar>(
    p: &ModelParams<T>,
    y: &AugmentedState<T>,
    h: T,
) -> Result<AugmentedState<T>, SimError> {
    if !(h.is_finite() && h > T::zero()) {
        return Err(SimError::InvalidConfig {
            reason: format!("step must be finite and positive, got {h}"),
        });
    }
    let next = rk4_array(p, &y.to_array(), h);
    if next.iter().any(|v| !v.is_finite()) {
        return Err(SimError::NonFinite {
            t: "one step".to_string(),
        });
    }
    Ok(AugmentedState::from_array(next))
}

/// Number of whole steps in the span, treating ratios within one part in
/// 1e12 of an integer as exact; `None` when over the step budget.
fn step_count<T: RealScalar>(t0: T, t_end: T, step: T) -> Option<u64> {
    let ratio = ((t_end - t0) / step).to_f64()?;
    let nudged = ratio + (ratio * 1e-12).max(1e-9);
    if !(0.0..=MAX_STEPS as f64).contains(&nudged) {
        return None;
    }
    Some(nudged.floor() as u64)
}

/// Integrates the model over the configured span.
///
/// The grid is uniform with node times `t0 + k*step`; when the span is not
/// an exact multiple of the step, one shortened final step lands exactly on
/// `t_end`. The run aborts with an error if any component goes non-finite or
/// crosses the positivity tolerance.
pub fn integrate<T: RealScalar>(
    p: &ModelParams<T>,
    config: &SimConfig<T>,
) -> Result<Trajectory<T>, SimError> {
    p.validate().map_err(|e| SimError::InvalidConfig {
        reason: e.to_string(),
    })?;
    config.validate()?;

    let n =
        step_count(config.t0, config.t_end, config.step).expect("validate() bounds the step count");
    let span = config.t_end - config.t0;
    let remainder = span - T::from_u64(n).expect("step count fits the scalar") * config.step;
    let has_tail = remainder > config.step * T::lit(1e-9);
    let total = n + u64::from(has_tail);

    let capacity = usize::try_from(total + 1).expect("step budget fits usize");
    let mut traj = Trajectory {
        params: *p,
        step: config.step,
        times: Vec::with_capacity(capacity),
        states: Vec::with_capacity(capacity),
        cum_s: Vec::with_capacity(capacity),
        cum_i: Vec::with_capacity(capacity),
        cum_h: Vec::with_capacity(capacity),
        cum_deaths: Vec::with_capacity(capacity),
    };

    let mut y = AugmentedState::from_state(config.initial).to_array();
    let push = |traj: &mut Trajectory<T>, t: T, y: &[T; 8]| {
        traj.times.push(t);
        traj.states.push(State {
            s: y[0],
            i: y[1],
            h: y[2],
            d: y[3],
        });
        traj.cum_s.push(y[4]);
        traj.cum_i.push(y[5]);
        traj.cum_h.push(y[6]);
        traj.cum_deaths.push(y[7]);
    };
    push(&mut traj, config.t0, &y);

    let tol = T::lit(POSITIVITY_TOL);
    for k in 1..=total {
        let (h, t) = if k <= n {
            let t = if k == n && !has_tail {
                config.t_end
            } else {
                config.t0 + T::from_u64(k).expect("grid index fits the scalar") * config.step
            };
            (config.step, t)
        } else {
            (remainder, config.t_end)
        };
        y = rk4_array(p, &y, h);

        if y.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite { t: t.to_string() });
        }
        for (component, value) in [("S", y[0]), ("I", y[1]), ("H", y[2]), ("D", y[3])] {
            if value < tol {
                return Err(SimError::PositivityBreach {
                    t: t.to_string(),
                    component,
                    value: value.to_string(),
                });
            }
        }
        push(&mut traj, t, &y);
    }
    Ok(traj)
}
