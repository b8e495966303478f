//! Parameter and state records of the SISHD system, its vector field, and
//! the invariant feasible region.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::RealScalar;

/// Validation and input errors raised at the model layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    /// A parameter failed its positivity or range invariant.
    #[error("parameter `{field}` = {value} is invalid: {requirement}")]
    InvalidParameter {
        field: &'static str,
        value: String,
        requirement: &'static str,
    },
    /// A state component is negative or non-finite.
    #[error("state component `{field}` = {value} is invalid: must be finite and nonnegative")]
    InvalidState { field: &'static str, value: String },
    /// An operation received a non-finite input.
    #[error("non-finite input in {context}")]
    NonFinite { context: &'static str },
}

/// Parameters of the SISHD system.
///
/// All rates are per day; `epsilon` is the dimensionless relative
/// infectiousness of hospitalized individuals, in `[0, 1]`. Every other
/// field must be strictly positive. Serialized field names follow the
/// conventional symbols (`Lambda`, `alpha_I`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    /// Recruitment rate into the susceptible class (individuals/day).
    #[serde(rename = "Lambda")]
    pub lambda: T,
    /// Natural death rate (1/day).
    pub mu: T,
    /// Transmission rate (1/(individual * day)).
    pub beta: T,
    /// Relative infectiousness of hospitalized individuals.
    pub epsilon: T,
    /// Recovery rate from the infected class (1/day).
    #[serde(rename = "alpha_I")]
    pub alpha_i: T,
    /// Disease-induced death rate in the infected class (1/day).
    #[serde(rename = "gamma_I")]
    pub gamma_i: T,
    /// Hospitalization rate of infected individuals (1/day).
    pub delta: T,
    /// Disease-induced death rate in the hospitalized class (1/day).
    #[serde(rename = "gamma_H")]
    pub gamma_h: T,
    /// Discharge (recovery) rate in the hospitalized class (1/day).
    #[serde(rename = "alpha_H")]
    pub alpha_h: T,
}

impl<T: RealScalar> ModelParams<T> {
    /// Builds a parameter set, enforcing all invariants.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: T,
        mu: T,
        beta: T,
        epsilon: T,
        alpha_i: T,
        gamma_i: T,
        delta: T,
        gamma_h: T,
        alpha_h: T,
    ) -> Result<Self, ModelError> {
        let params = Self {
            lambda,
            mu,
            beta,
            epsilon,
            alpha_i,
            gamma_i,
            delta,
            gamma_h,
            alpha_h,
        };
        params.validate()?;
        Ok(params)
    }

    /// Checks positivity of all rates and the `[0, 1]` range of `epsilon`.
    pub fn validate(&self) -> Result<(), ModelError> {
        let rates: [(&'static str, T); 8] = [
            ("Lambda", self.lambda),
            ("mu", self.mu),
            ("beta", self.beta),
            ("alpha_I", self.alpha_i),
            ("gamma_I", self.gamma_i),
            ("delta", self.delta),
            ("gamma_H", self.gamma_h),
            ("alpha_H", self.alpha_h),
        ];
        for (field, value) in rates {
            if !value.is_finite() || value <= T::zero() {
                return Err(ModelError::InvalidParameter {
                    field,
                    value: value.to_string(),
                    requirement: "must be finite and strictly positive",
                });
            }
        }
        if !self.epsilon.is_finite() || self.epsilon < T::zero() || self.epsilon > T::one() {
            return Err(ModelError::InvalidParameter {
                field: "epsilon",
                value: self.epsilon.to_string(),
                requirement: "must lie in [0, 1]",
            });
        }
        Ok(())
    }

    /// Total outflow rate from the infected class: alpha_I + gamma_I + mu + delta.
    pub(crate) fn removal_i(&self) -> T {
        self.alpha_i + self.gamma_i + self.mu + self.delta
    }

    /// Total outflow rate from the hospitalized class: gamma_H + mu + alpha_H.
    pub(crate) fn removal_h(&self) -> T {
        self.gamma_h + self.mu + self.alpha_h
    }
}

fn zero<T: RealScalar>() -> T {
    T::zero()
}

/// Compartment values at one instant (individuals).
///
/// `d` is the cumulative count of disease-induced deaths; it decouples from
/// the living compartments and is ignored by equilibrium analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: RealScalar + Deserialize<'de>"
))]
pub struct State<T> {
    /// Susceptible individuals.
    #[serde(rename = "S")]
    pub s: T,
    /// Infected individuals.
    #[serde(rename = "I")]
    pub i: T,
    /// Hospitalized individuals.
    #[serde(rename = "H")]
    pub h: T,
    /// Cumulative disease deaths. Defaults to zero when omitted.
    #[serde(rename = "D", default = "zero")]
    pub d: T,
}

impl<T: RealScalar> State<T> {
    /// Builds a state, enforcing nonnegativity and finiteness.
    pub fn new(s: T, i: T, h: T, d: T) -> Result<Self, ModelError> {
        let state = Self { s, i, h, d };
        state.validate()?;
        Ok(state)
    }

    /// Checks that every component is finite and nonnegative.
    pub fn validate(&self) -> Result<(), ModelError> {
        let components: [(&'static str, T); 4] =
            [("S", self.s), ("I", self.i), ("H", self.h), ("D", self.d)];
        for (field, value) in components {
            if !value.is_finite() || value < T::zero() {
                return Err(ModelError::InvalidState {
                    field,
                    value: value.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Living population N = S + I + H (excludes the cumulative deaths).
    pub fn total_living(&self) -> T {
        self.s + self.i + self.h
    }

    pub(crate) fn is_finite(&self) -> bool {
        self.s.is_finite() && self.i.is_finite() && self.h.is_finite() && self.d.is_finite()
    }
}

/// Time derivative of a [`State`] (individuals/day).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative<T> {
    pub ds: T,
    pub di: T,
    pub dh: T,
    pub dd: T,
}

/// Living population N = S + I + H of a state.
pub fn total_living<T: RealScalar>(x: &State<T>) -> T {
    x.total_living()
}

/// Evaluates the SISHD vector field at `x`.
///
/// Returns (S', I', H', D') with D' = gamma_I*I + gamma_H*H. Rejects
/// non-finite state input; negative components are accepted because callers
/// probe derivative signs on the boundary of the feasible region.
pub fn vector_field<T: RealScalar>(
    p: &ModelParams<T>,
    x: &State<T>,
) -> Result<StateDerivative<T>, ModelError> {
    if !x.is_finite() {
        return Err(ModelError::NonFinite {
            context: "vector_field state",
        });
    }
    Ok(vector_field_unchecked(p, x))
}

/// Vector field without the finiteness guard, for integrator inner loops.
pub(crate) fn vector_field_unchecked<T: RealScalar>(
    p: &ModelParams<T>,
    x: &State<T>,
) -> StateDerivative<T> {
    let infection = p.beta * (x.i + p.epsilon * x.h) * x.s;
    StateDerivative {
        ds: p.lambda - infection + p.alpha_i * x.i - p.mu * x.s + p.alpha_h * x.h,
        di: infection - p.removal_i() * x.i,
        dh: p.delta * x.i - p.removal_h() * x.h,
        dd: p.gamma_i * x.i + p.gamma_h * x.h,
    }
}

/// The positively invariant simplex of the living compartments:
/// S, I, H >= 0 and S + I + H <= Lambda/mu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleRegion<T> {
    /// Upper bound Lambda/mu on the living population.
    pub bound: T,
}

impl<T: RealScalar> FeasibleRegion<T> {
    /// Region of attraction for the given parameters.
    pub fn of(p: &ModelParams<T>) -> Self {
        Self {
            bound: p.lambda / p.mu,
        }
    }

    /// Membership test with slack `tol` on every inequality.
    pub fn contains(&self, x: &State<T>, tol: T) -> bool {
        let neg = -tol;
        x.s >= neg && x.i >= neg && x.h >= neg && x.total_living() <= self.bound + tol
    }
}

/// True iff `x` lies in the feasible region of `p`, with slack `tol`.
pub fn in_feasible_region<T: RealScalar>(p: &ModelParams<T>, x: &State<T>, tol: T) -> bool {
    FeasibleRegion::of(p).contains(x, tol)
}
