//! Property-based checks of the analysis and pricing layers over randomly
//! drawn parameter sets, schedules, and initial states.

use proptest::prelude::*;

use sishd_core::actuarial::{price, zero_profit_premium, BenefitSchedule};
use sishd_core::analysis::{
    beta_for_r0, compute_r0, disease_endemic_equilibrium, r0_ngm_oracle, routh_coefficients,
    routh_coefficients_symbolic, sensitivity_indices, ParamName,
};
use sishd_core::model::{ModelParams, State};
use sishd_core::simulate::{integrate, SimConfig};

fn params_strategy() -> impl Strategy<Value = ModelParams<f64>> {
    (
        1.0..50.0f64,  // Lambda
        0.005..0.1f64, // mu
        1e-5..1e-3f64, // beta
        0.0..1.0f64,   // epsilon
        0.005..0.3f64, // alpha_I
        0.005..0.3f64, // gamma_I
        0.005..0.3f64, // delta
        0.005..0.3f64, // gamma_H
        0.005..0.3f64, // alpha_H
    )
        .prop_map(|(lambda, mu, beta, epsilon, ai, gi, d, gh, ah)| {
            ModelParams::new(lambda, mu, beta, epsilon, ai, gi, d, gh, ah).unwrap()
        })
}

proptest! {
    #[test]
    fn closed_form_r0_equals_next_generation_radius(p in params_strategy()) {
        let closed = compute_r0(&p);
        let ngm = r0_ngm_oracle(&p);
        prop_assert!((closed - ngm).abs() / closed < 1e-10);
    }

    #[test]
    fn endemic_equilibrium_exists_exactly_above_threshold(
        p in params_strategy(),
        target in 0.05..6.0f64,
    ) {
        let tuned = ParamName::Beta.with_value(&p, beta_for_r0(&p, target));
        let dee = disease_endemic_equilibrium(&tuned);
        if target > 1.0 + 1e-9 {
            let (s, i, h) = dee.expect("supercritical");
            prop_assert!(s > 0.0 && i > 0.0 && h > 0.0);
            // S* halves the susceptible pool by exactly R0.
            let identity = tuned.lambda / (tuned.mu * compute_r0(&tuned));
            prop_assert!((s - identity).abs() / identity < 1e-10);
            // The equilibrium is a fixed point of the field.
            let f = sishd_core::model::vector_field(
                &tuned,
                &State { s, i, h, d: 0.0 },
            ).unwrap();
            let scale = tuned.lambda.max(1.0);
            prop_assert!(f.ds.abs() / scale < 1e-9);
            prop_assert!(f.di.abs() / scale < 1e-9);
            prop_assert!(f.dh.abs() / scale < 1e-9);
        } else if target < 1.0 - 1e-9 {
            prop_assert!(dee.is_none());
        }
    }

    #[test]
    fn routh_paths_agree_on_supercritical_sets(
        p in params_strategy(),
        target in 1.05..8.0f64,
    ) {
        let tuned = ParamName::Beta.with_value(&p, beta_for_r0(&p, target));
        let m = routh_coefficients(&tuned).unwrap();
        let s = routh_coefficients_symbolic(&tuned).unwrap();
        let scale = |x: f64, y: f64| x.abs().max(y.abs()).max(1e-30);
        prop_assert!((m.a1 - s.a1).abs() / scale(m.a1, s.a1) < 1e-8);
        prop_assert!((m.a2 - s.a2).abs() / scale(m.a2, s.a2) < 1e-8);
        prop_assert!((m.a3 - s.a3).abs() / scale(m.a3, s.a3) < 1e-8);
    }

    #[test]
    fn sensitivity_partials_match_finite_differences(p in params_strategy()) {
        let report = sensitivity_indices(&p);
        for name in ParamName::ALL {
            // epsilon = 0 sits on the domain boundary; skip the two-sided probe.
            let value = name.value_in(&p);
            if value <= 1e-8 {
                continue;
            }
            let step = value * 1e-6;
            let up = compute_r0(&name.with_value(&p, value + step));
            let down = compute_r0(&name.with_value(&p, value - step));
            let fd = (up - down) / (2.0 * step);
            let analytic = report.get(name).partial;
            let scale = analytic.abs().max(fd.abs()).max(1e-9);
            prop_assert!(
                (analytic - fd).abs() / scale < 1e-3,
                "{name}: analytic {analytic} vs fd {fd}"
            );
        }
    }

    #[test]
    fn beta_and_lambda_indices_are_unity(p in params_strategy()) {
        let report = sensitivity_indices(&p);
        prop_assert!((report.get(ParamName::Beta).index - 1.0).abs() < 1e-12);
        prop_assert!((report.get(ParamName::Lambda).index - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn premium_is_linear_in_the_schedule(
        b_i in 0.0..10.0f64,
        b_h in 0.0..50.0f64,
        d in 0.0..200.0f64,
        scale in 0.1..10.0f64,
    ) {
        let traj = reference_trajectory();
        let schedule = BenefitSchedule::new(b_i, b_h, d).unwrap();
        let scaled = BenefitSchedule::new(scale * b_i, scale * b_h, scale * d).unwrap();
        let base = price(&traj, &schedule).unwrap();
        let bumped = price(&traj, &scaled).unwrap();
        let tol = 1e-9 * (1.0 + base.pi_zero_profit.abs()) * scale;
        prop_assert!((bumped.pi_zero_profit - scale * base.pi_zero_profit).abs() < tol);
        prop_assert!((bumped.pi_star - scale * base.pi_star).abs() < tol);
        prop_assert!(bumped.pi_star >= bumped.pi_zero_profit - 1e-9);
    }

    #[test]
    fn premium_grows_with_benefit_rates(
        b_i in 0.1..5.0f64,
        b_h in 1.0..40.0f64,
        d in 10.0..150.0f64,
        bump in 0.01..2.0f64,
    ) {
        let traj = reference_trajectory();
        let schedule = BenefitSchedule::new(b_i, b_h, d).unwrap();
        let base = zero_profit_premium(&traj, &schedule).unwrap();
        for richer in [
            BenefitSchedule::new(b_i + bump, b_h, d).unwrap(),
            BenefitSchedule::new(b_i, b_h + bump, d).unwrap(),
            BenefitSchedule::new(b_i, b_h, d + bump).unwrap(),
        ] {
            let pi = zero_profit_premium(&traj, &richer).unwrap();
            prop_assert!(pi > base);
        }
    }

    #[test]
    fn reserve_terminates_at_zero_for_any_premium(premium in 0.0..40.0f64) {
        let traj = reference_trajectory();
        let schedule = BenefitSchedule::new(1.0, 20.0, 100.0).unwrap();
        let curve =
            sishd_core::actuarial::reserve_curve(&traj, &schedule, premium).unwrap();
        prop_assert_eq!(curve.terminal(), 0.0);
        prop_assert_eq!(curve.times.len(), curve.values.len());
    }
}

fn reference_trajectory() -> sishd_core::simulate::Trajectory<f64> {
    use std::sync::OnceLock;
    static TRAJ: OnceLock<sishd_core::simulate::Trajectory<f64>> = OnceLock::new();
    TRAJ.get_or_init(|| {
        let p =
            ModelParams::new(20.0, 0.02, 0.000253, 0.25, 0.03, 0.06, 0.03, 0.04, 0.010).unwrap();
        let config = SimConfig::new(
            0.0,
            365.0,
            0.05,
            State::new(800.0, 100.0, 100.0, 0.0).unwrap(),
        )
        .unwrap();
        integrate(&p, &config).unwrap()
    })
    .clone()
}
