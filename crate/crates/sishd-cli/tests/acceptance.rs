//! Acceptance gate: every release criterion runs as its own test and prints
//! one `[PASS]`/`[FAIL]` line with the measured values (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sishd_cli::config::{bundled_scenarios, Scenario};
use sishd_cli::tables::{reproduce, TableId};
use sishd_core::actuarial::{
    minimal_admissible_premium, reserve_curve, zero_profit_premium, zero_profit_premium_with,
    BenefitSchedule, DeathBenefit, PricingOptions,
};
use sishd_core::analysis::{
    beta_for_r0, check_dfe_gas_conditions, compute_r0, disease_endemic_equilibrium,
    eigenvalues_3x3, jacobian, r0_ngm_oracle, routh_coefficients, sensitivity_indices, ParamName,
};
use sishd_core::model::{ModelParams, State};
use sishd_core::simulate::{integrate, SimConfig, Trajectory};

const SEED: u64 = 0x5349_5344_2d41_4343; // "SISD-ACC"

fn report(label: &str, ok: bool, detail: &str) {
    let tag = if ok { "[PASS]" } else { "[FAIL]" };
    println!("{tag} criterion {label}: {detail}");
    assert!(ok, "criterion {label}: {detail}");
}

fn sets(prefix: char) -> Vec<Scenario> {
    bundled_scenarios()
        .into_iter()
        .filter(|s| s.name.starts_with(prefix))
        .collect()
}

fn random_params(rng: &mut ChaCha8Rng) -> ModelParams<f64> {
    ModelParams::new(
        rng.gen_range(1.0..50.0),
        rng.gen_range(0.005..0.1),
        rng.gen_range(1e-5..1e-3),
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.005..0.3),
        rng.gen_range(0.005..0.3),
        rng.gen_range(0.005..0.3),
        rng.gen_range(0.005..0.3),
        rng.gen_range(0.005..0.3),
    )
    .expect("ranges are valid")
}

fn simulate(scenario: &Scenario, initial: State<f64>, t_end: f64, step: f64) -> Trajectory<f64> {
    let config = SimConfig::new(scenario.sim.t0, t_end, step, initial).expect("valid grid");
    integrate(&scenario.params, &config).expect("bundled sets integrate cleanly")
}

#[test]
fn criterion_01_r0_reproduction() {
    let subcritical = reproduce(TableId::T1);
    let supercritical = reproduce(TableId::T3);
    let r0_cells: Vec<_> = supercritical
        .cells
        .iter()
        .filter(|c| c.quantity == "R0")
        .collect();
    let worst_abs = subcritical.worst_cell();
    let worst_rel = r0_cells
        .iter()
        .max_by(|a, b| a.rel_deviation().partial_cmp(&b.rel_deviation()).unwrap())
        .unwrap();
    let ok = subcritical.all_within() && r0_cells.iter().all(|c| c.within());
    report(
        "1",
        ok,
        &format!(
            "R0 matches the published values: A sets within 5e-4 absolute \
             (worst {} at {:.2e}), B sets within 1% relative (worst {} at {:.2e})",
            worst_abs.row,
            worst_abs.abs_deviation(),
            worst_rel.row,
            worst_rel.rel_deviation()
        ),
    );
}

#[test]
fn criterion_02_equilibrium_reproduction() {
    let outcome = reproduce(TableId::T3);
    let dee_cells: Vec<_> = outcome
        .cells
        .iter()
        .filter(|c| c.quantity != "R0")
        .collect();
    let worst = dee_cells
        .iter()
        .max_by(|a, b| a.rel_deviation().partial_cmp(&b.rel_deviation()).unwrap())
        .unwrap();
    report(
        "2",
        dee_cells.iter().all(|c| c.within()),
        &format!(
            "endemic equilibria (S*, I*, H*) for the B sets match the published \
             values within 0.5% relative (worst {} {} at {:.2e})",
            worst.row,
            worst.quantity,
            worst.rel_deviation()
        ),
    );
}

#[test]
fn criterion_03_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut max_rel = 0.0f64;
    let n = 1500;
    for _ in 0..n {
        let p = random_params(&mut rng);
        let closed = compute_r0(&p);
        let oracle = r0_ngm_oracle(&p);
        max_rel = max_rel.max((closed - oracle).abs() / closed);
    }
    report(
        "3",
        max_rel <= 1e-12,
        &format!(
            "closed-form R0 and the next-generation spectral radius agree to \
             1e-12 relative over {n} randomized parameter sets (max {max_rel:.2e})"
        ),
    );
}

#[test]
fn criterion_04_stability_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x04);
    let targets = [0.25, 0.5, 0.8, 0.95, 1.05, 1.3, 2.0, 3.0];
    let mut checks = 0usize;
    for _ in 0..200 {
        let base = random_params(&mut rng);
        for target in targets {
            let p = ParamName::Beta.with_value(&base, beta_for_r0(&base, target));
            let r0 = compute_r0(&p);
            let dee = disease_endemic_equilibrium(&p);
            assert_eq!(
                dee.is_some(),
                r0 > 1.0,
                "endemic equilibrium existence must match R0 > 1 (R0 = {r0})"
            );
            if let Some((s, i, h)) = dee {
                let routh = routh_coefficients(&p).expect("supercritical");
                let (m1, m2, m3) = routh.margins();
                assert!(
                    m1 > 0.0 && m2 > 0.0 && m3 > 0.0,
                    "all three stability margins must be positive at the endemic \
                     equilibrium (got {m1}, {m2}, {m3} at R0 = {r0})"
                );
                let state = State::new(s, i, h, 0.0).expect("equilibrium is feasible");
                for (re, _) in eigenvalues_3x3(&jacobian(&p, &state)) {
                    assert!(
                        re < 0.0,
                        "endemic-equilibrium eigenvalues must have negative real \
                         part (got {re} at R0 = {r0})"
                    );
                }
            } else {
                let gas = check_dfe_gas_conditions(&p, 8);
                assert!(
                    gas.a_spectral_abscissa < 0.0,
                    "the comparison matrix must be stable below threshold \
                     (abscissa {} at R0 = {r0})",
                    gas.a_spectral_abscissa
                );
            }
            checks += 1;
        }
    }
    report(
        "4",
        true,
        &format!(
            "over {checks} beta-swept parameter sets: endemic equilibrium exists \
             iff R0 > 1, stability margins and eigenvalues agree above threshold, \
             comparison matrix stable below"
        ),
    );
}

#[test]
fn criterion_05_convergence_to_equilibrium() {
    let mut worst_sub = 0.0f64;
    for scenario in sets('A') {
        let s_limit = scenario.params.lambda / scenario.params.mu;
        for initial in &scenario.initials {
            let traj = simulate(&scenario, *initial, 5000.0, 0.01);
            let f = traj.final_state();
            let s_rel = (f.s - s_limit).abs() / s_limit;
            assert!(
                f.i < 1e-3 && f.h < 1e-3,
                "{}: infection must die out (final I = {}, H = {})",
                scenario.name,
                f.i,
                f.h
            );
            assert!(
                s_rel < 1e-3,
                "{}: S must settle at Lambda/mu (relative gap {s_rel})",
                scenario.name
            );
            worst_sub = worst_sub.max(s_rel).max(f.i).max(f.h);
        }
    }

    let mut worst_super = 0.0f64;
    for scenario in sets('B') {
        let (s_star, i_star, h_star) =
            disease_endemic_equilibrium(&scenario.params).expect("B sets are supercritical");
        for initial in &scenario.initials {
            let traj = simulate(&scenario, *initial, 5000.0, 0.01);
            let f = traj.final_state();
            for (value, target, label) in
                [(f.s, s_star, "S"), (f.i, i_star, "I"), (f.h, h_star, "H")]
            {
                let rel = (value - target).abs() / target;
                assert!(
                    rel < 0.01,
                    "{}: final {label} = {value} must be within 1% of the endemic \
                     value {target} (relative gap {rel})",
                    scenario.name
                );
                worst_super = worst_super.max(rel);
            }
        }
    }
    report(
        "5",
        true,
        &format!(
            "all 25 subcritical pairs reach the disease-free state (worst gap \
             {worst_sub:.2e}) and all 25 supercritical pairs reach the endemic \
             state within 1% (worst gap {worst_super:.2e}) at T = 5000, h = 0.01"
        ),
    );
}

#[test]
fn criterion_06_premium_reproduction() {
    let outcome = reproduce(TableId::T5);
    let flow_ok = outcome.cells.iter().filter(|c| c.within()).count();

    // Record which death-benefit interpretation reproduces the published
    // premiums: recompute every pair under the stock form for comparison.
    let stock = PricingOptions {
        death_benefit: DeathBenefit::Stock,
        force_of_interest: 0.0,
    };
    let mut stock_ok = 0usize;
    for scenario in sets('B') {
        let benefits = scenario.benefits.expect("B sets carry benefits");
        for (k, initial) in scenario.initials.iter().enumerate() {
            let traj = simulate(&scenario, *initial, scenario.sim.t_end, 0.01);
            let pi = zero_profit_premium_with(&traj, &benefits, &stock).expect("priceable");
            let published = outcome.cells[..]
                .iter()
                .find(|c| c.row == format!("{}/IC{}", scenario.name, k + 1))
                .expect("cell exists")
                .published;
            if (pi - published).abs() / published <= 0.01 {
                stock_ok += 1;
            }
        }
    }

    let worst = outcome.worst_cell();
    report(
        "6",
        flow_ok == 25,
        &format!(
            "flow death-benefit form reproduces {flow_ok}/25 published premiums \
             within 1% relative (worst {} at {:.2e}); stock form reproduces \
             {stock_ok}/25",
            worst.row,
            worst.rel_deviation()
        ),
    );
}

fn b2_ic1_priced() -> (Trajectory<f64>, BenefitSchedule<f64>, f64) {
    let scenario = sets('B').into_iter().find(|s| s.name == "B2").unwrap();
    let benefits = scenario.benefits.expect("B2 carries benefits");
    let traj = simulate(&scenario, scenario.initials[0], 365.0, 0.01);
    let pi_star = minimal_admissible_premium(&traj, &benefits).expect("priceable");
    (traj, benefits, pi_star)
}

#[test]
fn criterion_07_minimal_premium_reference_value() {
    let (_, _, pi_star) = b2_ic1_priced();
    let reference = 5.67475;
    let rel = (pi_star - reference).abs() / reference;
    report(
        "7",
        rel <= 0.01,
        &format!(
            "minimal admissible premium on B2/IC1 with benefits (1, 20, 100) over \
             T = 365: computed {pi_star:.6}, reference {reference}, relative \
             deviation {rel:.4} (tolerance 0.01)"
        ),
    );
}

#[test]
fn criterion_07_reserve_shape_at_the_minimal_premium() {
    let (traj, benefits, pi_star) = b2_ic1_priced();
    let exposure = traj.cum_s.last().copied().expect("nonempty");
    let floor = -1e-6 * pi_star * exposure;

    let at_star = reserve_curve(&traj, &benefits, pi_star).expect("priceable");
    let (_, min_star) = at_star.min();
    assert!(
        min_star >= floor,
        "reserve at the minimal premium dips to {min_star}, below the allowed {floor}"
    );
    assert!(
        min_star <= 0.0 && at_star.terminal() == 0.0,
        "reserve at the minimal premium must touch zero (min {min_star}, \
         terminal {})",
        at_star.terminal()
    );

    let below = reserve_curve(&traj, &benefits, 0.9 * pi_star).expect("priceable");
    let (t_min, min_below) = below.min();
    assert!(
        min_below < 0.0,
        "reserve at 0.9x the minimal premium must go negative (min {min_below})"
    );

    let above = reserve_curve(&traj, &benefits, 1.1 * pi_star).expect("priceable");
    let negatives = above.values.iter().filter(|v| **v < 0.0).count();
    assert_eq!(
        negatives, 0,
        "reserve at 1.1x the minimal premium must be nonnegative at every grid time"
    );

    report(
        "7 (reserve shape)",
        true,
        &format!(
            "reserve at the minimal premium stays above the floor {floor:.2e} and \
             touches zero; at 0.9x it dips to {min_below:.2} (t = {t_min:.1}); at \
             1.1x it is nonnegative on the whole grid"
        ),
    );
}

#[test]
fn criterion_08_integrator_order() {
    let scenario = sets('B').into_iter().find(|s| s.name == "B1").unwrap();
    let initial = scenario.initials[0];
    let state_at = |step: f64| -> State<f64> {
        let config = SimConfig::new(0.0, 10.0, step, initial).expect("valid grid");
        *integrate(&scenario.params, &config)
            .expect("integrates cleanly")
            .final_state()
    };
    let norm = |a: &State<f64>, b: &State<f64>| -> f64 {
        ((a.s - b.s).powi(2) + (a.i - b.i).powi(2) + (a.h - b.h).powi(2) + (a.d - b.d).powi(2))
            .sqrt()
    };
    let reference = state_at(0.5 / 16.0);
    let err_coarse = norm(&state_at(0.5), &reference);
    let err_fine = norm(&state_at(0.25), &reference);
    let order = (err_coarse / err_fine).log2();
    report(
        "8",
        (order - 4.0).abs() <= 0.2,
        &format!(
            "observed convergence order on B1/IC1 at t = 10 via step halving \
             against an h/16 reference: {order:.3} (required 4.0 +/- 0.2)"
        ),
    );
}

#[test]
fn criterion_09_invariants_sensitivities_and_pricing_properties() {
    // Positivity and boundedness along every bundled pair on its own grid.
    let mut min_component = f64::INFINITY;
    let mut worst_excess = f64::NEG_INFINITY;
    for scenario in bundled_scenarios() {
        for initial in &scenario.initials {
            let cap = (scenario.params.lambda / scenario.params.mu).max(initial.total_living());
            let traj = simulate(&scenario, *initial, scenario.sim.t_end, scenario.sim.step);
            for state in &traj.states {
                for v in [state.s, state.i, state.h, state.d] {
                    min_component = min_component.min(v);
                    assert!(v >= -1e-9, "component {v} fell below -1e-9");
                }
                let excess = state.total_living() - cap;
                worst_excess = worst_excess.max(excess);
                assert!(
                    excess <= 1e-6,
                    "living population exceeded max(N(0), Lambda/mu) by {excess}"
                );
            }
        }
    }

    // Analytic sensitivity partials against central finite differences.
    let mut worst_fd = 0.0f64;
    for scenario in bundled_scenarios() {
        let p = scenario.params;
        let reportd = sensitivity_indices(&p);
        for param in ParamName::ALL {
            let value = param.value_in(&p);
            let h = value * 1e-6;
            let up = compute_r0(&param.with_value(&p, value + h));
            let down = compute_r0(&param.with_value(&p, value - h));
            let fd = (up - down) / (2.0 * h);
            let analytic = reportd.get(param).partial;
            let rel = (analytic - fd).abs() / analytic.abs().max(1e-300);
            assert!(
                rel <= 1e-5,
                "{}: partial for {param} = {analytic} vs finite difference {fd} \
                 (relative gap {rel})",
                scenario.name
            );
            worst_fd = worst_fd.max(rel);
        }
        assert_eq!(
            reportd.get(ParamName::Beta).index,
            1.0,
            "normalized index for beta must be exactly 1"
        );
        assert_eq!(
            reportd.get(ParamName::Lambda).index,
            1.0,
            "normalized index for Lambda must be exactly 1"
        );
    }

    // Pricing homogeneity and monotonicity on randomized benefit schedules.
    let scenario = sets('B').into_iter().find(|s| s.name == "B2").unwrap();
    let traj = simulate(&scenario, scenario.initials[0], 365.0, 0.05);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x09);
    for _ in 0..32 {
        let schedule = BenefitSchedule::new(
            rng.gen_range(0.0..50.0),
            rng.gen_range(0.0..50.0),
            rng.gen_range(0.0..500.0),
        )
        .expect("nonnegative");
        let pi = zero_profit_premium(&traj, &schedule).expect("priceable");
        assert!(pi >= 0.0, "premium must be nonnegative, got {pi}");
        for c in [0.5, 2.0, 10.0] {
            let scaled =
                BenefitSchedule::new(c * schedule.b_i, c * schedule.b_h, c * schedule.d).unwrap();
            let pi_scaled = zero_profit_premium(&traj, &scaled).expect("priceable");
            let gap = (pi_scaled - c * pi).abs() / (c * pi).max(1e-300);
            assert!(
                gap <= 1e-12,
                "premium must scale linearly with the schedule (gap {gap})"
            );
        }
        for bumped in [
            BenefitSchedule::new(schedule.b_i + 1.0, schedule.b_h, schedule.d).unwrap(),
            BenefitSchedule::new(schedule.b_i, schedule.b_h + 1.0, schedule.d).unwrap(),
            BenefitSchedule::new(schedule.b_i, schedule.b_h, schedule.d + 1.0).unwrap(),
        ] {
            let pi_bumped = zero_profit_premium(&traj, &bumped).expect("priceable");
            assert!(
                pi_bumped >= pi,
                "raising a benefit rate must not lower the premium \
                 ({pi_bumped} < {pi})"
            );
        }
    }

    report(
        "9",
        true,
        &format!(
            "invariants hold on all 50 bundled pairs (min component \
             {min_component:.2e}, worst living-population excess \
             {worst_excess:.2e}); sensitivity partials match finite differences \
             (worst gap {worst_fd:.2e}); beta and Lambda indices are exactly 1; \
             premium homogeneity and monotonicity hold on 32 random schedules"
        ),
    );
}

#[test]
fn criterion_10_deterministic_csv_output() {
    let bin = env!("CARGO_BIN_EXE_sishd");
    let dir = tempfile::tempdir().expect("tempdir");

    // Repeated `tables` runs must emit byte-identical CSV.
    let table_csvs: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let path = dir.path().join(format!("t3-{k}.csv"));
            let status = Command::new(bin)
                .args(["tables", "T3", "--csv"])
                .arg(&path)
                .output()
                .expect("tables run");
            assert!(status.status.success(), "tables run failed");
            std::fs::read(&path).expect("csv written")
        })
        .collect();
    assert_eq!(
        table_csvs[0], table_csvs[1],
        "repeated `tables` runs must be byte-identical"
    );

    // Repeated `simulate` runs with a fixed config must emit byte-identical
    // CSVs for every file in the output directory.
    let config_path = dir.path().join("config.json");
    std::fs::write(
        &config_path,
        r#"{
  "scenarios": [
    {
      "name": "B2",
      "params": {"Lambda": 20.0, "mu": 0.02, "beta": 0.000253, "epsilon": 0.25,
                 "alpha_I": 0.03, "gamma_I": 0.06, "delta": 0.03,
                 "gamma_H": 0.04, "alpha_H": 0.010},
      "initials": [{"S": 800.0, "I": 100.0, "H": 100.0, "D": 0.0},
                   {"S": 700.0, "I": 200.0, "H": 50.0, "D": 0.0}],
      "sim": {"t0": 0.0, "t_end": 20.0, "step": 0.01}
    }
  ]
}
"#,
    )
    .expect("config written");

    let mut snapshots = Vec::new();
    for k in 0..2 {
        let out_dir = dir.path().join(format!("out-{k}"));
        let output = Command::new(bin)
            .args(["simulate"])
            .arg(&config_path)
            .arg("--out")
            .arg(&out_dir)
            .output()
            .expect("simulate run");
        assert!(output.status.success(), "simulate run failed");
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out_dir)
            .expect("out dir")
            .map(|entry| {
                let entry = entry.expect("entry");
                (
                    entry.file_name().to_string_lossy().into_owned(),
                    std::fs::read(entry.path()).expect("readable"),
                )
            })
            .collect();
        files.sort();
        snapshots.push(files);
    }
    assert_eq!(
        snapshots[0].len(),
        5,
        "expected two trajectory CSVs plus summary, sensitivity, and provenance \
         files; got {:?}",
        snapshots[0]
            .iter()
            .map(|(n, _)| n.clone())
            .collect::<Vec<_>>()
    );
    let identical = snapshots[0] == snapshots[1];
    report(
        "10",
        identical,
        &format!(
            "repeated `tables` and `simulate` runs produce byte-identical CSV \
             output ({} files compared)",
            1 + snapshots[0].len()
        ),
    );
}
