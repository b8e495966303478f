//! `sishd`: scenario runner for the SISHD epidemic model with insurance
//! pricing. Subcommands analyze stability, integrate trajectories to CSV,
//! price benefit schedules, reproduce the published reference tables, and
//! render SVG charts.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use sishd_cli::batch::{run_batch, BatchMode, BatchResult, GridOverrides};
use sishd_cli::config::{bundled_scenarios, load_config_with_text, Scenario};
use sishd_cli::csv_out::{trajectory_file_name, write_batch_outputs, write_trajectory_csv};
use sishd_cli::svg::{reserve_chart, sensitivity_chart, trajectory_chart};
use sishd_cli::tables::{reproduce, TableId};
use sishd_cli::CliError;
use sishd_core::actuarial::{price, reserve_curve, DeathBenefit, PricingOptions};
use sishd_core::analysis::check_dfe_gas_conditions;
use sishd_core::simulate::{integrate, SimConfig};
use sishd_core::TrajectoryF64;

/// Sample count for the random part of the global-stability check.
const GAS_SAMPLES: usize = 2048;

#[derive(Parser)]
#[command(
    name = "sishd",
    version,
    about = "SISHD epidemic model toolkit: stability analysis, RK4 simulation, \
             and health-insurance pricing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print R0, equilibria, stability, and sensitivities for every scenario
    Analyze {
        /// Scenario config file (JSON)
        config: PathBuf,
    },
    /// Integrate every (scenario, initial) pair and write trajectory CSVs
    Simulate {
        /// Scenario config file (JSON)
        config: PathBuf,
        /// Override the grid step for every scenario
        #[arg(long, value_name = "H")]
        step: Option<f64>,
        /// Override the end time for every scenario
        #[arg(long, value_name = "T")]
        horizon: Option<f64>,
        /// Directory the CSV files are written into
        #[arg(long, value_name = "DIR", default_value = "out")]
        out: PathBuf,
    },
    /// Simulate and price every scenario that carries a benefit schedule
    Price {
        /// Scenario config file (JSON)
        config: PathBuf,
        /// How the death benefit accrues
        #[arg(long, value_enum, default_value_t = DeathBenefitArg::Flow)]
        death_benefit_mode: DeathBenefitArg,
        /// Constant force of interest per day
        #[arg(long, value_name = "R", default_value_t = 0.0)]
        interest: f64,
        /// Override the grid step for every scenario
        #[arg(long, value_name = "H")]
        step: Option<f64>,
        /// Override the end time for every scenario
        #[arg(long, value_name = "T")]
        horizon: Option<f64>,
        /// Directory the CSV files are written into
        #[arg(long, value_name = "DIR", default_value = "out")]
        out: PathBuf,
    },
    /// Reproduce a published reference table and report per-cell deviations
    Tables {
        /// Which table to reproduce
        #[arg(value_enum)]
        which: TableArg,
        /// Also write the comparison as CSV to this path
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Render an SVG chart for one scenario (first initial condition)
    Chart {
        /// What to draw
        #[arg(value_enum)]
        kind: ChartKind,
        /// Scenario name, e.g. B2
        scenario: String,
        /// Output SVG path
        out: PathBuf,
        /// Scenario config file; defaults to the bundled reference scenarios
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableArg {
    #[value(name = "T1", alias = "t1")]
    T1,
    #[value(name = "T3", alias = "t3")]
    T3,
    #[value(name = "T5", alias = "t5")]
    T5,
}

impl From<TableArg> for TableId {
    fn from(arg: TableArg) -> Self {
        match arg {
            TableArg::T1 => TableId::T1,
            TableArg::T3 => TableId::T3,
            TableArg::T5 => TableId::T5,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DeathBenefitArg {
    /// d per death as it occurs
    Flow,
    /// d per unit of accumulated deaths per unit time
    Stock,
}

impl From<DeathBenefitArg> for DeathBenefit {
    fn from(arg: DeathBenefitArg) -> Self {
        match arg {
            DeathBenefitArg::Flow => DeathBenefit::Flow,
            DeathBenefitArg::Stock => DeathBenefit::Stock,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChartKind {
    /// S, I, and H against time
    Trajectory,
    /// Reserve V(t) at each premium multiplier
    Reserve,
    /// Signed normalized sensitivity indices of R0
    Sensitivity,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Analyze { config } => cmd_analyze(&config),
        Command::Simulate {
            config,
            step,
            horizon,
            out,
        } => {
            let (scenarios, text) = load_config_with_text(&config)?;
            run_and_write(
                &scenarios,
                &text,
                BatchMode::Simulate,
                &GridOverrides { step, horizon },
                &out,
            )
        }
        Command::Price {
            config,
            death_benefit_mode,
            interest,
            step,
            horizon,
            out,
        } => {
            if !interest.is_finite() {
                return Err(CliError::Config(format!(
                    "interest must be finite, got {interest}"
                )));
            }
            let (scenarios, text) = load_config_with_text(&config)?;
            let options = PricingOptions {
                death_benefit: death_benefit_mode.into(),
                force_of_interest: interest,
            };
            run_and_write(
                &scenarios,
                &text,
                BatchMode::Price(options),
                &GridOverrides { step, horizon },
                &out,
            )
        }
        Command::Tables { which, csv } => cmd_tables(which.into(), csv.as_deref()),
        Command::Chart {
            kind,
            scenario,
            out,
            config,
        } => cmd_chart(kind, &scenario, &out, config.as_deref()),
    }
}

fn cmd_analyze(path: &Path) -> Result<u8, CliError> {
    let (scenarios, _) = load_config_with_text(path)?;
    for scenario in &scenarios {
        let report = sishd_core::analysis::classify_stability(&scenario.params);
        let sens = sishd_core::analysis::sensitivity_indices(&scenario.params);
        let gas = check_dfe_gas_conditions(&scenario.params, GAS_SAMPLES);

        println!("scenario {}", scenario.name);
        println!("  R0 = {:.6}", report.r0);
        println!(
            "  disease-free equilibrium: S = {:.6}, I = 0, H = 0 ({})",
            report.dfe.s, report.dfe_stability
        );
        match (report.dee, report.dee_stability) {
            (Some((s, i, h)), Some(stability)) => {
                println!(
                    "  endemic equilibrium: S* = {s:.6}, I* = {i:.6}, H* = {h:.6} ({stability})"
                );
            }
            _ => println!("  endemic equilibrium: none (R0 <= 1)"),
        }
        if let Some(routh) = &report.routh {
            let (m1, m2, m3) = routh.margins();
            println!(
                "  Routh-Hurwitz margins: a1 = {:.6}, a3 = {:.6}, a1*a2 - a3 = {:.6} ({})",
                m1,
                m2,
                m3,
                if routh.hurwitz_satisfied() {
                    "all positive"
                } else {
                    "not all positive"
                }
            );
        }
        println!(
            "  disease-free global stability: spectral abscissa = {:+.6}, \
             diagonal dominance {}, off-diagonal signs {}, Ghat1 >= 0 on {} samples: {}",
            gas.a_spectral_abscissa,
            if gas.h1 { "holds" } else { "fails" },
            if gas.h2_offdiag { "hold" } else { "fail" },
            GAS_SAMPLES,
            gas.h2_ghat_nonneg
        );
        let sens_line: Vec<String> = sens
            .entries
            .iter()
            .map(|e| format!("{} {:+.6}", e.param, e.index))
            .collect();
        println!("  sensitivity indices: {}", sens_line.join(", "));
        println!();
    }
    Ok(0)
}

/// Shared body of `simulate` and `price`: run the batch, streaming each
/// trajectory to its CSV file, then write the summary files and report.
fn run_and_write(
    scenarios: &[Scenario],
    config_text: &str,
    mode: BatchMode,
    overrides: &GridOverrides,
    out_dir: &Path,
) -> Result<u8, CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;

    let result = run_batch(scenarios, config_text, mode, overrides, |pair| {
        let file_name = trajectory_file_name(&pair.scenario.name, pair.initial_index);
        let path = out_dir.join(&file_name);
        let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
        let file = fs::File::create(&path).map_err(io_err)?;
        let mut w = std::io::BufWriter::new(file);
        write_trajectory_csv(&mut w, pair.trajectory, pair.pricing).map_err(io_err)?;
        w.flush().map_err(io_err)
    })?;

    write_batch_outputs(out_dir, &result)?;
    print_batch(&result, out_dir);

    Ok(result
        .worst_failure()
        .map_or(0, |worst| worst.error.exit_code()))
}

fn print_batch(result: &BatchResult, out_dir: &Path) {
    for row in &result.rows {
        let f = &row.trajectory.final_state;
        let mut line = format!(
            "{}/IC{}  R0 {:.6}  disease-free {}  final S {:.4} I {:.4} H {:.4} D {:.4}",
            row.scenario,
            row.initial_index + 1,
            row.analysis.r0,
            row.analysis.dfe_stability,
            f.s,
            f.i,
            f.h,
            f.d
        );
        if let Some(pricing) = &row.pricing {
            line.push_str(&format!(
                "  pi {:.6}  pi* {:.6}  min V {:.4} at t {:.2}",
                pricing.pi_zero_profit,
                pricing.pi_star,
                pricing.reserve_min_value,
                pricing.reserve_min_t
            ));
        }
        println!("{line}");
    }
    // Batch errors already carry their scenario/IC context.
    for failure in &result.failures {
        eprintln!("FAILED: {}", failure.error);
    }
    println!(
        "{} pairs finished, {} failed; outputs in {}; config hash {}, step {}, version {}",
        result.rows.len(),
        result.failures.len(),
        out_dir.display(),
        result.provenance.config_hash,
        result.provenance.step,
        result.provenance.version
    );
}

fn cmd_tables(id: TableId, csv: Option<&Path>) -> Result<u8, CliError> {
    let outcome = reproduce(id);
    print!("{}", outcome.text);
    if let Some(path) = csv {
        fs::write(path, &outcome.csv)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    if outcome.all_within() {
        Ok(0)
    } else {
        let worst = outcome.worst_cell();
        Err(CliError::TableDeviation(format!(
            "table {}: {} {} computed {} vs published {} ({} deviation {:.4e} exceeds {:.1e})",
            outcome.id.name(),
            worst.row,
            worst.quantity,
            worst.computed,
            worst.published,
            if worst.absolute {
                "absolute"
            } else {
                "relative"
            },
            worst.deviation(),
            worst.tolerance
        )))
    }
}

fn cmd_chart(
    kind: ChartKind,
    name: &str,
    out: &Path,
    config: Option<&Path>,
) -> Result<u8, CliError> {
    let scenarios = match config {
        Some(path) => load_config_with_text(path)?.0,
        None => bundled_scenarios(),
    };
    let scenario = scenarios.iter().find(|s| s.name == name).ok_or_else(|| {
        let names: Vec<&str> = scenarios.iter().map(|s| s.name.as_str()).collect();
        CliError::Config(format!(
            "unknown scenario {name:?}; the config defines: {}",
            names.join(", ")
        ))
    })?;

    let svg = match kind {
        ChartKind::Trajectory => {
            let traj = integrate_first(scenario)?;
            trajectory_chart(&traj, &format!("{name}: S, I, H over time (IC1)"))
        }
        ChartKind::Reserve => {
            let benefits = scenario.benefits.ok_or_else(|| {
                CliError::Config(format!(
                    "scenario {name} has no benefit schedule; a reserve chart needs one"
                ))
            })?;
            let traj = integrate_first(scenario)?;
            let report = price(&traj, &benefits).map_err(CliError::from)?;
            let multipliers = scenario.effective_multipliers();
            let curves = multipliers
                .iter()
                .map(|m| reserve_curve(&traj, &benefits, m * report.pi_star))
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::from)?;
            reserve_chart(
                &multipliers,
                &curves,
                &format!("{name}: reserve at multiples of the minimal premium (IC1)"),
            )
        }
        ChartKind::Sensitivity => {
            let report = sishd_core::analysis::sensitivity_indices(&scenario.params);
            sensitivity_chart(&report, &format!("{name}: normalized sensitivity of R0"))
        }
    };

    fs::write(out, svg)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?;
    println!("wrote {}", out.display());
    Ok(0)
}

fn integrate_first(scenario: &Scenario) -> Result<TrajectoryF64, CliError> {
    let config = SimConfig::new(
        scenario.sim.t0,
        scenario.sim.t_end,
        scenario.sim.step,
        scenario.initials[0],
    )?;
    Ok(integrate(&scenario.params, &config)?)
}
