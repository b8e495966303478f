//! CSV writers. Numbers print in shortest round-trip form so identical runs
//! produce byte-identical files.

use std::io::{self, Write};

use sishd_core::analysis::ParamName;
use sishd_core::simulate::Trajectory;

use crate::batch::{BatchResult, BatchRow, PricedCurves, Provenance};

/// Fixed leading columns of every trajectory CSV.
pub const TRAJECTORY_HEADER: &str = "t,S,I,H,D,cumS,cumI,cumH,cumDeaths";

/// Roundoff dust from the integrator; compartments and cumulants this far
/// below zero print as zero. Values are clamped in output only.
const REPORT_CLAMP: f64 = -1e-9;

/// Shortest decimal representation that round-trips to the same value.
pub fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Clamps reported compartment and cumulant values: tiny negatives are
/// integration dust, not data.
pub fn reported(v: f64) -> f64 {
    if (REPORT_CLAMP..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// File name for one (scenario, initial) trajectory, safe for any filesystem.
pub fn trajectory_file_name(scenario: &str, initial_index: usize) -> String {
    let safe: String = scenario
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{safe}_IC{}.csv", initial_index + 1)
}

/// Writes one trajectory CSV: the fixed columns, plus one reserve column per
/// premium multiplier when the pair was priced.
pub fn write_trajectory_csv(
    w: &mut impl Write,
    traj: &Trajectory<f64>,
    priced: Option<&PricedCurves>,
) -> io::Result<()> {
    let mut header = TRAJECTORY_HEADER.to_string();
    if let Some(p) = priced {
        for m in &p.multipliers {
            header.push_str(&format!(",V_{}", fmt(*m)));
        }
    }
    writeln!(w, "{header}")?;

    for k in 0..traj.len() {
        let x = &traj.states[k];
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt(traj.times[k]),
            fmt(reported(x.s)),
            fmt(reported(x.i)),
            fmt(reported(x.h)),
            fmt(reported(x.d)),
            fmt(reported(traj.cum_s[k])),
            fmt(reported(traj.cum_i[k])),
            fmt(reported(traj.cum_h[k])),
            fmt(reported(traj.cum_deaths[k])),
        );
        if let Some(p) = priced {
            for curve in &p.curves {
                line.push(',');
                // Reserves are signed; no clamping.
                line.push_str(&fmt(curve.values[k]));
            }
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes the batch summary: one row per (scenario, initial) with the
/// analysis verdicts and premiums.
pub fn write_summary_csv(w: &mut impl Write, rows: &[BatchRow]) -> io::Result<()> {
    writeln!(
        w,
        "scenario,initial,R0,dfe_stability,S_star,I_star,H_star,dee_stability,\
         final_S,final_I,final_H,final_D,pi,pi_star"
    )?;
    for row in rows {
        let (s_star, i_star, h_star) = match row.analysis.dee {
            Some((s, i, h)) => (fmt(s), fmt(i), fmt(h)),
            None => (String::new(), String::new(), String::new()),
        };
        let dee_stability = row
            .analysis
            .dee_stability
            .map(|s| s.to_string())
            .unwrap_or_default();
        let (pi, pi_star) = match &row.pricing {
            Some(p) => (fmt(p.pi_zero_profit), fmt(p.pi_star)),
            None => (String::new(), String::new()),
        };
        let f = &row.trajectory.final_state;
        writeln!(
            w,
            "{},IC{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.scenario,
            row.initial_index + 1,
            fmt(row.analysis.r0),
            row.analysis.dfe_stability,
            s_star,
            i_star,
            h_star,
            dee_stability,
            fmt(reported(f.s)),
            fmt(reported(f.i)),
            fmt(reported(f.h)),
            fmt(reported(f.d)),
            pi,
            pi_star,
        )?;
    }
    Ok(())
}

/// Writes the sensitivity indices of every scenario in the batch, one row
/// per (scenario, parameter).
pub fn write_sensitivity_csv(w: &mut impl Write, rows: &[BatchRow]) -> io::Result<()> {
    writeln!(w, "scenario,parameter,partial,index")?;
    let mut last: Option<&str> = None;
    for row in rows {
        // Sensitivities depend only on parameters; emit once per scenario.
        if last == Some(row.scenario.as_str()) {
            continue;
        }
        last = Some(row.scenario.as_str());
        for name in ParamName::ALL {
            let entry = row.sensitivity.get(name);
            writeln!(
                w,
                "{},{},{},{}",
                row.scenario,
                name,
                fmt(entry.partial),
                fmt(entry.index)
            )?;
        }
    }
    Ok(())
}

/// Writes the provenance record.
pub fn write_provenance_csv(w: &mut impl Write, provenance: &Provenance) -> io::Result<()> {
    writeln!(w, "config_hash,step,version")?;
    writeln!(
        w,
        "{},{},{}",
        provenance.config_hash, provenance.step, provenance.version
    )
}

/// Writes summary, sensitivity, and provenance files for a finished batch
/// into `dir`.
pub fn write_batch_outputs(
    dir: &std::path::Path,
    result: &BatchResult,
) -> Result<(), crate::CliError> {
    let write = |name: &str, body: &dyn Fn(&mut Vec<u8>) -> io::Result<()>| {
        let mut buf = Vec::new();
        body(&mut buf).map_err(|e| crate::CliError::Io(format!("{name}: {e}")))?;
        let path = dir.join(name);
        std::fs::write(&path, buf)
            .map_err(|e| crate::CliError::Io(format!("cannot write {}: {e}", path.display())))
    };
    write("summary.csv", &|w| write_summary_csv(w, &result.rows))?;
    write("sensitivity.csv", &|w| {
        write_sensitivity_csv(w, &result.rows)
    })?;
    write("provenance.csv", &|w| {
        write_provenance_csv(w, &result.provenance)
    })?;
    Ok(())
}
