//! Dependency-free SVG charts: compartment trajectories, reserve curves per
//! premium multiplier, and signed sensitivity bars.

use sishd_core::actuarial::ReserveCurve;
use sishd_core::analysis::{ParamName, SensitivityReport};
use sishd_core::simulate::Trajectory;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;

/// Maximum points per polyline; denser series are strided down.
const MAX_POINTS: usize = 1200;

const SERIES_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Linear map from a data interval onto a pixel interval.
#[derive(Debug, Clone, Copy)]
struct Scale {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> Self {
        // Guard degenerate ranges so every chart stays renderable.
        let (lo, hi) = if hi - lo > 0.0 {
            (lo, hi)
        } else {
            (lo - 1.0, hi + 1.0)
        };
        Scale {
            lo,
            hi,
            px_lo,
            px_hi,
        }
    }

    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

/// Round tick spacing to a 1/2/5 decade so labels stay readable.
fn nice_step(span: f64, target_ticks: usize) -> f64 {
    let raw = span / target_ticks.max(1) as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let normalized = raw / magnitude;
    let factor = if normalized <= 1.0 {
        1.0
    } else if normalized <= 2.0 {
        2.0
    } else if normalized <= 5.0 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 5);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        // Snap values like 0.30000000000000004 back onto the grid.
        let snapped = (t / step).round() * step;
        out.push(if snapped.abs() < step * 1e-9 {
            0.0
        } else {
            snapped
        });
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e6).contains(&a) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Stride indices so at most [`MAX_POINTS`] survive, always keeping the last.
fn downsample(n: usize) -> Vec<usize> {
    if n <= MAX_POINTS {
        return (0..n).collect();
    }
    let stride = n.div_ceil(MAX_POINTS);
    let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
    if *idx.last().expect("nonempty") != n - 1 {
        idx.push(n - 1);
    }
    idx
}

struct Frame {
    svg: String,
    x: Scale,
    y: Scale,
}

/// Opens the document and draws frame, ticks, grid, axis labels, and title.
fn begin_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    x_range: (f64, f64),
    y_range: (f64, f64),
) -> Frame {
    let x = Scale::new(x_range.0, x_range.1, LEFT, WIDTH - RIGHT);
    let y = Scale::new(y_range.0, y_range.1, HEIGHT - BOTTOM, TOP);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));

    for t in ticks(x.lo, x.hi) {
        let px = x.map(t);
        svg.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" \
             stroke=\"#dddddd\"/>\n",
            TOP,
            HEIGHT - BOTTOM
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            HEIGHT - BOTTOM + 16.0,
            fmt_tick(t)
        ));
    }
    for t in ticks(y.lo, y.hi) {
        let py = y.map(t);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{:.1}\" y2=\"{py:.1}\" \
             stroke=\"#dddddd\"/>\n",
            LEFT,
            WIDTH - RIGHT
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            LEFT - 6.0,
            py + 4.0,
            fmt_tick(t)
        ));
    }

    svg.push_str(&format!(
        "<rect x=\"{LEFT:.1}\" y=\"{TOP:.1}\" width=\"{:.1}\" height=\"{:.1}\" \
         fill=\"none\" stroke=\"black\"/>\n",
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        HEIGHT - 22.0,
        xml_escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {:.1})\">{}</text>\n",
        (TOP + HEIGHT - BOTTOM) / 2.0,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        xml_escape(y_label)
    ));
    Frame { svg, x, y }
}

fn polyline(frame: &Frame, xs: &[f64], ys: &[f64], color: &str) -> String {
    let idx = downsample(xs.len());
    let mut points = String::new();
    for &i in &idx {
        points.push_str(&format!(
            "{:.2},{:.2} ",
            frame.x.map(xs[i]),
            frame.y.map(ys[i])
        ));
    }
    format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
        points.trim_end()
    )
}

fn legend(frame: &mut Frame, entries: &[(String, &str)]) {
    let x0 = WIDTH - RIGHT - 150.0;
    for (k, (label, color)) in entries.iter().enumerate() {
        let py = TOP + 14.0 + 16.0 * k as f64;
        frame.svg.push_str(&format!(
            "<line x1=\"{x0:.1}\" y1=\"{py:.1}\" x2=\"{:.1}\" y2=\"{py:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            x0 + 22.0
        ));
        frame.svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{}</text>\n",
            x0 + 28.0,
            py + 4.0,
            xml_escape(label)
        ));
    }
}

fn close(frame: Frame) -> String {
    let mut svg = frame.svg;
    svg.push_str("</svg>\n");
    svg
}

fn range_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}

/// S, I, and H against time for one simulated pair.
pub fn trajectory_chart(traj: &Trajectory<f64>, title: &str) -> String {
    let series: [(&str, Vec<f64>); 3] = [
        ("S", traj.states.iter().map(|s| s.s).collect()),
        ("I", traj.states.iter().map(|s| s.i).collect()),
        ("H", traj.states.iter().map(|s| s.h).collect()),
    ];
    let (lo, hi) = range_of(series.iter().flat_map(|(_, v)| v.iter().copied()));
    let pad = 0.05 * (hi - lo).max(1e-12);
    let mut frame = begin_chart(
        title,
        "t (days)",
        "individuals",
        (traj.t0(), traj.t_end()),
        (0.0f64.min(lo - pad), hi + pad),
    );
    let mut entries = Vec::new();
    for (k, (label, values)) in series.iter().enumerate() {
        frame
            .svg
            .push_str(&polyline(&frame, &traj.times, values, SERIES_COLORS[k]));
        entries.push((label.to_string(), SERIES_COLORS[k]));
    }
    legend(&mut frame, &entries);
    close(frame)
}

/// Reserve V(t) for each premium multiplier, with a zero reference line.
pub fn reserve_chart(multipliers: &[f64], curves: &[ReserveCurve<f64>], title: &str) -> String {
    assert_eq!(multipliers.len(), curves.len(), "one curve per multiplier");
    assert!(!curves.is_empty(), "reserve chart needs at least one curve");
    let (lo, hi) = range_of(curves.iter().flat_map(|c| c.values.iter().copied()));
    let pad = 0.05 * (hi - lo).max(1e-12);
    let t_lo = curves[0].times[0];
    let t_hi = *curves[0].times.last().expect("curves are nonempty");
    let mut frame = begin_chart(
        title,
        "t (days)",
        "V(t) (currency units)",
        (t_lo, t_hi),
        (lo.min(0.0) - pad, hi.max(0.0) + pad),
    );
    let zero = frame.y.map(0.0);
    frame.svg.push_str(&format!(
        "<line x1=\"{LEFT:.1}\" y1=\"{zero:.1}\" x2=\"{:.1}\" y2=\"{zero:.1}\" \
         stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n",
        WIDTH - RIGHT
    ));
    let mut entries = Vec::new();
    for (k, (m, curve)) in multipliers.iter().zip(curves).enumerate() {
        let color = SERIES_COLORS[k % SERIES_COLORS.len()];
        frame
            .svg
            .push_str(&polyline(&frame, &curve.times, &curve.values, color));
        entries.push((format!("V at {m} x premium"), color));
    }
    legend(&mut frame, &entries);
    close(frame)
}

/// Signed bars of the normalized sensitivity indices, one per parameter.
pub fn sensitivity_chart(report: &SensitivityReport<f64>, title: &str) -> String {
    let params = ParamName::ALL;
    let values: Vec<f64> = params.iter().map(|p| report.get(*p).index).collect();
    let (lo, hi) = range_of(values.iter().copied());
    let pad = 0.1 * (hi - lo).max(1e-12);
    let mut frame = begin_chart(
        title,
        "parameter",
        "normalized sensitivity index",
        (0.0, params.len() as f64),
        (lo.min(0.0) - pad, hi.max(0.0) + pad),
    );
    let zero = frame.y.map(0.0);
    frame.svg.push_str(&format!(
        "<line x1=\"{LEFT:.1}\" y1=\"{zero:.1}\" x2=\"{:.1}\" y2=\"{zero:.1}\" \
         stroke=\"#888888\"/>\n",
        WIDTH - RIGHT
    ));
    let slot = (WIDTH - LEFT - RIGHT) / params.len() as f64;
    for (k, (param, value)) in params.iter().zip(&values).enumerate() {
        let positive = *value >= 0.0;
        let px = LEFT + slot * (k as f64 + 0.2);
        let py = frame.y.map(*value);
        let (top, height) = if positive {
            (py, zero - py)
        } else {
            (zero, py - zero)
        };
        frame.svg.push_str(&format!(
            "<rect class=\"{}\" data-param=\"{param}\" x=\"{px:.1}\" y=\"{top:.1}\" \
             width=\"{:.1}\" height=\"{height:.1}\" fill=\"{}\"/>\n",
            if positive {
                "bar-positive"
            } else {
                "bar-negative"
            },
            slot * 0.6,
            if positive { "#2ca02c" } else { "#d62728" },
        ));
        frame.svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{param}</text>\n",
            px + slot * 0.3,
            HEIGHT - BOTTOM + 16.0,
        ));
    }
    close(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::bundled_scenarios;
    use sishd_core::actuarial::{price, reserve_curve};
    use sishd_core::analysis::sensitivity_indices;
    use sishd_core::simulate::{integrate, SimConfig};

    fn b4_scenario() -> crate::config::Scenario {
        bundled_scenarios()
            .into_iter()
            .find(|s| s.name == "B4")
            .expect("bundled B4")
    }

    fn short_trajectory() -> Trajectory<f64> {
        let scenario = b4_scenario();
        let config = SimConfig::new(0.0, 5.0, 0.01, scenario.initials[0]).unwrap();
        integrate(&scenario.params, &config).unwrap()
    }

    #[test]
    fn trajectory_chart_has_three_series_and_labels() {
        let svg = trajectory_chart(&short_trajectory(), "B4 trajectory");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("t (days)"));
        assert!(svg.contains("individuals"));
        for label in ["&gt;S<", "&gt;I<", "&gt;H<"] {
            // Legend labels are single letters inside text elements.
            let plain = label.replace("&gt;", ">");
            assert!(svg.contains(&plain), "missing legend label {plain}");
        }
    }

    #[test]
    fn reserve_chart_draws_one_polyline_per_multiplier() {
        let scenario = b4_scenario();
        let traj = short_trajectory();
        let benefits = scenario.benefits.unwrap();
        let report = price(&traj, &benefits).unwrap();
        let multipliers = [0.9, 1.0, 1.1];
        let curves: Vec<_> = multipliers
            .iter()
            .map(|m| reserve_curve(&traj, &benefits, m * report.pi_star).unwrap())
            .collect();
        let svg = reserve_chart(&multipliers, &curves, "B4 reserves");
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("V(t) (currency units)"));
        assert!(svg.contains("V at 0.9 x premium"));
    }

    #[test]
    fn sensitivity_chart_signs_match_b4_indices() {
        let scenario = b4_scenario();
        let report = sensitivity_indices(&scenario.params);
        let svg = sensitivity_chart(&report, "B4 sensitivities");
        assert_eq!(svg.matches("<rect class=").count(), 9);
        for param in ["beta", "epsilon", "Lambda"] {
            assert!(
                svg.contains(&format!("class=\"bar-positive\" data-param=\"{param}\"")),
                "{param} should chart as a positive bar"
            );
        }
        for param in ["alpha_I", "gamma_I", "alpha_H", "gamma_H", "mu", "delta"] {
            assert!(
                svg.contains(&format!("class=\"bar-negative\" data-param=\"{param}\"")),
                "{param} should chart as a negative bar"
            );
        }
        assert!(svg.contains("normalized sensitivity index"));
    }

    #[test]
    fn dense_series_are_downsampled() {
        let idx = downsample(365_001);
        assert!(idx.len() <= MAX_POINTS + 1);
        assert_eq!(*idx.first().unwrap(), 0);
        assert_eq!(*idx.last().unwrap(), 365_000);
        assert_eq!(downsample(3), vec![0, 1, 2]);
    }

    #[test]
    fn tick_generation_is_sane() {
        let t = ticks(0.0, 365.0);
        assert!(t.len() >= 3 && t.len() <= 9);
        assert!(t.iter().all(|v| (0.0..=365.0 + 1e-6).contains(v)));
        assert_eq!(fmt_tick(0.0), "0");
        assert_eq!(fmt_tick(100.0), "100");
        assert_eq!(fmt_tick(0.5), "0.5");
    }
}
