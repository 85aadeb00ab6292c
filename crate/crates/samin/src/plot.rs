//! Static SVG line charts for sweep results: energy and latency against
//! the swept variable plus the objective-trace convergence chart, one
//! series per scheme. Output bytes depend only on the input rows.

use crate::sweep::{SweepError, SweepRow};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 58.0;

/// Series colors keyed by scheme order (stable).
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn fmt2(x: f64) -> String {
    format!("{x:.2}")
}

fn nice_tick(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-3..1e6).contains(&a) {
        let s = format!("{x:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{x:.2e}")
    }
}

/// Renders one chart with labeled axes, ticks, and a legend.
pub fn render_line_chart(series: &[Series], title: &str, x_label: &str, y_label: &str) -> String {
    let finite: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in &finite {
        x_min = x_min.min(*x);
        x_max = x_max.max(*x);
        y_min = y_min.min(*y);
        y_max = y_max.max(*y);
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        let pad = y_min.abs().max(1.0) * 0.05;
        y_min -= pad;
        y_max += pad;
    } else {
        let pad = (y_max - y_min) * 0.06;
        y_min -= pad;
        y_max += pad;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let to_y = |y: f64| MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;

    let mut svg = String::with_capacity(8192);
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = write!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = write!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        title
    );

    // Gridlines and ticks.
    const TICKS: usize = 5;
    for i in 0..=TICKS {
        let fx = x_min + (x_max - x_min) * i as f64 / TICKS as f64;
        let px = to_x(fx);
        let _ = write!(
            svg,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#dddddd"/>"##,
            fmt2(px),
            fmt2(MARGIN_TOP),
            fmt2(px),
            fmt2(MARGIN_TOP + plot_h)
        );
        let _ = write!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            fmt2(px),
            fmt2(MARGIN_TOP + plot_h + 18.0),
            nice_tick(fx)
        );
        let fy = y_min + (y_max - y_min) * i as f64 / TICKS as f64;
        let py = to_y(fy);
        let _ = write!(
            svg,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#dddddd"/>"##,
            fmt2(MARGIN_LEFT),
            fmt2(py),
            fmt2(MARGIN_LEFT + plot_w),
            fmt2(py)
        );
        let _ = write!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            fmt2(MARGIN_LEFT - 6.0),
            fmt2(py + 4.0),
            nice_tick(fy)
        );
    }

    // Axes.
    let _ = write!(
        svg,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        fmt2(MARGIN_LEFT),
        fmt2(MARGIN_TOP),
        fmt2(plot_w),
        fmt2(plot_h)
    );
    let _ = write!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        fmt2(MARGIN_LEFT + plot_w / 2.0),
        fmt2(HEIGHT - 14.0),
        x_label
    );
    let _ = write!(
        svg,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        fmt2(MARGIN_TOP + plot_h / 2.0),
        fmt2(MARGIN_TOP + plot_h / 2.0),
        y_label
    );

    // Series lines, markers, legend.
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| (to_x(x), to_y(y)))
            .collect();
        if pts.len() > 1 {
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", fmt2(*x), fmt2(*y))).collect();
            let _ = write!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.8"/>"#,
                path.join(" "),
                color
            );
        }
        for (x, y) in &pts {
            let _ = write!(
                svg,
                r#"<circle cx="{}" cy="{}" r="3" fill="{}"/>"#,
                fmt2(*x),
                fmt2(*y),
                color
            );
        }
        let ly = MARGIN_TOP + 14.0 + 18.0 * k as f64;
        let _ = write!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.8"/>"#,
            fmt2(MARGIN_LEFT + plot_w - 110.0),
            fmt2(ly),
            fmt2(MARGIN_LEFT + plot_w - 86.0),
            fmt2(ly),
            color
        );
        let _ = write!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            fmt2(MARGIN_LEFT + plot_w - 80.0),
            fmt2(ly + 4.0),
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn scheme_series<F: Fn(&SweepRow) -> f64>(rows: &[SweepRow], pick: F) -> Vec<Series> {
    let mut schemes: Vec<String> = rows.iter().map(|r| r.scheme.clone()).collect();
    schemes.sort();
    schemes.dedup();
    schemes
        .into_iter()
        .map(|scheme| Series {
            points: rows
                .iter()
                .filter(|r| r.scheme == scheme)
                .map(|r| (r.value, pick(r)))
                .collect(),
            label: scheme,
        })
        .collect()
}

/// Writes the energy and latency charts (and the convergence chart when
/// traces are available) into `dir`, file names keyed by `tag`.
/// Returns the written paths.
pub fn render_plots(
    rows: &[SweepRow],
    traces: &[(String, Vec<f64>)],
    tag: &str,
    dir: &Path,
) -> Result<Vec<PathBuf>, SweepError> {
    if rows.is_empty() {
        return Err(SweepError::Csv(0, "no rows to plot".into()));
    }
    std::fs::create_dir_all(dir)?;
    let variable = rows[0].variable.clone();
    let mut written = Vec::new();

    let energy = render_line_chart(
        &scheme_series(rows, |r| r.e_total),
        "System energy vs swept parameter",
        &format!("{variable} (SI)"),
        "E_total (J)",
    );
    let path = dir.join(format!("{tag}_energy.svg"));
    std::fs::write(&path, energy)?;
    written.push(path);

    let latency = render_line_chart(
        &scheme_series(rows, |r| r.t_max),
        "Worst-case task latency vs swept parameter",
        &format!("{variable} (SI)"),
        "max T_total (s)",
    );
    let path = dir.join(format!("{tag}_latency.svg"));
    std::fs::write(&path, latency)?;
    written.push(path);

    if !traces.is_empty() {
        let series: Vec<Series> = traces
            .iter()
            .map(|(label, trace)| Series {
                label: label.clone(),
                points: trace
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| (i as f64 + 1.0, e))
                    .collect(),
            })
            .collect();
        let chart = render_line_chart(
            &series,
            "Objective trace at the first sweep point",
            "sweep iteration",
            "E_total (J)",
        );
        let path = dir.join(format!("{tag}_convergence.svg"));
        std::fs::write(&path, chart)?;
        written.push(path);
    }
    Ok(written)
}
