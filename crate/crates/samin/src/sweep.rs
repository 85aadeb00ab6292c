//! Parameter-sweep experiment harness: runs the requested schemes over
//! every sweep point, collects rows, and serializes them as CSV with a
//! reproducibility sidecar.

use crate::baselines::{solve_scheme, Scheme};
use crate::config::{config_hash, serialize_config, ScenarioConfig, SweepSpec, SweepVariable};
use crate::optimizer::{stp_solve, SolveError, SolveReport};
use rayon::prelude::*;
use std::path::Path;
use thiserror::Error;

/// Fixed CSV header; numbers are serialized at 17 significant digits.
pub const CSV_HEADER: &str = "variable,value,scheme,e_total_j,t_mean_s,t_max_s,\
                              mean_offload_ratio,mean_offload_volume_bits,iterations,\
                              converged,feasible,infeasible_entries";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("config has no [sweep] section")]
    NoSweepBlock,
    #[error("sweep point {0}: {1}")]
    Point(f64, String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("csv parse error at line {0}: {1}")]
    Csv(usize, String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One (sweep value, scheme) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: String,
    pub value: f64,
    pub scheme: String,
    pub e_total: f64,
    pub t_mean: f64,
    pub t_max: f64,
    /// Offloaded-bit-weighted mean ratio; NaN when nothing offloads.
    pub mean_offload_ratio: f64,
    pub mean_offload_volume: f64,
    pub iterations: usize,
    pub converged: bool,
    pub feasible: bool,
    pub infeasible_entries: usize,
}

/// All rows of one sweep plus the metadata that reproduces the run.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub rows: Vec<SweepRow>,
    /// Objective trace per scheme at the first sweep point, for the
    /// convergence chart.
    pub traces: Vec<(String, Vec<f64>)>,
    pub config_text: String,
    pub config_hash: String,
    pub seed: u64,
}

fn summarize(
    variable: SweepVariable,
    value: f64,
    scheme: Scheme,
    report: &SolveReport,
) -> SweepRow {
    let mut t_sum = 0.0;
    let mut t_max: f64 = 0.0;
    let mut count = 0usize;
    let mut uav_bits = 0.0;
    let mut offloaded_bits = 0.0;
    for row in &report.metrics.per_mass {
        for mm in row {
            t_sum += mm.t_total;
            t_max = t_max.max(mm.t_total);
            count += 1;
        }
    }
    for (m, row) in report.plan.volume.iter().enumerate() {
        for (n, &s) in row.iter().enumerate() {
            offloaded_bits += s;
            uav_bits += report.plan.ratio[m][n] * s;
        }
    }
    SweepRow {
        variable: variable.name().to_string(),
        value,
        scheme: scheme.name().to_string(),
        e_total: report.e_total(),
        t_mean: t_sum / count.max(1) as f64,
        t_max,
        mean_offload_ratio: if offloaded_bits > 0.0 {
            uav_bits / offloaded_bits
        } else {
            f64::NAN
        },
        mean_offload_volume: offloaded_bits / count.max(1) as f64,
        iterations: report.iterations_used,
        converged: report.converged,
        feasible: report.metrics.feasible,
        infeasible_entries: report.infeasible_entries.len(),
    }
}

/// Worker count: `SAMIN_THREADS` caps it, default is the rayon default.
fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SAMIN_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            builder = builder.num_threads(n.max(1));
        }
    }
    builder.build().expect("thread pool")
}

/// Runs every (sweep point, scheme) pair and collects sorted rows.
/// Infeasible points are recorded with their flags, never dropped.
pub fn run_sweep(
    config: &ScenarioConfig,
    schemes: &[Scheme],
) -> Result<SweepResult, SweepError> {
    let sweep: &SweepSpec = config.sweep.as_ref().ok_or(SweepError::NoSweepBlock)?;
    let variable = sweep.variable;

    let jobs: Vec<(usize, f64, Scheme)> = sweep
        .values
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| schemes.iter().map(move |&s| (i, v, s)))
        .collect();

    let pool = thread_pool();
    let outcomes: Vec<(usize, f64, Scheme, SolveReport)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, value, scheme)| {
                let (point_cfg, solve_cfg) = config.with_sweep_value(variable, value);
                let scenario = point_cfg
                    .build_scenario()
                    .map_err(|e| SweepError::Point(value, e.to_string()))?;
                let report = match scheme {
                    Scheme::Stp if !config.solver.warm_start || solve_cfg.fixed_ratio.is_some() => {
                        stp_solve(&scenario, &solve_cfg)?
                    }
                    _ => solve_scheme(&scenario, &solve_cfg, scheme)?,
                };
                Ok((i, value, scheme, report))
            })
            .collect::<Result<Vec<_>, SweepError>>()
    })?;

    let mut rows: Vec<SweepRow> = outcomes
        .iter()
        .map(|(_, value, scheme, report)| summarize(variable, *value, *scheme, report))
        .collect();
    rows.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then_with(|| a.scheme.cmp(&b.scheme))
    });

    let mut traces = Vec::new();
    for &scheme in schemes {
        if let Some((_, _, _, report)) = outcomes
            .iter()
            .find(|(i, _, s, _)| *i == 0 && *s == scheme)
        {
            traces.push((scheme.name().to_string(), report.objective_trace.clone()));
        }
    }
    traces.sort_by(|a, b| a.0.cmp(&b.0));

    Ok(SweepResult {
        variable,
        rows,
        traces,
        config_text: serialize_config(config),
        config_hash: config_hash(config),
        seed: config.seed,
    })
}

// ---------------------------------------------------------------------------
// CSV + metadata serialization
// ---------------------------------------------------------------------------

/// 17 significant digits, enough for an exact f64 round-trip.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    format!("{x:.16e}")
}

/// Renders the fixed-schema CSV (UTF-8, LF line endings).
pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(256 * (result.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.variable,
            fmt_g17(r.value),
            r.scheme,
            fmt_g17(r.e_total),
            fmt_g17(r.t_mean),
            fmt_g17(r.t_max),
            fmt_g17(r.mean_offload_ratio),
            fmt_g17(r.mean_offload_volume),
            r.iterations,
            r.converged,
            r.feasible,
            r.infeasible_entries,
        ));
    }
    out
}

/// Parses rows back from the fixed-schema CSV (used by the plot command).
pub fn parse_csv(content: &str) -> Result<Vec<SweepRow>, SweepError> {
    let mut lines = content.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(SweepError::Csv(1, format!("unexpected header `{header}`")))
        }
        None => return Err(SweepError::Csv(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(SweepError::Csv(
                idx + 1,
                format!("expected 12 fields, got {}", fields.len()),
            ));
        }
        let f = |i: usize| -> Result<f64, SweepError> {
            if fields[i].is_empty() {
                return Ok(f64::NAN);
            }
            fields[i]
                .parse()
                .map_err(|_| SweepError::Csv(idx + 1, format!("bad number `{}`", fields[i])))
        };
        rows.push(SweepRow {
            variable: fields[0].to_string(),
            value: f(1)?,
            scheme: fields[2].to_string(),
            e_total: f(3)?,
            t_mean: f(4)?,
            t_max: f(5)?,
            mean_offload_ratio: f(6)?,
            mean_offload_volume: f(7)?,
            iterations: fields[8]
                .parse()
                .map_err(|_| SweepError::Csv(idx + 1, "bad iterations".into()))?,
            converged: fields[9]
                .parse()
                .map_err(|_| SweepError::Csv(idx + 1, "bad converged flag".into()))?,
            feasible: fields[10]
                .parse()
                .map_err(|_| SweepError::Csv(idx + 1, "bad feasible flag".into()))?,
            infeasible_entries: fields[11]
                .parse()
                .map_err(|_| SweepError::Csv(idx + 1, "bad infeasible count".into()))?,
        });
    }
    Ok(rows)
}

/// Reproducibility sidecar: tool version, seed, config hash, and the
/// complete effective configuration.
pub fn metadata_text(result: &SweepResult) -> String {
    format!(
        "# sweep run metadata\ntool_version = {}\nseed = {}\nconfig_hash = {}\n\n\
         # effective configuration\n{}",
        env!("CARGO_PKG_VERSION"),
        result.seed,
        result.config_hash,
        result.config_text
    )
}

/// Writes `<hash>_sweep.csv` and `<hash>_sweep.meta.txt` into `dir`;
/// returns the CSV path.
pub fn write_outputs(result: &SweepResult, dir: &Path) -> Result<std::path::PathBuf, SweepError> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{}_sweep.csv", result.config_hash));
    std::fs::write(&csv_path, to_csv(result))?;
    let meta_path = dir.join(format!("{}_sweep.meta.txt", result.config_hash));
    std::fs::write(&meta_path, metadata_text(result))?;
    Ok(csv_path)
}
