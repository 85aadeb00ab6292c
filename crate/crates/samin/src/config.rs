//! Scenario config files: sectioned key-value text with explicit unit
//! suffixes. Values are converted to SI at parse time and serialized
//! back in canonical SI form, so `parse(serialize(c)) == c` and every
//! output can embed the complete effective configuration.

use crate::channel::ChannelMode;
use crate::geometry::Position3D;
use crate::optimizer::SolveConfig;
use crate::params::SystemParams;
use crate::scenario::{
    default_uav_positions, PlacementPolicy, Scenario, ScenarioBuilder, ScenarioError, Task,
};
use std::collections::HashSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: key `{key}`: {msg}")]
    BadValue {
        line: usize,
        key: String,
        msg: String,
    },
    #[error("line {line}: key `{key}`: unit `{unit}` does not measure {expected}")]
    UnitMismatch {
        line: usize,
        key: String,
        unit: String,
        expected: &'static str,
    },
    #[error("config invariant: {0}")]
    Invariant(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// How ships are placed around their UAVs.
#[derive(Debug, Clone, PartialEq)]
pub enum Placement {
    /// Seeded uniform draw in a ground disc around each UAV, radius
    /// `radius_frac` of the largest in-range ground distance.
    Disc {
        radius_frac: f64,
        policy: PlacementPolicy,
    },
    /// Explicit coordinates, one row per UAV.
    Explicit(Vec<Vec<Position3D>>),
}

/// What a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    TaskSize,
    TxTimeUav,
    TxTimeLeo,
    MassesPerUav,
    CpuLocal,
    OffloadRatio,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::TaskSize => "task_size",
            SweepVariable::TxTimeUav => "t_uav",
            SweepVariable::TxTimeLeo => "t_leo",
            SweepVariable::MassesPerUav => "masses_per_uav",
            SweepVariable::CpuLocal => "rho_local",
            SweepVariable::OffloadRatio => "offload_ratio",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "task_size" => Some(Self::TaskSize),
            "t_uav" => Some(Self::TxTimeUav),
            "t_leo" => Some(Self::TxTimeLeo),
            "masses_per_uav" => Some(Self::MassesPerUav),
            "rho_local" => Some(Self::CpuLocal),
            "offload_ratio" => Some(Self::OffloadRatio),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

/// Solver knobs carried by the config file.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub max_sweeps: usize,
    pub mris_tolerance: f64,
    pub rel_improvement_tol: f64,
    /// When true the comparison scheme rows use the best of the plain
    /// solve and one warm start from each baseline plan.
    pub warm_start: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            max_sweeps: 20,
            mris_tolerance: 1e-6,
            rel_improvement_tol: 1e-5,
            warm_start: true,
        }
    }
}

impl SolverSettings {
    pub fn to_solve_config(&self) -> SolveConfig {
        SolveConfig {
            max_sweeps: self.max_sweeps,
            mris_tolerance: self.mris_tolerance,
            rel_improvement_tol: self.rel_improvement_tol,
            fixed_ratio: None,
            resource_steps: true,
        }
    }
}

/// A fully resolved scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: SystemParams,
    pub uav_positions: Vec<Position3D>,
    pub masses_per_uav: usize,
    pub placement: Placement,
    pub seed: u64,
    pub task: Task,
    pub stochastic_channel: bool,
    pub solver: SolverSettings,
    pub sweep: Option<SweepSpec>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let params = SystemParams::default();
        Self {
            task: Task {
                size_bits: 1.0e7,
                cpu_local: 7.0e9,
                deadline: params.deadline,
                tx_time_uav: 0.4,
                tx_time_leo: 0.7,
            },
            params,
            uav_positions: default_uav_positions(),
            masses_per_uav: 5,
            placement: Placement::Disc {
                radius_frac: 0.9,
                policy: PlacementPolicy::Reject,
            },
            seed: 42,
            stochastic_channel: false,
            solver: SolverSettings::default(),
            sweep: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Units
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Power,
    Bandwidth,
    DataSize,
    Distance,
    Time,
    Angle,
    /// Value kept in dB.
    Decibel,
    /// Linear value, optionally given in dB/dBi.
    LinearOrDb,
    Psd,
    CyclesPerSecond,
    Energy,
    Pure,
}

impl Dimension {
    fn expected(&self) -> &'static str {
        match self {
            Dimension::Power => "power (W, mW, kW)",
            Dimension::Bandwidth => "bandwidth (Hz, kHz, MHz, GHz)",
            Dimension::DataSize => "data size (bit, kbit, Mbit, Gbit)",
            Dimension::Distance => "distance (m, km)",
            Dimension::Time => "time (s, ms)",
            Dimension::Angle => "angle (rad, deg)",
            Dimension::Decibel => "decibels (dB)",
            Dimension::LinearOrDb => "a linear factor or dB/dBi",
            Dimension::Psd => "spectral density (W/Hz)",
            Dimension::CyclesPerSecond => "CPU rate (cycles/s, Gcycles/s)",
            Dimension::Energy => "energy (J, kJ)",
            Dimension::Pure => "a dimensionless number",
        }
    }

    /// Converts `value` with `unit` to the stored representation.
    fn apply(&self, value: f64, unit: Option<&str>) -> Option<f64> {
        match (self, unit) {
            (_, None) => Some(value),
            (Dimension::Power, Some("W")) => Some(value),
            (Dimension::Power, Some("mW")) => Some(value * 1e-3),
            (Dimension::Power, Some("kW")) => Some(value * 1e3),
            (Dimension::Bandwidth, Some("Hz")) => Some(value),
            (Dimension::Bandwidth, Some("kHz")) => Some(value * 1e3),
            (Dimension::Bandwidth, Some("MHz")) => Some(value * 1e6),
            (Dimension::Bandwidth, Some("GHz")) => Some(value * 1e9),
            (Dimension::DataSize, Some("bit" | "bits")) => Some(value),
            (Dimension::DataSize, Some("kbit")) => Some(value * 1e3),
            (Dimension::DataSize, Some("Mbit")) => Some(value * 1e6),
            (Dimension::DataSize, Some("Gbit")) => Some(value * 1e9),
            (Dimension::Distance, Some("m")) => Some(value),
            (Dimension::Distance, Some("km")) => Some(value * 1e3),
            (Dimension::Time, Some("s")) => Some(value),
            (Dimension::Time, Some("ms")) => Some(value * 1e-3),
            (Dimension::Angle, Some("rad")) => Some(value),
            (Dimension::Angle, Some("deg")) => Some(value.to_radians()),
            (Dimension::Decibel, Some("dB")) => Some(value),
            (Dimension::LinearOrDb, Some("dB" | "dBi")) => Some(10.0_f64.powf(value / 10.0)),
            (Dimension::Psd, Some("W/Hz")) => Some(value),
            (Dimension::CyclesPerSecond, Some("cycles/s")) => Some(value),
            (Dimension::CyclesPerSecond, Some("Gcycles/s")) => Some(value * 1e9),
            (Dimension::Energy, Some("J")) => Some(value),
            (Dimension::Energy, Some("kJ")) => Some(value * 1e3),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct RawEntry {
    line: usize,
    section: String,
    key: String,
    value: String,
}

fn tokenize(content: &str) -> Result<Vec<RawEntry>, ConfigError> {
    let known_sections = ["system", "scenario", "task", "channel", "solver", "sweep"];
    let mut entries = Vec::new();
    let mut section = String::from("system");
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for (idx, raw_line) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !known_sections.contains(&name.as_str()) {
                return Err(ConfigError::UnknownSection {
                    line: line_no,
                    name,
                });
            }
            section = name;
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::BadValue {
                line: line_no,
                key: line.to_string(),
                msg: "expected `key = value` or `[section]`".into(),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !seen.insert((section.clone(), key.clone())) {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                key: format!("{section}.{key}"),
            });
        }
        entries.push(RawEntry {
            line: line_no,
            section: section.clone(),
            key,
            value,
        });
    }
    Ok(entries)
}

fn parse_scalar(e: &RawEntry, dim: Dimension) -> Result<f64, ConfigError> {
    let mut tokens = e.value.split_whitespace();
    let num = tokens.next().ok_or_else(|| ConfigError::BadValue {
        line: e.line,
        key: e.key.clone(),
        msg: "empty value".into(),
    })?;
    let value: f64 = num.parse().map_err(|_| ConfigError::BadValue {
        line: e.line,
        key: e.key.clone(),
        msg: format!("`{num}` is not a number"),
    })?;
    let unit = tokens.next();
    if let Some(extra) = tokens.next() {
        return Err(ConfigError::BadValue {
            line: e.line,
            key: e.key.clone(),
            msg: format!("unexpected trailing token `{extra}`"),
        });
    }
    dim.apply(value, unit).ok_or_else(|| ConfigError::UnitMismatch {
        line: e.line,
        key: e.key.clone(),
        unit: unit.unwrap_or("").to_string(),
        expected: dim.expected(),
    })
}

/// Numbers separated by whitespace with one optional trailing unit that
/// applies to all of them.
fn parse_list(e: &RawEntry, dim: Dimension) -> Result<Vec<f64>, ConfigError> {
    let tokens: Vec<&str> = e.value.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(ConfigError::BadValue {
            line: e.line,
            key: e.key.clone(),
            msg: "empty value".into(),
        });
    }
    let (nums, unit) = match tokens.last().unwrap().parse::<f64>() {
        Ok(_) => (&tokens[..], None),
        Err(_) => (&tokens[..tokens.len() - 1], Some(*tokens.last().unwrap())),
    };
    let mut out = Vec::with_capacity(nums.len());
    for t in nums {
        let v: f64 = t.parse().map_err(|_| ConfigError::BadValue {
            line: e.line,
            key: e.key.clone(),
            msg: format!("`{t}` is not a number"),
        })?;
        out.push(dim.apply(v, unit).ok_or_else(|| ConfigError::UnitMismatch {
            line: e.line,
            key: e.key.clone(),
            unit: unit.unwrap_or("").to_string(),
            expected: dim.expected(),
        })?);
    }
    Ok(out)
}

/// `x y z; x y z; ...` with an optional trailing distance unit.
fn parse_positions(e: &RawEntry) -> Result<Vec<Position3D>, ConfigError> {
    let mut out = Vec::new();
    for triple in e.value.split(';') {
        let sub = RawEntry {
            line: e.line,
            section: e.section.clone(),
            key: e.key.clone(),
            value: triple.trim().to_string(),
        };
        let nums = parse_list(&sub, Dimension::Distance)?;
        if nums.len() != 3 {
            return Err(ConfigError::BadValue {
                line: e.line,
                key: e.key.clone(),
                msg: format!("expected `x y z`, got {} numbers", nums.len()),
            });
        }
        out.push(Position3D::new(nums[0], nums[1], nums[2]));
    }
    Ok(out)
}

fn parse_usize(e: &RawEntry) -> Result<usize, ConfigError> {
    e.value.parse().map_err(|_| ConfigError::BadValue {
        line: e.line,
        key: e.key.clone(),
        msg: format!("`{}` is not a nonnegative integer", e.value),
    })
}

fn parse_u64(e: &RawEntry) -> Result<u64, ConfigError> {
    e.value.parse().map_err(|_| ConfigError::BadValue {
        line: e.line,
        key: e.key.clone(),
        msg: format!("`{}` is not a nonnegative integer", e.value),
    })
}

fn parse_bool(e: &RawEntry) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        other => Err(ConfigError::BadValue {
            line: e.line,
            key: e.key.clone(),
            msg: format!("`{other}` is not a boolean"),
        }),
    }
}

/// Parses config text; every omitted key keeps its default.
pub fn parse_config(content: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = ScenarioConfig::default();
    let mut sweep_variable: Option<SweepVariable> = None;
    let mut sweep_values: Option<Vec<f64>> = None;
    let mut sweep_from: Option<f64> = None;
    let mut sweep_to: Option<f64> = None;
    let mut sweep_steps: Option<usize> = None;
    let mut explicit_positions: Option<Vec<Position3D>> = None;
    let mut placement_disc = true;
    let mut disc_radius_frac = 0.9;
    let mut placement_policy = PlacementPolicy::Reject;

    for e in tokenize(content)? {
        let p = &mut cfg.params;
        match (e.section.as_str(), e.key.as_str()) {
            ("system", "path_loss_ref") => p.path_loss_ref_db = parse_scalar(&e, Dimension::Decibel)?,
            ("system", "ref_distance") => p.ref_distance = parse_scalar(&e, Dimension::Distance)?,
            ("system", "path_loss_exp_uav") => p.path_loss_exp_uav = parse_scalar(&e, Dimension::Pure)?,
            ("system", "shadow_sigma") => p.shadow_sigma_db = parse_scalar(&e, Dimension::Decibel)?,
            ("system", "direction_adjust") => p.direction_adjust_db = parse_scalar(&e, Dimension::Decibel)?,
            ("system", "direction_sign") => p.direction_sign = parse_scalar(&e, Dimension::Pure)?,
            ("system", "rician_k") => p.rician_k = parse_scalar(&e, Dimension::LinearOrDb)?,
            ("system", "antenna_gain_uav") => p.antenna_gain_uav = parse_scalar(&e, Dimension::LinearOrDb)?,
            ("system", "antenna_gain_mass") => p.antenna_gain_mass = parse_scalar(&e, Dimension::LinearOrDb)?,
            ("system", "sigma2") => p.noise_power_uav = parse_scalar(&e, Dimension::Power)?,
            ("system", "bandwidth_uav") => p.bandwidth_uav = parse_scalar(&e, Dimension::Bandwidth)?,
            ("system", "bandwidth_leo") => p.bandwidth_leo = parse_scalar(&e, Dimension::Bandwidth)?,
            ("system", "noise_psd_leo") => p.noise_psd_leo = parse_scalar(&e, Dimension::Psd)?,
            ("system", "path_loss_exp_leo") => p.path_loss_exp_leo = parse_scalar(&e, Dimension::Pure)?,
            ("system", "leo_link_budget") => p.leo_link_budget = parse_scalar(&e, Dimension::LinearOrDb)?,
            ("system", "channel_gain_exp") => p.channel_gain_exp = parse_scalar(&e, Dimension::Pure)?,
            ("system", "orbit_altitude") => p.orbit_altitude = parse_scalar(&e, Dimension::Distance)?,
            ("system", "earth_radius") => p.earth_radius = parse_scalar(&e, Dimension::Distance)?,
            ("system", "mu_grav") => p.mu_grav = parse_scalar(&e, Dimension::Pure)?,
            ("system", "elevation_angle") => p.elevation_angle = parse_scalar(&e, Dimension::Angle)?,
            ("system", "light_speed") => p.light_speed = parse_scalar(&e, Dimension::Pure)?,
            ("system", "coverage_override") => {
                p.coverage_override = Some(parse_scalar(&e, Dimension::Time)?)
            }
            ("system", "max_link_distance") => p.max_link_distance = parse_scalar(&e, Dimension::Distance)?,
            ("system", "cycles_per_bit_local") => p.cycles_per_bit_local = parse_scalar(&e, Dimension::Pure)?,
            ("system", "cycles_per_bit_uav") => p.cycles_per_bit_uav = parse_scalar(&e, Dimension::Pure)?,
            ("system", "cycles_per_bit_leo") => p.cycles_per_bit_leo = parse_scalar(&e, Dimension::Pure)?,
            ("system", "compute_power_local") => p.compute_power_local = parse_scalar(&e, Dimension::Power)?,
            ("system", "compute_power_uav") => p.compute_power_uav = parse_scalar(&e, Dimension::Power)?,
            ("system", "compute_power_leo") => p.compute_power_leo = parse_scalar(&e, Dimension::Power)?,
            ("system", "max_tx_power_uav") => p.max_tx_power_uav = parse_scalar(&e, Dimension::Power)?,
            ("system", "max_tx_power_leo") => p.max_tx_power_leo = parse_scalar(&e, Dimension::Power)?,
            ("system", "max_energy_uav") => p.max_energy_uav = parse_scalar(&e, Dimension::Energy)?,
            ("system", "max_energy_leo") => p.max_energy_leo = parse_scalar(&e, Dimension::Energy)?,
            ("system", "max_cpu_uav") => p.max_cpu_uav = parse_scalar(&e, Dimension::CyclesPerSecond)?,
            ("system", "max_cpu_leo") => p.max_cpu_leo = parse_scalar(&e, Dimension::CyclesPerSecond)?,
            ("system", "deadline") => p.deadline = parse_scalar(&e, Dimension::Time)?,
            ("system", "exponent_cap") => p.exponent_cap = parse_scalar(&e, Dimension::Pure)?,

            ("scenario", "uav_positions") => cfg.uav_positions = parse_positions(&e)?,
            ("scenario", "masses_per_uav") => cfg.masses_per_uav = parse_usize(&e)?,
            ("scenario", "placement") => match e.value.as_str() {
                "disc" => placement_disc = true,
                "explicit" => placement_disc = false,
                other => {
                    return Err(ConfigError::BadValue {
                        line: e.line,
                        key: e.key,
                        msg: format!("`{other}` is not `disc` or `explicit`"),
                    })
                }
            },
            ("scenario", "disc_radius_frac") => disc_radius_frac = parse_scalar(&e, Dimension::Pure)?,
            ("scenario", "placement_policy") => match e.value.as_str() {
                "reject" => placement_policy = PlacementPolicy::Reject,
                "regenerate" => placement_policy = PlacementPolicy::Regenerate,
                other => {
                    return Err(ConfigError::BadValue {
                        line: e.line,
                        key: e.key,
                        msg: format!("`{other}` is not `reject` or `regenerate`"),
                    })
                }
            },
            ("scenario", "mass_positions") => explicit_positions = Some(parse_positions(&e)?),
            ("scenario", "seed") => cfg.seed = parse_u64(&e)?,

            ("task", "size") => cfg.task.size_bits = parse_scalar(&e, Dimension::DataSize)?,
            ("task", "cpu_local") => cfg.task.cpu_local = parse_scalar(&e, Dimension::CyclesPerSecond)?,
            ("task", "deadline") => cfg.task.deadline = parse_scalar(&e, Dimension::Time)?,
            ("task", "tx_time_uav") => cfg.task.tx_time_uav = parse_scalar(&e, Dimension::Time)?,
            ("task", "tx_time_leo") => cfg.task.tx_time_leo = parse_scalar(&e, Dimension::Time)?,

            ("channel", "mode") => match e.value.as_str() {
                "deterministic" => cfg.stochastic_channel = false,
                "stochastic" => cfg.stochastic_channel = true,
                other => {
                    return Err(ConfigError::BadValue {
                        line: e.line,
                        key: e.key,
                        msg: format!("`{other}` is not `deterministic` or `stochastic`"),
                    })
                }
            },

            ("solver", "max_sweeps") => cfg.solver.max_sweeps = parse_usize(&e)?,
            ("solver", "mris_tolerance") => cfg.solver.mris_tolerance = parse_scalar(&e, Dimension::Pure)?,
            ("solver", "rel_improvement_tol") => {
                cfg.solver.rel_improvement_tol = parse_scalar(&e, Dimension::Pure)?
            }
            ("solver", "warm_start") => cfg.solver.warm_start = parse_bool(&e)?,

            ("sweep", "variable") => {
                sweep_variable = Some(SweepVariable::parse(&e.value).ok_or_else(|| {
                    ConfigError::BadValue {
                        line: e.line,
                        key: e.key.clone(),
                        msg: format!("unknown sweep variable `{}`", e.value),
                    }
                })?)
            }
            ("sweep", "values") => sweep_values = Some(parse_list(&e, sweep_dimension(sweep_variable))?),
            ("sweep", "from") => sweep_from = Some(parse_scalar(&e, sweep_dimension(sweep_variable))?),
            ("sweep", "to") => sweep_to = Some(parse_scalar(&e, sweep_dimension(sweep_variable))?),
            ("sweep", "steps") => sweep_steps = Some(parse_usize(&e)?),

            _ => {
                return Err(ConfigError::UnknownKey {
                    line: e.line,
                    key: format!("{}.{}", e.section, e.key),
                })
            }
        }
    }

    cfg.placement = if placement_disc {
        Placement::Disc {
            radius_frac: disc_radius_frac,
            policy: placement_policy,
        }
    } else {
        let rows = explicit_positions.ok_or_else(|| {
            ConfigError::Invariant("placement = explicit requires mass_positions".into())
        })?;
        if rows.len() != cfg.uav_positions.len() * cfg.masses_per_uav {
            return Err(ConfigError::Invariant(format!(
                "mass_positions lists {} ships, expected {} ({} UAVs x {})",
                rows.len(),
                cfg.uav_positions.len() * cfg.masses_per_uav,
                cfg.uav_positions.len(),
                cfg.masses_per_uav
            )));
        }
        Placement::Explicit(
            rows.chunks(cfg.masses_per_uav)
                .map(<[Position3D]>::to_vec)
                .collect(),
        )
    };

    cfg.sweep = match (sweep_variable, sweep_values, sweep_from, sweep_to, sweep_steps) {
        (None, None, None, None, None) => None,
        (Some(variable), Some(values), None, None, None) => {
            Some(SweepSpec { variable, values })
        }
        (Some(variable), None, Some(from), Some(to), Some(steps)) if steps >= 2 => {
            let values = (0..steps)
                .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
                .collect();
            Some(SweepSpec { variable, values })
        }
        _ => {
            return Err(ConfigError::Invariant(
                "a [sweep] section needs `variable` plus either `values` or `from`/`to`/`steps >= 2`"
                    .into(),
            ))
        }
    };

    cfg.params
        .validate()
        .map_err(|e| ConfigError::Invariant(e.to_string()))?;
    if let Some(sweep) = &cfg.sweep {
        if sweep.variable == SweepVariable::MassesPerUav {
            for v in &sweep.values {
                if v.fract() != 0.0 || *v < 1.0 {
                    return Err(ConfigError::Invariant(format!(
                        "masses_per_uav sweep value {v} is not a positive integer"
                    )));
                }
            }
        }
    }
    Ok(cfg)
}

fn sweep_dimension(var: Option<SweepVariable>) -> Dimension {
    match var {
        Some(SweepVariable::TaskSize) => Dimension::DataSize,
        Some(SweepVariable::TxTimeUav | SweepVariable::TxTimeLeo) => Dimension::Time,
        Some(SweepVariable::CpuLocal) => Dimension::CyclesPerSecond,
        _ => Dimension::Pure,
    }
}

/// Reads and parses a config file; a missing `path` of "-" reads stdin.
pub fn load_config(path: &std::path::Path) -> Result<ScenarioConfig, std::io::Error> {
    std::fs::read_to_string(path).map(|s| parse_config(&s)).and_then(|r| {
        r.map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))
    })
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

fn fmt_f64(x: f64) -> String {
    // Shortest round-trip decimal form.
    let s = format!("{x:e}");
    match s.strip_suffix("e0") {
        Some(mantissa) if !mantissa.contains('e') => mantissa.to_string(),
        _ => s,
    }
}

/// Serializes the complete effective configuration in canonical SI
/// units. Parsing the result reproduces the config exactly.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    let p = &cfg.params;
    let w = &mut out;
    let _ = writeln!(w, "[system]");
    for (key, v) in [
        ("path_loss_ref", p.path_loss_ref_db),
        ("ref_distance", p.ref_distance),
        ("path_loss_exp_uav", p.path_loss_exp_uav),
        ("shadow_sigma", p.shadow_sigma_db),
        ("direction_adjust", p.direction_adjust_db),
        ("direction_sign", p.direction_sign),
        ("rician_k", p.rician_k),
        ("antenna_gain_uav", p.antenna_gain_uav),
        ("antenna_gain_mass", p.antenna_gain_mass),
        ("sigma2", p.noise_power_uav),
        ("bandwidth_uav", p.bandwidth_uav),
        ("bandwidth_leo", p.bandwidth_leo),
        ("noise_psd_leo", p.noise_psd_leo),
        ("path_loss_exp_leo", p.path_loss_exp_leo),
        ("leo_link_budget", p.leo_link_budget),
        ("channel_gain_exp", p.channel_gain_exp),
        ("orbit_altitude", p.orbit_altitude),
        ("earth_radius", p.earth_radius),
        ("mu_grav", p.mu_grav),
        ("elevation_angle", p.elevation_angle),
        ("light_speed", p.light_speed),
        ("max_link_distance", p.max_link_distance),
        ("cycles_per_bit_local", p.cycles_per_bit_local),
        ("cycles_per_bit_uav", p.cycles_per_bit_uav),
        ("cycles_per_bit_leo", p.cycles_per_bit_leo),
        ("compute_power_local", p.compute_power_local),
        ("compute_power_uav", p.compute_power_uav),
        ("compute_power_leo", p.compute_power_leo),
        ("max_tx_power_uav", p.max_tx_power_uav),
        ("max_tx_power_leo", p.max_tx_power_leo),
        ("max_energy_uav", p.max_energy_uav),
        ("max_energy_leo", p.max_energy_leo),
        ("max_cpu_uav", p.max_cpu_uav),
        ("max_cpu_leo", p.max_cpu_leo),
        ("deadline", p.deadline),
        ("exponent_cap", p.exponent_cap),
    ] {
        let _ = writeln!(w, "{key} = {}", fmt_f64(v));
    }
    if let Some(t) = p.coverage_override {
        let _ = writeln!(w, "coverage_override = {}", fmt_f64(t));
    }

    let _ = writeln!(w, "\n[scenario]");
    let positions = cfg
        .uav_positions
        .iter()
        .map(|q| format!("{} {} {}", fmt_f64(q.x), fmt_f64(q.y), fmt_f64(q.z)))
        .collect::<Vec<_>>()
        .join("; ");
    let _ = writeln!(w, "uav_positions = {positions}");
    let _ = writeln!(w, "masses_per_uav = {}", cfg.masses_per_uav);
    match &cfg.placement {
        Placement::Disc { radius_frac, policy } => {
            let _ = writeln!(w, "placement = disc");
            let _ = writeln!(w, "disc_radius_frac = {}", fmt_f64(*radius_frac));
            let _ = writeln!(
                w,
                "placement_policy = {}",
                match policy {
                    PlacementPolicy::Reject => "reject",
                    PlacementPolicy::Regenerate => "regenerate",
                }
            );
        }
        Placement::Explicit(rows) => {
            let _ = writeln!(w, "placement = explicit");
            let flat = rows
                .iter()
                .flatten()
                .map(|q| format!("{} {} {}", fmt_f64(q.x), fmt_f64(q.y), fmt_f64(q.z)))
                .collect::<Vec<_>>()
                .join("; ");
            let _ = writeln!(w, "mass_positions = {flat}");
        }
    }
    let _ = writeln!(w, "seed = {}", cfg.seed);

    let _ = writeln!(w, "\n[task]");
    let _ = writeln!(w, "size = {}", fmt_f64(cfg.task.size_bits));
    let _ = writeln!(w, "cpu_local = {}", fmt_f64(cfg.task.cpu_local));
    let _ = writeln!(w, "deadline = {}", fmt_f64(cfg.task.deadline));
    let _ = writeln!(w, "tx_time_uav = {}", fmt_f64(cfg.task.tx_time_uav));
    let _ = writeln!(w, "tx_time_leo = {}", fmt_f64(cfg.task.tx_time_leo));

    let _ = writeln!(w, "\n[channel]");
    let _ = writeln!(
        w,
        "mode = {}",
        if cfg.stochastic_channel { "stochastic" } else { "deterministic" }
    );

    let _ = writeln!(w, "\n[solver]");
    let _ = writeln!(w, "max_sweeps = {}", cfg.solver.max_sweeps);
    let _ = writeln!(w, "mris_tolerance = {}", fmt_f64(cfg.solver.mris_tolerance));
    let _ = writeln!(
        w,
        "rel_improvement_tol = {}",
        fmt_f64(cfg.solver.rel_improvement_tol)
    );
    let _ = writeln!(w, "warm_start = {}", cfg.solver.warm_start);

    if let Some(sweep) = &cfg.sweep {
        let _ = writeln!(w, "\n[sweep]");
        let _ = writeln!(w, "variable = {}", sweep.variable.name());
        let values = sweep
            .values
            .iter()
            .map(|v| fmt_f64(*v))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(w, "values = {values}");
    }
    out
}

/// FNV-1a hash of the canonical serialization; names output files.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let text = serialize_config(cfg);
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in text.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

// ---------------------------------------------------------------------------
// Scenario construction and sweep application
// ---------------------------------------------------------------------------

impl ScenarioConfig {
    /// Resolves the config into a concrete scenario.
    pub fn build_scenario(&self) -> Result<Scenario, ConfigError> {
        let builder = ScenarioBuilder {
            params: self.params.clone(),
            uav_positions: self.uav_positions.clone(),
            masses_per_uav: self.masses_per_uav,
            mass_positions: match &self.placement {
                Placement::Explicit(rows) => Some(rows.clone()),
                Placement::Disc { .. } => None,
            },
            disc_radius_frac: match &self.placement {
                Placement::Disc { radius_frac, .. } => *radius_frac,
                _ => 0.9,
            },
            placement_policy: match &self.placement {
                Placement::Disc { policy, .. } => *policy,
                _ => PlacementPolicy::Reject,
            },
            placement_seed: self.seed,
            task: self.task,
            channel_mode: if self.stochastic_channel {
                ChannelMode::Stochastic { seed: self.seed }
            } else {
                ChannelMode::Deterministic
            },
        };
        Ok(builder.build()?)
    }

    /// A copy of this config with one sweep value applied. The returned
    /// solve config carries the frozen ratio for ratio sweeps.
    pub fn with_sweep_value(
        &self,
        variable: SweepVariable,
        value: f64,
    ) -> (ScenarioConfig, SolveConfig) {
        let mut cfg = self.clone();
        cfg.sweep = None;
        let mut solve = self.solver.to_solve_config();
        match variable {
            SweepVariable::TaskSize => cfg.task.size_bits = value,
            SweepVariable::TxTimeUav => cfg.task.tx_time_uav = value,
            SweepVariable::TxTimeLeo => cfg.task.tx_time_leo = value,
            SweepVariable::MassesPerUav => cfg.masses_per_uav = value as usize,
            SweepVariable::CpuLocal => cfg.task.cpu_local = value,
            SweepVariable::OffloadRatio => solve.fixed_ratio = Some(value),
        }
        (cfg, solve)
    }
}
