//! Pure cost-model layer: transmit power/energy inversion, compute
//! latency/energy, plan evaluation, and constraint residuals.
//!
//! Everything here is a pure function of its inputs; the solver and the
//! oracles both build on these primitives.

use crate::scenario::Scenario;
use thiserror::Error;

/// Relative feasibility tolerance on constraint residuals.
pub const FEASIBILITY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("nonpositive {0}: {1}")]
    NonPositive(&'static str, f64),
    #[error("rate-infeasible: exponent {0:.2} exceeds cap {1:.0}")]
    RateInfeasible(f64, f64),
    #[error("propagation-dominated: tx time {0} s <= round-trip propagation {1:.4} s")]
    PropagationDominated(f64, f64),
    #[error("unallocated work: {0} bits with zero CPU share")]
    UnallocatedWork(f64),
    #[error("plan shape {0}x{1} does not match scenario {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
}

// ---------------------------------------------------------------------------
// Link cost primitives
// ---------------------------------------------------------------------------

/// Ship transmit power and energy toward its UAV.
///
/// p = sigma^2/g * (2^(a s/(t W)) - 1), e = p t.
pub fn uav_tx_power_energy(
    noise_power: f64,
    gain: f64,
    ratio: f64,
    volume: f64,
    tx_time: f64,
    bandwidth: f64,
    exponent_cap: f64,
) -> Result<(f64, f64), ModelError> {
    if !(tx_time > 0.0) {
        return Err(ModelError::NonPositive("tx_time", tx_time));
    }
    if !(bandwidth > 0.0) {
        return Err(ModelError::NonPositive("bandwidth", bandwidth));
    }
    if !(gain > 0.0) {
        return Err(ModelError::NonPositive("gain", gain));
    }
    let exponent = ratio * volume / (tx_time * bandwidth);
    if exponent > exponent_cap {
        return Err(ModelError::RateInfeasible(exponent, exponent_cap));
    }
    let power = noise_power / gain * (2.0_f64.powf(exponent) - 1.0);
    Ok((power, power * tx_time))
}

/// Ship transmit power and energy toward the satellite.
///
/// Only t - 2 d/c of the slot carries bits; the energy product still
/// multiplies the full slot time t, matching the link energy model.
#[allow(clippy::too_many_arguments)]
pub fn leo_tx_power_energy(
    noise_psd: f64,
    gain_sq: f64,
    ratio: f64,
    volume: f64,
    tx_time: f64,
    slant_distance: f64,
    bandwidth: f64,
    light_speed: f64,
    exponent_cap: f64,
) -> Result<(f64, f64), ModelError> {
    if !(bandwidth > 0.0) {
        return Err(ModelError::NonPositive("bandwidth", bandwidth));
    }
    if !(gain_sq > 0.0) {
        return Err(ModelError::NonPositive("gain_sq", gain_sq));
    }
    let propagation = 2.0 * slant_distance / light_speed;
    let air_time = tx_time - propagation;
    if air_time <= 0.0 {
        return Err(ModelError::PropagationDominated(tx_time, propagation));
    }
    let exponent = (1.0 - ratio) * volume / (air_time * bandwidth);
    if exponent > exponent_cap {
        return Err(ModelError::RateInfeasible(exponent, exponent_cap));
    }
    let power = bandwidth * noise_psd / gain_sq * (2.0_f64.powf(exponent) - 1.0);
    Ok((power, power * tx_time))
}

/// Compute latency and energy for a share of bits at a CPU.
///
/// latency = bits * cycles_per_bit / rho, energy = power * latency;
/// zero bits cost nothing regardless of rho.
pub fn compute_cost(
    bits: f64,
    cycles_per_bit: f64,
    rho: f64,
    power_draw: f64,
) -> Result<(f64, f64), ModelError> {
    if bits < 0.0 {
        return Err(ModelError::NonPositive("bits", bits));
    }
    if !(cycles_per_bit > 0.0) {
        return Err(ModelError::NonPositive("cycles_per_bit", cycles_per_bit));
    }
    if bits == 0.0 {
        return Ok((0.0, 0.0));
    }
    if !(rho > 0.0) {
        return Err(ModelError::UnallocatedWork(bits));
    }
    let latency = bits * cycles_per_bit / rho;
    Ok((latency, power_draw * latency))
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

/// The four decision matrices over (m, n).
#[derive(Debug, Clone, PartialEq)]
pub struct OffloadPlan {
    /// Offloading ratio toward the UAV, in [0, 1].
    pub ratio: Vec<Vec<f64>>,
    /// Offloaded bits, in [0, S].
    pub volume: Vec<Vec<f64>>,
    /// UAV CPU share (cycles/s).
    pub cpu_uav: Vec<Vec<f64>>,
    /// Satellite CPU share (cycles/s).
    pub cpu_leo: Vec<Vec<f64>>,
}

impl OffloadPlan {
    /// All-zero plan of the scenario's shape (pure local computing).
    pub fn zeros(scenario: &Scenario) -> Self {
        let shape: Vec<usize> = scenario.masses.iter().map(Vec::len).collect();
        let make = || shape.iter().map(|&n| vec![0.0; n]).collect::<Vec<_>>();
        Self {
            ratio: make(),
            volume: make(),
            cpu_uav: make(),
            cpu_leo: make(),
        }
    }

    pub fn shape_matches(&self, scenario: &Scenario) -> bool {
        self.ratio.len() == scenario.masses.len()
            && self
                .ratio
                .iter()
                .zip(&scenario.masses)
                .all(|(row, masses)| row.len() == masses.len())
            && [&self.volume, &self.cpu_uav, &self.cpu_leo]
                .iter()
                .all(|mat| {
                    mat.len() == self.ratio.len()
                        && mat.iter().zip(&self.ratio).all(|(a, b)| a.len() == b.len())
                })
    }

    /// Zero-work canonical form: entries with no offloaded bits hold no
    /// resources and carry ratio 0.
    pub fn canonicalize(&mut self) {
        for m in 0..self.ratio.len() {
            for n in 0..self.ratio[m].len() {
                if self.volume[m][n] <= 0.0 {
                    self.volume[m][n] = 0.0;
                    self.ratio[m][n] = 0.0;
                }
                if self.ratio[m][n] * self.volume[m][n] == 0.0 {
                    self.cpu_uav[m][n] = 0.0;
                }
                if (1.0 - self.ratio[m][n]) * self.volume[m][n] == 0.0 {
                    self.cpu_leo[m][n] = 0.0;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Metrics and constraint residuals
// ---------------------------------------------------------------------------

/// Per-ship energy/latency breakdown.
#[derive(Debug, Clone, Copy, Default)]
pub struct MassMetrics {
    pub e_local: f64,
    pub e_tx_uav: f64,
    pub e_tx_leo: f64,
    pub e_cpu_uav: f64,
    pub e_cpu_leo: f64,
    pub t_local: f64,
    pub t_uav_path: f64,
    pub t_leo_path: f64,
    pub t_total: f64,
    pub tx_power_uav: f64,
    pub tx_power_leo: f64,
}

impl MassMetrics {
    pub fn e_total(&self) -> f64 {
        self.e_local + self.e_tx_uav + self.e_tx_leo + self.e_cpu_uav + self.e_cpu_leo
    }
}

/// Signed slack for each constraint family; negative means satisfied
/// with margin. Each value is the worst instance of its family.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstraintResiduals {
    /// (25a) ratio box
    pub ratio_box: f64,
    /// (25b) volume box (normalized by S)
    pub volume_box: f64,
    /// (25c) per-task latency bound (s)
    pub latency: f64,
    /// (25d) satellite coverage window (s)
    pub coverage: f64,
    /// (25e) ship-to-UAV distance (m)
    pub distance: f64,
    /// (25f) per-UAV CPU cap (cycles/s)
    pub cpu_cap_uav: f64,
    /// (25g) satellite CPU cap (cycles/s)
    pub cpu_cap_leo: f64,
    /// (25h) nonnegative CPU shares (cycles/s)
    pub cpu_nonneg: f64,
    /// (25i) ship tx power toward UAV (W)
    pub tx_power_uav: f64,
    /// (25j) ship tx power toward satellite (W)
    pub tx_power_leo: f64,
    /// (25k) per-UAV energy budget (J)
    pub energy_uav: f64,
    /// (25l) satellite energy budget (J)
    pub energy_leo: f64,
}

impl ConstraintResiduals {
    /// Residuals paired with the scale used for the relative tolerance.
    pub fn scaled(&self, s: &Scenario) -> [(&'static str, f64, f64); 12] {
        let p = &s.params;
        [
            ("ratio_box", self.ratio_box, 1.0),
            ("volume_box", self.volume_box, 1.0),
            ("latency", self.latency, p.deadline),
            ("coverage", self.coverage, s.leo.coverage_window),
            ("distance", self.distance, p.max_link_distance),
            ("cpu_cap_uav", self.cpu_cap_uav, p.max_cpu_uav),
            ("cpu_cap_leo", self.cpu_cap_leo, p.max_cpu_leo),
            ("cpu_nonneg", self.cpu_nonneg, p.max_cpu_uav),
            ("tx_power_uav", self.tx_power_uav, p.max_tx_power_uav),
            ("tx_power_leo", self.tx_power_leo, p.max_tx_power_leo),
            ("energy_uav", self.energy_uav, p.max_energy_uav),
            ("energy_leo", self.energy_leo, p.max_energy_leo),
        ]
    }

    pub fn feasible(&self, s: &Scenario) -> bool {
        self.scaled(s)
            .iter()
            .all(|(_, r, scale)| *r <= FEASIBILITY_REL_TOL * scale.abs().max(1.0))
    }
}

/// Full evaluation of one plan.
#[derive(Debug, Clone)]
pub struct Metrics {
    /// Breakdown indexed `[m][n]`.
    pub per_mass: Vec<Vec<MassMetrics>>,
    /// System energy (J), sum over all ships.
    pub e_total: f64,
    pub residuals: ConstraintResiduals,
    pub feasible: bool,
}

fn fold_max(acc: &mut f64, v: f64) {
    if v > *acc {
        *acc = v;
    }
}

/// Evaluates latency, energy, and every constraint residual of a plan.
///
/// Infeasibility is reported through residuals, never thrown: entries
/// with offloaded bits but zero CPU share, or with a rate above the
/// exponent cap, evaluate to infinite latency/energy and show up as
/// violated residuals.
pub fn evaluate_plan(scenario: &Scenario, plan: &OffloadPlan) -> Result<Metrics, ModelError> {
    if !plan.shape_matches(scenario) {
        return Err(ModelError::ShapeMismatch(
            plan.ratio.len(),
            plan.ratio.first().map_or(0, Vec::len),
            scenario.masses.len(),
            scenario.masses_per_uav(),
        ));
    }
    let p = &scenario.params;
    let mut per_mass: Vec<Vec<MassMetrics>> = Vec::with_capacity(scenario.masses.len());
    let mut res = ConstraintResiduals {
        ratio_box: f64::NEG_INFINITY,
        volume_box: f64::NEG_INFINITY,
        latency: f64::NEG_INFINITY,
        coverage: f64::NEG_INFINITY,
        distance: f64::NEG_INFINITY,
        cpu_cap_uav: f64::NEG_INFINITY,
        cpu_cap_leo: f64::NEG_INFINITY,
        cpu_nonneg: f64::NEG_INFINITY,
        tx_power_uav: f64::NEG_INFINITY,
        tx_power_leo: f64::NEG_INFINITY,
        energy_uav: f64::NEG_INFINITY,
        energy_leo: f64::NEG_INFINITY,
    };
    let mut e_total = 0.0;
    let mut cpu_leo_sum = 0.0;
    let mut energy_leo_sum = 0.0;

    for (m, uav) in scenario.uav_positions.iter().enumerate() {
        let mut row = Vec::with_capacity(scenario.masses[m].len());
        let mut cpu_uav_sum = 0.0;
        let mut energy_uav_sum = 0.0;
        for (n, node) in scenario.masses[m].iter().enumerate() {
            let a = plan.ratio[m][n];
            let s = plan.volume[m][n];
            let rho_u = plan.cpu_uav[m][n];
            let rho_l = plan.cpu_leo[m][n];
            let task = &node.task;

            // Costs are evaluated at the box-clamped point; the raw
            // values still feed the (25a)/(25b) residuals below.
            let a_c = a.clamp(0.0, 1.0);
            let s_c = s.clamp(0.0, task.size_bits);

            let mut mm = MassMetrics::default();

            // Local share.
            let local_bits = task.size_bits - s_c;
            let (t_l, e_l) =
                compute_cost(local_bits, p.cycles_per_bit_local, task.cpu_local, p.compute_power_local)?;
            mm.t_local = t_l;
            mm.e_local = e_l;

            // UAV path: fixed transmission slot plus compute.
            let uav_bits = a_c * s_c;
            match uav_tx_power_energy(
                p.noise_power_uav,
                node.channel.gain_uav,
                a_c,
                s_c,
                task.tx_time_uav,
                p.bandwidth_uav,
                p.exponent_cap,
            ) {
                Ok((pw, en)) => {
                    mm.tx_power_uav = pw;
                    mm.e_tx_uav = en;
                }
                Err(ModelError::RateInfeasible(_, _)) => {
                    mm.tx_power_uav = f64::INFINITY;
                    mm.e_tx_uav = f64::INFINITY;
                }
                Err(e) => return Err(e),
            }
            let (t_cpu_u, e_cpu_u) = if uav_bits > 0.0 && rho_u <= 0.0 {
                (f64::INFINITY, f64::INFINITY)
            } else if uav_bits > 0.0 {
                compute_cost(uav_bits, p.cycles_per_bit_uav, rho_u, p.compute_power_uav)?
            } else {
                (0.0, 0.0)
            };
            mm.e_cpu_uav = e_cpu_u;
            mm.t_uav_path = task.tx_time_uav + t_cpu_u;

            // Satellite path.
            let leo_bits = (1.0 - a_c) * s_c;
            match leo_tx_power_energy(
                p.noise_psd_leo,
                node.channel.gain_leo_sq,
                a_c,
                s_c,
                task.tx_time_leo,
                scenario.leo.slant_distance,
                p.bandwidth_leo,
                p.light_speed,
                p.exponent_cap,
            ) {
                Ok((pw, en)) => {
                    mm.tx_power_leo = pw;
                    mm.e_tx_leo = en;
                }
                Err(ModelError::RateInfeasible(_, _)) => {
                    mm.tx_power_leo = f64::INFINITY;
                    mm.e_tx_leo = f64::INFINITY;
                }
                Err(e) => return Err(e),
            }
            let (t_cpu_leo, e_cpu_leo) = if leo_bits > 0.0 && rho_l <= 0.0 {
                (f64::INFINITY, f64::INFINITY)
            } else if leo_bits > 0.0 {
                compute_cost(leo_bits, p.cycles_per_bit_leo, rho_l, p.compute_power_leo)?
            } else {
                (0.0, 0.0)
            };
            mm.e_cpu_leo = e_cpu_leo;
            mm.t_leo_path = task.tx_time_leo + t_cpu_leo;

            mm.t_total = mm.t_local.max(mm.t_uav_path).max(mm.t_leo_path);

            // Residuals (25a)-(25e), (25h)-(25j).
            fold_max(&mut res.ratio_box, (-a).max(a - 1.0));
            fold_max(&mut res.volume_box, ((-s).max(s - task.size_bits)) / task.size_bits);
            fold_max(&mut res.latency, mm.t_total - task.deadline);
            fold_max(&mut res.coverage, mm.t_leo_path - scenario.leo.coverage_window);
            fold_max(
                &mut res.distance,
                crate::geometry::distance3d(*uav, node.position) - p.max_link_distance,
            );
            fold_max(&mut res.cpu_nonneg, (-rho_u).max(-rho_l).max(-task.cpu_local));
            fold_max(&mut res.tx_power_uav, mm.tx_power_uav - p.max_tx_power_uav);
            fold_max(&mut res.tx_power_leo, mm.tx_power_leo - p.max_tx_power_leo);

            cpu_uav_sum += rho_u;
            energy_uav_sum += mm.e_cpu_uav;
            cpu_leo_sum += rho_l;
            energy_leo_sum += mm.e_cpu_leo;
            e_total += mm.e_total();
            row.push(mm);
        }
        // Per-UAV aggregates (25f), (25k).
        fold_max(&mut res.cpu_cap_uav, cpu_uav_sum - p.max_cpu_uav);
        fold_max(&mut res.energy_uav, energy_uav_sum - p.max_energy_uav);
        per_mass.push(row);
    }
    // Satellite aggregates (25g), (25l).
    fold_max(&mut res.cpu_cap_leo, cpu_leo_sum - p.max_cpu_leo);
    fold_max(&mut res.energy_leo, energy_leo_sum - p.max_energy_leo);

    let feasible = res.feasible(scenario);
    Ok(Metrics {
        per_mass,
        e_total,
        residuals: res,
        feasible,
    })
}
