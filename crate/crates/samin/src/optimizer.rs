//! Layered energy-minimization solver: per-ship variable bounds,
//! objective derivatives, bisection on the monotone derivative (MRIS),
//! deadline-tight closed-form CPU allocations, and the outer
//! alternating-optimization loop (STP).
//!
//! Within one sweep the order is: ratio step, volume step, UAV CPU
//! step, satellite CPU step, then proportional cap repair. The outer
//! loop records the objective once per sweep and keeps the trace
//! non-increasing by rejecting a sweep that fails to improve (which
//! also triggers the early exit).

use crate::model::{evaluate_plan, Metrics, ModelError, OffloadPlan};
use crate::scenario::{Scenario, ScenarioError};
use thiserror::Error;

/// Relative slack when deciding that an interval is merely collapsed by
/// rounding rather than genuinely empty.
const BOUND_COLLAPSE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid search interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("derivative evaluated to NaN at {0}")]
    NanDerivative(f64),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Per-ship infeasibility signal.
#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("ratio interval empty: [{0:.6}, {1:.6}] (insufficient edge CPU for the deadline)")]
    EmptyRatioInterval(f64, f64),
    #[error("volume interval empty: [{0:.1}, {1:.1}] bits")]
    EmptyVolumeInterval(f64, f64),
    #[error("deadline {0} s not later than fixed transmission time {1} s")]
    DeadlineBeforeTransmission(f64, f64),
}

// ---------------------------------------------------------------------------
// Per-ship solve context
// ---------------------------------------------------------------------------

/// Everything the gradients and bounds of one ship depend on. Public
/// fields so test vectors can be built directly.
#[derive(Debug, Clone, Copy)]
pub struct MassContext {
    pub gain_uav: f64,
    pub gain_leo_sq: f64,
    pub tx_time_uav: f64,
    pub tx_time_leo: f64,
    /// tx_time_leo minus the round-trip propagation delay.
    pub air_time_leo: f64,
    pub bandwidth_uav: f64,
    pub bandwidth_leo: f64,
    pub noise_power_uav: f64,
    pub noise_psd_leo: f64,
    pub power_local: f64,
    pub power_uav: f64,
    pub power_leo: f64,
    pub cycles_local: f64,
    pub cycles_uav: f64,
    pub cycles_leo: f64,
    pub cpu_local: f64,
    pub size_bits: f64,
    pub deadline: f64,
}

impl MassContext {
    pub fn from_scenario(scenario: &Scenario, m: usize, n: usize) -> Self {
        let p = &scenario.params;
        let node = &scenario.masses[m][n];
        let t = &node.task;
        Self {
            gain_uav: node.channel.gain_uav,
            gain_leo_sq: node.channel.gain_leo_sq,
            tx_time_uav: t.tx_time_uav,
            tx_time_leo: t.tx_time_leo,
            air_time_leo: t.tx_time_leo
                - 2.0 * scenario.leo.slant_distance / p.light_speed,
            bandwidth_uav: p.bandwidth_uav,
            bandwidth_leo: p.bandwidth_leo,
            noise_power_uav: p.noise_power_uav,
            noise_psd_leo: p.noise_psd_leo,
            power_local: p.compute_power_local,
            power_uav: p.compute_power_uav,
            power_leo: p.compute_power_leo,
            cycles_local: p.cycles_per_bit_local,
            cycles_uav: p.cycles_per_bit_uav,
            cycles_leo: p.cycles_per_bit_leo,
            cpu_local: t.cpu_local,
            size_bits: t.size_bits,
            deadline: t.deadline,
        }
    }

    /// Marginal transmit energy toward the UAV per unit of `a*s`.
    fn uav_tx_marginal(&self, uav_bits: f64) -> f64 {
        self.noise_power_uav * std::f64::consts::LN_2
            / (self.gain_uav * self.bandwidth_uav)
            * 2.0_f64.powf(uav_bits / (self.tx_time_uav * self.bandwidth_uav))
    }

    /// Marginal transmit energy toward the satellite per unit of `(1-a)*s`.
    fn leo_tx_marginal(&self, leo_bits: f64) -> f64 {
        self.tx_time_leo * self.noise_psd_leo * std::f64::consts::LN_2
            / (self.gain_leo_sq * self.air_time_leo)
            * 2.0_f64.powf(leo_bits / (self.air_time_leo * self.bandwidth_leo))
    }

    /// dE/da at fixed volume and CPU shares: rising UAV transmit and
    /// compute terms against falling satellite ones.
    pub fn grad_ratio(&self, a: f64, s: f64, rho_uav: f64, rho_leo: f64) -> f64 {
        let tx_uav = s * self.uav_tx_marginal(a * s);
        let tx_leo = s * self.leo_tx_marginal((1.0 - a) * s);
        let cpu_uav = self.power_uav * s * self.cycles_uav / rho_uav;
        let cpu_leo = self.power_leo * s * self.cycles_leo / rho_leo;
        tx_uav - tx_leo + cpu_uav - cpu_leo
    }

    /// dE/ds at fixed ratio and CPU shares, including the negative
    /// local-compute term.
    pub fn grad_volume(&self, a: f64, s: f64, rho_uav: f64, rho_leo: f64) -> f64 {
        let local = -self.power_local * self.cycles_local / self.cpu_local;
        let tx_uav = a * self.uav_tx_marginal(a * s);
        let tx_leo = (1.0 - a) * self.leo_tx_marginal((1.0 - a) * s);
        // Zero-work convention keeps 0 * x/0 from turning into NaN.
        let cpu_uav = if a == 0.0 {
            0.0
        } else {
            self.power_uav * a * self.cycles_uav / rho_uav
        };
        let cpu_leo = if a == 1.0 {
            0.0
        } else {
            self.power_leo * (1.0 - a) * self.cycles_leo / rho_leo
        };
        local + tx_uav + tx_leo + cpu_uav + cpu_leo
    }

    /// Feasible ratio interval under the latency bound at fixed s > 0:
    /// a_high = min(1, rho_U (T - t_U)/(s c_U)),
    /// a_low = max(0, 1 - rho_L (T - t_L)/(s c_L)).
    pub fn ratio_bounds(
        &self,
        s: f64,
        rho_uav: f64,
        rho_leo: f64,
    ) -> Result<(f64, f64), BoundsError> {
        let hi = (rho_uav * (self.deadline - self.tx_time_uav) / (s * self.cycles_uav)).min(1.0);
        let lo = (1.0 - rho_leo * (self.deadline - self.tx_time_leo) / (s * self.cycles_leo))
            .max(0.0);
        collapse_interval(lo, hi, 1.0).ok_or(BoundsError::EmptyRatioInterval(lo, hi))
    }

    /// Feasible volume interval at fixed ratio: the edge terms drop out
    /// at a = 0 / a = 1, and the floor is what local compute cannot
    /// finish by the deadline.
    pub fn volume_bounds(
        &self,
        a: f64,
        rho_uav: f64,
        rho_leo: f64,
    ) -> Result<(f64, f64), BoundsError> {
        let mut hi = self.size_bits;
        if a > 0.0 {
            hi = hi.min(rho_uav * (self.deadline - self.tx_time_uav) / (a * self.cycles_uav));
        }
        if a < 1.0 {
            hi = hi.min(
                rho_leo * (self.deadline - self.tx_time_leo) / ((1.0 - a) * self.cycles_leo),
            );
        }
        let lo = (self.size_bits - self.deadline * self.cpu_local / self.cycles_local).max(0.0);
        collapse_interval(lo, hi, self.size_bits)
            .ok_or(BoundsError::EmptyVolumeInterval(lo, hi))
    }
}

/// Collapses an interval inverted only by floating-point noise to its
/// midpoint; returns None when it is genuinely empty.
fn collapse_interval(lo: f64, hi: f64, scale: f64) -> Option<(f64, f64)> {
    if lo <= hi {
        Some((lo, hi))
    } else if lo - hi <= BOUND_COLLAPSE_TOL * scale.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        Some((mid, mid))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Deadline-tight closed forms
// ---------------------------------------------------------------------------

/// Minimum UAV CPU share meeting the deadline: rho = a s c_U / (T - t_U).
/// Zero work needs no share.
pub fn optimal_rho_uav(
    ratio: f64,
    volume: f64,
    cycles_uav: f64,
    deadline: f64,
    tx_time_uav: f64,
) -> Result<f64, BoundsError> {
    let bits = ratio * volume;
    if bits <= 0.0 {
        return Ok(0.0);
    }
    if deadline <= tx_time_uav {
        return Err(BoundsError::DeadlineBeforeTransmission(deadline, tx_time_uav));
    }
    Ok(bits * cycles_uav / (deadline - tx_time_uav))
}

/// Minimum satellite CPU share meeting the deadline:
/// rho = (1-a) s c_L / (T - t_L).
pub fn optimal_rho_leo(
    ratio: f64,
    volume: f64,
    cycles_leo: f64,
    deadline: f64,
    tx_time_leo: f64,
) -> Result<f64, BoundsError> {
    let bits = (1.0 - ratio) * volume;
    if bits <= 0.0 {
        return Ok(0.0);
    }
    if deadline <= tx_time_leo {
        return Err(BoundsError::DeadlineBeforeTransmission(deadline, tx_time_leo));
    }
    Ok(bits * cycles_leo / (deadline - tx_time_leo))
}

// ---------------------------------------------------------------------------
// MRIS: bisection on a non-decreasing derivative
// ---------------------------------------------------------------------------

/// A convex scalar minimization described by its derivative.
pub struct ScalarProblem<F: Fn(f64) -> f64> {
    pub lower: f64,
    pub upper: f64,
    /// Interval-width stopping threshold.
    pub tolerance: f64,
    pub derivative: F,
}

/// Bisection outcome plus the number of derivative evaluations spent
/// inside the shrinking loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MrisResult {
    pub x: f64,
    pub iterations: usize,
}

/// Multi-round iterative search: returns the boundary whose gradient
/// sign pins the minimum there, otherwise bisects the sign change until
/// the interval is narrower than the tolerance.
pub fn mris<F: Fn(f64) -> f64>(problem: &ScalarProblem<F>) -> Result<MrisResult, SolveError> {
    let (mut lo, mut hi) = (problem.lower, problem.upper);
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return Err(SolveError::InvalidInterval(lo, hi));
    }
    let d_lo = (problem.derivative)(lo);
    if d_lo.is_nan() {
        return Err(SolveError::NanDerivative(lo));
    }
    if d_lo > 0.0 {
        return Ok(MrisResult { x: lo, iterations: 0 });
    }
    let d_hi = (problem.derivative)(hi);
    if d_hi.is_nan() {
        return Err(SolveError::NanDerivative(hi));
    }
    if d_hi < 0.0 {
        return Ok(MrisResult { x: hi, iterations: 0 });
    }
    let mut iterations = 0;
    while hi - lo > problem.tolerance {
        let mid = 0.5 * (lo + hi);
        let d_mid = (problem.derivative)(mid);
        iterations += 1;
        if d_mid.is_nan() {
            return Err(SolveError::NanDerivative(mid));
        }
        if d_mid < 0.0 {
            lo = mid;
        } else if d_mid > 0.0 {
            hi = mid;
        } else {
            return Ok(MrisResult { x: mid, iterations });
        }
    }
    Ok(MrisResult {
        x: 0.5 * (lo + hi),
        iterations,
    })
}

// ---------------------------------------------------------------------------
// Outer loop (STP)
// ---------------------------------------------------------------------------

/// Outer-loop configuration.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Maximum number of sweeps (T).
    pub max_sweeps: usize,
    /// MRIS interval tolerance on the ratio axis; the volume axis uses
    /// `mris_tolerance * size_bits`.
    pub mris_tolerance: f64,
    /// Early exit when relative objective improvement falls below this.
    pub rel_improvement_tol: f64,
    /// Freeze the offloading ratio at this value (skips the ratio step).
    pub fixed_ratio: Option<f64>,
    /// When false the CPU shares stay at their initial even split.
    pub resource_steps: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 20,
            mris_tolerance: 1e-6,
            rel_improvement_tol: 1e-5,
            fixed_ratio: None,
            resource_steps: true,
        }
    }
}

/// A ship whose sub-problem had no feasible point in some sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibleEntry {
    pub uav: usize,
    pub mass: usize,
    pub reason: String,
}

/// Solver output: the plan, its evaluation, and convergence diagnostics.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub plan: OffloadPlan,
    pub metrics: Metrics,
    /// System energy recorded once per accepted sweep.
    pub objective_trace: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
    pub infeasible_entries: Vec<InfeasibleEntry>,
}

impl SolveReport {
    pub fn e_total(&self) -> f64 {
        self.metrics.e_total
    }
}

/// Even-split CPU shares: per ship, rho_U = cap_U / N and
/// rho_L = cap_L / (M N).
pub fn even_split_shares(scenario: &Scenario) -> (f64, f64) {
    let n = scenario.masses_per_uav().max(1) as f64;
    let total = scenario.total_masses().max(1) as f64;
    (
        scenario.params.max_cpu_uav / n,
        scenario.params.max_cpu_leo / total,
    )
}

/// Starting plan: even CPU splits, volume at the largest amount the
/// even shares can host (never below the local-compute floor), ratio at
/// one half pending the first ratio step.
fn initial_plan(scenario: &Scenario) -> OffloadPlan {
    let (rho_u, rho_l) = even_split_shares(scenario);
    let mut plan = OffloadPlan::zeros(scenario);
    for (m, n, node) in scenario.iter_masses() {
        let t = &node.task;
        let vol_uav = (rho_u * (t.deadline - t.tx_time_uav) / scenario.params.cycles_per_bit_uav)
            .max(0.0);
        let vol_leo = (rho_l * (t.deadline - t.tx_time_leo) / scenario.params.cycles_per_bit_leo)
            .max(0.0);
        let s_floor =
            (t.size_bits - t.deadline * t.cpu_local / scenario.params.cycles_per_bit_local).max(0.0);
        let s0 = t.size_bits.min(vol_uav + vol_leo).max(s_floor).min(t.size_bits);
        plan.ratio[m][n] = 0.5;
        plan.volume[m][n] = s0;
        plan.cpu_uav[m][n] = rho_u;
        plan.cpu_leo[m][n] = rho_l;
    }
    plan
}

/// Scales CPU allocations down onto their caps when the closed forms
/// jointly exceed them; affected ships are flagged because their
/// deadlines may no longer be met.
fn cap_repair(
    scenario: &Scenario,
    plan: &mut OffloadPlan,
    infeasible: &mut Vec<InfeasibleEntry>,
) -> bool {
    let p = &scenario.params;
    let mut repaired = false;
    for m in 0..plan.cpu_uav.len() {
        let sum: f64 = plan.cpu_uav[m].iter().sum();
        if sum > p.max_cpu_uav * (1.0 + 1e-12) {
            let theta = p.max_cpu_uav / sum;
            for n in 0..plan.cpu_uav[m].len() {
                if plan.cpu_uav[m][n] > 0.0 {
                    plan.cpu_uav[m][n] *= theta;
                    infeasible.push(InfeasibleEntry {
                        uav: m,
                        mass: n,
                        reason: format!("UAV CPU cap repair scaled share by {theta:.4}"),
                    });
                }
            }
            repaired = true;
        }
    }
    let leo_sum: f64 = plan.cpu_leo.iter().flatten().sum();
    if leo_sum > p.max_cpu_leo * (1.0 + 1e-12) {
        let theta = p.max_cpu_leo / leo_sum;
        for m in 0..plan.cpu_leo.len() {
            for n in 0..plan.cpu_leo[m].len() {
                if plan.cpu_leo[m][n] > 0.0 {
                    plan.cpu_leo[m][n] *= theta;
                    infeasible.push(InfeasibleEntry {
                        uav: m,
                        mass: n,
                        reason: format!("satellite CPU cap repair scaled share by {theta:.4}"),
                    });
                }
            }
        }
        repaired = true;
    }
    repaired
}

/// One alternating-optimization sweep over every ship. Returns whether
/// cap repair had to rescale anything.
fn run_sweep(
    scenario: &Scenario,
    cfg: &SolveConfig,
    plan: &mut OffloadPlan,
    infeasible: &mut Vec<InfeasibleEntry>,
) -> Result<bool, SolveError> {
    for m in 0..scenario.masses.len() {
        for n in 0..scenario.masses[m].len() {
            let ctx = MassContext::from_scenario(scenario, m, n);
            let rho_u = plan.cpu_uav[m][n];
            let rho_l = plan.cpu_leo[m][n];
            let s_cur = plan.volume[m][n];

            // Ratio step. A frozen ratio skips the bisection; the
            // volume bounds and the final residuals police feasibility.
            if let Some(fixed) = cfg.fixed_ratio {
                plan.ratio[m][n] = fixed;
            } else if s_cur > 0.0 {
                match ctx.ratio_bounds(s_cur, rho_u, rho_l) {
                    Ok((lo, hi)) => {
                        let problem = ScalarProblem {
                            lower: lo,
                            upper: hi,
                            tolerance: cfg.mris_tolerance,
                            derivative: |a| ctx.grad_ratio(a, s_cur, rho_u, rho_l),
                        };
                        plan.ratio[m][n] = mris(&problem)?.x;
                    }
                    Err(e) => {
                        infeasible.push(InfeasibleEntry {
                            uav: m,
                            mass: n,
                            reason: e.to_string(),
                        });
                        continue;
                    }
                }
            }

            // Volume step.
            let a = plan.ratio[m][n];
            match ctx.volume_bounds(a, rho_u, rho_l) {
                Ok((lo, hi)) => {
                    let problem = ScalarProblem {
                        lower: lo,
                        upper: hi,
                        tolerance: cfg.mris_tolerance * ctx.size_bits,
                        derivative: |s| ctx.grad_volume(a, s, rho_u, rho_l),
                    };
                    plan.volume[m][n] = mris(&problem)?.x;
                }
                Err(e) => {
                    infeasible.push(InfeasibleEntry {
                        uav: m,
                        mass: n,
                        reason: e.to_string(),
                    });
                    continue;
                }
            }
        }
    }

    // Deadline-tight CPU allocations.
    let mut repaired = false;
    if cfg.resource_steps {
        for m in 0..scenario.masses.len() {
            for n in 0..scenario.masses[m].len() {
                let t = &scenario.masses[m][n].task;
                let a = plan.ratio[m][n];
                let s = plan.volume[m][n];
                match optimal_rho_uav(a, s, scenario.params.cycles_per_bit_uav, t.deadline, t.tx_time_uav)
                {
                    Ok(rho) => plan.cpu_uav[m][n] = rho,
                    Err(e) => infeasible.push(InfeasibleEntry {
                        uav: m,
                        mass: n,
                        reason: e.to_string(),
                    }),
                }
                match optimal_rho_leo(a, s, scenario.params.cycles_per_bit_leo, t.deadline, t.tx_time_leo)
                {
                    Ok(rho) => plan.cpu_leo[m][n] = rho,
                    Err(e) => infeasible.push(InfeasibleEntry {
                        uav: m,
                        mass: n,
                        reason: e.to_string(),
                    }),
                }
            }
        }
        repaired = cap_repair(scenario, plan, infeasible);
    }
    plan.canonicalize();
    Ok(repaired)
}

/// Flags transmit-power and edge-energy budget violations of the final
/// plan; the closed forms do not enforce these, so they are checked
/// after the fact.
fn post_check_caps(
    scenario: &Scenario,
    metrics: &Metrics,
    infeasible: &mut Vec<InfeasibleEntry>,
) {
    let p = &scenario.params;
    for (m, row) in metrics.per_mass.iter().enumerate() {
        let mut uav_energy = 0.0;
        for (n, mm) in row.iter().enumerate() {
            if mm.tx_power_uav > p.max_tx_power_uav {
                infeasible.push(InfeasibleEntry {
                    uav: m,
                    mass: n,
                    reason: format!(
                        "tx power toward UAV {:.3e} W exceeds cap {:.3e} W",
                        mm.tx_power_uav, p.max_tx_power_uav
                    ),
                });
            }
            if mm.tx_power_leo > p.max_tx_power_leo {
                infeasible.push(InfeasibleEntry {
                    uav: m,
                    mass: n,
                    reason: format!(
                        "tx power toward satellite {:.3e} W exceeds cap {:.3e} W",
                        mm.tx_power_leo, p.max_tx_power_leo
                    ),
                });
            }
            uav_energy += mm.e_cpu_uav;
        }
        if uav_energy > p.max_energy_uav {
            infeasible.push(InfeasibleEntry {
                uav: m,
                mass: usize::MAX,
                reason: format!(
                    "UAV energy {uav_energy:.2} J exceeds budget {:.2} J",
                    p.max_energy_uav
                ),
            });
        }
    }
    let leo_energy: f64 = metrics
        .per_mass
        .iter()
        .flatten()
        .map(|mm| mm.e_cpu_leo)
        .sum();
    if leo_energy > p.max_energy_leo {
        infeasible.push(InfeasibleEntry {
            uav: usize::MAX,
            mass: usize::MAX,
            reason: format!(
                "satellite energy {leo_energy:.2} J exceeds budget {:.2} J",
                p.max_energy_leo
            ),
        });
    }
}

/// Alternating-optimization solve, optionally warm-started from a given
/// plan. With a warm start the initial objective opens the trace and a
/// sweep is kept only if it does not regress, so the result never falls
/// behind the starting plan.
pub fn stp_solve_with(
    scenario: &Scenario,
    cfg: &SolveConfig,
    warm_start: Option<OffloadPlan>,
) -> Result<SolveReport, SolveError> {
    scenario.validate()?;
    let warm = warm_start.is_some();
    let mut plan = match warm_start {
        Some(p) => p,
        None => initial_plan(scenario),
    };
    let mut infeasible: Vec<InfeasibleEntry> = Vec::new();
    let mut trace: Vec<f64> = Vec::new();
    let mut e_cur = f64::INFINITY;
    if warm {
        e_cur = evaluate_plan(scenario, &plan)?.e_total;
        trace.push(e_cur);
    }

    let mut converged = false;
    let mut iterations = 0;
    for sweep_index in 0..cfg.max_sweeps {
        let mut candidate = plan.clone();
        let mut candidate_flags = Vec::new();
        let repaired = run_sweep(scenario, cfg, &mut candidate, &mut candidate_flags)?;
        let e_cand = evaluate_plan(scenario, &candidate)?.e_total;
        iterations += 1;

        let first_cold = sweep_index == 0 && !warm;
        if first_cold || e_cand <= e_cur {
            let improvement = if e_cur.is_finite() {
                (e_cur - e_cand) / e_cur.abs().max(f64::MIN_POSITIVE)
            } else {
                f64::INFINITY
            };
            plan = candidate;
            infeasible = candidate_flags;
            trace.push(e_cand);
            e_cur = e_cand;
            if !first_cold && !repaired && improvement < cfg.rel_improvement_tol {
                converged = true;
                break;
            }
        } else {
            // Regressing sweep: relative improvement is negative, which
            // is below any tolerance; keep the previous plan.
            converged = true;
            break;
        }
    }

    let metrics = evaluate_plan(scenario, &plan)?;
    post_check_caps(scenario, &metrics, &mut infeasible);
    Ok(SolveReport {
        plan,
        metrics,
        objective_trace: trace,
        iterations_used: iterations,
        converged,
    infeasible_entries: dedup_entries(infeasible),
    })
}

fn dedup_entries(mut entries: Vec<InfeasibleEntry>) -> Vec<InfeasibleEntry> {
    entries.sort_by(|a, b| (a.uav, a.mass, &a.reason).cmp(&(b.uav, b.mass, &b.reason)));
    entries.dedup();
    entries
}

/// The default solve: even-split start, ratio/volume/CPU sweeps.
pub fn stp_solve(scenario: &Scenario, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    stp_solve_with(scenario, cfg, None)
}
