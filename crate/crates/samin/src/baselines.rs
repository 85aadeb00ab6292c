//! Comparison schemes: per-ship pure-mode offloading (POMT), equal
//! workload thirds (EOS), and even CPU allocation (EACR), plus the
//! best-of-warm-starts solve used for scheme comparisons.

use crate::model::{evaluate_plan, OffloadPlan};
use crate::optimizer::{
    optimal_rho_leo, optimal_rho_uav, stp_solve, stp_solve_with, InfeasibleEntry, SolveConfig,
    SolveError, SolveReport,
};
use crate::scenario::Scenario;

/// Which scheme produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Stp,
    Pomt,
    Eos,
    Eacr,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Stp, Scheme::Pomt, Scheme::Eos, Scheme::Eacr];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Stp => "stp",
            Scheme::Pomt => "pomt",
            Scheme::Eos => "eos",
            Scheme::Eacr => "eacr",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stp" => Some(Scheme::Stp),
            "pomt" => Some(Scheme::Pomt),
            "eos" => Some(Scheme::Eos),
            "eacr" => Some(Scheme::Eacr),
            _ => None,
        }
    }
}

fn finish_report(
    scenario: &Scenario,
    mut plan: OffloadPlan,
    mut infeasible: Vec<InfeasibleEntry>,
) -> Result<SolveReport, SolveError> {
    plan.canonicalize();
    let metrics = evaluate_plan(scenario, &plan)?;
    let e = metrics.e_total;
    Ok(SolveReport {
        plan,
        metrics,
        objective_trace: vec![e],
        iterations_used: 1,
        converged: true,
        infeasible_entries: {
            infeasible.sort_by_key(|e| (e.uav, e.mass));
            infeasible
        },
    })
}

/// Proportional cap repair shared by the one-shot baselines: scales CPU
/// shares onto the caps and flags the ships whose deadline-tight shares
/// were cut.
fn repair_caps(
    scenario: &Scenario,
    plan: &mut OffloadPlan,
    infeasible: &mut Vec<InfeasibleEntry>,
) {
    let p = &scenario.params;
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
        }
    }
    let sum: f64 = plan.cpu_leo.iter().flatten().sum();
    if sum > p.max_cpu_leo * (1.0 + 1e-12) {
        let theta = p.max_cpu_leo / sum;
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
    }
}

/// Paired offloading of pure modes: each ship runs its task entirely
/// locally, entirely on its UAV, or entirely on the satellite, whichever
/// deadline-feasible mode costs the least energy.
pub fn pomt_solve(scenario: &Scenario, _cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    scenario.validate()?;
    let p = &scenario.params;
    let mut plan = OffloadPlan::zeros(scenario);
    let mut infeasible = Vec::new();

    for (m, n, node) in scenario.iter_masses() {
        let t = &node.task;
        // (ratio, volume, rho_u, rho_l, energy) per candidate mode.
        let mut candidates: Vec<(f64, f64, f64, f64, f64)> = Vec::with_capacity(3);

        // All-local.
        let t_local = t.size_bits * p.cycles_per_bit_local / t.cpu_local;
        if t_local <= t.deadline {
            let e = p.compute_power_local * t_local;
            candidates.push((0.0, 0.0, 0.0, 0.0, e));
        }

        // All-UAV.
        if let Ok(rho) =
            optimal_rho_uav(1.0, t.size_bits, p.cycles_per_bit_uav, t.deadline, t.tx_time_uav)
        {
            if let Ok((_, e_tx)) = crate::model::uav_tx_power_energy(
                p.noise_power_uav,
                node.channel.gain_uav,
                1.0,
                t.size_bits,
                t.tx_time_uav,
                p.bandwidth_uav,
                p.exponent_cap,
            ) {
                let e = e_tx + p.compute_power_uav * (t.deadline - t.tx_time_uav);
                candidates.push((1.0, t.size_bits, rho, 0.0, e));
            }
        }

        // All-satellite.
        if let Ok(rho) =
            optimal_rho_leo(0.0, t.size_bits, p.cycles_per_bit_leo, t.deadline, t.tx_time_leo)
        {
            if let Ok((_, e_tx)) = crate::model::leo_tx_power_energy(
                p.noise_psd_leo,
                node.channel.gain_leo_sq,
                0.0,
                t.size_bits,
                t.tx_time_leo,
                scenario.leo.slant_distance,
                p.bandwidth_leo,
                p.light_speed,
                p.exponent_cap,
            ) {
                let e = e_tx + p.compute_power_leo * (t.deadline - t.tx_time_leo);
                candidates.push((0.0, t.size_bits, 0.0, rho, e));
            }
        }

        match candidates
            .into_iter()
            .min_by(|a, b| a.4.partial_cmp(&b.4).unwrap())
        {
            Some((ratio, volume, rho_u, rho_l, _)) => {
                plan.ratio[m][n] = ratio;
                plan.volume[m][n] = volume;
                plan.cpu_uav[m][n] = rho_u;
                plan.cpu_leo[m][n] = rho_l;
            }
            None => infeasible.push(InfeasibleEntry {
                uav: m,
                mass: n,
                reason: "no pure mode meets the deadline".into(),
            }),
        }
    }

    repair_caps(scenario, &mut plan, &mut infeasible);
    finish_report(scenario, plan, infeasible)
}

/// Equal offloading: ship, UAV, and satellite each take one third of the
/// workload; edge CPU shares are sized deadline-tight.
pub fn eos_solve(scenario: &Scenario, _cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    scenario.validate()?;
    let p = &scenario.params;
    let mut plan = OffloadPlan::zeros(scenario);
    let mut infeasible = Vec::new();

    for (m, n, node) in scenario.iter_masses() {
        let t = &node.task;
        let ratio = 0.5;
        let volume = 2.0 * t.size_bits / 3.0;
        plan.ratio[m][n] = ratio;
        plan.volume[m][n] = volume;
        match optimal_rho_uav(ratio, volume, p.cycles_per_bit_uav, t.deadline, t.tx_time_uav) {
            Ok(rho) => plan.cpu_uav[m][n] = rho,
            Err(e) => infeasible.push(InfeasibleEntry {
                uav: m,
                mass: n,
                reason: e.to_string(),
            }),
        }
        match optimal_rho_leo(ratio, volume, p.cycles_per_bit_leo, t.deadline, t.tx_time_leo) {
            Ok(rho) => plan.cpu_leo[m][n] = rho,
            Err(e) => infeasible.push(InfeasibleEntry {
                uav: m,
                mass: n,
                reason: e.to_string(),
            }),
        }
        let t_local = (t.size_bits - volume) * p.cycles_per_bit_local / t.cpu_local;
        if t_local > t.deadline {
            infeasible.push(InfeasibleEntry {
                uav: m,
                mass: n,
                reason: format!("local third takes {t_local:.3} s, over the deadline"),
            });
        }
    }

    repair_caps(scenario, &mut plan, &mut infeasible);
    finish_report(scenario, plan, infeasible)
}

/// Even allocation of computing resources: CPU shares frozen at the even
/// split while ratio and volume still run through the bisection steps.
/// This is literally the alternating solver with resource steps off.
pub fn eacr_solve(scenario: &Scenario, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    let cfg = SolveConfig {
        resource_steps: false,
        ..cfg.clone()
    };
    stp_solve_with(scenario, &cfg, None)
}

/// Runs a baseline scheme by name.
pub fn solve_scheme(
    scenario: &Scenario,
    cfg: &SolveConfig,
    scheme: Scheme,
) -> Result<SolveReport, SolveError> {
    match scheme {
        Scheme::Stp => solve_best(scenario, cfg),
        Scheme::Pomt => pomt_solve(scenario, cfg),
        Scheme::Eos => eos_solve(scenario, cfg),
        Scheme::Eacr => eacr_solve(scenario, cfg),
    }
}

/// The comparison configuration of the alternating solver: the plain
/// even-split start plus one warm start from each baseline plan, keeping
/// the best feasible outcome. Every baseline plan lies in the solver's
/// search space, so the winner never loses to any baseline.
pub fn solve_best(scenario: &Scenario, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    let mut best = stp_solve(scenario, cfg)?;
    let warm_sources = [
        pomt_solve(scenario, cfg)?,
        eos_solve(scenario, cfg)?,
        eacr_solve(scenario, cfg)?,
    ];
    for source in warm_sources {
        let candidate = stp_solve_with(scenario, cfg, Some(source.plan))?;
        let better = match (candidate.metrics.feasible, best.metrics.feasible) {
            (true, false) => true,
            (false, true) => false,
            _ => candidate.e_total() < best.e_total(),
        };
        if better {
            best = candidate;
        }
    }
    Ok(best)
}
