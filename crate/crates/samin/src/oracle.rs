//! Brute-force verification oracles. These never call solver code: they
//! exhaustively evaluate the cost model so the test suite can check the
//! bisection and the alternating loop against an independent route.

use crate::model::{evaluate_plan, ModelError, OffloadPlan};
use crate::scenario::Scenario;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("grid needs at least 2 points per axis, got {0}")]
    TooFewPoints(usize),
    #[error("empty feasible range [{0}, {1}]")]
    EmptyRange(f64, f64),
    #[error("no feasible grid point")]
    NoFeasiblePoint,
    #[error("joint grid oracle needs exactly one ship, scenario has {0}")]
    NotSingleMass(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which decision variable a scalar grid sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Ratio,
    Volume,
}

/// A uniform grid over one or two axes.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub points_per_axis: usize,
    pub low: f64,
    pub high: f64,
}

impl GridSpec {
    pub fn new(points_per_axis: usize, low: f64, high: f64) -> Result<Self, OracleError> {
        if points_per_axis < 2 {
            return Err(OracleError::TooFewPoints(points_per_axis));
        }
        if !(low <= high) {
            return Err(OracleError::EmptyRange(low, high));
        }
        Ok(Self {
            points_per_axis,
            low,
            high,
        })
    }

    fn point(&self, i: usize) -> f64 {
        self.low + (self.high - self.low) * i as f64 / (self.points_per_axis - 1) as f64
    }
}

/// Exhaustive minimizer of a scalar function on a uniform grid.
/// Ties break toward the lowest index so reruns are reproducible.
pub fn grid_min_fn<F: FnMut(f64) -> f64>(
    grid: &GridSpec,
    mut f: F,
) -> (f64, f64) {
    let mut best_x = grid.point(0);
    let mut best_v = f(best_x);
    for i in 1..grid.points_per_axis {
        let x = grid.point(i);
        let v = f(x);
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    (best_x, best_v)
}

/// Exhaustive scan of the system energy along one decision axis of one
/// ship, everything else held fixed at the given plan's values.
pub fn grid_min_scalar(
    scenario: &Scenario,
    base_plan: &OffloadPlan,
    uav: usize,
    mass: usize,
    axis: Axis,
    grid: &GridSpec,
) -> Result<(f64, f64), OracleError> {
    let mut plan = base_plan.clone();
    let mut first_err = None;
    let (x, e) = grid_min_fn(grid, |x| {
        match axis {
            Axis::Ratio => plan.ratio[uav][mass] = x,
            Axis::Volume => plan.volume[uav][mass] = x,
        }
        match evaluate_plan(scenario, &plan) {
            Ok(m) => m.e_total,
            Err(e) => {
                first_err.get_or_insert(e);
                f64::INFINITY
            }
        }
    });
    if let Some(e) = first_err {
        return Err(OracleError::Model(e));
    }
    Ok((x, e))
}

/// Joint exhaustive minimizer over (ratio, volume) for a single-ship
/// scenario, CPU shares sized deadline-tight at every grid point and
/// points violating any constraint skipped.
pub fn joint_grid_min(
    scenario: &Scenario,
    ratio_grid: &GridSpec,
    volume_grid: &GridSpec,
) -> Result<(OffloadPlan, f64), OracleError> {
    if scenario.total_masses() != 1 {
        return Err(OracleError::NotSingleMass(scenario.total_masses()));
    }
    let p = &scenario.params;
    let task = &scenario.masses[0][0].task;
    let mut best: Option<(OffloadPlan, f64)> = None;

    for i in 0..ratio_grid.points_per_axis {
        let a = ratio_grid.point(i);
        for j in 0..volume_grid.points_per_axis {
            let s = volume_grid.point(j);
            let mut plan = OffloadPlan::zeros(scenario);
            plan.ratio[0][0] = a;
            plan.volume[0][0] = s;
            // Deadline-tight shares at this grid point.
            let rho_u = if a * s > 0.0 && task.deadline > task.tx_time_uav {
                a * s * p.cycles_per_bit_uav / (task.deadline - task.tx_time_uav)
            } else if a * s > 0.0 {
                continue;
            } else {
                0.0
            };
            let rho_l = if (1.0 - a) * s > 0.0 && task.deadline > task.tx_time_leo {
                (1.0 - a) * s * p.cycles_per_bit_leo / (task.deadline - task.tx_time_leo)
            } else if (1.0 - a) * s > 0.0 {
                continue;
            } else {
                0.0
            };
            plan.cpu_uav[0][0] = rho_u;
            plan.cpu_leo[0][0] = rho_l;
            plan.canonicalize();
            let metrics = evaluate_plan(scenario, &plan)?;
            if !metrics.feasible {
                continue;
            }
            let better = match &best {
                None => true,
                Some((_, e)) => metrics.e_total < *e,
            };
            if better {
                best = Some((plan, metrics.e_total));
            }
        }
    }
    best.ok_or(OracleError::NoFeasiblePoint)
}
