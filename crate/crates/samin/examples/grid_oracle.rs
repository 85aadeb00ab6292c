//! Brute-force verification oracles: the energy-vs-ratio slice showing
//! the interior minimum, and the joint (ratio, volume) grid on a
//! single-ship instance cross-checked against the solver.
//!
//!     cargo run --example grid_oracle

use samin::baselines::solve_best;
use samin::optimizer::even_split_shares;
use samin::{
    default_scenario, evaluate_plan, grid_min_scalar, joint_grid_min, single_mass_scenario, Axis,
    GridSpec, MassContext, OffloadPlan, SolveConfig,
};

fn main() {
    // Energy along the offloading-ratio axis at fixed volume and CPU
    // shares: falls, bottoms out, then rises again.
    let sc = default_scenario();
    let (rho_u, rho_l) = even_split_shares(&sc);
    let s_fixed = 5.0e6;
    let mut plan = OffloadPlan::zeros(&sc);
    plan.ratio[0][0] = 0.5;
    plan.volume[0][0] = s_fixed;
    plan.cpu_uav[0][0] = rho_u;
    plan.cpu_leo[0][0] = rho_l;
    let ctx = MassContext::from_scenario(&sc, 0, 0);
    let (lo, hi) = ctx.ratio_bounds(s_fixed, rho_u, rho_l).unwrap();

    println!("E(system) along the ratio axis, volume fixed at 5 Mbit:");
    for i in 0..=8 {
        let a = lo + (hi - lo) * i as f64 / 8.0;
        let mut p = plan.clone();
        p.ratio[0][0] = a;
        let e = evaluate_plan(&sc, &p).unwrap().e_total;
        println!("  a = {a:.3} -> {e:.6} J");
    }
    let grid = GridSpec::new(10_001, lo, hi).unwrap();
    let (a_best, e_best) = grid_min_scalar(&sc, &plan, 0, 0, Axis::Ratio, &grid).unwrap();
    println!("grid minimum: a = {a_best:.4}, E = {e_best:.6} J (interior)\n");

    // Joint grid on the single-ship instance vs the solver.
    let single = single_mass_scenario();
    let size = single.masses[0][0].task.size_bits;
    let ratio_grid = GridSpec::new(201, 0.0, 1.0).unwrap();
    let volume_grid = GridSpec::new(201, 0.0, size).unwrap();
    let (best_plan, e_grid) = joint_grid_min(&single, &ratio_grid, &volume_grid).unwrap();
    println!("201x201 joint grid on the single-ship instance:");
    println!(
        "  best (a, s) = ({:.3}, {:.3e}) with E = {e_grid:.6} J",
        best_plan.ratio[0][0], best_plan.volume[0][0]
    );
    let solved = solve_best(&single, &SolveConfig::default()).unwrap();
    println!("  solver E    = {:.6} J (never above the grid)", solved.e_total());
}
