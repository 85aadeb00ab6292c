//! Run the alternating solver on the stock four-UAV scenario and show
//! the objective trace, the resulting split across the three tiers, and
//! the deadline tightness of the edge allocations.
//!
//!     cargo run --example solve_default

use samin::{default_scenario, stp_solve, SolveConfig};

fn main() {
    let scenario = default_scenario();
    let report = stp_solve(&scenario, &SolveConfig::default()).unwrap();

    println!("objective trace (J): {:?}", report.objective_trace);
    println!(
        "converged = {} after {} sweeps, feasible = {}",
        report.converged, report.iterations_used, report.metrics.feasible
    );

    let (m, n) = (0, 0);
    let task = &scenario.masses[m][n].task;
    let a = report.plan.ratio[m][n];
    let s = report.plan.volume[m][n];
    println!("\nship (0,0) split of {:.0} Mbit:", task.size_bits / 1e6);
    println!("  local : {:>9.0} bits", task.size_bits - s);
    println!("  UAV   : {:>9.0} bits (ratio {a:.4})", a * s);
    println!("  LEO   : {:>9.0} bits", (1.0 - a) * s);
    println!(
        "  CPU shares: UAV {:.3e} cycles/s, LEO {:.3e} cycles/s",
        report.plan.cpu_uav[m][n], report.plan.cpu_leo[m][n]
    );

    let mm = &report.metrics.per_mass[m][n];
    println!("\npath latencies vs the {:.1} s deadline:", task.deadline);
    println!("  local {:.6} s | UAV {:.6} s | LEO {:.6} s", mm.t_local, mm.t_uav_path, mm.t_leo_path);
    println!("\nsystem energy = {:.4} J", report.e_total());
}
