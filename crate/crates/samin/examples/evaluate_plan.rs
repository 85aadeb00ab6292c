//! Cost-model walkthrough: build an offloading plan by hand, evaluate
//! it, and inspect the energy/latency breakdown and constraint slacks.
//!
//!     cargo run --example evaluate_plan

use samin::{default_scenario, evaluate_plan, OffloadPlan};

fn main() {
    let scenario = default_scenario();

    // Offload 3 Mbit per ship, 40% of it to the UAV, with modest CPU
    // shares at both edges.
    let mut plan = OffloadPlan::zeros(&scenario);
    for m in 0..scenario.num_uavs() {
        for n in 0..scenario.masses_per_uav() {
            plan.ratio[m][n] = 0.4;
            plan.volume[m][n] = 3.0e6;
            plan.cpu_uav[m][n] = 2.0e9;
            plan.cpu_leo[m][n] = 6.0e9;
        }
    }

    let metrics = evaluate_plan(&scenario, &plan).unwrap();
    let mm = &metrics.per_mass[0][0];
    println!("ship (0,0) breakdown:");
    println!("  E_local  = {:.4} J   (T_local  = {:.3} s)", mm.e_local, mm.t_local);
    println!("  E_tx_U   = {:.4e} J  (UAV path = {:.3} s)", mm.e_tx_uav, mm.t_uav_path);
    println!("  E_tx_L   = {:.4} J   (LEO path = {:.3} s)", mm.e_tx_leo, mm.t_leo_path);
    println!("  E_cpu_U  = {:.4} J", mm.e_cpu_uav);
    println!("  E_cpu_L  = {:.4} J", mm.e_cpu_leo);
    println!("  T_total  = {:.3} s (max of the three paths)", mm.t_total);

    println!("\nsystem energy = {:.4} J over {} ships", metrics.e_total, scenario.total_masses());
    println!("feasible = {}", metrics.feasible);
    println!("\nconstraint residuals (negative = slack):");
    for (name, value, _) in metrics.residuals.scaled(&scenario) {
        println!("  {name:>13}: {value:+.3e}");
    }
}
