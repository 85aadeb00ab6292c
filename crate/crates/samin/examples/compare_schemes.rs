//! Side-by-side energy comparison of the alternating solver against the
//! three baseline schemes, including the warm-started best-of run that
//! the `compare` subcommand uses.
//!
//!     cargo run --example compare_schemes

use samin::baselines::{eacr_solve, eos_solve, pomt_solve, solve_best};
use samin::{default_scenario, stp_solve, SolveConfig, SolveReport};

fn row(name: &str, report: &SolveReport) {
    let mut t_max: f64 = 0.0;
    for r in &report.metrics.per_mass {
        for mm in r {
            t_max = t_max.max(mm.t_total);
        }
    }
    println!(
        "{name:<12} {:>12.4} {:>10.4} {:>6} {:>9} {:>8}",
        report.e_total(),
        t_max,
        report.iterations_used,
        report.metrics.feasible,
        report.infeasible_entries.len()
    );
}

fn main() {
    let scenario = default_scenario();
    let cfg = SolveConfig::default();

    println!(
        "{:<12} {:>12} {:>10} {:>6} {:>9} {:>8}",
        "scheme", "E_total (J)", "max T (s)", "iters", "feasible", "flagged"
    );
    row("stp (plain)", &stp_solve(&scenario, &cfg).unwrap());
    row("pomt", &pomt_solve(&scenario, &cfg).unwrap());
    row("eos", &eos_solve(&scenario, &cfg).unwrap());
    row("eacr", &eacr_solve(&scenario, &cfg).unwrap());
    row("stp (best)", &solve_best(&scenario, &cfg).unwrap());

    println!(
        "\n`stp (best)` additionally warm-starts from each baseline plan and keeps\n\
         the cheapest feasible outcome, so it never loses to any baseline."
    );
}
