//! Experiment harness: sweep the task size from 2 to 10 Mbit for all
//! four schemes, print the rows, and write CSV + SVG charts.
//!
//!     cargo run --example sweep_task_size

use samin::baselines::Scheme;
use samin::config::parse_config;
use samin::plot::render_plots;
use samin::sweep::{run_sweep, write_outputs};

fn main() {
    let config = parse_config(
        "[sweep]\nvariable = task_size\nvalues = 2 4 6 8 10 Mbit\n",
    )
    .unwrap();

    let result = run_sweep(&config, &Scheme::ALL).unwrap();
    println!(
        "{:>10} {:<6} {:>12} {:>9} {:>9} {:>9}",
        "S (Mbit)", "scheme", "E_total (J)", "max T (s)", "mean a*", "feasible"
    );
    for r in &result.rows {
        println!(
            "{:>10.0} {:<6} {:>12.4} {:>9.4} {:>9} {:>9}",
            r.value / 1e6,
            r.scheme,
            r.e_total,
            r.t_max,
            if r.mean_offload_ratio.is_nan() {
                "-".to_string()
            } else {
                format!("{:.4}", r.mean_offload_ratio)
            },
            r.feasible
        );
    }

    let out = std::path::Path::new("out");
    let csv = write_outputs(&result, out).unwrap();
    println!("\nwrote {}", csv.display());
    for f in render_plots(&result.rows, &result.traces, &result.config_hash, out).unwrap() {
        println!("wrote {}", f.display());
    }
}
