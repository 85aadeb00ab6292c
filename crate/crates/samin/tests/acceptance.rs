//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Criteria 1-6 are property checks over seeded random
//! instances, criterion 7 reproduces the qualitative trends on the
//! stock scenario, 8 checks runtime scaling, and 9 checks bytewise
//! reproducibility of the experiment harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use samin::baselines::{eacr_solve, eos_solve, pomt_solve, solve_best, Scheme};
use samin::config::{parse_config, ScenarioConfig};
use samin::model::{evaluate_plan, OffloadPlan};
use samin::optimizer::{even_split_shares, mris, MassContext, ScalarProblem, SolveConfig};
use samin::oracle::{grid_min_scalar, joint_grid_min, Axis, GridSpec};
use samin::plot::render_plots;
use samin::scenario::{default_scenario, Scenario, ScenarioBuilder};
use samin::sweep::{run_sweep, to_csv};
use samin::{stp_solve, Position3D};
use std::time::Instant;

// ---------------------------------------------------------------------------
// Seeded instance generators
// ---------------------------------------------------------------------------

/// Random multi-ship scenario inside the statically feasible envelope.
fn random_scenario(rng: &mut ChaCha12Rng) -> Scenario {
    let mut b = ScenarioBuilder {
        placement_seed: rng.gen(),
        masses_per_uav: rng.gen_range(3..=5),
        ..ScenarioBuilder::default()
    };
    b.task.size_bits = rng.gen_range(7.5e6..1.1e7);
    b.task.cpu_local = rng.gen_range(6.5e9..8.0e9);
    b.task.tx_time_uav = rng.gen_range(0.3..0.5);
    b.task.tx_time_leo = rng.gen_range(0.6..0.8);
    b.build().expect("generated scenario must be feasible")
}

/// Random single-ship scenario for the small-instance oracles.
fn random_single_mass(rng: &mut ChaCha12Rng) -> Scenario {
    let ground = rng.gen_range(40.0..270.0);
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut b = ScenarioBuilder {
        uav_positions: vec![Position3D::new(0.0, 0.0, 100.0)],
        masses_per_uav: 1,
        mass_positions: Some(vec![vec![Position3D::new(
            ground * angle.cos(),
            ground * angle.sin(),
            0.0,
        )]]),
        ..ScenarioBuilder::default()
    };
    b.task.size_bits = rng.gen_range(4.0e6..1.3e7);
    b.task.cpu_local = *[7.0e9, 5.0e9, 2.0e9].get(rng.gen_range(0..3)).unwrap();
    b.task.tx_time_uav = rng.gen_range(0.3..0.5);
    b.task.tx_time_leo = rng.gen_range(0.6..0.8);
    b.build().expect("generated single-ship scenario must be feasible")
}

/// A random interior gradient context on a single-ship scenario:
/// (scenario, fixed rho pair, interior point).
fn random_context(rng: &mut ChaCha12Rng) -> (Scenario, f64, f64, f64, f64) {
    let sc = random_single_mass(rng);
    let rho_u = rng.gen_range(1.0e9..3.0e10);
    let rho_l = rng.gen_range(2.0e9..8.0e10);
    let a = rng.gen_range(0.05..0.95);
    let s = rng.gen_range(0.1..0.9) * sc.masses[0][0].task.size_bits;
    (sc, rho_u, rho_l, a, s)
}

/// System energy of the single-ship scenario at the given decision
/// point, evaluated through the plan evaluator (the independent route).
fn energy_at(sc: &Scenario, a: f64, s: f64, rho_u: f64, rho_l: f64) -> f64 {
    let mut plan = OffloadPlan::zeros(sc);
    plan.ratio[0][0] = a;
    plan.volume[0][0] = s;
    plan.cpu_uav[0][0] = rho_u;
    plan.cpu_leo[0][0] = rho_l;
    evaluate_plan(sc, &plan).unwrap().e_total
}

// ---------------------------------------------------------------------------
// Criterion 1: convexity and gradient correctness
// ---------------------------------------------------------------------------

#[test]
fn acceptance_1_convexity_and_gradients() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0xACC1);
    for trial in 0..1000 {
        let (sc, rho_u, rho_l, a, s) = random_context(&mut rng);
        let ctx = MassContext::from_scenario(&sc, 0, 0);
        let size = ctx.size_bits;
        let e_ref = energy_at(&sc, a, s, rho_u, rho_l);

        // Sampled second differences of E(a) and E(s).
        let ha = 1e-3;
        if a > ha && a + ha < 1.0 {
            let dd = energy_at(&sc, a - ha, s, rho_u, rho_l) - 2.0 * e_ref
                + energy_at(&sc, a + ha, s, rho_u, rho_l);
            assert!(
                dd >= -1e-9 * e_ref.abs(),
                "trial {trial}: E(a) second difference {dd} too negative"
            );
        }
        let hs = 1e-3 * size;
        if s > hs && s + hs < size {
            let dd = energy_at(&sc, a, s - hs, rho_u, rho_l) - 2.0 * e_ref
                + energy_at(&sc, a, s + hs, rho_u, rho_l);
            assert!(
                dd >= -1e-9 * e_ref.abs(),
                "trial {trial}: E(s) second difference {dd} too negative"
            );
        }

        // Analytic gradients against central finite differences of the
        // plan evaluator; the volume axis is normalized to u = s/S so
        // the 1e-6 * (1 + |E'|) tolerance applies at Joule scale.
        let h = 1e-6;
        let fd_a = (energy_at(&sc, a + h, s, rho_u, rho_l)
            - energy_at(&sc, a - h, s, rho_u, rho_l))
            / (2.0 * h);
        let ga = ctx.grad_ratio(a, s, rho_u, rho_l);
        assert!(
            (ga - fd_a).abs() <= 1e-6 * (1.0 + ga.abs()),
            "trial {trial}: grad_a {ga} vs finite difference {fd_a}"
        );

        let hu = 1e-6 * size;
        let fd_u = (energy_at(&sc, a, s + hu, rho_u, rho_l)
            - energy_at(&sc, a, s - hu, rho_u, rho_l))
            / (2.0 * 1e-6);
        let gu = ctx.grad_volume(a, s, rho_u, rho_l) * size;
        assert!(
            (gu - fd_u).abs() <= 1e-6 * (1.0 + gu.abs()),
            "trial {trial}: grad_s*S {gu} vs finite difference {fd_u}"
        );
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 10.0, "criterion 1 took {secs:.2} s, budget 10 s");
    println!("PASS criterion 1: convexity + gradient agreement on 1000 contexts ({secs:.2} s)");
}

// ---------------------------------------------------------------------------
// Criterion 2: MRIS against the scalar grid oracle
// ---------------------------------------------------------------------------

#[test]
fn acceptance_2_mris_vs_grid_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0xACC2);
    for trial in 0..100 {
        let (sc, rho_u, rho_l, a_fixed, s_fixed) = random_context(&mut rng);
        let ctx = MassContext::from_scenario(&sc, 0, 0);
        let mut plan = OffloadPlan::zeros(&sc);
        plan.ratio[0][0] = a_fixed;
        plan.volume[0][0] = s_fixed;
        plan.cpu_uav[0][0] = rho_u;
        plan.cpu_leo[0][0] = rho_l;

        let on_ratio_axis = trial % 2 == 0;
        let (lo, hi, x_mris) = if on_ratio_axis {
            let Ok((lo, hi)) = ctx.ratio_bounds(s_fixed, rho_u, rho_l) else {
                continue;
            };
            let problem = ScalarProblem {
                lower: lo,
                upper: hi,
                tolerance: 1e-6,
                derivative: |a| ctx.grad_ratio(a, s_fixed, rho_u, rho_l),
            };
            (lo, hi, mris(&problem).unwrap().x)
        } else {
            let Ok((lo, hi)) = ctx.volume_bounds(a_fixed, rho_u, rho_l) else {
                continue;
            };
            let problem = ScalarProblem {
                lower: lo,
                upper: hi,
                tolerance: 1e-6 * ctx.size_bits,
                derivative: |s| ctx.grad_volume(a_fixed, s, rho_u, rho_l),
            };
            (lo, hi, mris(&problem).unwrap().x)
        };
        if hi <= lo {
            continue;
        }
        let axis = if on_ratio_axis { Axis::Ratio } else { Axis::Volume };
        let grid = GridSpec::new(10_001, lo, hi).unwrap();
        let (x_grid, e_grid) = grid_min_scalar(&sc, &plan, 0, 0, axis, &grid).unwrap();

        assert!(
            (x_mris - x_grid).abs() <= 1e-3 * (hi - lo),
            "trial {trial}: mris {x_mris} vs grid {x_grid} over [{lo}, {hi}]"
        );
        let e_mris = if on_ratio_axis {
            energy_at(&sc, x_mris, s_fixed, rho_u, rho_l)
        } else {
            energy_at(&sc, a_fixed, x_mris, rho_u, rho_l)
        };
        assert!(
            e_mris <= e_grid + 1e-9 * e_grid.abs(),
            "trial {trial}: E(mris) = {e_mris} above E(grid) = {e_grid}"
        );
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 30.0, "criterion 2 took {secs:.2} s, budget 30 s");
    println!("PASS criterion 2: MRIS matches the 10,001-point oracle on 100 contexts ({secs:.2} s)");
}

// ---------------------------------------------------------------------------
// Criterion 3: deadline tightness of positive CPU shares
// ---------------------------------------------------------------------------

#[test]
fn acceptance_3_kkt_deadline_tightness() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xACC3);
    let cfg = SolveConfig::default();
    let mut positive_shares = 0usize;
    for trial in 0..200 {
        let sc = random_scenario(&mut rng);
        let report = stp_solve(&sc, &cfg).unwrap();
        assert!(
            report.infeasible_entries.is_empty(),
            "trial {trial}: unexpected infeasible entries {:?}",
            report.infeasible_entries
        );
        for (m, row) in report.metrics.per_mass.iter().enumerate() {
            for (n, mm) in row.iter().enumerate() {
                let deadline = sc.masses[m][n].task.deadline;
                if report.plan.cpu_uav[m][n] > 0.0 {
                    positive_shares += 1;
                    assert!(
                        (mm.t_uav_path - deadline).abs() <= 1e-9 * deadline,
                        "trial {trial} ({m},{n}): UAV path {} vs deadline {deadline}",
                        mm.t_uav_path
                    );
                }
                if report.plan.cpu_leo[m][n] > 0.0 {
                    positive_shares += 1;
                    assert!(
                        (mm.t_leo_path - deadline).abs() <= 1e-9 * deadline,
                        "trial {trial} ({m},{n}): LEO path {} vs deadline {deadline}",
                        mm.t_leo_path
                    );
                }
            }
        }
    }
    assert!(positive_shares > 1000, "tightness checked on {positive_shares} shares");
    println!("PASS criterion 3: deadline tightness on {positive_shares} positive shares across 200 scenarios");
}

// ---------------------------------------------------------------------------
// Criterion 4: monotone objective trace and early exit
// ---------------------------------------------------------------------------

#[test]
fn acceptance_4_descent_and_convergence() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xACC4);
    let cfg = SolveConfig::default();
    let mut converged = 0usize;
    for trial in 0..200 {
        let sc = random_scenario(&mut rng);
        let report = stp_solve(&sc, &cfg).unwrap();
        for pair in report.objective_trace.windows(2) {
            assert!(
                pair[1] <= pair[0] * (1.0 + 1e-9),
                "trial {trial}: trace rises {} -> {}",
                pair[0],
                pair[1]
            );
        }
        assert!(report.iterations_used <= cfg.max_sweeps);
        if report.converged {
            converged += 1;
        }
    }
    assert!(
        converged >= 190,
        "only {converged}/200 scenarios early-exited within {} sweeps",
        cfg.max_sweeps
    );
    println!("PASS criterion 4: non-increasing traces, {converged}/200 early exits");
}

// ---------------------------------------------------------------------------
// Criterion 5: solver against the joint grid on single-ship instances
// ---------------------------------------------------------------------------

#[test]
fn acceptance_5_joint_grid_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0xACC5);
    let cfg = SolveConfig::default();
    for trial in 0..20 {
        let sc = random_single_mass(&mut rng);
        let size = sc.masses[0][0].task.size_bits;
        let report = solve_best(&sc, &cfg).unwrap();
        let ratio_grid = GridSpec::new(201, 0.0, 1.0).unwrap();
        let volume_grid = GridSpec::new(201, 0.0, size).unwrap();
        let (_, e_grid) = joint_grid_min(&sc, &ratio_grid, &volume_grid).unwrap();
        assert!(
            report.e_total() <= e_grid * (1.0 + 1e-6),
            "trial {trial}: solver {} above joint grid {}",
            report.e_total(),
            e_grid
        );
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "criterion 5 took {secs:.2} s, budget 60 s");
    println!("PASS criterion 5: solver at or below the 201x201 joint grid on 20 instances ({secs:.2} s)");
}

// ---------------------------------------------------------------------------
// Criterion 6: dominance over the baselines with warm starts
// ---------------------------------------------------------------------------

#[test]
fn acceptance_6_baseline_dominance() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xACC6);
    let cfg = SolveConfig::default();
    for trial in 0..200 {
        let sc = random_scenario(&mut rng);
        let best = solve_best(&sc, &cfg).unwrap();
        for (name, report) in [
            ("pomt", pomt_solve(&sc, &cfg).unwrap()),
            ("eos", eos_solve(&sc, &cfg).unwrap()),
            ("eacr", eacr_solve(&sc, &cfg).unwrap()),
        ] {
            assert!(
                best.e_total() <= report.e_total() * (1.0 + 1e-9),
                "trial {trial}: best {} loses to {name} {}",
                best.e_total(),
                report.e_total()
            );
        }
    }
    println!("PASS criterion 6: warm-started solver dominates all baselines on 200 scenarios");
}

// ---------------------------------------------------------------------------
// Criterion 7: qualitative trends on the stock scenario
// ---------------------------------------------------------------------------

#[test]
fn acceptance_7a_interior_ratio_minimum() {
    // Energy-vs-ratio slice at the even-split CPU shares, volume fixed
    // at 5 Mbit: the scan must dip strictly below both interval ends.
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
    let grid = GridSpec::new(10_001, lo, hi).unwrap();
    let (x, e_min) = grid_min_scalar(&sc, &plan, 0, 0, Axis::Ratio, &grid).unwrap();
    let e_at = |a: f64| {
        let mut p = plan.clone();
        p.ratio[0][0] = a;
        evaluate_plan(&sc, &p).unwrap().e_total
    };
    assert!(x > lo && x < hi, "minimum {x} must be interior to [{lo}, {hi}]");
    assert!(e_min < e_at(lo), "{e_min} !< E({lo}) = {}", e_at(lo));
    assert!(e_min < e_at(hi), "{e_min} !< E({hi}) = {}", e_at(hi));
    println!("PASS criterion 7a: interior energy minimum at ratio {x:.4} in [{lo:.3}, {hi:.3}]");
}

fn stock_sweep(extra: &str) -> ScenarioConfig {
    // Plain solver rows (no warm starts) show the algorithm's own trend.
    parse_config(&format!("[solver]\nwarm_start = false\n\n[sweep]\n{extra}")).unwrap()
}

#[test]
fn acceptance_7b_mean_ratio_non_increasing_in_task_size() {
    let cfg = stock_sweep("variable = task_size\nvalues = 2 3 4 5 6 7 8 9 10 Mbit\n");
    let result = run_sweep(&cfg, &[Scheme::Stp]).unwrap();
    // The offloading ratio is undefined (0/0 bits) at points where
    // nothing offloads; the trend is asserted over the defined points.
    let ratios: Vec<f64> = result
        .rows
        .iter()
        .map(|r| r.mean_offload_ratio)
        .filter(|v| !v.is_nan())
        .collect();
    assert!(
        ratios.len() >= 2,
        "need at least two offloading sweep points, got {ratios:?}"
    );
    for pair in ratios.windows(2) {
        assert!(
            pair[1] <= pair[0] + 1e-12,
            "mean offloading ratio rises along the size sweep: {ratios:?}"
        );
    }
    assert!(
        ratios.last().unwrap() < ratios.first().unwrap(),
        "ratio sequence should strictly decrease overall: {ratios:?}"
    );
    println!("PASS criterion 7b: mean offloading ratio non-increasing over task sizes: {ratios:?}");
}

#[test]
fn acceptance_7c_energy_increasing_in_task_size() {
    let cfg = stock_sweep("variable = task_size\nvalues = 2 3 4 5 6 7 8 9 10 Mbit\n");
    let result = run_sweep(&cfg, &[Scheme::Stp]).unwrap();
    let energies: Vec<f64> = result.rows.iter().map(|r| r.e_total).collect();
    for pair in energies.windows(2) {
        assert!(
            pair[1] > pair[0],
            "system energy must rise strictly with task size: {energies:?}"
        );
    }
    println!("PASS criterion 7c: E_total strictly increasing over task sizes");
}

const TX_TIME_SWEEPS: [(&str, &str); 2] = [
    ("t_uav", "variable = t_uav\nfrom = 0.2 s\nto = 0.6 s\nsteps = 5\n"),
    ("t_leo", "variable = t_leo\nfrom = 0.5 s\nto = 0.9 s\nsteps = 5\n"),
];

#[test]
fn acceptance_7d_energy_decreasing_in_tx_times() {
    for (label, block) in TX_TIME_SWEEPS {
        let cfg = stock_sweep(block);
        let result = run_sweep(&cfg, &[Scheme::Stp]).unwrap();
        let energies: Vec<f64> = result.rows.iter().map(|r| r.e_total).collect();
        for pair in energies.windows(2) {
            assert!(
                pair[1] < pair[0],
                "E_total must strictly decrease in {label}: {energies:?}"
            );
        }
    }
    println!("PASS criterion 7d (energy): E_total strictly decreasing in both transmission times");
}

/// Known-red: any plan that offloads has its edge paths sized by the
/// deadline-tight closed forms, and the forced-offload floor keeps the
/// local path at the deadline too, so T_total is pinned at exactly the
/// deadline across both transmission-time sweeps and cannot increase.
/// The check is implemented as specified and left failing.
#[test]
fn acceptance_7d_latency_increasing_in_tx_times() {
    let mut failures = Vec::new();
    for (label, block) in TX_TIME_SWEEPS {
        let cfg = stock_sweep(block);
        let result = run_sweep(&cfg, &[Scheme::Stp]).unwrap();
        let latencies: Vec<f64> = result.rows.iter().map(|r| r.t_max).collect();
        if latencies
            .windows(2)
            .any(|pair| pair[1] <= pair[0] + 1e-12)
        {
            failures.push(format!("{label}: {latencies:?}"));
        }
    }
    assert!(
        failures.is_empty(),
        "FAIL criterion 7d (latency): T_total not strictly increasing; deadline-tight \
         allocation pins it at the per-task deadline [{}]",
        failures.join("; ")
    );
    println!("PASS criterion 7d (latency): T_total strictly increasing in both transmission times");
}

// ---------------------------------------------------------------------------
// Criterion 8: runtime scaling in the number of ships
// ---------------------------------------------------------------------------

#[test]
fn acceptance_8_complexity_scaling() {
    // Caps scale with N so the per-ship subproblem stays identical and
    // the measured cost isolates the loop itself; sweep count is fixed
    // by the shared config.
    let cfg = SolveConfig::default();
    let sizes = [5usize, 10, 20, 40, 80];
    let mut points = Vec::new();
    for &n in &sizes {
        let mut b = ScenarioBuilder {
            masses_per_uav: n,
            ..ScenarioBuilder::default()
        };
        b.params.max_cpu_uav = 6.0e9 * n as f64;
        b.params.max_cpu_leo = 1.7e10 * (4 * n) as f64;
        b.params.max_energy_uav = 50.0 * n as f64;
        b.params.max_energy_leo = 500.0 * n as f64;
        let sc = b.build().unwrap();
        // Warm-up, then best of 5 timed repetitions of 10 solves.
        let _ = stp_solve(&sc, &cfg).unwrap();
        let mut best = f64::INFINITY;
        for _ in 0..5 {
            let t0 = Instant::now();
            for _ in 0..10 {
                let _ = stp_solve(&sc, &cfg).unwrap();
            }
            best = best.min(t0.elapsed().as_secs_f64());
        }
        points.push(((n as f64).ln(), best.ln()));
    }
    // Least-squares slope in log-log space.
    let count = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    assert!(
        slope <= 1.2,
        "wall-time scaling exponent {slope:.3} exceeds 1.2"
    );
    println!("PASS criterion 8: solver wall time scales with exponent {slope:.3} <= 1.2");
}

// ---------------------------------------------------------------------------
// Criterion 9: bytewise reproducibility of sweep outputs
// ---------------------------------------------------------------------------

#[test]
fn acceptance_9_deterministic_outputs() {
    let cfg = parse_config(
        "[scenario]\nseed = 7\n[sweep]\nvariable = task_size\nvalues = 8 9 10 Mbit\n",
    )
    .unwrap();
    let run = |dir: &std::path::Path| -> (String, Vec<Vec<u8>>) {
        let result = run_sweep(&cfg, &Scheme::ALL).unwrap();
        let csv = to_csv(&result);
        let files = render_plots(&result.rows, &result.traces, "det", dir).unwrap();
        let bytes = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
        (csv, bytes)
    };
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let (csv_a, plots_a) = run(dir_a.path());
    let (csv_b, plots_b) = run(dir_b.path());
    assert_eq!(csv_a, csv_b, "CSV bytes must match across runs");
    assert_eq!(plots_a, plots_b, "plot bytes must match across runs");
    println!("PASS criterion 9: identical config and seed give byte-identical CSV and plots");
}
