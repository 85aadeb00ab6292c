//! End-to-end checks of the `samin` binary: subcommands, exit codes,
//! file outputs, and reproducibility from the emitted metadata.

use std::path::Path;
use std::process::{Command, Output};

fn samin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_samin"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should run")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_stock_scenario_reports_feasible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "default.cfg", "");
    let out = samin(&["solve", &cfg], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("E_total"), "{stdout}");
    assert!(stdout.contains("feasible       = true"), "{stdout}");
}

#[test]
fn solve_writes_plan_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "default.cfg", "[scenario]\nmasses_per_uav = 2\n");
    let out = samin(&["solve", &cfg, "--out", "run"], dir.path());
    assert!(out.status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path().join("run"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(entries.iter().any(|f| f.ends_with("_plan.csv")), "{entries:?}");
    assert!(entries.iter().any(|f| f.ends_with("_plan.meta.txt")), "{entries:?}");
    // Metadata embeds the full effective config.
    let meta = entries.iter().find(|f| f.ends_with(".meta.txt")).unwrap();
    let text = std::fs::read_to_string(dir.path().join("run").join(meta)).unwrap();
    assert!(text.contains("[system]") && text.contains("config_hash"));
}

#[test]
fn compare_exit_code_zero_on_dominance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "default.cfg", "[scenario]\nmasses_per_uav = 3\n");
    let out = samin(&["compare", &cfg], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    for scheme in ["stp", "pomt", "eos", "eacr"] {
        assert!(stdout.contains(scheme), "missing {scheme} in {stdout}");
    }
}

#[test]
fn compare_csv_format_matches_table_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "default.cfg", "[scenario]\nmasses_per_uav = 2\n");
    let table = samin(&["compare", &cfg, "--format", "table"], dir.path());
    let csv = samin(&["compare", &cfg, "--format", "csv"], dir.path());
    let table_text = String::from_utf8_lossy(&table.stdout);
    let csv_text = String::from_utf8_lossy(&csv.stdout);
    // Parse the stp row from both outputs and compare the energy.
    let table_e: f64 = table_text
        .lines()
        .find(|l| l.starts_with("stp"))
        .and_then(|l| l.split_whitespace().nth(1))
        .unwrap()
        .parse()
        .unwrap();
    let csv_e: f64 = csv_text
        .lines()
        .find(|l| l.starts_with("stp,"))
        .and_then(|l| l.split(',').nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!((table_e - csv_e).abs() <= 1e-6 * csv_e.abs().max(1.0));
}

#[test]
fn compare_flags_infeasible_scenario_with_exit_code_two() {
    // One ship parked far outside the UAV's service range.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.cfg",
        "[scenario]\nuav_positions = 125 125 100\nmasses_per_uav = 1\nplacement = explicit\n\
         mass_positions = 500 500 0\n",
    );
    let out = samin(&["compare", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1), "scenario build should fail loudly");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("beyond"), "{err}");
}

#[test]
fn sweep_writes_csv_meta_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.cfg",
        "[scenario]\nmasses_per_uav = 2\n[sweep]\nvariable = task_size\nvalues = 8 10 Mbit\n",
    );
    let out = samin(&["sweep", &cfg, "--out", "results"], dir.path());
    // 0 = clean, 2 = informational (some rows flagged infeasible).
    assert!(matches!(out.status.code(), Some(0 | 2)), "{}", String::from_utf8_lossy(&out.stderr));
    let names: Vec<String> = std::fs::read_dir(dir.path().join("results"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert!(names.iter().any(|f| f.ends_with("_sweep.csv")), "{names:?}");
    assert!(names.iter().any(|f| f.ends_with("_sweep.meta.txt")), "{names:?}");
    assert!(names.iter().any(|f| f.ends_with("_energy.svg")), "{names:?}");
    assert!(names.iter().any(|f| f.ends_with("_latency.svg")), "{names:?}");
    assert!(names.iter().any(|f| f.ends_with("_convergence.svg")), "{names:?}");
}

#[test]
fn sweep_then_plot_from_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.cfg",
        "[scenario]\nmasses_per_uav = 2\n[sweep]\nvariable = task_size\nvalues = 8 10 Mbit\n",
    );
    for out_dir in ["r1", "r2"] {
        let out = samin(&["sweep", &cfg, "--out", out_dir, "--no-plots"], dir.path());
        assert!(matches!(out.status.code(), Some(0 | 2)));
    }
    let csv_name = |d: &str| {
        std::fs::read_dir(dir.path().join(d))
            .unwrap()
            .map(|e| e.unwrap().path())
            .find(|p| p.extension().is_some_and(|e| e == "csv"))
            .unwrap()
    };
    let a = std::fs::read(csv_name("r1")).unwrap();
    let b = std::fs::read(csv_name("r2")).unwrap();
    assert_eq!(a, b, "same config and seed must give identical CSV bytes");

    // Re-render plots from the CSV twice; bytes must match.
    let csv = csv_name("r1");
    assert!(samin(&["plot", csv.to_str().unwrap(), "--out", "p1"], dir.path())
        .status
        .success());
    assert!(samin(&["plot", csv.to_str().unwrap(), "--out", "p2"], dir.path())
        .status
        .success());
    let read_all = |d: &str| -> Vec<(String, Vec<u8>)> {
        let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path().join(d))
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().into_string().unwrap(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        v.sort();
        v
    };
    assert_eq!(read_all("p1"), read_all("p2"));
}

#[test]
fn seed_env_var_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.cfg",
        "[scenario]\nmasses_per_uav = 2\nseed = 1\n[sweep]\nvariable = task_size\nvalues = 10 Mbit\n",
    );
    let run = |seed: Option<&str>, out: &str| {
        let mut command = Command::new(env!("CARGO_BIN_EXE_samin"));
        command
            .args(["sweep", &cfg, "--out", out, "--no-plots"])
            .current_dir(dir.path());
        if let Some(s) = seed {
            command.env("SAMIN_SEED", s);
        }
        let status = command.output().unwrap().status;
        assert!(matches!(status.code(), Some(0 | 2)));
        let path = std::fs::read_dir(dir.path().join(out))
            .unwrap()
            .map(|e| e.unwrap().path())
            .find(|p| p.extension().is_some_and(|e| e == "txt"))
            .unwrap();
        std::fs::read_to_string(path).unwrap()
    };
    let meta_default = run(None, "d");
    let meta_seeded = run(Some("99"), "s");
    assert!(meta_default.contains("seed = 1"));
    assert!(meta_seeded.contains("seed = 99"));
}

#[test]
fn oracle_regen_prints_fixture_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "default.cfg", "");
    let out = samin(&["oracle-regen", &cfg], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ratio_scan_min_x"), "{stdout}");
    assert!(stdout.contains("joint_grid_min_e"), "{stdout}");
}

#[test]
fn bad_config_reports_key_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "[task]\nsize = 1 Mbit\nsize = 2 Mbit\n");
    let out = samin(&["solve", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("task.size"), "{err}");
}
