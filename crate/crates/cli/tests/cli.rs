//! Black-box tests of the `qlogit` binary: flag handling, config-file
//! precedence, file formats, determinism, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlogit"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("summary exists"))
        .expect("summary parses as JSON")
}

/// Parse a two-column density CSV into (x, value) pairs.
fn read_density_csv(path: &Path) -> Vec<(f64, f64)> {
    let text = std::fs::read_to_string(path).expect("density file exists");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,density"), "header mismatch");
    lines
        .map(|line| {
            let (x, v) = line.split_once(',').expect("two columns");
            (
                x.parse().expect("x parses"),
                v.parse().expect("density parses"),
            )
        })
        .collect()
}

#[test]
fn nash_prints_the_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["nash"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).contains("x_hat = 0.5310"),
        "stdout: {}",
        stdout(&out)
    );
}

#[test]
fn nash_summary_is_written_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["nash"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!dir.path().join("summary.json").exists());

    let out = run_in(dir.path(), &["nash", "--summary", "nash.json"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = read_json(&dir.path().join("nash.json"));
    assert!((summary["x_hat"].as_f64().unwrap() - 0.531).abs() < 5e-4);
    assert_eq!(summary["sign_changes"].as_u64(), Some(1));
}

#[test]
fn simulate_outputs_are_deterministic() {
    let args = ["simulate", "--cells", "100", "--eta", "0.05"];
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = run_in(dir.path(), &args);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    for name in ["density.csv", "summary.json"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn density_csv_round_trips_as_a_probability_density() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["simulate", "--cells", "100", "--eta", "0.1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let rows = read_density_csv(&dir.path().join("density.csv"));
    assert_eq!(rows.len(), 100);
    let h = 1.0 / rows.len() as f64;
    let mut mass = 0.0;
    for (i, &(x, v)) in rows.iter().enumerate() {
        assert!((x - (i as f64 + 0.5) * h).abs() < 1e-15, "x out of order");
        assert!(v >= 0.0);
        mass += h * v;
    }
    assert!((mass - 1.0).abs() < 1e-12, "mass = {mass}");
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# reference run, smaller grid\ncells = 50\neta = 0.05\neta = 0.07 # last wins\n",
    )
    .unwrap();

    // config alone: both keys read from the file
    let out = run_in(dir.path(), &["simulate", "--config", "run.cfg"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["n_cells"].as_u64(), Some(50));
    assert_eq!(summary["eta"].as_f64(), Some(0.07));

    // explicit flag beats the file; untouched keys still come from it
    let out = run_in(
        dir.path(),
        &["simulate", "--config", "run.cfg", "--eta", "0.1"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["n_cells"].as_u64(), Some(50));
    assert_eq!(summary["eta"].as_f64(), Some(0.1));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "etaa=0.1\n").unwrap();
    let out = run_in(dir.path(), &["simulate", "--config", "bad.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("etaa"), "stderr: {}", stderr(&out));
}

#[test]
fn invalid_parameters_are_named_and_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["simulate", "--eta", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("eta"), "stderr: {}", stderr(&out));

    let out = run_in(dir.path(), &["steady", "--damping", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("damping"), "stderr: {}", stderr(&out));

    let out = run_in(dir.path(), &["simulate", "--init", "peak:1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("init"), "stderr: {}", stderr(&out));

    // usage errors from the parser itself also exit 2
    let out = run_in(dir.path(), &["simulate", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nonconvergence_exits_one_but_still_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", "--cells", "60", "--max-steps", "3"],
    );
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["converged"].as_bool(), Some(false));
    assert_eq!(summary["steps_taken"].as_u64(), Some(3));
    assert_eq!(read_density_csv(&dir.path().join("density.csv")).len(), 60);
}

#[test]
fn steady_and_simulate_agree_through_the_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "simulate", "--cells", "80", "--eta", "0.05", "--out", "a.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let out = run_in(
        dir.path(),
        &["steady", "--cells", "80", "--eta", "0.05", "--out", "b.csv"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let a = read_density_csv(&dir.path().join("a.csv"));
    let b = read_density_csv(&dir.path().join("b.csv"));
    let h = 1.0 / 80.0;
    let gap: f64 = a
        .iter()
        .zip(&b)
        .map(|(&(_, va), &(_, vb))| h * (va - vb).abs())
        .sum();
    assert!(gap <= 2e-10, "solver gap through files: {gap}");
}

#[test]
fn trajectory_records_strided_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "simulate",
            "--cells",
            "40",
            "--snapshot-every",
            "50",
            "--trajectory",
            "traj.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,density"));
    let mut times = Vec::new();
    for line in lines {
        let t: f64 = line.split(',').next().unwrap().parse().unwrap();
        if times.last() != Some(&t) {
            times.push(t);
        }
    }
    assert!(
        times.len() >= 2,
        "expected several snapshots, got {times:?}"
    );
    assert_eq!(times[0], 0.0, "first snapshot must be the initial state");
    assert!(times.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn trajectory_without_snapshot_stride_warns_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", "--cells", "40", "--trajectory", "traj.csv"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(!dir.path().join("traj.csv").exists());
    assert!(
        stderr(&out).contains("--snapshot-every"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn peak_initialization_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    // a single step barely moves the spike, so the mode stays at the seed
    let out = run_in(
        dir.path(),
        &[
            "simulate",
            "--cells",
            "50",
            "--init",
            "peak:0.9",
            "--max-steps",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let rows = read_density_csv(&dir.path().join("density.csv"));
    let mode = rows
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|&(x, _)| x)
        .unwrap();
    assert!((mode - 0.9).abs() < 0.02, "mode = {mode}");
}

#[test]
fn sweep_writes_one_table_row_per_job() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "sweep",
            "--cells",
            "50",
            "--etas",
            "0.1,0.05",
            "--qs",
            "1,1.2",
            "--out-dir",
            "jobs",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let table = std::fs::read_to_string(dir.path().join("jobs/summary.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(
        lines[0],
        "alpha,beta,gamma,q,eta,n_cells,dt,steps_taken,converged,l1_residual,\
         nash_x,mode_x,mean,variance,mass_near_nash,wasserstein_to_nash,entropy"
    );
    assert_eq!(lines.len(), 5, "header plus one row per job");

    for q in ["1", "1.2"] {
        for eta in ["0.1", "0.05"] {
            let name = format!("jobs/density_q{q}_eta{eta}.csv");
            assert_eq!(
                read_density_csv(&dir.path().join(&name)).len(),
                50,
                "{name} missing or truncated"
            );
        }
    }

    // classical runs concentrate harder than heavy-tailed ones at the
    // same noise level: check it end to end through the table
    let column =
        |line: &str, idx: usize| -> f64 { line.split(',').nth(idx).unwrap().parse().unwrap() };
    let mass_idx = 14; // mass_near_nash
    let classical = column(lines[2], mass_idx); // q=1,   eta=0.05
    let heavy = column(lines[4], mass_idx); //     q=1.2, eta=0.05
    assert!(
        classical > heavy,
        "expected sharper concentration at q = 1: {classical} vs {heavy}"
    );
}

#[test]
fn asymptotic_records_the_noise_free_regime() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["asymptotic", "--cells", "80", "--q", "1.2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["eta"].as_f64(), Some(0.0));
    assert_eq!(summary["command"].as_str(), Some("asymptotic"));
    assert!(summary["moment_gap"].as_f64().unwrap() < 1e-10);

    // classical settings cannot have a noise-free density
    let out = run_in(dir.path(), &["asymptotic", "--cells", "80"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains('q'), "stderr: {}", stderr(&out));
}

#[test]
fn verify_passes_on_the_reference_setup() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["verify", "--cells", "80", "--trials", "200", "--q", "1.2"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).contains("maximality verified"),
        "stdout: {}",
        stdout(&out)
    );
}
