//! End-to-end tests of the `wkam` binary: exit codes, artifact emission,
//! cache correctness and byte-level determinism across runs and thread
//! counts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use wkam_core::fixtures;
use wkam_core::io::write_curve_csv;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_wkam")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("wkam-cli-tests").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("WKAM_OUT")
        .output()
        .expect("binary runs")
}

const ADAPTED_SYSTEM: &str = r#"
[system]
family = "adapted"
dim = 1
# du = 0.1 cos(2πq), i.e. u = (0.1/2π) sin(2πq)
terms = ["0.015915494309189534 1 0 -1.5707963267948966"]

[grid]
n = 64

[kernel]
t = 0.5
winding = 2
substeps = 2
"#;

const FREE_SYSTEM: &str = r#"
[system]
family = "mechanical"
dim = 1
terms = []

[grid]
n = 64

[kernel]
t = 0.5
winding = 2
substeps = 2
"#;

#[test]
fn verify_adapted_graph_is_graph_exit_zero() {
    let dir = tmp("verify-adapted");
    write_curve_csv(&dir.join("curve.csv"), &fixtures::adapted_graph_curve(512)).unwrap();
    let config = write_config(
        &dir,
        "run.toml",
        &format!("{ADAPTED_SYSTEM}\n[curve]\npath = \"curve.csv\"\n"),
    );
    let out_dir = dir.join("out");
    let output = run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(output.status.code(), Some(0), "stdout: {stdout}");
    assert!(stdout.contains("verdict: GRAPH"));
    let jsonl = std::fs::read_to_string(out_dir.join("report.jsonl")).unwrap();
    let report = wkam_core::VerifierReport::from_jsonl(&jsonl).unwrap();
    assert_eq!(report.verdict, wkam_core::Verdict::Graph);
    assert!(out_dir.join("report.txt").exists());
}

#[test]
fn verify_circle_is_not_exact_exit_two() {
    let dir = tmp("verify-circle");
    write_curve_csv(&dir.join("curve.csv"), &fixtures::circle(0.3, 512)).unwrap();
    let config = write_config(
        &dir,
        "run.toml",
        &format!("{FREE_SYSTEM}\n[curve]\npath = \"curve.csv\"\n"),
    );
    let out_dir = dir.join("out");
    let output = run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("verdict: NOT_EXACT"), "stdout: {stdout}");
}

#[test]
fn critical_value_free_prints_zero() {
    let dir = tmp("critical-free");
    let config = write_config(&dir, "run.toml", FREE_SYSTEM);
    let out_dir = dir.join("out");
    let output = run(&[
        "critical-value",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    let c: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("c="))
        .expect("c= line")
        .parse()
        .unwrap();
    assert!(c.abs() <= 1e-3, "c = {c}");
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tmp("determinism");
    let config = write_config(&dir, "run.toml", ADAPTED_SYSTEM);
    let outs: Vec<PathBuf> = ["a", "b", "c"].iter().map(|s| dir.join(s)).collect();
    for (out, threads) in outs.iter().zip(["1", "4", "2"]) {
        let output = run(&[
            "weak-kam",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    let read = |p: &Path| std::fs::read(p.join("weak_kam.csv")).unwrap();
    let a = read(&outs[0]);
    assert_eq!(a, read(&outs[1]), "thread count changed the bytes");
    assert_eq!(a, read(&outs[2]), "rerun changed the bytes");
}

#[test]
fn kernel_cache_reproduces_fresh_barrier_bit_exactly() {
    let dir = tmp("cache");
    let config = write_config(&dir, "run.toml", ADAPTED_SYSTEM);
    let cache = dir.join("kernel.bin");
    let fresh_out = dir.join("fresh");
    let cached_out = dir.join("cached");

    let output = run(&[
        "kernel",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.join("k").to_str().unwrap(),
        "--kernel-cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(cache.exists());

    for (out, use_cache) in [(&fresh_out, false), (&cached_out, true)] {
        let mut args = vec![
            "barrier",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ];
        if use_cache {
            args.extend(["--kernel-cache", cache.to_str().unwrap()]);
        }
        let output = run(&args);
        assert_eq!(output.status.code(), Some(0));
    }
    for artifact in ["barrier.csv", "barrier.bin", "aubry.csv"] {
        let a = std::fs::read(fresh_out.join(artifact)).unwrap();
        let b = std::fs::read(cached_out.join(artifact)).unwrap();
        assert_eq!(a, b, "{artifact} differs between cached and fresh runs");
    }
}

#[test]
fn mismatched_cache_is_rejected() {
    let dir = tmp("cache-mismatch");
    let config = write_config(&dir, "run.toml", ADAPTED_SYSTEM);
    let cache = dir.join("kernel.bin");
    let output = run(&[
        "kernel",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.join("k").to_str().unwrap(),
        "--kernel-cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));

    // same cache, different substep count in the config
    let other = write_config(
        &dir,
        "other.toml",
        &ADAPTED_SYSTEM.replace("substeps = 2", "substeps = 4"),
    );
    let output = run(&[
        "critical-value",
        "--config",
        other.to_str().unwrap(),
        "--out",
        dir.join("o").to_str().unwrap(),
        "--kernel-cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("do not match"), "stderr: {stderr}");
}

#[test]
fn selector_emits_phi_csv() {
    let dir = tmp("selector");
    write_curve_csv(&dir.join("fold.csv"), &fixtures::fold_curve(1024)).unwrap();
    let config = write_config(
        &dir,
        "run.toml",
        &format!(
            "{}\n[curve]\npath = \"fold.csv\"\n",
            FREE_SYSTEM.replace("n = 64", "n = 128")
        ),
    );
    let out_dir = dir.join("out");
    let output = run(&[
        "selector",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--plot",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let phi = std::fs::read_to_string(out_dir.join("phi.csv")).unwrap();
    let mut lines = phi.lines();
    assert_eq!(lines.next(), Some("node,q,phi,dphi,branch_count"));
    assert_eq!(lines.count(), 128);
    assert!(
        phi.lines().any(|l| l.ends_with(",3")),
        "fold branches missing"
    );
    assert!(out_dir.join("selector.svg").exists());
    let svg = std::fs::read_to_string(out_dir.join("selector.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn flow_and_legendre_emit_csv() {
    let dir = tmp("flow");
    let config = write_config(&dir, "run.toml", FREE_SYSTEM);
    let out_dir = dir.join("out");
    let output = run(&[
        "flow",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--q0",
        "0.25",
        "--p0",
        "0.5",
        "--t",
        "2.0",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let flow = std::fs::read_to_string(out_dir.join("flow.csv")).unwrap();
    assert!(flow.starts_with("t,q,p,energy\n"));
    // free flow keeps p = 0.5 on every row
    assert!(flow
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(2) == Some("0.5")));

    let output = run(&[
        "legendre",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--vsteps",
        "5",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let legendre = std::fs::read_to_string(out_dir.join("legendre.csv")).unwrap();
    assert!(legendre.starts_with("q,v,L\n"));
    assert_eq!(legendre.lines().count(), 1 + 64 * 5);
}

#[test]
fn wkam_out_env_is_respected() {
    let dir = tmp("env-out");
    let config = write_config(&dir, "run.toml", FREE_SYSTEM);
    let out_dir = dir.join("env-dir");
    let output = Command::new(bin())
        .args(["critical-value", "--config", config.to_str().unwrap()])
        .env("WKAM_OUT", &out_dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(out_dir.join("critical_value.jsonl").exists());
}

#[test]
fn config_errors_exit_one() {
    let dir = tmp("bad-config");
    // n not a power of two
    let config = write_config(&dir, "bad.toml", &FREE_SYSTEM.replace("n = 64", "n = 100"));
    let output = run(&["critical-value", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("power of two"));

    // negative tolerance
    let config = write_config(
        &dir,
        "bad2.toml",
        &format!("{FREE_SYSTEM}\n[tolerances]\nexact = -1.0\n"),
    );
    let output = run(&["critical-value", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));

    // missing config flag
    let output = run(&["critical-value"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn weak_kam_plot_is_emitted() {
    let dir = tmp("plot");
    let config = write_config(&dir, "run.toml", ADAPTED_SYSTEM);
    let out_dir = dir.join("out");
    let output = run(&[
        "weak-kam",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--plot",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let svg = std::fs::read_to_string(out_dir.join("weak_kam.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}
