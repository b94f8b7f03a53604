//! End-to-end tests of the binary: artifact layout, determinism, and the
//! documented exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fractalfn")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fractalfn-cli-{}-{name}", std::process::id()));
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
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn render_is_deterministic_and_has_expected_shape() {
    let dir = scratch("render");
    let config = write_config(
        &dir,
        "cfg.json",
        r#"{
            "seed": { "builtin": "fig1" },
            "partition": { "uniform": 10 },
            "scaling": { "uniform": 0.9 },
            "base": { "multiply_profile": { "c": 1.0 } },
            "grid_m": 4097,
            "tol": 1e-6,
            "render": { "svg": true }
        }"#,
    );
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    for out in [&out_a, &out_b] {
        let r = run(&[
            "render",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let csv_a = std::fs::read(out_a.join("graph.csv")).unwrap();
    let csv_b = std::fs::read(out_b.join("graph.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "render output must be byte-identical");
    let text = String::from_utf8(csv_a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,f,b,f_alpha");
    assert_eq!(text.lines().count(), 4098); // header + grid rows
    assert!(out_a.join("graph.svg").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn zero_scaling_render_reproduces_seed_column() {
    let dir = scratch("zero");
    let config = write_config(
        &dir,
        "cfg.json",
        r#"{
            "seed": { "builtin": "sin" },
            "partition": { "uniform": 8 },
            "scaling": { "uniform": 0.0 },
            "base": { "bernstein": 6 },
            "grid_m": 1025
        }"#,
    );
    let r = run(&[
        "render",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(r.status.success());
    let text = std::fs::read_to_string(dir.join("graph.csv")).unwrap();
    for line in text.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(
            (cells[1] - cells[3]).abs() <= 1e-12,
            "f and f_alpha differ: {line}"
        );
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn quotient_mode_emits_second_csv() {
    let dir = scratch("quotient");
    let config = write_config(
        &dir,
        "cfg.json",
        r#"{
            "seed": { "builtin": "fig1" },
            "partition": { "uniform": 10 },
            "scaling": { "uniform": 0.9 },
            "base": { "multiply_profile": { "c": 1.0 } },
            "grid_m": 4097,
            "tol": 1e-6,
            "render": { "quotient": true }
        }"#,
    );
    let r = run(&[
        "render",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(r.status.success());
    let text = std::fs::read_to_string(dir.join("quotient.csv")).unwrap();
    assert!(text.starts_with("x,p_alpha,q_alpha,quotient"));
    // perturbed denominator stays positive
    for line in text.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[2] > 0.0, "q_alpha not positive: {line}");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn dimension_reports_closed_form() {
    let dir = scratch("dim");
    let config = write_config(
        &dir,
        "cfg.json",
        r#"{
            "seed": { "builtin": "fig1" },
            "partition": { "uniform": 10 },
            "scaling": { "uniform": 0.9 },
            "base": { "multiply_profile": { "c": 1.0 } },
            "grid_m": 4097,
            "tol": 1e-6,
            "dimension": { "estimate": false }
        }"#,
    );
    let r = run(&[
        "dimension",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(r.status.success());
    let body: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    let d = body["report"]["theoretical_d"].as_f64().unwrap();
    assert!((d - (1.0 + 9.0f64.log10())).abs() <= 1e-10, "D = {d}");
    assert!(body["report"]["estimator_d"].is_null());
    assert!(dir.join("dimension.json").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_config_passes_with_zero_lhs_on_smoke_config() {
    let dir = scratch("verify-smoke");
    let config = write_config(
        &dir,
        "cfg.json",
        r#"{
            "seed": { "builtin": "sin" },
            "partition": { "uniform": 8 },
            "scaling": { "uniform": 0.0 },
            "base": { "bernstein": 6 },
            "grid_m": 1025
        }"#,
    );
    let r = run(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let body: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(body["report"]["passed"], true);
    for check in body["report"]["checks"].as_array().unwrap() {
        if check["name"] == "perturbation_bound" || check["name"] == "self_referential_residual" {
            assert_eq!(check["lhs"].as_f64().unwrap(), 0.0, "{check}");
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn minimax_table_columns_satisfy_bound() {
    let dir = scratch("minimax");
    let config = write_config(
        &dir,
        "cfg.json",
        r#"{
            "seed": { "builtin": "sin" },
            "partition": { "uniform": 8 },
            "scaling": { "uniform": 0.3 },
            "base": { "multiply_profile": { "c": 1.0 } },
            "grid_m": 4097,
            "tol": 1e-8,
            "minimax": { "m": 2, "n": 1 }
        }"#,
    );
    let r = run(&[
        "minimax",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stdout)
    );
    let body: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    let rows = body["rows"].as_array().unwrap();
    assert!(rows.len() >= 6);
    for row in rows {
        let witness = row["witness"].as_f64().unwrap();
        let bound = row["fractal_bound"].as_f64().unwrap();
        assert!(witness <= bound + 1e-4, "{row}");
        if row["name"] == "trig_member" {
            assert!(row["e_proxy"].as_f64().unwrap() <= 1e-9);
        }
        if row["name"] == "next_cosine" {
            assert!((row["e_proxy"].as_f64().unwrap() - 1.0).abs() <= 1e-3);
        }
    }
    assert!(dir.join("minimax.csv").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn exit_codes_cover_config_and_numeric_failures() {
    let dir = scratch("exits");
    // unknown key -> 2
    let bad_key = write_config(
        &dir,
        "bad_key.json",
        r#"{"seed": {"builtin": "sin"}, "partition": {"uniform": 8},
            "scaling": {"uniform": 0.3}, "base": {"bernstein": 6}, "nope": 1}"#,
    );
    let r = run(&[
        "render",
        "--config",
        bad_key.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(2));

    // admissible but out-of-range scaling -> 2, with a structured message
    let bad_alpha = write_config(
        &dir,
        "bad_alpha.json",
        r#"{"seed": {"builtin": "sin"}, "partition": {"uniform": 8},
            "scaling": {"uniform": 1.5}, "base": {"bernstein": 6}}"#,
    );
    let r = run(&[
        "render",
        "--config",
        bad_alpha.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(2));
    let body: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(body["error"]["kind"], "config");

    // base endpoint mismatch -> 2
    let mismatch = write_config(
        &dir,
        "mismatch.json",
        r#"{"seed": {"builtin": "sin"}, "partition": {"uniform": 4},
            "scaling": {"uniform": 0.5},
            "base": {"explicit": [9.0, 0.0, 0.0, 0.0, 9.0]}, "grid_m": 257}"#,
    );
    let r = run(&[
        "verify",
        "--config",
        mismatch.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(2));

    // engine non-convergence -> 3 (non-dyadic nodes force interpolating
    // reads, so the contraction genuinely runs at rate 0.9999)
    let stiff = write_config(
        &dir,
        "stiff.json",
        r#"{"seed": {"builtin": "sin"}, "interval": [-3.141592653589793, 3.141592653589793],
            "partition": {"nodes": [-3.141592653589793, -1.1, 0.7, 3.141592653589793]},
            "scaling": {"uniform": 0.999}, "base": {"bernstein": 4},
            "grid_m": 257, "tol": 1e-9, "max_iter": 20}"#,
    );
    let r = run(&[
        "render",
        "--config",
        stiff.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        r.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&r.stdout)
    );
    let body: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(body["error"]["kind"], "non_convergence");

    // missing config file -> 4
    let r = run(&[
        "render",
        "--config",
        dir.join("absent.json").to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(4));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_suite_output_is_thread_count_invariant() {
    let dir = scratch("threads");
    let mut bodies = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.join(format!("t{threads}"));
        let r = Command::new(bin())
            .env("FRACTALFN_THREADS", threads)
            .args(["verify", "--suite", "full", "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(r.status.code(), Some(0));
        bodies.push((r.stdout, std::fs::read(out.join("verify.json")).unwrap()));
    }
    assert_eq!(bodies[0], bodies[1], "suite output depends on thread count");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn outputs_embed_hash_and_version() {
    let dir = scratch("hash");
    let config = write_config(
        &dir,
        "cfg.json",
        r#"{"seed": {"builtin": "sin"}, "partition": {"uniform": 8},
            "scaling": {"uniform": 0.2}, "base": {"bernstein": 6}, "grid_m": 1025}"#,
    );
    let r = run(&[
        "render",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    let body: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(body["version"], env!("CARGO_PKG_VERSION"));
    let hash = body["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 16);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    let _ = std::fs::remove_dir_all(&dir);
}
