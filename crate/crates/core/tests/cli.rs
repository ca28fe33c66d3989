use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn capillar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capillar")).args(args).output().unwrap()
}

fn run_in(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    capillar(&args)
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Copy of a shipped config with one block replaced.
fn patched(name: &str, key: &str, value: Value, dir: &Path) -> PathBuf {
    let mut cfg: Value = serde_json::from_str(&fs::read_to_string(config(name)).unwrap()).unwrap();
    cfg[key] = value;
    let path = dir.join(format!("patched_{key}.json"));
    fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
    path
}

#[test]
fn run_writes_snapshots_monitors_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in("run", &config("sod_gas.json"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    assert!(names.contains(&"sod_step00000000.csv".to_string()));
    assert!(names.contains(&"sod_monitors.csv".to_string()));
    assert!(names.contains(&"sod_summary.json".to_string()));

    let snap = fs::read_to_string(dir.path().join("sod_step00000000.csv")).unwrap();
    let mut lines = snap.lines();
    assert_eq!(lines.next().unwrap(), "x,rho,u,y,alpha,a_i,w,n,s,s1,s2,p,p_hat,E");
    assert_eq!(lines.count(), 200);
    let mon = fs::read_to_string(dir.path().join("sod_monitors.csv")).unwrap();
    assert_eq!(mon.lines().next().unwrap(), "t,mass,y_mass,momentum,energy,ai_si,clamp_count");

    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sod_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "completed");
    assert_eq!(summary["config"]["grid"]["n_cells"], 200);
    assert_eq!(stdout_json(&out), summary);
}

#[test]
fn cfl_above_one_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = patched("sod_gas.json", "time", serde_json::json!({"cfl": 1.5, "t_end": 1e-4}), dir.path());
    let out = run_in("run", &cfg, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cfl"));
}

#[test]
fn zero_end_time_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = patched("sod_gas.json", "time", serde_json::json!({"cfl": 0.5, "t_end": 0.0}), dir.path());
    let out = run_in("run", &cfg, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t_end"));
}

#[test]
fn unknown_key_and_missing_file_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = patched("sod_gas.json", "colour", Value::from("blue"), dir.path());
    let out = run_in("run", &cfg, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    let out = run_in("eigen", &dir.path().join("absent.json"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_block_names_it() {
    let out = capillar(&["equilibrium", config("eigen_pure.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("equilibrium"));
}

#[test]
fn check_thermo_passes_and_echoes_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in("check-thermo", &config("eigen_bubbly.json"), dir.path(), &["--tol", "2e-6", "--h", "1e-5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["tol"], 2e-6);
    assert_eq!(report["h"], 1e-5);
    assert!(dir.path().join("capillar_check_thermo.json").exists());
}

#[test]
fn check_thermo_rejects_flat_interface_eos() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = patched(
        "eigen_bubbly.json",
        "interface",
        serde_json::json!({"gamma0": 0.072, "T_ref_i": 300.0, "theta": 0.0}),
        dir.path(),
    );
    let out = run_in("check-thermo", &cfg, dir.path(), &[]);
    assert_ne!(out.status.code(), Some(0));
    let all = format!("{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
    assert!(all.to_lowercase().contains("degenerate"), "{all}");
}

#[test]
fn eigen_of_pure_gas_is_euler() {
    let out = capillar(&["eigen", config("eigen_pure.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let c = report["analytic"]["c_eff"].as_f64().unwrap();
    // air at rho = 1.2, s = s(rho, 1e5 Pa)
    let expected = (1.4f64 * 1e5 / 1.2).sqrt();
    assert!((c - expected).abs() < 1e-6 * expected, "{c} vs {expected}");
    let eig: Vec<f64> = report["analytic"]["eigenvalues"].as_array().unwrap().iter().map(|e| e["re"].as_f64().unwrap()).collect();
    assert_eq!(eig.len(), 10);
    assert!((eig[0] - (20.0 - c)).abs() < 1e-9 * c);
    assert!((eig[9] - (20.0 + c)).abs() < 1e-9 * c);
    assert!(eig[1..9].iter().all(|l| (l - 20.0).abs() < 1e-12));
    assert_eq!(report["hyperbolic_analytic"], true);
    assert!(report["relative_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn equilibrium_report_carries_young_laplace_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in("equilibrium", &config("bubble_equilibrium.json"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    for key in ["problem", "solution", "phases", "grand_potential_slope", "young_laplace"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert!(report["young_laplace"]["relative_residual"].as_f64().unwrap() < 1e-8);
    let p1 = report["phases"]["p1"].as_f64().unwrap();
    let p2 = report["phases"]["p2"].as_f64().unwrap();
    assert!(p1 > p2);
    let on_disk: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("capillar_equilibrium.json")).unwrap()).unwrap();
    assert_eq!(on_disk, report);
}

#[test]
fn bad_subcommand_is_rejected_by_the_parser() {
    let out = capillar(&["simulate", config("sod_gas.json").to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
}
