use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};
use sunqps::kernels::SOrder;
use sunqps::werner::{werner_closed_form, werner_state, WernerParams};
use sunqps::PhasePoint;

fn sunqps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sunqps"))
        .args(args)
        .env_remove("SUNQPS_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_state(path: &Path, rho: &sunqps::CMatrix) {
    let f = std::fs::File::create(path).unwrap();
    sunqps::io::write_density(f, rho).unwrap();
}

#[test]
fn generators_json() {
    let out = sunqps(&["generators", "--n", "3", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dim"], 3);
    let g = v["generators"].as_array().unwrap();
    assert_eq!(g.len(), 8);
    assert_eq!(g[1]["matrix"][0][1], serde_json::json!([0.0, -1.0]));
    assert_eq!(g[1]["matrix"][1][0], serde_json::json!([0.0, 1.0]));
    let r3 = 1.0 / 3f64.sqrt();
    assert_eq!(g[7]["k"], 8);
    assert_eq!(g[7]["matrix"][2][2][0].as_f64().unwrap(), -2.0 * r3);
}

#[test]
fn verify_passes_for_spin_one() {
    let out = sunqps(&["verify", "--n", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["residual"].as_f64().unwrap() < 1e-10, "{c}");
    }
}

#[test]
fn verify_failure_exits_2() {
    let out = sunqps(&["verify", "--n", "3", "--grid-theta", "2", "--grid-phi", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn werner_distribution_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("werner_0.5.json");
    let params = WernerParams::new(0.5).unwrap();
    write_state(&path, werner_state(params).matrix());
    let out = sunqps(&[
        "distribution", "--n", "4", "--m", "1", "--s", "0",
        "--state", path.to_str().unwrap(),
        "--theta", "0.3,0.7,1.1", "--phi", "0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let value = json(&out)["value"].as_f64().unwrap();
    let p = PhasePoint::new(vec![0.3, 0.7, 1.1], vec![0.0; 3]).unwrap();
    let expect = werner_closed_form(params, SOrder::Wigner, &p).unwrap();
    assert!((value - expect).abs() < 1e-12);
}

#[test]
fn recover_from_exact_and_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("rho.json");
    let rho = sunqps::verify::probe_state(3);
    write_state(&state, rho.matrix());
    let state_s = state.to_str().unwrap();

    let exact = dir.path().join("exact.json");
    let out = sunqps(&[
        "recover", "--n", "2", "--m", "2", "--s", "-1", "--samples-from", "exact",
        "--state", state_s, "--out", exact.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let back = sunqps::io::read_density(std::fs::File::open(&exact).unwrap()).unwrap();
    assert!(sunqps::linalg::frobenius_distance(back.matrix(), rho.matrix()) < 1e-8);

    let samples = dir.path().join("samples.csv");
    let out = sunqps(&[
        "distribution", "--n", "2", "--m", "2", "--s", "0", "--state", state_s,
        "--grid", "--out", samples.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let from_file = dir.path().join("file.json");
    let out = sunqps(&[
        "recover", "--n", "2", "--m", "2", "--s", "0", "--samples-from", "file",
        "--samples", samples.to_str().unwrap(), "--out", from_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let back = sunqps::io::read_density(std::fs::File::open(&from_file).unwrap()).unwrap();
    assert!(sunqps::linalg::frobenius_distance(back.matrix(), rho.matrix()) < 1e-8);

    let wrong_s = sunqps(&[
        "recover", "--n", "2", "--m", "2", "--s", "1", "--samples-from", "file",
        "--samples", samples.to_str().unwrap(),
    ]);
    assert_eq!(wrong_s.status.code(), Some(1));
}

#[test]
fn validation_errors_exit_1() {
    assert_eq!(sunqps(&["kernel", "--n", "2", "--s", "3", "--theta", "0.1", "--phi", "0"]).status.code(), Some(1));
    assert_eq!(sunqps(&["kernel", "--n", "3", "--s", "0", "--theta", "0.1", "--phi", "0"]).status.code(), Some(1));
    assert_eq!(sunqps(&["kernel", "--n", "2", "--s", "0", "--theta", "2.0", "--phi", "0"]).status.code(), Some(1));
    assert_eq!(sunqps(&["kernel", "--n", "2", "--m", "3", "--s", "0", "--theta", "0.1", "--phi", "0"]).status.code(), Some(1));
    assert_eq!(sunqps(&["generators", "--n", "1"]).status.code(), Some(1));
    assert_eq!(sunqps(&["werner-scan", "--s", "0", "--gamma", "1.5"]).status.code(), Some(1));
    assert_eq!(sunqps(&["no-such-command"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
    let out = sunqps(&[
        "distribution", "--n", "2", "--s", "0", "--state", bad.to_str().unwrap(),
        "--theta", "0.1", "--phi", "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));

    let missing = sunqps(&[
        "distribution", "--n", "2", "--s", "0", "--state", "/nonexistent/rho.json",
        "--theta", "0.1", "--phi", "0",
    ]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn kernel_conversion_flag() {
    let direct = sunqps(&["kernel", "--n", "2", "--m", "2", "--s", "-1", "--theta", "0.4", "--phi", "1.0"]);
    let converted = sunqps(&[
        "kernel", "--n", "2", "--m", "2", "--s", "-1", "--convert-from", "1",
        "--theta", "0.4", "--phi", "1.0",
    ]);
    assert_eq!(converted.status.code(), Some(0));
    let a = json(&direct);
    let b = json(&converted);
    for i in 0..3 {
        for j in 0..3 {
            for c in 0..2 {
                let x = a["matrix"][i][j][c].as_f64().unwrap();
                let y = b["matrix"][i][j][c].as_f64().unwrap();
                assert!((x - y).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn werner_scan_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let out = sunqps(&[
        "werner-scan", "--s", "-1", "--gamma", "0.9", "--phi-case", "anti",
        "--resolution", "8", "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta1,theta2,theta3,value,negative"));
    assert_eq!(lines.count(), 512);
    assert!(text.lines().skip(1).any(|l| l.ends_with(",1")));

    let q = sunqps(&["werner-threshold", "--s", "1"]);
    assert_eq!(String::from_utf8_lossy(&q.stdout).trim(), "no threshold");
    let p = sunqps(&["werner-threshold", "--s", "-1", "--tol", "1e-3"]);
    let g: f64 = String::from_utf8_lossy(&p.stdout).trim().parse().unwrap();
    assert!((0.0..=1.0).contains(&g));
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"n": 3, "m": 1}"#).unwrap();
    let out = sunqps(&["--config", cfg.to_str().unwrap(), "generators"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dim"], 3);
    let out = sunqps(&["generators", "--config", cfg.to_str().unwrap(), "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dim"], 2);

    std::fs::write(&cfg, "{\"n\": ").unwrap();
    assert_eq!(sunqps(&["--config", cfg.to_str().unwrap(), "generators"]).status.code(), Some(1));
}

#[test]
fn threads_flag_and_env() {
    let a = sunqps(&["--threads", "2", "verify", "--n", "2"]);
    assert_eq!(a.status.code(), Some(0));
    let b = Command::new(env!("CARGO_BIN_EXE_sunqps"))
        .args(["verify", "--n", "2"])
        .env("SUNQPS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn outputs_are_deterministic() {
    let args = ["verify", "--n", "3", "--m", "2"];
    assert_eq!(sunqps(&args).stdout, sunqps(&args).stdout);
}

#[test]
fn help_exits_0() {
    let out = sunqps(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("werner-threshold"));
}
