use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seminorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn seminorm_values() {
    let s = data("counterexample.csv");
    let out = run(&["seminorm", "--input", path(&s), "--kind", "metric", "--p", "inf"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-7);
    assert_eq!(v["method"], "lp");
    assert!(v["tolerance"].is_number());
    assert!(v.get("seed").is_some());

    let out = run(&["seminorm", "--input", path(&s), "--kind", "coe"]);
    assert!((json(&out)["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);

    let c = data("consensus.csv");
    for (kind, p) in [("metric", "1"), ("metric", "2"), ("metric", "inf"), ("induced", "2"), ("induced", "inf"), ("coe", "inf")] {
        let out = run(&["seminorm", "--input", path(&c), "--kind", kind, "--p", p]);
        assert_eq!(code(&out), 0, "{kind} {p}");
        assert!(json(&out)["value"].as_f64().unwrap() < 1e-12, "{kind} {p}");
    }
}

#[test]
fn sampling_reports_seed() {
    let s = data("counterexample.csv");
    let out = run(&["seminorm", "--input", path(&s), "--kind", "induced", "--p", "1", "--trials", "500", "--seed", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["method"], "sampling_lower_bound");
    assert_eq!(v["seed"], 4);
    assert_eq!(v["trials"], 500);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "0.5,0.5\n0.5,zz\n").unwrap();
    let out = run(&["seminorm", "--input", path(&bad), "--kind", "coe"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 1"));

    let uneven = dir.path().join("uneven.csv");
    std::fs::write(&uneven, "1,0\n0,2\n").unwrap();
    let out = run(&["seminorm", "--input", path(&uneven), "--kind", "induced", "--p", "inf"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("row"));

    let out = run(&["certify", "--input", path(&uneven), "--seminorm", "metric-inf"]);
    assert_eq!(code(&out), 2);
    let out = run(&["seminorm", "--input", "/nonexistent/m.csv", "--kind", "coe"]);
    assert_eq!(code(&out), 2);
    let out = run(&["seminorm", "--kind", "coe"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn certify_exit_codes() {
    let s = data("counterexample.csv");
    let out = run(&["certify", "--input", path(&s), "--seminorm", "metric-inf"]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    let x: Vec<f64> = v["witnesses"][0]["x"].as_array().unwrap().iter().map(|e| e.as_f64().unwrap()).collect();
    for (a, b) in x.iter().zip([0.0, 1.0, 1.0, 1.0, 1.0, 0.0]) {
        assert!((a - b).abs() <= 1e-8);
    }
    assert_eq!(v["class"]["scrambling"], true);

    let out = run(&["certify", "--input", path(&s), "--seminorm", "induced-inf"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["certificates"][0]["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["witnesses"][0]["type"], "sign_vector");

    let out = run(&["certify", "--input", path(&data("identity.csv")), "--seminorm", "induced-inf"]);
    assert_eq!(code(&out), 3);
    let out = run(&["certify", "--input", path(&data("positive_a.json")), "--seminorm", "metric-inf"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["witnesses"][0]["type"], "strictly_feasible");
}

#[test]
fn classify_report() {
    let out = run(&["classify", "--input", path(&data("identity.csv"))]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["class"]["scrambling"], false);
    assert_eq!(v["class"]["rooted"], false);
}

#[test]
fn simulate_counterexample_passes() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let summary = dir.path().join("summary.json");
    let s = data("counterexample.csv");
    let out = run(&[
        "simulate", "--ensemble", path(&s), "--seminorm", "induced-inf", "--steps", "40",
        "--out", trace.to_str().unwrap(), "--summary", summary.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!((v["lambda"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().next().unwrap(), "step,product_seminorm,residual,r_i,lambda_pow_i");
    assert_eq!(text.lines().count(), 41);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(saved["rate"]["envelope_ok"], true);
}

#[test]
fn simulate_identity_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let i = data("identity.csv");
    let out = run(&["simulate", "--ensemble", path(&i), "--out", trace.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["refused"], true);
    assert!(!trace.exists());
    let out = run(&["simulate", "--ensemble", path(&i), "--out", trace.to_str().unwrap(), "--force"]);
    assert_eq!(code(&out), 3);
    assert!(trace.exists());
}

#[test]
fn simulate_positive_pair_from_directory() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["positive_a.json", "positive_b.json"] {
        std::fs::copy(data(name), dir.path().join(name)).unwrap();
    }
    let out = run(&[
        "simulate", "--ensemble", dir.path().to_str().unwrap(), "--seminorm", "metric-inf",
        "--schedule", "random", "--seed", "7", "--steps", "60", "--initial", "1,-1,0.5,2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["ensemble"].as_array().unwrap().len(), 2);
}

#[test]
fn counterexample_command() {
    let out = run(&["counterexample"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("[ok")).count(), 5);

    let out = run(&["counterexample", "--perturb", "0.01", "--json"]);
    assert_eq!(code(&out), 5);
    assert_eq!(json(&out)["failed_step"], 4);

    let out = run(&["counterexample", "--tau-threshold", "0.5", "--json"]);
    assert_eq!(code(&out), 5);
    assert_eq!(json(&out)["failed_step"], 3);
}

#[test]
fn counterexample_matrix_round_trips() {
    let out = run(&["counterexample", "--json"]);
    let v = json(&out);
    let rows = v["matrix"]["rows"].as_array().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    std::fs::write(&file, serde_json::to_string(&v["matrix"]).unwrap()).unwrap();
    let out = run(&["seminorm", "--input", file.to_str().unwrap(), "--kind", "coe"]);
    assert!((json(&out)["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.as_array().unwrap().iter().enumerate() {
            let expect = if e.as_f64().unwrap() == 0.0 { 0.0 } else { 1.0 / 3.0 };
            assert!((e.as_f64().unwrap() - expect).abs() <= 1e-15, "({i}, {j})");
        }
    }
}

#[test]
fn equivalence_same_seminorm() {
    let out = run(&["equivalence", "--a", "metric-2", "--b", "metric-2", "--samples", "50", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["c_min"], 1.0);
    assert_eq!(v["c_max"], 1.0);
    assert_eq!(v["seed"], 0);
}
