use assert_cmd::Command;

fn cli() -> Command {
    Command::cargo_bin("cuspweyl").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = cli().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn lattice_constant_of_the_integers() {
    let text = stdout(&["lattice-const", "--lattice", "Z1"]);
    let row = text.lines().nth(2).unwrap();
    let c1: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((c1 - 0.3068528194).abs() < 1e-10);
    assert!(text.starts_with("# "));
    assert!(text.lines().nth(1).unwrap().starts_with("lattice,d,"));
}

#[test]
fn unknown_flag_is_a_config_error() {
    cli().args(["lattice-const", "--bogus"]).assert().code(2);
    cli().args(["no-such-command"]).assert().code(2);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"lattice": "Z1", "extra": 1}"#).unwrap();
    cli().args(["lattice-const", "--config", path.to_str().unwrap()]).assert().code(2);
    std::fs::write(&path, r#"{"lattice": "Z1", "seed": 3, "format": "json"}"#).unwrap();
    let out = cli().args(["lattice-const", "--config", path.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"][0]["lattice"], "Z1");
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"lattice": "Z2"}"#).unwrap();
    let text = stdout(&["lattice-const", "--config", path.to_str().unwrap(), "--lattice", "Z1"]);
    assert!(text.lines().nth(2).unwrap().starts_with("Z1,"));
}

#[test]
fn numerical_failure_exits_with_three() {
    let out = cli().args(["parametrix", "--profile", "sphere", "--r-max", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let diag: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "numerical");
}

#[test]
fn output_is_deterministic() {
    let args = ["count-zeros", "--function", "random", "--cases", "1", "--pairs", "3", "--seed", "7"];
    assert_eq!(stdout(&args), stdout(&args));
    let fit = ["weyl-fit", "--draws", "2", "--samples", "100", "--seed", "1"];
    assert_eq!(stdout(&fit), stdout(&fit));
}

#[test]
fn count_zeros_demo_matches() {
    let text = stdout(&["count-zeros", "--function", "blaschke-demo", "--lemma", "big-rect"]);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].ends_with(",true"));
}

#[test]
fn out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phase.csv");
    cli().args(["phase", "--t", "1,2,3", "--out", path.to_str().unwrap()]).assert().success();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn weyl_fit_reads_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.csv");
    let mut body = String::from("# synthetic\nT,value\n");
    for i in 0..30 {
        let t = 10f64 * 1.2f64.powi(i);
        body.push_str(&format!("{t},{}\n", 2.0 * t * t - t * t.ln() + 0.5 * t));
    }
    std::fs::write(&path, body).unwrap();
    let text = stdout(&["weyl-fit", "--input", path.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["rows"][0]["a"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((v["rows"][0]["b"].as_f64().unwrap() + 1.0).abs() < 1e-7);
}

#[test]
fn self_tests_pass() {
    for cmd in ["lattice-const", "weyl-fit", "general-count", "phase", "parametrix", "model-surface", "count-zeros"] {
        let out = cli().args([cmd, "--self-test"]).output().unwrap();
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(!String::from_utf8_lossy(&out.stdout).contains(",false"));
    }
}

#[test]
fn general_count_table_has_all_columns() {
    let text = stdout(&["general-count", "--t", "5,10", "--pairs", "50"]);
    assert!(text.lines().nth(1).unwrap().starts_with("t,eigen_count,lorentzian_sum,"));
    assert_eq!(text.lines().count(), 4);
}
