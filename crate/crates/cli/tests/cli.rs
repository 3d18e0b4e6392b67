use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const EXAMPLE1: &str = r#"{"p": 2, "h": [{"j": 0, "l": 0, "c": 1}, {"j": 1, "l": 0, "c": 1}]}"#;
const E1: &str = r#"{"p": 4, "h": [{"j": 0, "l": 0, "c": -4}], "P": [{"j": 1, "k": 2, "l": 0, "c": -1}]}"#;

fn cae(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cae")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn resonance_reports_condition() {
    let o = cae(&["resonance", "--alpha", "1", "--beta", "2", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["condition"], true);
    assert_eq!(v["D"], 2);
    assert_eq!(v["Z0"], serde_json::json!(["-1", "0", "1"]));
    assert!(v["riccati_residual"].as_f64().unwrap() < 1e-10);

    let o = cae(&["resonance", "--alpha", "1", "--beta", "2", "--p", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["condition"], false);
}

#[test]
fn obstructed_spec_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "e1.json", E1);
    let o = cae(&["expand", "--spec", spec.to_str().unwrap(), "--order", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("pole order 13 at n=3 exceeds 12"), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_one() {
    let o = cae(&["expand", "--spec", "/nonexistent/spec.json", "--order", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(cae(&["expand", "--order", "2"]).status.code(), Some(1));
    assert_eq!(cae(&["frobnicate"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "bad.json", "{\"p\": 2,\n \"hh\": []}");
    let o = cae(&["expand", "--spec", spec.to_str().unwrap(), "--order", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown field `hh`") && stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn help_exits_zero() {
    assert_eq!(cae(&["--help"]).status.code(), Some(0));
}

#[test]
fn expand_is_deterministic_and_stamps_separately() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex1.json", EXAMPLE1);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (out, stamp) in [(&a, false), (&b, true)] {
        let mut args = vec!["expand", "--spec", spec.to_str().unwrap(), "--order", "4", "--out", out.to_str().unwrap()];
        if stamp {
            args.push("--stamp");
        }
        assert_eq!(cae(&args).status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(!dir.path().join("a.json.stamp.json").exists());
    let s: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("b.json.stamp.json")).unwrap()).unwrap();
    assert_eq!(s["version"], env!("CARGO_PKG_VERSION"));

    let v: Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(v["pole_orders"], serde_json::json!([0, 1, 3, 5, 7]));
    assert_eq!(v["outer"][1], serde_json::json!([[-1, "-1/2"], [0, "-1/2"]]));
}

#[test]
fn union_jack_value() {
    let o = cae(&["canard", "unionjack"]);
    assert_eq!(o.status.code(), Some(0));
    let c = stdout_json(&o)["value"].as_f64().unwrap();
    assert!((c - 0.3621759).abs() < 1e-6, "{c}");
}

#[test]
fn angular_accepts_negative_eps() {
    let o = cae(&["canard", "angular", "--eps", "0.02,-0.02"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let c: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((c[0] - c[1]).abs() < 1e-9);
}

#[test]
fn control_criterion_on_quartic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "q.json", r#"{"p": 4, "h": [{"j": 1, "l": 0, "c": 3}, {"j": 2, "l": 0, "c": 3}], "control": true}"#);
    let o = cae(&["canard", "criterion", "--spec", spec.to_str().unwrap(), "--order", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a2 = stdout_json(&o)["values"][2].as_f64().unwrap();
    assert!((a2 + 1.013968).abs() < 1e-6, "{a2}");
}

#[test]
fn special_u_partial_sums() {
    let o = cae(&["special", "U", "--p", "2", "--k", "1", "--sigma", "minus", "--x", "-10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "M,value,partial,abs_diff");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[2] - 0.04975375).abs() < 1e-12);
    assert!(last[3] < 1e-6);
}

#[test]
fn gevrey_fit_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("n,coeff\n");
    // geometric norms grow slower than any factorial
    for n in 0..20 {
        text.push_str(&format!("{n},{}\n", 3f64.powi(n)));
    }
    let csv = write(dir.path(), "c.csv", &text);
    let o = cae(&["gevrey", "fit", "--coeffs", csv.to_str().unwrap(), "--p", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["used"], 20);
    assert!(v["sub_gevrey"].as_bool().unwrap());
}

#[test]
fn validate_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex1.json", EXAMPLE1);
    let out = dir.path().join("t.csv");
    let o = cae(&["validate", "--spec", spec.to_str().unwrap(), "--orders", "1,2", "--xgrid", "-1:0:16", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    let slope: f64 = rows[7][3].parse().unwrap();
    assert!((slope - 2.0).abs() < 0.05, "{slope}");
    assert!(rows[0][3].is_empty());
}

#[test]
fn validate_failure_exits_two_with_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "quartic.json",
        r#"{"p": 2, "h": [{"j": 0, "l": 0, "c": 1}, {"j": 1, "l": 0, "c": 1}, {"j": 2, "l": 0, "c": 1}, {"j": 3, "l": 0, "c": 1}, {"j": 4, "l": 0, "c": 1}]}"#,
    );
    let out = dir.path().join("t.csv");
    let o = cae(&["validate", "--spec", spec.to_str().unwrap(), "--orders", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("N=4"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 5);
}

#[test]
fn validate_rejects_nonlinear_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "e1.json", E1);
    assert_eq!(cae(&["validate", "--spec", spec.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn bad_thread_count_exits_one() {
    let o = Command::new(env!("CARGO_BIN_EXE_cae")).args(["canard", "unionjack"]).env("CAE_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
