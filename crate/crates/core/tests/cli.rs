use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_k3atlas")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (code, v, String::from_utf8(out.stderr).unwrap())
}

fn coords(v: &Value) -> Vec<f64> {
    v["coords"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect()
}

#[test]
fn igusa_clebsch_from_params() {
    let (code, v, _) = run(&["igusa-clebsch", "--params", "1,1,1,1"]);
    assert_eq!(code, 0);
    assert_eq!(coords(&v["result"]), [24.0, 36.0, 360.0, 4.0]);
    let (code, v, _) = run(&["igusa-clebsch", "--params", "[[1,0],[1,0],[1,0],[1,0]]", "--pretty"]);
    assert_eq!(code, 0);
    assert_eq!(coords(&v["result"]), [24.0, 36.0, 360.0, 4.0]);
}

#[test]
fn invert_period_flags_h1() {
    let (code, v, _) = run(&["invert-period", "--tau", "0,1", "--z", "0,0", "--u", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["h1"], true);
    assert_eq!(v["result"]["point"]["weights"], serde_json::json!([2, 3, 5, 6]));
}

#[test]
fn forms_json_keys() {
    let (code, v, _) = run(&["forms", "--tau", "0,1", "--z", "0.1,0.2", "--u", "0,2", "--eps", "1e-12"]);
    assert_eq!(code, 0);
    for k in ["E4", "E6", "C5", "C10", "C12", "route_diagnostics"] {
        assert!(v["result"].get(k).is_some(), "{k}");
    }
    assert_eq!(v["result"]["E4"].as_array().unwrap().len(), 2);
}

#[test]
fn split_at_i_and_2i() {
    let (code, v, _) = run(&["split", "--tau", "0,1", "--u", "0,2"]);
    assert_eq!(code, 0);
    let j: Vec<f64> = v["result"]["j"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
    assert!((j[0] - 1728.0).abs() < 1e-6 * 1728.0);
    assert!((j[1] - 287496.0).abs() < 1e-6 * 287496.0);
}

#[test]
fn input_errors_exit_2() {
    let (code, _, err) = run(&["forms", "--tau", "0,-1", "--u", "0,1"]);
    assert_eq!(code, 2);
    assert!(err.contains("tau"));
    assert_eq!(run(&["igusa-clebsch", "--params", "1,2"]).0, 2);
    assert_eq!(run(&["igusa-clebsch", "--params", "1,1,0,1"]).0, 2);
    assert_eq!(run(&["fibration"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["verify", "--samples", "0"]).0, 2);
}

#[test]
fn numeric_verify_is_deterministic() {
    let args = ["verify", "--suite", "numeric", "--samples", "3", "--seed", "7", "--jobs", "2"];
    let (code, mut a, _) = run(&args);
    assert_eq!(code, 0);
    let (_, mut b, _) = run(&args);
    for v in [&mut a, &mut b] {
        v["millis"] = Value::Null;
        for c in v["result"]["numeric"]["checks"].as_array_mut().unwrap() {
            c["millis"] = Value::Null;
        }
    }
    assert_eq!(a, b);
    assert_eq!(a["result"]["numeric"]["failed"], 0);
}

#[test]
fn fibration_types() {
    let (code, v, _) = run(&["fibration", "--params", "1,2,3,4", "--wp"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["standard"][1][1], "III*");
    assert_eq!(v["result"]["alternate"][0][1], "I10*");
}
