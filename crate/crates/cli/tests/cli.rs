use std::process::Command;

use serde_json::Value;

use recint::second_order::{self, Forcing, SecondOrderProblem};
use recint::Series64;
use recint_cli::{run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_SINGULAR, EXIT_USAGE};

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("recint").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run_args(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn coeffs(v: &Value) -> Vec<f64> {
    v["coeffs"].as_array().unwrap().iter().map(|c| c.as_f64().unwrap()).collect()
}

fn series(v: &Value) -> Series64 {
    Series64::new(v["base_point"].as_f64().unwrap(), coeffs(v)).unwrap()
}

#[test]
fn airy_y1_cubic_coefficient() {
    let doc = json(&["solve", "--catalog", "airy", "--order", "24", "--format", "json"]);
    let y1 = coeffs(&doc["y1"]);
    assert_eq!(y1.len(), 25);
    assert!((y1[3] - 1.0 / 6.0).abs() <= 1e-12 / 6.0);
    assert!(doc.get("alpha").is_none());
    for key in ["y1", "y2", "yp"] {
        assert_eq!(doc["residuals"][key]["pass"], Value::Bool(true), "{key}");
    }
}

#[test]
fn trivial_problem_gives_canonical_basis() {
    let doc = json(&["solve", "--p", "0", "--q", "0", "--f", "0", "--order", "8"]);
    let mut one = vec![0.0; 9];
    one[0] = 1.0;
    let mut x = vec![0.0; 9];
    x[1] = 1.0;
    assert_eq!(coeffs(&doc["y1"]), one);
    assert_eq!(coeffs(&doc["y2"]), x);
    assert_eq!(coeffs(&doc["yp"]), vec![0.0; 9]);
}

#[test]
fn hermite_alpha_with_verbose() {
    let doc = json(&["solve", "--catalog", "hermite", "--param", "a=3", "--order", "16", "--verbose"]);
    let alpha = coeffs(&doc["alpha"]);
    assert!((alpha[2] + 2.0).abs() <= 2e-12);
    assert!((alpha[4] - 0.75).abs() <= 1e-12);
    assert_eq!(coeffs(&doc["beta"])[0], 1.0);
    assert_eq!(coeffs(&doc["h"])[0], -4.0);
}

#[test]
fn emitted_json_reproduces_residual() {
    let args = ["solve", "--p", "0.5,-1", "--q", "2,0,0.25", "--f", "1,1", "--order", "20"];
    let doc = json(&args);
    let p = Series64::from_poly(0.0, 20, &[0.5, -1.0]).unwrap();
    let q = Series64::from_poly(0.0, 20, &[2.0, 0.0, 0.25]).unwrap();
    let f = Series64::from_poly(0.0, 20, &[1.0, 1.0]).unwrap();
    let prob = SecondOrderProblem::new(p, q, f).unwrap();
    for (key, forcing) in [
        ("y1", Forcing::Homogeneous),
        ("y2", Forcing::Homogeneous),
        ("yp", Forcing::Inhomogeneous),
    ] {
        let y = series(&doc[key]);
        let r = second_order::residual_second_order(&prob, &y, forcing, 1e-10).unwrap();
        let printed = doc["residuals"][key]["max_residual"].as_f64().unwrap();
        assert_eq!(r.max_residual.to_bits(), printed.to_bits(), "{key}");
    }
}

#[test]
fn constants_combine_the_basis() {
    let doc = json(&[
        "solve", "--catalog", "constant", "--order", "12", "--c1", "2", "--c2", "-1",
    ]);
    let (y1, y2, yp, y) = (
        coeffs(&doc["y1"]),
        coeffs(&doc["y2"]),
        coeffs(&doc["yp"]),
        coeffs(&doc["y"]),
    );
    for k in 0..=12 {
        assert!((y[k] - (-y1[k] + 2.0 * y2[k] + yp[k])).abs() <= 1e-15 * (1.0 + y[k].abs()));
    }
    assert_eq!(doc["residuals"]["y"]["pass"], Value::Bool(true));
}

#[test]
fn evaluation_grid() {
    let doc = json(&["solve", "--p", "0", "--q", "1", "--order", "30", "--eval", "-1:1:5"]);
    let rows = doc["eval"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["x"].as_f64().unwrap(), -1.0);
    let y1 = rows[4]["y1"].as_f64().unwrap();
    assert!((y1 - 1f64.cos()).abs() < 1e-14);
}

#[test]
fn csv_solution_layout() {
    let (code, out, _) = run_args(&["solve", "--p", "0", "--q", "0", "--order", "6", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "degree,y1,y2,yp");
    assert_eq!(lines.len(), 1 + 7 + 1 + 1 + 3);
    assert!(lines.iter().any(|l| l.starts_with("y2,4,")));
}

#[test]
fn first_order_kind() {
    let doc = json(&[
        "solve", "--kind", "first-order", "--p", "1", "--f", "0", "--c1", "1", "--order", "10",
    ]);
    let y = coeffs(&doc["y"]);
    let y_rec = coeffs(&doc["y_recursive"]);
    let mut fact = 1.0;
    for k in 0..=10 {
        if k > 0 {
            fact *= k as f64;
        }
        let expected = if k % 2 == 0 { 1.0 } else { -1.0 } / fact;
        assert!((y[k] - expected).abs() < 1e-15);
        assert!((y_rec[k] - expected).abs() < 1e-15);
    }
    assert!(doc["recursive_iterations"].as_u64().unwrap() <= 11);
}

#[test]
fn malformed_inputs_exit_two() {
    for args in [
        &["solve", "--p", "1,x"][..],
        &["solve", "--order", "2"],
        &["solve", "--order", "257"],
        &["solve", "--eval", "0:1"],
        &["solve", "--eval", "0:1:10001"],
        &["solve", "--catalog", "nope"],
        &["solve", "--catalog", "hermite", "--param", "b=1"],
        &["solve", "--catalog", "hermite", "--param", "a"],
        &["solve", "--tol", "0"],
        &["frobnicate"],
        &["verify", "bogus"],
    ] {
        let (code, out, err) = run_args(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn singular_base_point_exits_three() {
    for args in [
        &["solve", "--catalog", "cauchy_euler", "--base-point", "0"][..],
        &["solve", "--catalog", "legendre", "--base-point", "1"],
        &["solve", "--catalog", "chebyshev", "--base-point", "-1", "--format", "csv"],
    ] {
        let (code, out, err) = run_args(args);
        assert_eq!(code, EXIT_SINGULAR, "{args:?}: {err}");
        assert!(out.is_empty());
        assert!(err.contains("base point"), "{err}");
    }
    // Regular points other than the catalog default are fine.
    let doc = json(&["solve", "--catalog", "cauchy_euler", "--base-point", "2", "--order", "16"]);
    assert_eq!(doc["y1"]["base_point"].as_f64(), Some(2.0));
    assert_eq!(doc["residuals"]["y2"]["pass"], Value::Bool(true));
}

#[test]
fn verify_subset_and_all() {
    let (code, out, _) = run_args(&["verify", "airy", "legendre", "--order", "24"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("name,check,worst_error,pass"));
    let names: std::collections::BTreeSet<&str> =
        lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names.into_iter().collect::<Vec<_>>(), ["airy", "legendre"]);

    let (code, out, _) = run_args(&["verify", "all", "--order", "32", "--tol", "1e-10"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn verify_failure_exits_one() {
    // Below the minimum order the goldens are out of reach.
    let (code, out, _) = run_args(&["verify", "airy", "--order", "8"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(out.lines().nth(1).unwrap().ends_with(",false"));
}

#[test]
fn verify_json_rows() {
    let doc = json(&["verify", "hermite", "--order", "16", "--format", "json"]);
    let rows = doc.as_array().unwrap();
    assert!(rows.iter().all(|r| r["pass"] == Value::Bool(true)));
    assert!(rows.iter().any(|r| r["check"] == "golden:alpha[2]"));
}

#[test]
fn list_json_and_csv() {
    let doc = json(&["list"]);
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert_eq!(r["interval"].as_array().unwrap().len(), 2);
        assert!(r["params"].is_object());
    }
    assert_eq!(rows[1]["base_point"].as_f64(), Some(1.0));

    let (code, out, _) = run_args(&["list", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 7);
    assert!(out.starts_with("name,"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_recint");
    let ok = Command::new(bin).args(["list"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["verify", "bogus"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}
