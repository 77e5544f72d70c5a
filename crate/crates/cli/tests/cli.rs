use std::path::Path;
use std::process::Command;

use serde_json::Value;

const SMALL_FOLD_GRID: &str = "0:6.283185307179586:4:p,-1:1:5,-1:1:5,-1:1:5";

fn forge(args: &[&str], out: &Path) -> (i32, Value) {
    let status = Command::new(env!("CARGO_BIN_EXE_foliation-forge"))
        .args(args)
        .arg("--output")
        .arg(out)
        .output()
        .expect("binary runs");
    let code = status.status.code().expect("exit code");
    let summary = std::fs::read_to_string(out.join("summary.json"))
        .ok()
        .map(|s| serde_json::from_str(&s).unwrap())
        .unwrap_or(Value::Null);
    (code, summary)
}

fn check<'a>(summary: &'a Value, name: &str) -> &'a Value {
    summary["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn verify_lefschetz_reports_four() {
    let dir = tempfile::tempdir().unwrap();
    let (code, s) = forge(
        &[
            "verify",
            "--scenario",
            "lefschetz",
            "--k",
            "1",
            "--grid",
            "-1:1:5,-1:1:5,-1:1:5,-1:1:5",
        ],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(s["schema"], 1);
    let jacobi = check(&s, "jacobi");
    assert_eq!(jacobi["pass"], true);
    assert_eq!(jacobi["exact"], true);
    assert_eq!(check(&s, "casimirs")["pass"], true);
    assert_eq!(
        check(&s, "proportionality")["values"]["proportionality_constant"],
        "4"
    );
}

#[test]
fn fold_flow_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let (code, s) = forge(
        &[
            "flow",
            "--scenario",
            "fold",
            "--h",
            "x3",
            "--x0",
            "0,1,0,0",
            "--T",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(code, 0);
    let end = check(&s, "flow_0")["values"]["endpoint"]
        .as_array()
        .unwrap()
        .clone();
    assert!((end[1].as_f64().unwrap() - 1f64.cosh()).abs() < 1e-6);
    assert!((end[2].as_f64().unwrap() - 1f64.sinh()).abs() < 1e-6);
    let csv = std::fs::read_to_string(dir.path().join("flow_0.csv")).unwrap();
    assert!(csv.starts_with("t,theta,x1,x2,x3,casimir_1,casimir_2\n"));
    assert!(!csv.contains('\r'));
}

#[test]
fn fold_scaling_slope() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = forge(
        &["scaling", "--scenario", "fold", "--radii", "1e-1..1e-3"],
        dir.path(),
    );
    assert_eq!(code, 0);
    let fit: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scaling.json")).unwrap())
            .unwrap();
    assert!((fit["slope"].as_f64().unwrap() + 1.0).abs() <= 0.01);
}

#[test]
fn involution_counterexample_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, s) = forge(
        &[
            "verify",
            "--scenario",
            "fold-nonorientable",
            "--k",
            "1 + x1",
            "--radius",
            "0.5",
            "--grid",
            "0:6.283185307179586:4:p,-0.5:0.5:5,-0.5:0.5:5,-0.5:0.5:5",
        ],
        dir.path(),
    );
    assert_eq!(code, 1);
    let inv = check(&s, "involution");
    assert_eq!(inv["pass"], false);
    assert_eq!(inv["values"]["witness"].as_array().unwrap().len(), 4);
    assert!(inv["values"]["residual"].as_f64().unwrap() > 0.0);
    assert!(dir.path().join("singular_set.csv").exists());
}

#[test]
fn symmetric_nonorientable_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, s) = forge(
        &[
            "verify",
            "--scenario",
            "fold-nonorientable",
            "--k",
            "1 + x1^2",
            "--grid",
            SMALL_FOLD_GRID,
        ],
        dir.path(),
    );
    assert_eq!(code, 0, "{s}");
    assert_eq!(check(&s, "involution")["pass"], true);
}

#[test]
fn empty_flow_set() {
    let dir = tempfile::tempdir().unwrap();
    let (code, s) = forge(&["flow", "--scenario", "fold"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(s["checks"].as_array().unwrap().len(), 0);
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        forge(&["verify", "--scenario", "fold", "--k", "1+"], dir.path()).0,
        2
    );
    assert_eq!(forge(&["verify"], dir.path()).0, 2);
    assert_eq!(forge(&["verify", "--scenario", "nope"], dir.path()).0, 2);
    assert_eq!(forge(&["run", "/nonexistent/config.json"], dir.path()).0, 2);
}

#[test]
fn vanishing_k_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, s) = forge(
        &[
            "verify",
            "--scenario",
            "fold",
            "--k",
            "x1",
            "--grid",
            SMALL_FOLD_GRID,
        ],
        dir.path(),
    );
    assert_eq!(code, 1);
    assert!(check(&s, "nonvanishing_k")["values"]["witness"].is_array());
}

#[test]
fn config_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("fold.json");
    std::fs::write(
        &config,
        format!(
            r#"{{"scenario":"fold-nonorientable","k":"1 + x2^2","seed":7,"samples":20,
                "grid":{{"axes":[{{"lo":0,"hi":6.283185307179586,"nodes":4,"periodic":true}},
                  {{"lo":-1,"hi":1,"nodes":5,"periodic":false}},{{"lo":-1,"hi":1,"nodes":5,"periodic":false}},
                  {{"lo":-1,"hi":1,"nodes":5,"periodic":false}}]}},
                "flows":[{{"h":"x3","x0":[0.5,1,0,0],"T":0.5}}],
                "fit":{{"radii":[0.1,0.01,0.001]}}}}"#
        ),
    )
    .unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let cfg = config.to_str().unwrap();
    let (code_a, s) = forge(&["run", cfg], &a);
    let (code_b, _) = forge(&["run", cfg], &b);
    assert_eq!((code_a, code_b), (0, 0), "{s}");
    for name in s["artifacts"].as_array().unwrap() {
        let name = name.as_str().unwrap();
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name} differs"
        );
    }
}

#[test]
fn near_symplectic_model_reports_d_omega() {
    let dir = tempfile::tempdir().unwrap();
    let (code, s) = forge(
        &[
            "near-symplectic",
            "--scenario",
            "near-symplectic",
            "--grid",
            SMALL_FOLD_GRID,
        ],
        dir.path(),
    );
    assert_eq!(code, 1);
    assert_eq!(check(&s, "closed")["values"]["d_omega"]["x1,x2,x3"], "2");
    assert_eq!(check(&s, "wedge_identity")["pass"], true);
    let (code, s) = forge(
        &[
            "near-symplectic",
            "--scenario",
            "near-symplectic",
            "--f",
            "-x1^2 + (1/2)*x2^2 + (1/2)*x3^2",
            "--grid",
            SMALL_FOLD_GRID,
        ],
        dir.path(),
    );
    assert_eq!(code, 0, "{s}");
}
