use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn unital(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unital"))
        .args(args)
        .output()
        .expect("spawn CLI")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn close(v: &Value, want: &[f64], tol: f64) -> bool {
    let got: Vec<f64> = v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    got.len() == want.len() && got.iter().zip(want).all(|(a, b)| (a - b).abs() <= tol)
}

#[test]
fn gen_depolarizing_document() {
    let out = unital(&["gen", "depolarizing"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["kind"], "pauli");
    assert!(close(&doc["data"], &[0.25; 4], 0.0));
}

#[test]
fn gen_output_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["gen", "random", "--seed", "11"],
        vec!["gen", "identity"],
        vec!["gen", "pauli-mixing", ".5", ".5", "0", "0"],
    ] {
        let out = unital(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let path = write(dir.path(), "ch.json", &String::from_utf8(out.stdout).unwrap());
        let report = unital(&["analyze", &path]);
        assert_eq!(report.status.code(), Some(0), "{args:?}: {}", stderr(&report));
        assert_eq!(json(&report)["unital_channel"], true);
    }
}

#[test]
fn analyze_reports_spectra_and_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let dep = write(dir.path(), "dep.json", r#"{"kind":"pauli","data":[0.25,0.25,0.25,0.25]}"#);
    let doc = json(&unital(&["analyze", &dep]));
    assert!(close(&doc["spectrum"], &[0.5; 4], 1e-12));
    assert!(close(&doc["bloch"]["scaling"], &[0.0; 3], 1e-12));
    assert!(close(&doc["bloch"]["tetra"], &[0.25; 4], 1e-12));

    let id = write(dir.path(), "id.json", r#"{"kind":"pauli","data":[1,0,0,0]}"#);
    let doc = json(&unital(&["analyze", &id]));
    assert!(close(&doc["spectrum"], &[2.0, 0.0, 0.0, 0.0], 1e-12));

    let map = write(
        dir.path(),
        "map.json",
        r#"{"kind":"bloch","data":{"linear":[[1,0,0],[0,1,0],[0,0,0]],"offset":[0,0,0]}}"#,
    );
    let out = unital(&["analyze", &map]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["validation"]["completely_positive"], false);
    assert!((doc["validation"]["min_choi_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert!(stderr(&out).contains("not CP"));
}

#[test]
fn analyze_non_diagonal_channel_prints_full_bloch_matrix() {
    let out = unital(&["gen", "random", "--seed", "3"]);
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "r.json", &String::from_utf8(out.stdout).unwrap());
    let doc = json(&unital(&["analyze", &path]));
    assert_eq!(doc["bloch"]["linear"].as_array().unwrap().len(), 3);
    assert!(doc["bloch"].get("scaling").is_none());
}

#[test]
fn canonicalize_unitary_channel() {
    let dir = tempfile::tempdir().unwrap();
    let u = write(
        dir.path(),
        "u.json",
        r#"{"kind":"kraus","data":[[[[0.6,0],[0,0.8]],[[0,0.8],[0.6,0]]]]}"#,
    );
    let out = unital(&["canonicalize", &u]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    assert!(close(&doc["spectrum"], &[2.0, 0.0, 0.0, 0.0], 1e-9));
    assert!(close(&doc["canonical"]["data"], &[1.0, 0.0, 0.0, 0.0], 1e-9));
    assert!(doc["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn canonicalize_rejects_non_trace_preserving() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"kind":"pauli","data":[0.5,0.2,0.2,0.2]}"#);
    let out = unital(&["canonicalize", &p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not trace preserving"));
}

#[test]
fn equiv_pauli_permutation() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"kind":"pauli","data":[0.4,0.3,0.2,0.1]}"#);
    let b = write(dir.path(), "b.json", r#"{"kind":"pauli","data":[0.1,0.2,0.3,0.4]}"#);
    let c = write(dir.path(), "c.json", r#"{"kind":"pauli","data":[0.4,0.3,0.25,0.05]}"#);
    let out = unital(&["equiv", &a, &b]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equivalent"], true);
    let out = unital(&["equiv", &a, &c]);
    assert_eq!(out.status.code(), Some(1));
    assert!((json(&out)["gap"].as_f64().unwrap() - 0.1).abs() < 1e-9);
}

#[test]
fn decompose_weights_and_average() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.json", r#"{"kind":"pauli","data":[1,0,0,0]}"#);
    let out = unital(&["decompose", &id, "--weights", "0.1,0.2,0.3,0.4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    assert!(close(&doc["weights"], &[0.1, 0.2, 0.3, 0.4], 0.0));
    assert_eq!(doc["unitaries"].as_array().unwrap().len(), 4);
    assert!(doc["residual"].as_f64().unwrap() <= 1e-9);

    let out = unital(&["decompose", &id, "--average", "4"]);
    assert!(close(&json(&out)["weights"], &[0.25; 4], 0.0));
}

#[test]
fn decompose_reports_violated_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let half = write(dir.path(), "h.json", r#"{"kind":"pauli","data":[0.5,0.5,0,0]}"#);
    let out = unital(&["decompose", &half, "--weights", "0.6,0.4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("prefix 1"), "{}", stderr(&out));
}

#[test]
fn decompose_requires_a_target() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.json", r#"{"kind":"pauli","data":[1,0,0,0]}"#);
    assert_eq!(unital(&["decompose", &id]).status.code(), Some(2));
    assert_eq!(
        unital(&["decompose", &id, "--weights", "1", "--average", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn bloch_geometry_report() {
    let out = unital(&["bloch", "0", "0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!(close(&doc["tetra"], &[0.25; 4], 1e-12));
    assert!(close(&doc["cone_decomposition"], &[1.0, 0.0, 0.0, 0.0], 1e-12));

    let out = unital(&["bloch", "0.4", "-0.3", "0.1"]);
    let doc = json(&out);
    assert!(close(&doc["ordered"], &[0.4, 0.3, -0.1], 0.0));
    assert_eq!(doc["channel"], true);
    assert_eq!(doc["ordered_cone"], true);

    let out = unital(&["bloch", "1", "1", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["tetra"], Value::Null);
}

#[test]
fn human_format_uses_six_significant_digits() {
    let out = unital(&["gen", "random", "--seed", "7", "--format", "human"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kind: kraus"));
    let doc = json(&unital(&["gen", "random", "--seed", "7"]));
    let re = doc["data"][0][0][0][0].as_f64().unwrap();
    let digits = (5 - re.abs().log10().floor() as i32).max(0) as usize;
    let formatted = format!("{re:.digits$}");
    assert!(text.contains(formatted.trim_end_matches('0')), "{text}");
}

#[test]
fn seeds_change_random_output() {
    let a = unital(&["gen", "random", "--seed", "1"]).stdout;
    let b = unital(&["gen", "random", "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(unital(&["--tolerance", "0", "gen", "identity"]).status.code(), Some(2));
    assert_eq!(unital(&["gen", "identity", "0.5"]).status.code(), Some(2));
    assert_eq!(unital(&["gen", "pauli-mixing", "1", "0"]).status.code(), Some(2));
    assert_eq!(unital(&["analyze", "/nonexistent/channel.json"]).status.code(), Some(2));
    assert_eq!(unital(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"kind":"choi","data":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[],[]]}"#,
    );
    let out = unital(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("data[1]"), "{}", stderr(&out));
}
