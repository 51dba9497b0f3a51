use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use wittenloc_cli::manifest::parse_manifest;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn wittenloc(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wittenloc"));
    cmd.args(args)
        .env_remove("WITLOC_RADIUS")
        .env_remove("WITLOC_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn json(args: &[&str], env: &[(&str, &str)]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    serde_json::from_slice(&wittenloc(&all, env).stdout).unwrap()
}

fn temp_manifest(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("wittenloc-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn exit_codes() {
    assert_eq!(
        wittenloc(&["eisenstein", "--tau", "i", "--two-k", "4"], &[])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        wittenloc(&["eisenstein", "--tau", "i", "--two-k", "3"], &[])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        wittenloc(&["eisenstein", "--tau", "-i", "--two-k", "4"], &[])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        wittenloc(&["localize-s2", "--lambda", "0"], &[])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        wittenloc(&["localize-s2", "--tol", "1e-20"], &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wittenloc(&["witten", "/nonexistent/manifest.json"], &[])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(wittenloc(&["no-such-command"], &[]).status.code(), Some(1));
    assert_eq!(wittenloc(&["--help"], &[]).status.code(), Some(0));
    assert_eq!(wittenloc(&["selfcheck"], &[]).status.code(), Some(0));
}

#[test]
fn environment_sets_radius_and_tolerance() {
    let env = [("WITLOC_RADIUS", "40"), ("WITLOC_TOL", "1e-9")];
    let out = json(&["eisenstein", "--tau", "i", "--two-k", "4"], &env);
    assert_eq!(out["inputs_echo"]["radius"], 40.0);
    assert_eq!(out["inputs_echo"]["tol"], 1e-9);
    let flag = json(
        &["eisenstein", "--tau", "i", "--two-k", "4", "--radius", "60"],
        &env,
    );
    assert_eq!(flag["inputs_echo"]["radius"], 60.0);
}

#[test]
fn json_layout_and_timings() {
    let out = json(&["eisenstein", "--tau", "i", "--two-k", "2"], &[]);
    for key in [
        "command",
        "inputs_echo",
        "values",
        "error_estimates",
        "checks",
        "warnings",
        "timings",
        "status",
    ] {
        assert!(out.get(key).is_some(), "missing {key}");
    }
    assert_eq!(out["timings"], serde_json::json!({}));
    let g2 = &out["values"]["G2"];
    assert!((g2[0].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
    let timed = json(
        &["eisenstein", "--tau", "i", "--two-k", "2", "--timings"],
        &[],
    );
    assert!(!timed["timings"].as_object().unwrap().is_empty());
}

#[test]
fn eisenstein_vanishes_on_square_lattice() {
    let out = json(&["eisenstein", "--tau", "i", "--two-k", "6"], &[]);
    let g6 = &out["values"]["G6"];
    assert!(g6[0].as_f64().unwrap().abs() < 1e-10 && g6[1].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn emitted_manifest_round_trips() {
    for name in [
        "string8.json",
        "string4.json",
        "trivial8.json",
        "nonstring8.json",
    ] {
        let path = fixture(name);
        let original = parse_manifest(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let emitted = wittenloc(&["witten", &path, "--emit-manifest"], &[]);
        assert_eq!(emitted.status.code(), Some(0));
        let reparsed = parse_manifest(&String::from_utf8(emitted.stdout.clone()).unwrap()).unwrap();
        assert_eq!(original, reparsed, "{name}");
        let again_path = temp_manifest(name, &String::from_utf8(emitted.stdout.clone()).unwrap());
        let again = wittenloc(&["witten", &again_path, "--emit-manifest"], &[]);
        assert_eq!(emitted.stdout, again.stdout, "{name}");
    }
}

#[test]
fn manifest_errors_report_their_line() {
    let text = "{\n  \"lattice\": {\"tau\": [0, 1]},\n  \"ring\": {\n    \"generators\": [{\"name\": \"p\", \"degree\": 3}],\n    \"top_degree\": 4,\n    \"integral_table\": {}\n  },\n  \"tangent\": {\"pontryagin\": []}\n}\n";
    let path = temp_manifest("odd-degree.json", text);
    let out = wittenloc(&["witten", &path], &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn non_string_manifold_warns() {
    let out = json(&["witten", &fixture("nonstring8.json")], &[]);
    assert_eq!(out["warnings"].as_array().unwrap().len(), 1);
    let chosen = json(
        &[
            "witten",
            &fixture("nonstring8.json"),
            "--arg-base",
            "1.5707963267948966",
        ],
        &[],
    );
    assert!(chosen["warnings"].as_array().unwrap().is_empty());
    let string = json(&["witten", &fixture("string8.json")], &[]);
    assert!(string["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn symbolic_genus_of_string_fixture() {
    let out = json(&["witten", &fixture("string8.json"), "--symbolic"], &[]);
    assert_eq!(out["values"]["genus_symbolic"], "-G4");
}

#[test]
fn trivial_fixture_has_unit_class() {
    let out = json(&["witten", &fixture("trivial8.json")], &[]);
    let genus = &out["values"]["genus"];
    assert_eq!(genus[0].as_f64(), Some(0.0));
    assert_eq!(genus[1].as_f64(), Some(0.0));
}
