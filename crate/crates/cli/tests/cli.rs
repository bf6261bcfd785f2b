use std::path::PathBuf;
use std::process::{Command, Output};

use bensonkit::efficiency::{self, CriterionForm, Verdict};
use bensonkit::harness::fixtures;
use bensonkit::rational::int;
use bensonkit::{Perturbation, QueryPoint};

fn problem(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../problems");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bensonkit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn check_first_fixture_origin() {
    let path = problem("orthant_shift.json");
    let out = run(&["check", "--problem", &path, "--point", "0,0", "--perturbation", "0,1", "--output", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["eps_efficient"]["member"], true);
    assert_eq!(v["properly_efficient"], false);
    let witness = &v["proper"]["plain"]["certificate"]["data"]["witness"];
    assert_eq!(witness["ray"], serde_json::json!(["-1", "0"]));
    assert_eq!(witness["branch"], "recession");
}

#[test]
fn json_verdicts_round_trip_to_library_values() {
    let path = problem("orthant_shift.json");
    let out = run(&["check", "--problem", &path, "--point", "2,1/2", "--perturbation", "0,1", "--output", "json"]);
    let v = json(&out);
    let p = fixtures::orthant_shift();
    let x = QueryPoint::new(&p, vec![int(2), bensonkit::rational::frac(1, 2)]).unwrap();
    let eps = Perturbation::epsilon(vec![int(0), int(1)]);
    let eff: Verdict = serde_json::from_value(v["eps_efficient"].clone()).unwrap();
    assert_eq!(eff, efficiency::is_eps_efficient(&p, &x, &eps).unwrap());
    let plus_k: Verdict = serde_json::from_value(v["proper"]["plusK"].clone()).unwrap();
    assert_eq!(plus_k, efficiency::is_benson_proper(&p, &x, &eps, CriterionForm::PlusK).unwrap());
}

#[test]
fn json_output_is_deterministic() {
    let path = problem("unit_square.json");
    let args = ["analyze", "--problem", &path, "--budget", "12", "--output", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn floats_are_input_errors() {
    let path = problem("orthant_shift.json");
    let out = run(&["check", "--problem", &path, "--point", "1.5,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    let dir = std::env::temp_dir().join("bensonkit-cli-test-numbers.json");
    std::fs::write(
        &dir,
        r#"{"n":1,"m":1,"objective":{"matrix":[[1]],"offset":["0"]},"constraints":{},"cone":{"ineq_lhs":[["-1"]]}}"#,
    )
    .unwrap();
    let out = run(&["check", "--problem", &dir.to_string_lossy(), "--point", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_validation_errors() {
    let wedge = problem("wedge_cone.json");
    let out = run(&["check", "--problem", &wedge, "--point", "0,0", "--perturbation", "0,1"]);
    assert_eq!(out.status.code(), Some(2), "perturbation outside K");
    let out = run(&["check", "--problem", &wedge, "--point", "0,0", "--kind", "epsilon"]);
    assert_eq!(out.status.code(), Some(2), "epsilon on a non-orthant cone");
    let out = run(&["check", "--problem", &wedge, "--point", "-1,0"]);
    assert_eq!(out.status.code(), Some(2), "point outside X");
    assert!(String::from_utf8_lossy(&out.stderr).contains("not in the constraint set"));
    let out = run(&["check", "--problem", &wedge, "--point", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2), "wrong dimension");
    let out = run(&["check", "--problem", "/nonexistent.json", "--point", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["check", "--point", "0"]);
    assert_eq!(out.status.code(), Some(2), "missing --problem");
}

#[test]
fn wedge_fixture_is_proper_on_its_efficient_strip() {
    let wedge = problem("wedge_cone.json");
    for (point, code) in [("1,0", 0), ("1/2,7", 0), ("3/2,0", 1)] {
        let out = run(&["check", "--problem", &wedge, "--point", point, "--perturbation", "1,0", "--form", "plusK"]);
        assert_eq!(out.status.code(), Some(code), "at {point}");
    }
}

#[test]
fn examples_pass() {
    let out = run(&["examples"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("[PASS]").count(), 5);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_echoes_seed_and_counts() {
    let out = run(&["verify", "--seed", "9", "--budget", "6", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["suites"].as_array().unwrap().len(), 4);
    assert_eq!(v["suites"][0]["instances"], 6);
    assert_eq!(v["lp_certificates_failed"], 0);
}

#[test]
fn plot_writes_svg_with_clipped_edges() {
    let path = problem("half_plane.json");
    let out = run(&["plot", "--problem", &path, "--perturbation", "1,0", "--point", "1/2,0", "--viewport", "-2,2,-2,2"]);
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8_lossy(&out.stdout);
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("stroke-dasharray"));
    assert!(svg.contains("cl cone S"));
    assert!(svg.contains("witness ray"));

    let out = run(&["plot", "--problem", &path, "--viewport", "1,0,0,1"]);
    assert_eq!(out.status.code(), Some(2));
}
