use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn crorbit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crorbit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn classify(name: &str) -> Output {
    crorbit(&["classify", data(name).to_str().unwrap()])
}

fn congruent(a: &str, b: &str) -> Output {
    crorbit(&[
        "congruent",
        data(a).to_str().unwrap(),
        data(b).to_str().unwrap(),
    ])
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn crz_orbit_is_type_ii() {
    let out = classify("crz.json");
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["orbit"]["is_cr"], true);
    assert_eq!(report["orbit"]["type_tag"], "II");
    assert_eq!(report["key"]["kind"], "II");
    assert_eq!(report["key"]["dims"], serde_json::json!([1, 0, 3]));
}

#[test]
fn ar_orbit_with_displacement_is_not_cr() {
    let out = classify("ar_not_cr.json");
    assert_eq!(code(&out), 3);
    let report = json(&out);
    assert_eq!(report["orbit"]["is_cr"], false);
    assert_eq!(report["orbit"]["type_tag"], "NotCR");
    assert!(report["key"].is_null());
}

#[test]
fn basis_input_is_normalized() {
    let out = classify("basis.json");
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["key"]["kind"], "II");
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalizes to kind CRZ"));

    let out = classify("basis_structured.json");
    assert_eq!(code(&out), 3);
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(code(&classify("malformed.json")), 65);
    assert_eq!(code(&classify("invalid_dims.json")), 66);
    assert_eq!(code(&classify("unknown_field.json")), 66);
    assert_eq!(code(&classify("does_not_exist.json")), 66);
}

#[test]
fn errors_go_to_stderr_only() {
    let out = classify("malformed.json");
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
}

#[test]
fn exactly_one_group_element_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("both.json");
    std::fs::write(
        &path,
        r#"{"n":2,"subalgebra":{"kind":"CRZ","dim_c":0,"dim_r":1},"group_element":{"xi":[0,0,0,0],"b":1}}"#,
    )
    .unwrap();
    let out = crorbit(&["classify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 66);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field `b`"));
}

#[test]
fn kind_iv_with_equal_displacement_is_congruent() {
    let out = congruent("iv_a.json", "iv_b.json");
    assert_eq!(code(&out), 0);
    let verdict = json(&out);
    assert_eq!(verdict["congruent"], true);
    assert_eq!(verdict["keys"][0], verdict["keys"][1]);
}

#[test]
fn kind_i_and_ii_are_not_congruent() {
    let out = congruent("kind_i.json", "kind_ii.json");
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["congruent"], false);
}

#[test]
fn congruence_needs_cr_orbits() {
    let out = congruent("ar_not_cr.json", "crz.json");
    assert_eq!(code(&out), 66);
    assert!(out.stdout.is_empty());
}

#[test]
fn moduli_n2_matches_golden() {
    let out = crorbit(&["moduli", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let golden: Value =
        serde_json::from_str(&std::fs::read_to_string(data("moduli_n2.golden.json")).unwrap())
            .unwrap();
    assert_eq!(json(&out), golden);
}

#[test]
fn moduli_n5_counts() {
    let out = crorbit(&["moduli", "--n", "5"]);
    assert_eq!(code(&out), 0);
    let comps = json(&out);
    let comps = comps.as_array().unwrap();
    assert_eq!(comps.len(), 6);
    assert_eq!(comps[0]["kind"], "I");
    assert_eq!(comps[0]["elements"].as_array().unwrap().len(), 4);
    assert_eq!(comps[1]["elements"].as_array().unwrap().len(), 15);
}

#[test]
fn moduli_rejects_small_n() {
    for n in ["1", "0", "-3"] {
        let out = crorbit(&["moduli", "--n", n]);
        assert_eq!(code(&out), 66, "n = {n}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = crorbit(&["verify", "--suite", "nope"]);
    assert_eq!(code(&out), 64);
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&crorbit(&[])), 64);
    assert_eq!(code(&crorbit(&["classify"])), 64);
    assert_eq!(code(&crorbit(&["moduli", "--n", "two"])), 64);
    assert_eq!(code(&crorbit(&["--help"])), 0);
}

#[test]
fn curvature_suite_passes() {
    let out = crorbit(&["verify", "--suite", "curvature", "--trials", "20"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["suite"], "curvature");
    assert_eq!(report["all_pass"], true);
    assert!(!report["properties"].as_array().unwrap().is_empty());
}

#[test]
fn verify_is_deterministic_per_seed() {
    let args = ["verify", "--suite", "all", "--seed", "42", "--trials", "16"];
    let first = crorbit(&args);
    let second = crorbit(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);

    let mut sequential = args.to_vec();
    sequential.push("--sequential");
    let third = crorbit(&sequential);
    let (mut a, mut b) = (json(&first), json(&third));
    a.as_object_mut().unwrap().remove("parallel");
    b.as_object_mut().unwrap().remove("parallel");
    assert_eq!(a, b);
}

#[test]
fn classify_output_round_trips() {
    let out = classify("iv_a.json");
    let text = String::from_utf8(out.stdout).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
}
