use std::path::PathBuf;
use std::process::{Command, Output};

use qg_cli::{emit_report, parse_state_file, ReportFormat};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn qg(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qg"));
    for a in args {
        if a.ends_with(".json") && !a.contains('/') {
            cmd.arg(fixture(a));
        } else {
            cmd.arg(a);
        }
    }
    cmd.env_remove("QG_TOL").output().unwrap()
}

fn json_report(args: &[&str]) -> (Value, Output) {
    let mut full = vec!["suite"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--format", "json"]);
    let out = qg(&full);
    (serde_json::from_slice(&out.stdout).unwrap(), out)
}

fn entry<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["entries"].as_array().unwrap().iter().find(|e| e["name"] == name).unwrap_or_else(|| panic!("no {name}"))
}

#[test]
fn z2_translation_suite_example() {
    let (r, out) = json_report(&["c_z2.json", "--state", "z2_delta_g.json", "--random", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(entry(&r, "choquet_deny[z2_delta_g]")["dims"]["harmonic"], 1);
    assert_eq!(entry(&r, "main_theorem[haar]")["dims"]["harmonic_operators"], 2);
    assert_eq!(entry(&r, "main_theorem[z2_delta_g]")["verdict"], "pass");
}

#[test]
fn s3_three_states_suite_example() {
    let (r, out) = json_report(&[
        "c_s3.json",
        "--state",
        "s3_phi_h.json",
        "--state",
        "s3_haar.json",
        "--state",
        "s3_counit.json",
        "--random",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for (label, dim) in [("s3_phi_h", 3), ("s3_haar", 1), ("s3_counit", 6)] {
        assert_eq!(entry(&r, &format!("choquet_deny[{label}]"))["dims"]["harmonic"], dim);
    }
    assert_eq!(r["summary"]["fail"], 0);
}

#[test]
fn kac_paljutkin_haar_suite_example() {
    let (r, out) = json_report(&["kac_paljutkin.json", "--state", "kp_haar.json", "--random", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let main = entry(&r, "main_theorem[kp_haar]");
    assert_eq!(main["dims"]["harmonic_operators"], 8);
    assert_eq!(main["dims"]["crossed_product"], 8);
    // The shipped Haar state is recognized; no duplicate reference entry.
    assert!(r["entries"].as_array().unwrap().iter().all(|e| e["name"] != "main_theorem[haar]"));
}

#[test]
fn entries_are_sorted_and_passing_residuals_are_within_tolerance() {
    let (r, _) = json_report(&["group_algebra_s3.json", "--state", "cg_s3_a3.json"]);
    let names: Vec<&str> = r["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for e in r["entries"].as_array().unwrap() {
        if e["verdict"] == "pass" {
            for (k, res) in e["residuals"].as_object().unwrap() {
                assert!(res["value"].as_f64().unwrap() <= res["tol"].as_f64().unwrap(), "{} {k}", e["name"]);
            }
        }
    }
    assert_eq!(entry(&r, "bridge[cg_s3_a3]")["dims"]["harmonic"], 3);
}

#[test]
fn report_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = qg(&["suite", "c_z2.json", "--seed", "7", "--report", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["seed"], 7);
    assert!(v["entries"][0].get("wall_clock_s").is_none());
}

#[test]
fn timings_are_opt_in() {
    let (r, _) = json_report(&["c_z2.json", "--random", "0", "--timings"]);
    assert!(r["entries"].as_array().unwrap().iter().all(|e| e["wall_clock_s"].is_number()));
}

#[test]
fn text_report_matches_library_rendering() {
    let out = qg(&["suite", "c_z2.json", "--random", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("C(Z2) (dim 2), seed 42"));
    assert!(text.contains("PASS axioms"));
    assert!(text.trim_end().ends_with("0 fail, 0 skipped"));
    let empty = qg_cli::SuiteReport::new("C(Z2)", 2, 42);
    assert!(String::from_utf8(emit_report(&empty, ReportFormat::Text)).unwrap().starts_with("C(Z2) (dim 2)"));
}

#[test]
fn haar_output_is_a_state_file() {
    let out = qg(&["haar", "c_s3.json"]);
    assert_eq!(out.status.code(), Some(0));
    let state = parse_state_file(&out.stdout).unwrap();
    assert_eq!(state.values.len(), 6);
    assert_eq!(out.stdout, std::fs::read(fixture("s3_haar.json")).unwrap());
}

#[test]
fn spectrum_command() {
    let out = qg(&["spectrum", "kac_paljutkin.json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 4);
    assert_eq!(v["identity"], 0);
    assert_eq!(v["table"].as_array().unwrap().len(), 4);
}

#[test]
fn boundary_command() {
    let out = qg(&["boundary", "c_s3.json", "--state", "s3_phi_h.json", "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["harmonic_dim"], 3);
    assert_eq!(v["blocks"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["nondegenerate"], false);
    let out = qg(&["boundary", "c_s3.json", "--state", "s3_haar.json"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("boundary of dimension 1"));
}

#[test]
fn crossed_command() {
    let out = qg(&["crossed", "group_algebra_s3.json", "--state", "cg_s3_a3.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["harmonic_operators_dim"], v["crossed_product_dim"]);
    assert_eq!(v["isomorphism"], true);
}

#[test]
fn validate_and_tolerance_override() {
    let out = qg(&["validate", "kac_paljutkin.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("pentagon"));
    // A tolerance below the achievable residuals makes the Haar check fail.
    let out = Command::new(env!("CARGO_BIN_EXE_qg"))
        .arg("validate")
        .arg(fixture("kac_paljutkin.json"))
        .env("QG_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = qg(&["validate", "kac_paljutkin.json", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn corrupted_antipode_exits_1() {
    for cmd in ["validate", "suite"] {
        let out = qg(&[cmd, "corrupted_antipode.json"]);
        assert_eq!(out.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&out.stderr).contains("axiom `antipode` violated"));
    }
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\": \"x\", \"dim\": 0, \"mult\": [], \"unit\": [], \"comult\": [], \"counit\": [], \"antipode\": [], \"star\": []}").unwrap();
    let out = qg(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("shape error"));

    let short = dir.path().join("short_state.json");
    std::fs::write(&short, "{\"values\": [[1.0, 0.0]]}").unwrap();
    let out = qg(&["suite", "c_z2.json", "--state", short.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(qg(&["validate", "does_not_exist.json"]).status.code(), Some(1));
    assert_eq!(qg(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qg(&["builtin", "function-algebra"]).status.code(), Some(1));
}

#[test]
fn builtin_from_group_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("z3.json");
    std::fs::write(&table, r#"{"name": "Z3", "table": [[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
    let out_path = dir.path().join("c_z3.json");
    let out = qg(&[
        "builtin",
        "function-algebra",
        "--group-table",
        table.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let spec = qg_cli::parse_spec_file(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(spec.dim, 3);
    assert!(qg(&["validate", out_path.to_str().unwrap()]).status.success());

    let out = qg(&["builtin", "group-algebra", "--group", "s3", "--dual"]);
    assert_eq!(out.status.code(), Some(0));
    let dual = qg_cli::parse_spec_file(&out.stdout).unwrap();
    assert_eq!(dual.dim, 6);
}
