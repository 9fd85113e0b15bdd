use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_conifold")).args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().expect("exit code"),
    )
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (out, err, code) = run(&full);
    (serde_json::from_str(&out).unwrap_or_else(|_| panic!("not JSON: {out}{err}")), code)
}

#[test]
fn tables_match_golden_and_render_markdown() {
    let (out, _, code) = run(&["tables"]);
    assert_eq!(code, 0);
    assert!(out.contains("| IC | (Q_U[3], 0, 0, 0, 0, 0) | minimal extension |"));
    assert!(out.contains("| split extension | (Q_U[3], Q, Q, 0, id, 0) | trivial extension class |"));
    let (v, _) = json(&["tables"]);
    assert_eq!(v["data"]["table1"].as_array().unwrap().len(), 4);
    assert_eq!(v["data"]["table2"][0]["presentation"]["class_params"], serde_json::json!(["0"]));
}

#[test]
fn json_output_is_stable() {
    let (a, _, _) = run(&["--format", "json", "tables"]);
    let (b, _, _) = run(&["--format", "json", "tables"]);
    assert_eq!(a, b);
}

#[test]
fn check_passes_by_default() {
    let (out, _, code) = run(&["check"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("Result: all checks passed"));
}

#[test]
fn corrupted_golden_file_fails_and_names_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden");
    let t1 = fs::read_to_string(golden.join("table1.json")).unwrap();
    fs::write(dir.path().join("table1.json"), t1).unwrap();
    let t2 = fs::read_to_string(golden.join("table2.json")).unwrap();
    fs::write(dir.path().join("table2.json"), t2.replace("unique nontrivial self-dual class", "some class")).unwrap();

    let (out, _, code) = run(&["check", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("row 3 (corrected non-split extension)"), "{out}");
}

#[test]
fn missing_golden_directory_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let (_, err, code) = run(&["check", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("table1.json"));
}

#[test]
fn verdicts_do_not_depend_on_the_seed() {
    let verdicts = |seed: u64| {
        let (v, code) = json(&["--seed", &seed.to_string(), "check"]);
        let passed: Vec<bool> =
            v["checks"].as_array().unwrap().iter().map(|c| c["passed"].as_bool().unwrap()).collect();
        (passed, code)
    };
    let first = verdicts(0);
    assert_eq!(first, (vec![true; 10], 0));
    for seed in 1..10 {
        assert_eq!(verdicts(seed), first, "seed {seed}");
    }
}

#[test]
fn weights_of_a_jordan_block() {
    let path = data("jordan2.json");
    let (v, code) = json(&["weights", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["graded_dims"], serde_json::json!({"0": 1, "2": 1}));
    assert_eq!(v["data"]["center"], 1);

    let dir = tempfile::tempdir().unwrap();
    let bare = dir.path().join("n.json");
    fs::write(&bare, "[[0, 1], [0, 0]]").unwrap();
    let (v, _) = json(&["weights", "--input", bare.to_str().unwrap(), "--center", "-1"]);
    assert_eq!(v["data"]["graded_dims"], serde_json::json!({"-2": 1, "0": 1}));
}

#[test]
fn weights_rejects_a_non_nilpotent_operator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    fs::write(&path, "[[1, 1], [0, 1]]").unwrap();
    let (_, err, code) = run(&["weights", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn classify_one_node() {
    let (v, code) = json(&["classify", "-r", "1"]);
    assert_eq!(code, 0);
    let orbits = v["data"]["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 2);
    assert_eq!(v["data"]["corrected_orbit"], 1);
    assert_eq!(orbits[1]["representative"], serde_json::json!(["1"]));
    let (out, _, _) = run(&["classify", "-r", "1"]);
    assert!(out.contains("2 (corrected)"));
}

#[test]
fn classify_zero_nodes_is_a_usage_error() {
    assert_eq!(run(&["classify", "-r", "0"]).2, 2);
}

#[test]
fn validate_reports_the_failing_position() {
    let (out, _, code) = run(&["validate", "--input", data("bad_gamma_beta.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] B->H0"), "{out}");
    assert!(out.contains("[PASS] A->B"), "{out}");

    let (out, _, code) = run(&["validate", "--input", data("corrected.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn validate_gluing_and_degeneration() {
    assert_eq!(run(&["validate", "--input", data("gluing.json").to_str().unwrap()]).2, 0);
    let (v, code) = json(&["validate", "--input", data("single_node.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["exact_sequence"]["pointwise_defect"], 1);
    assert_eq!(v["data"]["limiting"]["rank_n"], 1);
}

#[test]
fn schema_errors_exit_2_with_field_and_line() {
    let (out, err, code) = run(&["validate", "--input", data("schema_error.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("alpha[0][0]") && err.contains("line 6"), "{err}");
}

#[test]
fn unreadable_input_exits_2() {
    assert_eq!(run(&["les", "--input", "/nonexistent/les.json"]).2, 2);
}

#[test]
fn monodromy_of_a_single_node() {
    let (v, code) = json(&["monodromy", "--input", data("single_node.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["weight_filtration"]["graded_dims"], serde_json::json!({"2": 1, "4": 1}));
    assert_eq!(v["data"]["log"], serde_json::json!([["0", "-1"], ["0", "0"]]));
}

#[test]
fn monodromy_requires_an_explicit_power_up() {
    let path = data("a2_coxeter.json");
    let (out, _, code) = run(&["monodromy", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("rerun with --power 3"), "{out}");
    let (v, code) = json(&["monodromy", "--input", path.to_str().unwrap(), "--power", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["quasi_unipotent_order"], 3);
}

#[test]
fn les_accepts_the_single_node_witness_and_rejects_a_perturbation() {
    let path = data("les_single_node.json");
    let (v, code) = json(&["les", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["alternating_sum"], 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("les.json");
    let text = fs::read_to_string(&path)
        .unwrap()
        .replace("\"h_phi\": [0, 0, 0, 1, 0, 0, 0]", "\"h_phi\": [0, 0, 0, 1, 0, 1, 0]");
    fs::write(&bad, text).unwrap();
    let (out, _, code) = run(&["les", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("exactness fails at special in degree 6"), "{out}");
}

#[test]
fn unknown_subcommand_is_rejected() {
    assert_ne!(run(&["frobnicate"]).2, 0);
}
