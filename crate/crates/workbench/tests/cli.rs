use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const PAIR2_WEIGHTED: &str = r#"{
  "name": "pair-2-weighted",
  "groupoid": {"builtin": "pair", "params": {"n": 2}},
  "haar": {"rho": {"1": 1, "2": 4}},
  "group": {"free_abelian": 1},
  "cocycle": {"(1,1)": 0, "(1,2)": -1, "(2,1)": 1, "(2,2)": 0},
  "functions": {"d12": {"(1,2)": [1, 0]}}
}"#;

const PAIR2_GRADED: &str = r#"{
  "name": "pair-2-graded",
  "groupoid": {"builtin": "pair", "params": {"n": 2}},
  "group": {"free_abelian": 1},
  "cocycle": {"(1,1)": 0, "(1,2)": -1, "(2,1)": 1, "(2,2)": 0}
}"#;

const PAIR2_BAD_WEIGHTS: &str = r#"{
  "name": "pair-2-bad-weights",
  "groupoid": {"builtin": "pair", "params": {"n": 2}},
  "haar": {"weights": {"(1,1)": 1, "(1,2)": 2, "(2,1)": 1, "(2,2)": 1}}
}"#;

const PAIR2_NEGATIVE: &str = r#"{
  "name": "pair-2-negative",
  "groupoid": {"builtin": "pair", "params": {"n": 2}},
  "haar": {"rho": {"1": -1, "2": 1}}
}"#;

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn fixture(name: &str, text: &str) -> PathBuf {
    let path = scratch(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .and_then(|rest| rest.split_whitespace().next())
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn validate_reports_structure() {
    let path = fixture("validate.json", PAIR2_WEIGHTED);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("arrows      4"), "{text}");
    assert!(text.contains("weighted"), "{text}");
}

#[test]
fn norms_of_weighted_off_diagonal_delta() {
    let path = fixture("norms.json", PAIR2_WEIGHTED);
    let out = run(&["norms", path.to_str().unwrap(), "--fn", "d12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!((value(&text, "i_norm") - 4.0).abs() < 1e-12, "{text}");
    assert!((value(&text, "cstar_norm") - 2.0).abs() < 1e-12, "{text}");
    assert!((value(&text, "l_operator_norm") - 2.0).abs() < 1e-9, "{text}");
    assert!(text.contains("sandwich         holds"), "{text}");
}

#[test]
fn norms_of_zero_and_unit() {
    let path = fixture("zero-unit.json", PAIR2_WEIGHTED);
    let text = stdout(&run(&["norms", path.to_str().unwrap(), "--fn", "zero"]));
    for key in ["i_norm", "cstar_norm", "module_norm", "l_operator_norm", "restricted_norm"] {
        assert_eq!(value(&text, key), 0.0, "{key}: {text}");
    }
    let text = stdout(&run(&["norms", path.to_str().unwrap(), "--fn", "unit"]));
    assert!((value(&text, "cstar_norm") - 1.0).abs() < 1e-12, "{text}");
}

#[test]
fn input_errors_exit_with_two() {
    let path = fixture("unknown-fn.json", PAIR2_WEIGHTED);
    let out = run(&["norms", path.to_str().unwrap(), "--fn", "missing"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown function"));

    let path = fixture("negative.json", PAIR2_NEGATIVE);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("haar.rho") && err.contains("unit 1"), "{err}");

    let out = run(&["validate", scratch("does-not-exist.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inclusion_suite_on_graded_pair() {
    let path = fixture("inclusion.json", PAIR2_GRADED);
    let out = run(&["verify", path.to_str().unwrap(), "--suite", "inclusion", "--seed", "42", "--count", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.contains("/isometry")).unwrap_or_else(|| panic!("{text}"));
    assert!(line.starts_with("PASS") && line.ends_with("100/100"), "{line}");
}

#[test]
fn perturbed_weight_table_fails_haar_suite() {
    let path = fixture("bad-weights.json", PAIR2_BAD_WEIGHTS);
    let strict = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(2));

    let json = scratch("bad-weights-report.json");
    let out = run(&["verify", path.to_str().unwrap(), "--suite", "haar", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let entry = &report["entries"][0];
    assert_eq!(entry["check"], "left_invariance");
    assert_eq!(entry["status"], "fail");
    assert!(!entry["witness"].as_object().unwrap().is_empty(), "{entry}");
}

#[test]
fn corpus_writes_valid_documents() {
    let dir = scratch("corpus");
    let _ = fs::remove_dir_all(&dir);
    let out = run(&["corpus", "--seed", "3", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let files: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(files.len() >= 12);
    for f in files.iter().take(4) {
        assert_eq!(run(&["validate", f.to_str().unwrap()]).status.code(), Some(0), "{}", f.display());
    }
}

#[test]
fn reports_are_deterministic() {
    let (a, b) = (scratch("det-a.json"), scratch("det-b.json"));
    for path in [&a, &b] {
        let out = run(&["verify", "--corpus", "--suite", "norms", "--seed", "9", "--count", "10", "--json", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
