use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperekr"))
        .args(args)
        .env("HYPEREKR_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn json(cache: &Path, args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(cache, &all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn row<'a>(report: &'a Value, formula: &str) -> &'a Value {
    report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["formula"] == formula)
        .unwrap_or_else(|| panic!("no row {formula}"))
}

#[test]
fn enumerate_writes_cache() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = json(dir.path(), &["enumerate", "--m", "2", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(report["schema"], 1);
    assert_eq!(row(&report, "num_generators")["oracle_value"], "30");
    assert_eq!(row(&report, "class_split")["oracle_value"], "15/15");
    assert!(dir.path().join("qplus-m2-q2-v1.gens").exists());

    let again = run(dir.path(), &["enumerate", "--m", "2", "--q", "2"]);
    assert!(String::from_utf8_lossy(&again.stderr).contains("loaded from cache"));
}

#[test]
fn infeasible_enumeration_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["enumerate", "--m", "4", "--q", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["enumerate", "--q", "2"][..],
        &["enumerate", "--m", "1", "--q", "6"],
        &["construct", "--type", "I", "--n", "1", "--q", "2"],
        &["construct", "--type", "II", "--k", "1", "--n", "1", "--q", "2"],
        &["construct", "--type", "III", "--n", "1", "--q", "2"],
        &["verify", "--suite", "counts"],
    ] {
        assert_eq!(run(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn counts_suite_matches() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = json(dir.path(), &["verify", "--suite", "counts", "--m", "2", "--q", "3"]);
    assert_eq!(code, 0);
    assert!(report["rows"].as_array().unwrap().iter().all(|r| r["match"] == true));
}

#[test]
fn inequality_suite_shows_documented_failure() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = json(dir.path(), &["verify", "--suite", "inequalities"]);
    assert_eq!(code, 0);
    let r = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["formula"] == "key_inequality" && r["params"] == "n=2 q=2")
        .unwrap();
    assert_eq!(r["oracle_value"], "2049 < 2295");
    assert_eq!(r["match"], false);
    assert_eq!(r["expected_fail"], true);
}

#[test]
fn identity_suite_matches() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = json(dir.path(), &["verify", "--suite", "identities", "--n", "3"]);
    assert_eq!(code, 0);
    let rows = report["rows"].as_array().unwrap();
    for name in ["missing_either=skew_to_pair+2*meeting_first_only", "missing_either=q^e*core"] {
        assert!(rows.iter().filter(|r| r["formula"] == name).count() > 10);
    }
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--suite", "constructions", "--m", "2", "--q", "2", "--seed", "7", "--threads", "1", "--format", "csv"];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn construct_point_pencil_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("pencil.json");
    let (code, report) = json(
        dir.path(),
        &["construct", "--type", "point-pencil", "--n", "1", "--q", "3", "--check-maximal", "--export", export.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    assert_eq!(row(&report, "size_point-pencil")["oracle_value"], "8");
    assert_eq!(row(&report, "maximal_point-pencil")["oracle_value"], "true");
    let set: Value = serde_json::from_str(&std::fs::read_to_string(export).unwrap()).unwrap();
    assert_eq!(set["tag"], "point-pencil");
    assert_eq!(set["member_indices"].as_array().unwrap().len(), 8);
}

#[test]
fn construct_families_on_q5() {
    let dir = tempfile::tempdir().unwrap();
    for (args, formula, size) in [
        (&["--type", "one-class", "--class", "1"][..], "size_one-class", "15"),
        (&["--type", "second"], "size_second", "8"),
        (&["--type", "I", "--k", "1", "--j", "0"], "size_I", "8"),
        (&["--type", "ii", "--k", "0"], "size_II", "6"),
    ] {
        let mut all = vec!["construct", "--n", "1", "--q", "2", "--check-maximal"];
        all.extend(args);
        let (code, report) = json(dir.path(), &all);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(row(&report, formula)["oracle_value"], size, "{args:?}");
    }
}

#[test]
fn classify_q2() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = json(dir.path(), &["classify", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(row(&report, "maximal-cliques")["oracle_value"], "67");
}

#[test]
fn classify_cap_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["classify", "--q", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("maximal clique search"));
}

#[test]
fn table_and_csv_formats() {
    let dir = tempfile::tempdir().unwrap();
    let table = run(dir.path(), &["enumerate", "--m", "1", "--q", "3"]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.starts_with("formula"));
    assert!(text.contains("num_generators"));
    let csv = run(dir.path(), &["enumerate", "--m", "1", "--q", "3", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("formula,params,closed_form,oracle_value,match,expected_fail,anchor,micros"));
}
