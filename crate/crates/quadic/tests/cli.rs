//! End-to-end tests of the `quadic` binary: output formats, exit codes,
//! determinism, and the scan's report files.

use std::process::{Command, Output};

fn quadic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

#[test]
fn analyze_p5_reports_known_complexity() {
    let output = quadic(&["analyze", "--p", "5"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(record["p"], 5);
    assert_eq!(record["theta"], 2);
    assert_eq!(record["x"], 1);
    assert_eq!(record["y"], -1);
    let u3 = &record["sequences"][2];
    assert_eq!(u3["k"], 3);
    assert_eq!(u3["u4"], "396");
    assert_eq!(u3["gcd"], "33");
    assert_eq!(u3["complexity"], 2);
}

#[test]
fn analyze_rejects_wrong_residue_class() {
    let output = quadic(&["analyze", "--p", "17"]);
    assert_eq!(output.status.code(), Some(1));
    let error: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(error["error"]["kind"], "WrongResidueClass");
}

#[test]
fn analyze_rejects_composite() {
    let output = quadic(&["analyze", "--p", "9"]);
    assert_eq!(output.status.code(), Some(1));
    let error: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(error["error"]["kind"], "NotPrime");
}

#[test]
fn analyze_with_verify_passes_all_checks() {
    let output = quadic(&["analyze", "--p", "13", "--verify"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(record["verification"]["all_ok"], true);
    assert_eq!(record["verification"]["h_square"], true);
}

#[test]
fn analyze_output_is_byte_identical_across_runs() {
    let args = ["analyze", "--p", "13", "--verify", "--raa", "--autocorr"];
    let first = stdout_of(&quadic(&args));
    let second = stdout_of(&quadic(&args));
    assert_eq!(first, second);
    assert!(!first.contains("unix_time"));
}

#[test]
fn analyze_stamp_adds_timestamp() {
    let output = quadic(&["analyze", "--p", "5", "--stamp"]);
    assert!(stdout_of(&output).contains("unix_time"));
}

#[test]
fn analyze_record_round_trips_from_p_and_theta() {
    let first = stdout_of(&quadic(&["analyze", "--p", "29"]));
    let record: serde_json::Value = serde_json::from_str(&first).unwrap();
    let p = record["p"].as_u64().unwrap().to_string();
    let theta = record["theta"].as_u64().unwrap().to_string();
    let rerun = stdout_of(&quadic(&["analyze", "--p", &p, "--theta", &theta]));
    assert_eq!(first, rerun);
}

#[test]
fn analyze_csv_format() {
    let output = quadic(&["analyze", "--p", "5", "--format", "csv"]);
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,theta,x,y,k,complexity,bound,gcd,threshold_ok"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[2], "5,2,1,-1,3,2,2,33,true");
}

#[test]
fn dump_prints_symbols_and_provenance() {
    let output = quadic(&["dump", "--p", "5", "--seq", "3"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "0 3 0 2 1");
    assert_eq!(lines.next().unwrap(), "# u3 = phi[s2, s4]");
    assert_eq!(lines.next().unwrap(), "# s2 support: 1 3");
    assert_eq!(lines.next().unwrap(), "# s4 support: 3 4");
}

#[test]
fn dump_u16() {
    let output = quadic(&["dump", "--p", "5", "--seq", "16"]);
    assert_eq!(stdout_of(&output).lines().next().unwrap(), "2 2 1 3 0");
}

#[test]
fn dump_rejects_out_of_range_index() {
    let output = quadic(&["dump", "--p", "5", "--seq", "17"]);
    assert_eq!(output.status.code(), Some(1));
    let error: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(error["error"]["kind"], "IndexOutOfRange");
}

#[test]
fn dump_json_format() {
    let output = quadic(&["dump", "--p", "5", "--seq", "3", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(report["symbols"], serde_json::json!([0, 3, 0, 2, 1]));
    assert_eq!(report["components"], "phi[s2, s4]");
}

#[test]
fn scan_writes_reports_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let output = quadic(&["scan", "--max-p", "61", "--out", out, "--jobs", "2"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.contains("p=5 theta=2 min_complexity=2"));

    for p in [5u64, 13, 29, 37, 53, 61] {
        let path = dir.path().join(format!("p{p}.json"));
        let record: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(record["p"], p);
    }
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,theta,x,y,k,complexity,bound,gcd,threshold_ok"
    );
    assert_eq!(lines.count(), 6 * 16);
    // Every sequence meets the threshold at every scanned prime.
    assert!(!csv.contains(",false"));
}

#[test]
fn scan_without_valid_primes_notes_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let output = quadic(&["scan", "--max-p", "4", "--out", out]);
    assert!(output.status.success());
    assert!(stdout_of(&output).contains("no valid primes"));
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn scan_honours_env_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_quadic"))
        .args(["scan", "--max-p", "5"])
        .env("QUADIC_OUT", dir.path())
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(dir.path().join("p5.json").exists());
}

#[test]
fn raa_subcommand_reports_recovery() {
    let output = quadic(&["raa", "--p", "5", "--seq", "all"]);
    assert!(output.status.success());
    let attacks: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let list = attacks.as_array().unwrap();
    assert_eq!(list.len(), 16);
    for attack in list {
        let recovered = attack["recovered_at_prefix"].as_u64().unwrap();
        assert!(recovered <= 20, "u{} took {recovered}", attack["k"]);
    }
}

#[test]
fn theta_override_changes_y_sign() {
    let output = quadic(&["analyze", "--p", "5", "--theta", "3"]);
    let record: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(record["y"], 1);
}

#[test]
fn invalid_theta_fails_with_exit_1() {
    let output = quadic(&["analyze", "--p", "5", "--theta", "4"]);
    assert_eq!(output.status.code(), Some(1));
    let error: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(error["error"]["kind"], "NotPrimitiveRoot");
}

#[test]
fn bad_flags_exit_1() {
    let output = quadic(&["analyze", "--p", "5", "--seq", "banana"]);
    assert_eq!(output.status.code(), Some(1));
    let output = quadic(&["analyze"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let output = quadic(&["--help"]);
    assert!(output.status.success());
}
