//! End-to-end checks of the command-line surface: exit codes, the
//! stable JSON report schema, and the determinant calculator.

use std::process::{Command, Output};

fn fanocheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanocheck"))
        .args(args)
        .env_remove("FANOCHECK_DB")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn normalize_millis(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        if let Some(idx) = line.find("\"millis\": ") {
            let (head, tail) = line.split_at(idx + "\"millis\": ".len());
            let rest: String = tail.chars().skip_while(|c| c.is_ascii_digit()).collect();
            out.push_str(head);
            out.push('0');
            out.push_str(&rest);
        } else {
            out.push_str(line);
        }
        out.push('\n');
    }
    out
}

#[test]
fn verify_json_report_matches_golden_file() {
    let args = [
        "verify", "--families", "22,103", "--format", "json", "--oracle", "--seed", "7",
        "--samples", "20",
    ];
    let out = fanocheck(&args);
    assert!(out.status.success());
    let got = normalize_millis(&stdout(&out));
    let want = include_str!("golden/verify_22_103.json");
    assert_eq!(got, want, "JSON report schema drifted");
    // identical inputs and seed give identical reports
    let again = normalize_millis(&stdout(&fanocheck(&args)));
    assert_eq!(got, again);
}

#[test]
fn verify_all_families_exits_zero() {
    let out = fanocheck(&["verify", "--families", "all", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], serde_json::Value::Bool(true));
    assert_eq!(doc["reports"].as_array().unwrap().len(), 130);
}

#[test]
fn verify_unknown_family_exits_two() {
    let out = fanocheck(&["verify", "--families", "200"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown family"));
}

#[test]
fn verify_class_filter_and_empty_selection() {
    let out = fanocheck(&["verify", "--families", "all", "--class", "special", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["reports"].as_array().unwrap().len(), 3);

    // family 22 is not rational: intersecting the selections is empty
    let out = fanocheck(&["verify", "--families", "22", "--class", "rational"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn det_reproduces_scripted_identities() {
    let out = fanocheck(&[
        "det", "--weights", "2,3,5,11,19", "--p", "2", "--xi", "t^3*z,z^7*y,y^12*x", "--j",
        "x,y,z", "--stratum", "y,z,t",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "y^12*z^7*t^3");

    // a determinant that degenerates exits 1
    let out = fanocheck(&[
        "det", "--weights", "1,2,2,3", "--p", "7", "--xi", "y^7,z^7", "--j", "y,z", "--stratum",
        "y,z",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "0");

    let out = fanocheck(&[
        "det", "--weights", "1,3,3,4", "--p", "2", "--xi", "x^9*z,y^4", "--j", "z", "--stratum",
        "x,y", "--bordered",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "x^9*y^4");
}

#[test]
fn det_rejects_malformed_input() {
    let out = fanocheck(&[
        "det", "--weights", "1,2,2,3", "--p", "2", "--xi", "q^7", "--j", "y", "--stratum", "y",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = fanocheck(&[
        "det", "--weights", "1,2,2,3", "--p", "4", "--xi", "y^7", "--j", "y", "--stratum", "y",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // mixed weighted degrees are refused
    let out = fanocheck(&[
        "det", "--weights", "1,2,2,3", "--p", "2", "--xi", "y^7,z^2", "--j", "y,z", "--stratum",
        "y,z",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_rejects_empty_selection() {
    let out = fanocheck(&["classify", "--families", ""]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_reports_twenty_rational_rows() {
    let out = fanocheck(&["classify", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 130);
    let rational: Vec<u64> = rows
        .iter()
        .filter(|r| r["classification"] == "RATIONAL_BY_CRITERION")
        .map(|r| r["family"].as_u64().unwrap())
        .collect();
    assert_eq!(
        rational,
        vec![104, 105, 106, 111, 112, 113, 114, 115, 118, 119, 120, 121, 123, 124, 125, 126,
             127, 128, 129, 130]
    );
    let row96 = rows.iter().find(|r| r["family"] == 96).unwrap();
    assert_eq!(row96["note"], "excluded: cubic threefold");
}

#[test]
fn dump_db_round_trips_and_env_override_works() {
    let out = fanocheck(&["dump-db"]);
    assert!(out.status.success());
    let dumped = stdout(&out);

    let dir = std::env::temp_dir().join("fanocheck-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("db-copy.json");
    std::fs::write(&path, &dumped).unwrap();

    let out = Command::new(env!("CARGO_BIN_EXE_fanocheck"))
        .args(["dump-db"])
        .env("FANOCHECK_DB", &path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), dumped);

    // a broken database is a usage error
    std::fs::write(&path, "{\"schema_version\": 9, \"families\": []}").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fanocheck"))
        .args(["verify", "--families", "22"])
        .env("FANOCHECK_DB", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
