use std::process::{Command, Output};

use serde_json::Value;

fn symcycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcycle")).args(args).env_remove("SYMCYCLE_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn decompose_vertex_string() {
    let o = symcycle(&["decompose", "--t", "3", "--vertex", "-+-", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["x"], serde_json::json!([-1, 1, -1]));
    assert_eq!(v["q"], 3);
    assert_eq!(v["members"].as_array().unwrap().len(), 3);
}

#[test]
fn decompose_sets() {
    let v = json(&symcycle(&["decompose", "--t", "3", "--set", "", "--format", "json"]));
    assert_eq!(v["x"], serde_json::json!([1, 0, 0]));
    assert_eq!(v["q"], 1);
    let v = json(&symcycle(&["decompose", "--t", "3", "--set", "2", "--format", "json"]));
    assert_eq!(v["q"], 3);
}

#[test]
fn decompose_text_lists_members() {
    let out = stdout(&symcycle(&["decompose", "--t", "3", "--vertex", "-+-"]));
    assert!(out.contains("x       (-1, 1, -1)"), "{out}");
    assert!(out.contains("D^3  ---"), "{out}");
}

#[test]
fn decompose_on_a_given_cycle() {
    let v = json(&symcycle(&[
        "decompose",
        "--t",
        "4",
        "--vertex",
        "-+-+",
        "--start",
        "-+++",
        "--flip-order",
        "2,1,3,4",
        "--format",
        "json",
    ]));
    assert_eq!(v["q"], 3);
    assert_eq!(v["cycle"]["start"], "-+++");
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [
        &["decompose", "--t", "3", "--vertex", "-+"][..],
        &["decompose", "--t", "3", "--vertex", "-x-"],
        &["decompose", "--t", "17", "--set", "1"],
        &["decompose", "--t", "3", "--set", "4"],
        &["stats", "--family", "nope", "--t", "4"],
        &["smirnov", "--alphabet", "3", "--parikh", "2,a", "--first", "0", "--last", "0"],
        &["pairs", "--t", "3", "--statistic", "orthogonal"],
        &["verify", "--suite", "bogus"],
        &["frobnicate"],
    ] {
        let o = symcycle(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn stats_partition_t3() {
    let o = symcycle(&["stats", "--family", "partition", "--t", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header.len(), 15);
    assert_eq!(header[0], "family");
    assert_eq!(header[14], "match");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let total: u64 = rows.iter().map(|r| r[13].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 6);
    assert!(rows.iter().all(|r| &r[14] == "true"));
    // Absent parameters are empty fields.
    assert!(rows.iter().all(|r| r[6].is_empty() && r[11].is_empty()));
}

#[test]
fn stats_intersect_cover3_has_the_count_one_row() {
    let out = stdout(&symcycle(&["stats", "--family", "intersect-cover3", "--t", "4"]));
    assert!(out.lines().any(|l| l == "intersect-cover3,4,{1},{t},2,3,,1,1,3,,,1,1,true"), "{out}");
}

#[test]
fn stats_refuses_beyond_the_oracle_bound() {
    let o = symcycle(&["stats", "--family", "disjoint-noncover", "--t", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle bound"));
    assert!(o.stdout.is_empty());
    assert_eq!(
        symcycle(&["stats", "--family", "partition", "--t", "4", "--oracle-bound", "11"]).status.code(),
        Some(2)
    );
}

#[test]
fn stats_writes_json_to_a_file() {
    let dir = std::env::temp_dir().join(format!("symcycle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cover2.json");
    let o = symcycle(&[
        "stats",
        "--family",
        "intersect-cover2",
        "--t",
        "5",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["mismatched"], 0);
    assert_eq!(v["oracle_pairs"], 150);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_reports() {
    let o = symcycle(&["verify", "--suite", "valuation", "--t-max", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v[0]["suite"], "valuation");
    assert_eq!(v[0]["t_range"], serde_json::json!([3, 7]));
    assert_eq!(v[0]["failures"], serde_json::json!([]));

    let v = json(&symcycle(&["verify", "--suite", "pairwise", "--t-max", "3"]));
    assert!(v[0]["skipped"].as_u64().unwrap() > 0);
}

#[test]
fn verify_all_passes_at_t6() {
    let o = symcycle(&["verify", "--suite", "all", "--t-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 11);
}

#[test]
fn smirnov_prints_both_values() {
    let out = stdout(&symcycle(&["smirnov", "--alphabet", "3", "--parikh", "2,1,1", "--first", "0", "--last", "0"]));
    assert_eq!(out, "closed_form 2\noracle      2\n");
    let v = json(&symcycle(&[
        "smirnov",
        "--alphabet",
        "3",
        "--parikh",
        "9,9,9",
        "--first",
        "0",
        "--last",
        "1",
        "--format",
        "json",
    ]));
    assert!(v["oracle"].is_null());
}

#[test]
fn pairs_examples() {
    let out = stdout(&symcycle(&["pairs", "--t", "4", "--statistic", "orthogonal"]));
    assert_eq!(out.lines().nth(1), Some("4,orthogonal,,,,,,96,96,true"));
    let out = stdout(&symcycle(&["pairs", "--t", "3", "--statistic", "distance", "--k", "0"]));
    assert_eq!(out.lines().nth(1), Some("3,distance,0,,,,,8,8,true"));
    let v = json(&symcycle(&["pairs", "--t", "8", "--statistic", "johnson-mutual", "--format", "json"]));
    assert!(v.as_array().unwrap().iter().all(|r| r["match"] == true));
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["stats", "--family", "intersect-noncover3", "--t", "6"];
    let one = Command::new(env!("CARGO_BIN_EXE_symcycle")).args(args).env("SYMCYCLE_WORKERS", "1").output().unwrap();
    let many = symcycle(&[&["--workers", "3"][..], &args].concat());
    assert_eq!(one.stdout, many.stdout);
}
