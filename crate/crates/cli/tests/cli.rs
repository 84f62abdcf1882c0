use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patrol-games")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn n2_value_below_two() {
    let v = json(&["value", "--preset", "N2", "--m", "1.5"]);
    assert_eq!(v["exact"], true);
    assert_eq!(v["value"], 0.5);
    assert_eq!(v["value_status"], "exact");
}

#[test]
fn n2_bounds_at_three() {
    let v = json(&["bounds", "--preset", "N2", "--m", "3"]);
    assert!((v["lower"].as_f64().unwrap() - 13.0 / 15.0).abs() < 1e-15);
    assert!((v["upper"].as_f64().unwrap() - 11.0 / 12.0).abs() < 1e-15);
    assert_eq!(v["lower_status"], "lower");
    assert_eq!(v["upper_status"], "upper");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["value", "--preset", "N2", "--m", "3"]).status.code(), Some(2));
    let out = run(&["value", "--preset", "N2", "--m", "3"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 < m < 4"));
    assert_eq!(run(&["value", "--preset", "disc", "--r", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["value"]).status.code(), Some(1));
    assert_eq!(run(&["value", "--preset", "N7", "--m", "1"]).status.code(), Some(1));
    assert_eq!(run(&["value", "--preset", "N2", "--m", "1:0:2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn fig3_sweep_is_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["sweep", "--preset", "N2", "--m", "0:0.1:5", "--out", p.to_str().unwrap(), "--seed", "7"]);
        assert!(out.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let header = rows.headers().unwrap().clone();
    assert_eq!(&header[2], "m");
    let recs: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 51);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    // m = 3 is row 30; m = 5 is in the exact regime.
    assert_eq!(&recs[30][col("m")], "3.0");
    assert_eq!(&recs[30][col("lower_status")], "lower");
    assert_eq!(&recs[50][col("lower")], "1.0");
}

#[test]
fn game_file_finite_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("five.json");
    std::fs::write(
        &path,
        r#"{"space": {"kind": "points", "points": [[0,0],[0,1],[1,1],[1,0],[0.5,0]]}, "r": 1.0}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["verify-equalizing", "--game", p]);
    assert_eq!(v["equalizing"], false);
    assert_eq!(v["verified"], true);
    let v = json(&["value", "--game", p]);
    assert!(v["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn r_ranges_give_one_record_each() {
    let v = json(&["value", "--preset", "unit-interval", "--r", "0.1:0.1:0.5"]);
    let vals: Vec<f64> = v.as_array().unwrap().iter().map(|x| x["value"].as_f64().unwrap()).collect();
    assert_eq!(vals, vec![0.2, 1.0 / 3.0, 0.5, 0.5, 1.0]);
}

#[test]
fn strategies_and_oracle() {
    let v = json(&["strategy", "--preset", "unit-interval", "--r", "0.2"]);
    let searcher: Vec<&Value> = v.as_array().unwrap().iter().filter(|x| x["player"] == "searcher").collect();
    assert_eq!(searcher.len(), 3);
    let v = json(&["oracle", "--preset", "circle", "--m", "1", "--threads", "2", "--max-iter", "20"]);
    let (lo, hi) = (v["lower"].as_f64().unwrap(), v["upper"].as_f64().unwrap());
    assert!(lo <= 1.0 / 3.0 && 1.0 / 3.0 <= hi, "[{lo}, {hi}]");
}
