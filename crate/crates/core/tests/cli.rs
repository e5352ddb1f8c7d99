use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genus-packets")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json")
}

#[test]
fn envelope_shape() {
    let v = json(&["spheres", "--d", "3"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "spheres");
    assert_eq!(v["params"]["d"], 3);
    assert_eq!(v["results"][0]["count"], 8);
    assert_eq!(v["results"][0]["points"].as_array().unwrap().len(), 8);
}

#[test]
fn rationals_and_floats() {
    let v = json(&["lfactor", "--p", "5", "--split-type", "split", "--n", "1", "--s", "2"]);
    let r = &v["results"][0];
    // 1 + 5^{-3}(1 - 1/5)(1 - 1/25)^{-2}
    assert_eq!(r["closed"]["re"], "1.0069444444444444");
    assert_eq!(r["volumes"]["units"]["num"], 4);
    assert_eq!(r["volumes"]["units"]["den"], 25);
    let half = json(&["lfactor", "--p", "3", "--split-type", "inert", "--n", "1", "--s", "1/2"]);
    let dec = json(&["lfactor", "--p", "3", "--split-type", "inert", "--n", "1", "--s", "0.5"]);
    assert_eq!(half["results"], dec["results"]);
    assert_eq!(run(&["lfactor", "--p", "3", "--split-type", "inert", "--s", "1/0"]).status.code(), Some(64));
    let v = json(&["count", "--disc", "-4", "--x-max", "10", "--y-order", "3"]);
    assert_eq!(v["results"][0]["upper_bound"], true);
    let v = json(&["residue", "--disc", "-4"]);
    assert_eq!(v["results"][0]["l1"].as_str().unwrap().len(), 19);
    assert_eq!(v["results"][0]["equality"], true);
}

#[test]
fn class_group() {
    let v = json(&["classgroup", "--disc", "-23"]);
    assert_eq!(v["results"][0]["h"], 3);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["packet", "--d", "7"]).status.code(), Some(1));
    assert_eq!(run(&["spheres", "--bogus"]).status.code(), Some(64));
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["lfactor", "--p", "4", "--split-type", "split", "--s", "2"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["count", "--disc", "-4", "--x-max", "20", "--oracle"]).status.code(), Some(0));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "local-lfactors", "--max-p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "--suite", "half-bounds", "--max-p", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &v["results"][0];
    assert_eq!(r["suite"], "half-bounds");
    assert_eq!(r["passed"], false);
    assert_eq!(r["failures"].as_array().unwrap().len(), 4);
    assert_eq!(r["failures"][0]["module"], "lfunc");
}

#[test]
fn jobs_do_not_change_output() {
    let args = ["packet", "--d-min", "1", "--d-max", "300"];
    let one = run(&[&args[..], &["--jobs", "1"]].concat());
    let four = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let one = run(&["verify", "--suite", "genus", "--max-d", "300", "--jobs", "1"]);
    let three = run(&["verify", "--suite", "genus", "--max-d", "300", "--jobs", "3"]);
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn csv_outputs() {
    let out = run(&["spheres", "--d-min", "1", "--d-max", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("D,x,y,z"));
    assert_eq!(lines.count(), 6 + 12 + 8);

    let dir = std::env::temp_dir().join(format!("genus-packets-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.csv");
    let out = run(&["stats", "--d", "101", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(golden.join("stats_101.csv")).unwrap());
    assert_eq!(std::fs::read(dir.join("s_summary.csv")).unwrap(), std::fs::read(golden.join("stats_101_summary.csv")).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}
