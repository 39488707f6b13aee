use std::process::{Command, Output};

use serde_json::Value;

fn strata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata")).args(args).env_remove("STRATA_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn psi_integral_text_and_json() {
    let o = strata(&["integrate", "psi", "1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/24\n");
    let o = strata(&["--format", "json", "integrate", "psi", "2", "4"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["result"], "1/1152");
}

#[test]
fn expect_mismatch_exits_1() {
    assert_eq!(strata(&["integrate", "psi", "1", "1", "--expect", "1/24"]).status.code(), Some(0));
    assert_eq!(strata(&["integrate", "psi", "1", "1", "--expect", "1/12"]).status.code(), Some(1));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(strata(&["bogus"]).status.code(), Some(2));
    assert_eq!(strata(&["integrate", "psi", "0", "0,0"]).status.code(), Some(2));
    assert_eq!(strata(&["--primes", "7,11,13", "pair", "0", "5", "2"]).status.code(), Some(2));
    assert_eq!(strata(&["--epsilon", "2", "reps", "dim", "2,1"]).status.code(), Some(2));
    assert_eq!(strata(&["reps", "dim", "1,2"]).status.code(), Some(2));
    let o = strata(&["omega", "rank", "--file", "/nonexistent.og"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.og");
    std::fs::write(&bad, "class\nterm 1\nv0 genus=x\n").unwrap();
    let o = strata(&["omega", "rank", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3"), "error names the line");
}

#[test]
fn graphs_and_pairing() {
    let o = strata(&["graphs", "0", "5", "--expect", "26"]);
    assert_eq!(o.status.code(), Some(0));
    let o = strata(&["--format", "json", "pair", "0", "5", "2", "--expect", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dims"], serde_json::json!([16, 16]));
    assert!(v.get("timings").is_none());
    let o = strata(&["--format", "json", "pair", "0", "5", "2", "--timings"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["timings"]["total_seconds"].is_number());
}

#[test]
fn classes_from_json() {
    let o = strata(&["integrate", "class", &data("classes/psi1_m11.json"), "--expect", "1/24"]);
    assert_eq!(o.status.code(), Some(0));
    let o = strata(&["product", &data("classes/d12.json"), &data("classes/d34.json"), "--expect", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = strata(&["product", &data("classes/d12.json"), &data("classes/d12.json"), "--expect", "-1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn omega_rank_from_file() {
    let o = strata(&["omega", "rank", "--file", &data("m1_12.og"), "--expect", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = strata(&["omega", "rank", "--file", &data("m1_13.og"), "--expect", "429"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn omega_emit_round_trips() {
    let o = strata(&["omega", "emit", "m112"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.og");
    let mut src = stdout(&o);
    src.push_str("battery\n");
    src.push_str(&stdout(&strata(&["omega", "emit", "pulled-back", "n=12", "pol=antihol"])));
    std::fs::write(&f, src).unwrap();
    assert_eq!(strata(&["omega", "rank", "--file", f.to_str().unwrap(), "--expect", "11"]).status.code(), Some(0));
}

#[test]
fn figure2_needs_its_data() {
    let o = strata(&["omega", "figure2", "--data", "/nonexistent.og"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn region_assertions() {
    assert_eq!(strata(&["region", "--k", "17", "--contains", "1,17", "--contains", "2,14"]).status.code(), Some(0));
    assert_eq!(strata(&["region", "--k", "17", "--contains", "1,18"]).status.code(), Some(1));
    assert_eq!(strata(&["region", "--k", "17", "--excludes", "1,18"]).status.code(), Some(0));
    let o = strata(&["--format", "json", "region", "--k", "4"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for e in v["excluded"].as_array().unwrap() {
        assert!(!e["reasons"].as_array().unwrap().is_empty());
    }
    assert_eq!(strata(&["region", "--k", "0", "--expect", "0"]).status.code(), Some(0));
}

#[test]
fn reps_motive_fill() {
    let o = strata(&["reps", "induce", "2", "1,1,1,1,1,1,1,1,1,1"]);
    assert_eq!(stdout(&o), "V(3,1,1,1,1,1,1,1,1,1) + V(2,1,1,1,1,1,1,1,1,1,1)\n");
    assert_eq!(strata(&["reps", "dim", "3,1,1,1,1,1,1,1,1,1", "--expect", "55"]).status.code(), Some(0));
    assert_eq!(strata(&["reps", "restrict", "2,2", "--expect", "V(2,1)"]).status.code(), Some(0));
    assert_eq!(strata(&["motive", "shape", "1", "11", "11", "--expect", "+S12"]).status.code(), Some(0));
    let o = strata(&["--format", "json", "fill", "2", "14", "17"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["conditions"][0]["head"], true);
}

#[test]
fn verify_and_emit_checks() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("cases.json");
    let o = strata(&["--emit-checks", f.to_str().unwrap(), "verify", "--cases", "25"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["cases"].as_array().unwrap().len(), 25);
}

#[test]
fn thread_count_does_not_change_results() {
    let a = strata(&["--threads", "1", "--format", "json", "omega", "rank", "--file", &data("m1_13.og")]);
    let b = strata(&["--threads", "3", "--format", "json", "omega", "rank", "--file", &data("m1_13.og")]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(strata(&["--threads", "0", "reps", "dim", "1"]).status.code(), Some(2));
}

#[test]
fn csv_output() {
    let o = strata(&["--format", "csv", "region", "--k", "2"]);
    assert!(stdout(&o).starts_with("g,n,k,in_region,reasons\n"));
    let o = strata(&["--format", "csv", "pair", "0", "5", "2"]);
    assert_eq!(stdout(&o).lines().count(), 16);
}
