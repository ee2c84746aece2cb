use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rickit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rickit")).args(args).output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_writes_a_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = rickit(&["verify", "round-s5", "--samples", "20", "--seed", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_eq!(v["scenario"], "round-s5");
    assert_eq!(v["seed"], 5);
    for key in ["params", "criteria", "wall_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for c in v["criteria"].as_array().unwrap() {
        for key in ["name", "expected", "observed", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "criterion missing {key}");
        }
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn reports_are_reproducible_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let p = dir.path().join(name);
        let o = rickit(&["verify", "cheeger-s3s3", "--samples", "200", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
        let mut v = read_json(&p);
        v["wall_ms"] = Value::from(0);
        reports.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn csv_goes_to_stdout() {
    let o = rickit(&["verify", "hopf-cp2", "--samples", "20", "--format", "csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scenario,seed,criterion,expected,observed,tolerance,pass"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn obstruction_family_with_params() {
    let o = rickit(&["verify", "obstruction", "--family", "P_A7", "--param", "p_minus=1", "--trials", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["params"]["family"], "P_A7");
    let d = v["criteria"].as_array().unwrap().iter().find(|c| c["name"] == "P_A7: max d").unwrap();
    assert_eq!(d["observed"], 3);
}

#[test]
fn obstruct_reads_a_diagram_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.txt");
    std::fs::write(
        &file,
        "G = S3 x S1\nH = trivial\nKminus = circle[(i,1):(1,0)]\nKplus = circle[(j,1):(d,1)]\nd = 2\nn = 5\n",
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let o = rickit(&["obstruct", "--file", file.to_str().unwrap(), "--trials", "10", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    let get = |n: &str| v["criteria"].as_array().unwrap().iter().find(|c| c["name"] == n).unwrap()["observed"].clone();
    assert_eq!(get("d"), 2);
    assert_eq!(get("verdict"), 2);
}

#[test]
fn bad_input_exits_with_an_error() {
    assert_eq!(rickit(&["verify", "round-s5", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(rickit(&["verify", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(rickit(&["verify", "round-s5", "--family", "M_d5"]).status.code(), Some(2));
    assert_eq!(rickit(&["verify", "cheeger-s3s3", "--l", "-1"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "G = S3 x S1\nH = trivial\nKminus = circle[(q,1):(1,0)]\n").unwrap();
    let o = rickit(&["obstruct", "--file", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn list_names_every_scenario() {
    let o = rickit(&["list"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["round-s5", "hopf-cp2", "product-s3s5", "cheeger-s3s3", "s3xcp2", "s2xcp2", "obstruction", "jacobi"] {
        assert!(text.contains(name), "{name}");
    }
}
