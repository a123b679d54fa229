use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sdcode::enumeration::full_distribution;
use sdcode::gleason::{reed_muller_3_7_distribution, render_table};
use sdcode::LinearCode;
use serde_json::Value;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/bordered_genmatrix.txt")
}

fn sdcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdcode"))
        .args(args)
        .env_remove("WDIST_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_rm(dir: &Path, r: u32, m: u32) -> String {
    let path = dir.join(format!("rm_{r}_{m}.txt"));
    let p = path.to_str().unwrap().to_string();
    let o = sdcode(&["build", "rm", "--r", &r.to_string(), "--m", &m.to_string(), "-o", &p]);
    assert!(o.status.success());
    p
}

#[test]
fn build_reed_muller() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rm37.txt");
    let o = sdcode(&["build", "rm", "--r", "3", "--m", "7", "-o", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[128, 64] self-dual doubly-even"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 64);
    assert!(text.lines().all(|l| l.len() == 128));

    let o = sdcode(&["build", "rm", "--r", "5", "--m", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_load_fixture() {
    let o = sdcode(&[
        "--format",
        "json",
        "build",
        "load",
        "--input",
        fixture().to_str().unwrap(),
    ]);
    let v = json(&o);
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(128), Some(64)));
    assert_eq!(v["self_dual"], Value::Bool(true));
}

#[test]
fn build_designs() {
    let o = sdcode(&["build", "pg-design", "--m", "2", "--s", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = sdcode(&["build", "ag-design", "--m", "3", "--s", "2"]);
    assert_eq!(stdout(&o).lines().count(), 14);
    let o = sdcode(&["build", "pg-design", "--m", "2", "--s", "1", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_input_is_io_error() {
    let o = sdcode(&["wdist", "/nonexistent/g.txt", "--full"]);
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "10\n0x\n").unwrap();
    let o = sdcode(&["wdist", bad.to_str().unwrap(), "--full"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(
        sdcode(&["--threads", "0", "gleason", "--n", "8", "--fit", "{}"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sdcode(&["wdist", "x.txt"]).status.code(), Some(2));
    assert_eq!(sdcode(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn wdist_full_small_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_rm(dir.path(), 1, 3);
    let v = json(&sdcode(&["--format", "json", "wdist", &p, "--full"]));
    let counts: Vec<(String, String)> = v["counts"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, c)| (k.clone(), c.as_str().unwrap().to_string()))
        .collect();
    assert_eq!(
        counts,
        [("0", "1"), ("4", "14"), ("8", "1")].map(|(a, b)| (a.to_string(), b.to_string()))
    );
}

#[test]
fn wdist_budget_refusal() {
    let o = sdcode(&["wdist", fixture().to_str().unwrap(), "--max-weight", "20"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("projected work"));

    let dir = tempfile::tempdir().unwrap();
    let p = write_rm(dir.path(), 2, 6);
    let o = Command::new(env!("CARGO_BIN_EXE_sdcode"))
        .args(["wdist", &p, "--max-weight", "16"])
        .env("WDIST_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let o = sdcode(&["wdist", &p, "--max-weight", "16", "--budget", "1", "--force"]);
    assert!(o.status.success());
}

#[test]
fn json_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_rm(dir.path(), 2, 6);
    let runs: Vec<Vec<u8>> = ["1", "2", "3"]
        .iter()
        .map(|t| {
            let o = sdcode(&["--format", "json", "--threads", t, "wdist", &p, "--max-weight", "16"]);
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert!(runs.iter().all(|r| r == &runs[0]));
    let v: Value = serde_json::from_slice(&runs[0]).unwrap();
    assert_eq!(v["counts"]["16"], "2604");
}

#[test]
fn gleason_reproduces_table() {
    let o = sdcode(&["gleason", "--n", "128", "--a16", "94488", "--a20", "0"]);
    assert!(o.status.success());
    let expected = render_table(&reed_muller_3_7_distribution());
    let out = stdout(&o);
    assert!(out.starts_with(&expected), "{out}");
    assert!(out.ends_with("MacWilliams check: pass\n"));
}

#[test]
fn gleason_fit_length_32() {
    let v = json(&sdcode(&[
        "--format",
        "json",
        "gleason",
        "--n",
        "32",
        "--fit",
        r#"{"0":1,"4":0}"#,
    ]));
    assert_eq!(v["counts"]["8"], "620");
    let rm25 = full_distribution(&LinearCode::reed_muller(2, 5).unwrap()).unwrap();
    for (w, c) in rm25.iter() {
        assert_eq!(v["counts"][w.to_string()], c.to_string());
    }
}

#[test]
fn gleason_errors() {
    let o = sdcode(&["gleason", "--n", "32", "--fit", r#"{"0":2,"4":0}"#]);
    assert_eq!(o.status.code(), Some(5));
    let o = sdcode(&["gleason", "--n", "128", "--fit", r#"{"0":1,"4":0}"#]);
    assert_eq!(o.status.code(), Some(5));
    let o = sdcode(&["gleason", "--n", "32", "--a16", "1", "--a20", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gleason_alternative_counts_still_transform_correctly() {
    let v = json(&sdcode(&[
        "--format", "json", "gleason", "--n", "128", "--a16", "0", "--a20", "1",
    ]));
    assert_eq!(v["macwilliams_check"], Value::Bool(true));
    assert_eq!(v["counts"]["20"], "1");
}

#[test]
fn design_check_commands() {
    let dir = tempfile::tempdir().unwrap();
    let fano = dir.path().join("fano.txt");
    assert!(sdcode(&[
        "build",
        "pg-design",
        "--m",
        "2",
        "--s",
        "1",
        "-o",
        fano.to_str().unwrap()
    ])
    .status
    .success());
    let v = json(&sdcode(&[
        "--format",
        "json",
        "design-check",
        "--design",
        fano.to_str().unwrap(),
    ]));
    assert_eq!(v["design"]["lambda"], 1);
    assert_eq!(v["two_rank"], 4);
    assert_eq!(v["intersections"]["support"], serde_json::json!([1]));

    let skew = dir.path().join("skew.txt");
    std::fs::write(&skew, "0 1\n0 2\n").unwrap();
    let o = sdcode(&["design-check", "--design", skew.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let p = write_rm(dir.path(), 1, 3);
    let v = json(&sdcode(&["--format", "json", "design-check", "--code", &p, "-t", "3"]));
    assert_eq!((v["b"].as_u64(), v["design"]["lambda"].as_u64()), (Some(14), Some(1)));
    assert_eq!(v["spans_code"], Value::Bool(true));
}

#[test]
fn neighbor_test_small_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.txt");
    std::fs::write(&p, "1100\n0011\n").unwrap();
    let v = json(&sdcode(&["--format", "json", "neighbor-test", p.to_str().unwrap()]));
    assert_eq!((v["rank_M"].as_u64(), v["rank_M_aug"].as_u64()), (Some(2), Some(2)));
    assert_eq!(v["solvable"], Value::Bool(true));

    std::fs::write(&p, "1100\n").unwrap();
    let o = sdcode(&["neighbor-test", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn verify_rejects_corrupted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture()).unwrap();
    let mut bytes = text.into_bytes();
    bytes[3] = if bytes[3] == b'0' { b'1' } else { b'0' };
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, bytes).unwrap();
    let o = sdcode(&["verify", "cstar", "--quick", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("claim failed"));
}

#[test]
fn verify_all_quick() {
    let o = sdcode(&[
        "--format",
        "json",
        "verify",
        "all",
        "--quick",
        "--fixture",
        fixture().to_str().unwrap(),
    ]);
    let v = json(&o);
    assert_eq!(v["passed"], Value::Bool(true));
    let claims = v["claims"].as_array().unwrap();
    assert!(claims.iter().all(|c| c["passed"] == Value::Bool(true)));
    assert_eq!(claims.last().unwrap()["claim"], "identical weight distributions");
}
