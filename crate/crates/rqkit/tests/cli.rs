//! End-to-end tests of the `rqk` binary: the gen/build/query round trip,
//! snapshot compatibility checks, fuzzing exit codes and the CSV shape.

use std::fs;
use std::io::Write;
use std::process::{Command, Stdio};

fn rqk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rqk"))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("rqk-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn build_query_round_trip_on_lists() {
    // the 11-label example list, raw values as in the module tests
    let list = tmp("l1.txt");
    fs::write(&list, "3\n1\n4\n1\n5\n9\n2\n6\n5\n3\n5\n").unwrap();
    let snap = tmp("l1.rqk");
    let status = rqk()
        .args(["build", "--kind", "mode-tradeoff", "--epsilon", "0.5", "--out"])
        .arg(&snap)
        .arg(&list)
        .status()
        .unwrap();
    assert!(status.success());
    let magic = fs::read(&snap).unwrap();
    assert_eq!(&magic[..4], b"RQK1");

    let mut child = rqk()
        .arg("query")
        .arg(&snap)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"2 10\n6 6\n1 11\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 3);
    // value<TAB>witness<TAB>probes; the mode of [2..10] has frequency 2
    let fields: Vec<&str> = lines[0].split('\t').collect();
    assert_eq!(fields.len(), 3);
    assert_eq!(fields[1], "2");
    assert_eq!(lines[1].split('\t').collect::<Vec<_>>()[..2], ["9", "1"]);
    assert_eq!(lines[2].split('\t').collect::<Vec<_>>()[..2], ["5", "3"]);
}

#[test]
fn malformed_queries_are_usage_errors() {
    let list = tmp("l2.txt");
    fs::write(&list, "3\n1\n4\n").unwrap();
    let snap = tmp("l2.rqk");
    assert!(rqk()
        .args(["build", "--kind", "median-range-tree", "--arity", "2", "--out"])
        .arg(&snap)
        .arg(&list)
        .status()
        .unwrap()
        .success());
    for bad in ["0 5", "2 1", "4 4", "1"] {
        let mut child = rqk()
            .arg("query")
            .arg(&snap)
            .stdin(Stdio::piped())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .unwrap();
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(format!("{bad}\n").as_bytes())
            .unwrap();
        let status = child.wait().unwrap();
        assert_eq!(status.code(), Some(2), "query {bad:?} must exit 2");
    }
}

#[test]
fn bad_epsilon_is_a_usage_error() {
    let list = tmp("l3.txt");
    fs::write(&list, "1\n2\n3\n").unwrap();
    let status = rqk()
        .args(["build", "--kind", "mode-tradeoff", "--epsilon", "0.9", "--out"])
        .arg(tmp("l3.rqk"))
        .arg(&list)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn tree_round_trip_through_files() {
    let tree = tmp("t1.txt");
    // the 7-node example tree in the 1-based text format
    fs::write(
        &tree,
        "7 1\n1 0 3\n2 1 1\n3 1 5\n4 2 5\n5 2 1\n6 3 5\n7 6 3\n",
    )
    .unwrap();
    let snap = tmp("t1.rqk");
    assert!(rqk()
        .args(["build", "--kind", "median-tree", "--out"])
        .arg(&snap)
        .arg(&tree)
        .status()
        .unwrap()
        .success());
    let mut child = rqk()
        .arg("query")
        .arg(&snap)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    // path 4..7 has labels [5,1,3,5,5,3]: median value 5 at rank 4
    child.stdin.as_mut().unwrap().write_all(b"4 7\n4 5\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout).unwrap().lines().collect();
    assert_eq!(lines[0].split('\t').collect::<Vec<_>>()[..2], ["5", "4"]);
    assert_eq!(lines[1].split('\t').collect::<Vec<_>>()[..2], ["1", "2"]);
}

#[test]
fn snapshot_version_is_checked() {
    let list = tmp("l4.txt");
    fs::write(&list, "1\n2\n").unwrap();
    let snap = tmp("l4.rqk");
    assert!(rqk()
        .args(["build", "--kind", "mode-constant", "--k", "1", "--out"])
        .arg(&snap)
        .arg(&list)
        .status()
        .unwrap()
        .success());
    let mut bytes = fs::read(&snap).unwrap();
    bytes[4] = 99; // version field
    fs::write(&snap, bytes).unwrap();
    let out = rqk().arg("query").arg(&snap).stdin(Stdio::null()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuzz_passes_clean_and_fails_self_check_inversely() {
    let out = rqk()
        .args(["fuzz", "--kind", "median-range-tree", "--instances", "5", "--n", "24"])
        .current_dir(std::env::temp_dir())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));

    let repro = tmp("repro.txt");
    let out = rqk()
        .args(["fuzz", "--kind", "mode-constant", "--instances", "3", "--n", "12"])
        .args(["--self-check", "--out"])
        .arg(&repro)
        .output()
        .unwrap();
    assert!(out.status.success(), "self-check catches the injected defect");
    let text = fs::read_to_string(&repro).unwrap();
    assert!(text.contains("query:"));
    assert!(text.contains("expected:"));
}

#[test]
fn fuzz_reports_are_byte_identical_for_equal_seeds() {
    let run = || {
        rqk()
            .args(["fuzz", "--kind", "mode-tradeoff", "--instances", "6", "--n", "32"])
            .args(["--seed", "777"])
            .current_dir(std::env::temp_dir())
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn bench_emits_the_csv_grid() {
    let csv = tmp("bench.csv");
    assert!(rqk()
        .args(["bench", "--kind", "mode-constant,median-constant", "--n", "128,256"])
        .args(["--k", "4", "--queries", "40", "--out"])
        .arg(&csv)
        .status()
        .unwrap()
        .success());
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("kind,n,param"));
    assert!(lines[1].starts_with("mode-constant,128,k=4"));
    assert!(lines[4].starts_with("median-constant,256"));
}

#[test]
fn gen_is_deterministic_per_seed() {
    let a = rqk()
        .args(["gen", "--kind", "tree-caterpillar", "--n", "40", "--seed", "5"])
        .output()
        .unwrap();
    let b = rqk()
        .args(["gen", "--kind", "tree-caterpillar", "--n", "40", "--seed", "5"])
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("40 1\n"));
    assert_eq!(text.lines().count(), 41);
}
