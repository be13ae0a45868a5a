use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ackloop_cli::encode::CertificateDoc;

const GOLDEN: &str = include_str!("golden/trace_2_3.txt");

fn ackloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ackloop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn rules() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("rules/ack.rules")
}

fn rules_arg() -> String {
    rules().to_str().unwrap().to_owned()
}

#[test]
fn trace_2_3_matches_golden_file() {
    let o = ackloop(&["trace", "2", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), GOLDEN);
    assert_eq!(GOLDEN.lines().count(), 45);
}

#[test]
fn short_traces() {
    assert_eq!(stdout(&ackloop(&["trace", "0", "0"])), "0 0\n1\n");
    assert_eq!(stdout(&ackloop(&["trace", "0", "5"])), "5 0\n6\n");
}

#[test]
fn json_trace_carries_version_and_rules() {
    let o = ackloop(&["trace", "2", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["states"].as_array().unwrap().len(), 45);
    assert_eq!(v["steps"][0], "R3");
    assert_eq!(v["value"], "9");
    assert_eq!(v["terminal"], "T_SINGLETON");
}

#[test]
fn compute_methods() {
    for (args, want) in [
        (vec!["compute", "2", "3", "--method", "loop"], "9\n"),
        (vec!["compute", "0", "0", "--method", "naive"], "1\n"),
        (vec!["compute", "3", "3", "--method", "memo"], "61\n"),
        (vec!["compute", "3", "3", "--method", "closed"], "61\n"),
        (vec!["compute", "3", "3", "--method", "list"], "61\n"),
        (
            vec!["compute", "3", "70", "--method", "closed", "-q"],
            "9444732965739290427389\n",
        ),
    ] {
        let o = ackloop(&args);
        assert_eq!(code(&o), 0, "{args:?}");
        assert_eq!(stdout(&o), want, "{args:?}");
    }
    assert_eq!(
        stdout(&ackloop(&["compute", "2", "3", "-v"])),
        "9\nsteps 44\n"
    );
    assert_eq!(
        stdout(&ackloop(&["compute", "2", "3", "--method", "naive", "-v"])),
        "9\ncalls 44\n"
    );
}

#[test]
fn exit_code_contract() {
    // usage
    assert_eq!(code(&ackloop(&[])), 2);
    assert_eq!(code(&ackloop(&["compute", "x", "1"])), 2);
    assert_eq!(code(&ackloop(&["compute", "-1", "1"])), 2);
    assert_eq!(
        code(&ackloop(&["compute", "1", "1", "--method", "fast"])),
        2
    );
    assert_eq!(
        code(&ackloop(&["compute", "4", "1", "--method", "closed"])),
        2
    );

    // fuel
    let o = ackloop(&["compute", "3", "8", "--method", "naive", "--fuel", "1000"]);
    assert_eq!(code(&o), 3);
    assert!(
        stderr(&o).contains("consumed 1000 of 1000"),
        "{}",
        stderr(&o)
    );
    assert_eq!(stdout(&o), "");
    let o = ackloop(&["compute", "3", "8", "--fuel", "10"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("consumed 10 of 10"));
    assert_eq!(code(&ackloop(&["trace", "3", "8", "--fuel", "10"])), 3);
    assert_eq!(code(&ackloop(&["cert", "3", "8", "--fuel", "10"])), 3);

    // resource caps
    assert_eq!(
        code(&ackloop(&["compute", "3", "30", "--method", "closed"])),
        0
    );
    assert_eq!(
        code(&ackloop(&[
            "compute", "3", "20000000", "--method", "closed"
        ])),
        4
    );
    assert_eq!(
        code(&ackloop(&["compute", "4", "2", "--method", "memo"])),
        4
    );
    assert_eq!(
        code(&ackloop(&["graph", "3", "3", "2000000", "--cap", "1000"])),
        4
    );
}

#[test]
fn certificates_round_trip_and_tampering_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = ackloop(&["cert", "2", "3"]);
    assert_eq!(code(&o), 0);
    let doc: CertificateDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.version, 1);
    assert_eq!(doc.chain.len(), 45);
    assert_eq!(doc.conclusion, ["3", "2"]);

    let good = dir.path().join("good.cert");
    fs::write(&good, stdout(&o)).unwrap();
    let o = ackloop(&["cert", "--verify", good.to_str().unwrap()]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "Valid\n"));

    let mut bad = doc.clone();
    bad.chain[17][1] = "7".into();
    let path = dir.path().join("tampered.cert");
    fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    let o = ackloop(&["cert", "--verify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(
        stdout(&o).starts_with("Invalid at position 17"),
        "{}",
        stdout(&o)
    );

    let path = dir.path().join("broken.cert");
    fs::write(&path, "{\"version\": 1}").unwrap();
    assert_eq!(
        code(&ackloop(&["cert", "--verify", path.to_str().unwrap()])),
        2
    );
    let missing = dir.path().join("missing.cert");
    assert_eq!(
        code(&ackloop(&["cert", "--verify", missing.to_str().unwrap()])),
        2
    );
}

#[test]
fn cert_0_0() {
    let o = ackloop(&["cert", "0", "0"]);
    let doc: CertificateDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.chain, [vec!["0", "0"], vec!["1"]]);
    assert_eq!(doc.rules, ["R1"]);
}

#[test]
fn equiv_grids() {
    let o = ackloop(&["equiv", "0", "0"]);
    assert_eq!(
        (code(&o), stdout(&o).as_str()),
        (0, "0 0 1 PASS\n1/1 cells pass\n")
    );
    let o = ackloop(&["equiv", "2", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("2 3 9 PASS\n"));
    let o = ackloop(&["equiv", "3", "8", "-q"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "36/36 cells pass\n"));
    // fuel shortfall is a failing cell, not an abort
    let o = ackloop(&["equiv", "3", "3", "--fuel", "100"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("3 3 FAIL naive: fuel exhausted"));
    assert!(stdout(&o).contains("0 0 1 PASS"));
}

#[test]
fn graph_and_dom_u() {
    let o = ackloop(&["graph", "0", "2", "5"]);
    assert_eq!(
        stdout(&o),
        "entries 3\nfunctional yes\n0 0 1\n0 1 2\n0 2 3\n"
    );
    let o = ackloop(&["graph", "2", "3", "20"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("functional yes\n"));
    assert!(stdout(&o).lines().any(|l| l == "2 3 9"));
    let o = ackloop(&["dom-u", "--fuel", "1000"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "G_U empty (0 entries)\nD_U empty (0 entries)\n");
}

#[test]
fn rewrite_runs() {
    let r = rules_arg();
    assert_eq!(
        stdout(&ackloop(&["rewrite", &r, "3 2", "--mode", "anchored"])),
        "9\n"
    );
    let o = ackloop(&["rewrite", &r, "", "--mode", "anchored"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "\n"));
    let o = ackloop(&[
        "rewrite",
        &r,
        "4 0 0 1",
        "--mode",
        "free",
        "--positions",
        "1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["final"], serde_json::json!(["4", "1", "1"]));
    assert_eq!(v["steps"][0], serde_json::json!({"rule": 1, "position": 1}));
    assert_eq!(v["status"], "pending");

    let o = ackloop(&["rewrite", &r, "8 3", "--fuel", "5"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("consumed 5 of 5"));
    assert_eq!(
        code(&ackloop(&[
            "rewrite",
            &r,
            "4 0 0 1",
            "--mode",
            "free",
            "--positions",
            "9"
        ])),
        2
    );
    assert_eq!(
        code(&ackloop(&[
            "rewrite",
            &r,
            "4 0 0 1",
            "--mode",
            "free",
            "--positions",
            "3"
        ])),
        1
    );
    assert_eq!(code(&ackloop(&["rewrite", &r, "1 x"])), 2);
    assert_eq!(code(&ackloop(&["rewrite", &r])), 2);
}

#[test]
fn rule_parse_errors_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.rules");
    fs::write(&path, "x 0 | L -> S(x) | L\n0 S m | L -> 1 k | L\n").unwrap();
    let o = ackloop(&["rewrite", path.to_str().unwrap(), "1 1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2, column 16"), "{}", stderr(&o));
}

#[test]
fn search_is_deterministic_and_replayable() {
    let r = rules_arg();
    let args = [
        "rewrite",
        &r,
        "--search",
        "--mode",
        "free",
        "--threshold",
        "50",
        "--fuel",
        "10000",
        "--format",
        "json",
    ];
    let a = ackloop(&args);
    let b = ackloop(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["version"], 1);
    let positions: Vec<String> = v["positions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.to_string())
        .collect();
    let start: Vec<&str> = v["start"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    let replayed = ackloop(&[
        "rewrite",
        &r,
        &start.join(" "),
        "--mode",
        "free",
        "--positions",
        &positions.join(","),
    ]);
    assert_eq!(code(&replayed), 0);

    let o = ackloop(&[
        "rewrite", &r, "--search", "--mode", "anchored", "--fuel", "10000",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("none found"));
}
