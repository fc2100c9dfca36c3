use std::process::{Command, Output};

use serde_json::Value;

fn ratcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratcount"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Stdout of a run that must succeed.
fn ok(args: &[&str]) -> String {
    let out = ratcount(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&ok(&full)).unwrap()
}

#[test]
fn expand_grammars() {
    assert_eq!(ok(&["expand", "1/3", "--system", "bcf"]), "[2,3;2...]\n");
    assert_eq!(ok(&["expand", "2/5", "--system", "cf"]), "[2,2]c\n");
    assert_eq!(ok(&["expand", "0", "--system", "bcf"]), "[;2...]\n");
    assert_eq!(ok(&["expand", "3/8", "--system", "binary"]), "0.011\n");
    assert_eq!(ok(&["expand", "3/8", "--system", "blocks"]), "(0 2)\n");
    assert_eq!(
        ok(&["expand", "1/3", "--system", "binary", "--depth", "8"]),
        "0.01010101...\n"
    );
}

#[test]
fn orbits() {
    assert_eq!(
        ok(&["orbit", "T", "0", "--steps", "4"]),
        "0\n1/2\n1/3\n2/3\n1/4\n"
    );
    assert_eq!(
        ok(&["orbit", "D2", "0", "--steps", "4"]),
        "0\n1/2\n1/4\n3/4\n1/8\n"
    );
    assert_eq!(ok(&["orbit", "R", "1/3", "--steps", "2"]), "1/3\n1/2\n0\n");
    assert_eq!(
        ok(&["--format", "csv", "orbit", "f", "0", "--steps", "2"]),
        "step,value\n0,0\n1,1\n2,1/2\n"
    );
}

#[test]
fn graph_data_grids() {
    let csv = |m: &str, n: &str| ok(&["--format", "csv", "graph-data", m, "--samples", n]);
    assert_eq!(csv("D2", "4"), "x,y\n0,1/2\n1/4,3/4\n1/2,1/4\n3/4,1/8\n");
    assert_eq!(csv("B", "2"), "x,y\n0,0\n1/2,0\n");
    assert_eq!(csv("T", "4"), "x,y\n0,1/2\n1/4,3/5\n1/2,1/3\n3/4,1/5\n");
    let approx = ok(&["graph-data", "T", "--samples", "4", "--approx"]);
    assert_eq!(
        approx,
        "x,y\n0,0.5\n0.25,0.6\n0.5,0.3333333333333333\n0.75,0.2\n"
    );
}

#[test]
fn enumeration_and_index() {
    let out = ok(&["enumerate", "--target", "unit", "--count", "5"]);
    assert_eq!(out, "0\t0\n1\t1/2\n2\t1/3\n3\t2/3\n4\t1/4\n");
    assert_eq!(
        ok(&["enumerate", "--count", "2", "--from", "4"]),
        "4\t1/3\n5\t3/2\n"
    );
    assert_eq!(ok(&["index-of", "3/2"]), "5\n");
    assert_eq!(ok(&["index-of", "1/4", "--target", "unit"]), "4\n");
    // random access far out in the sequence
    let big = "1267650600228229401496703205376";
    assert_eq!(
        ok(&[
            "enumerate",
            "--target",
            "unit",
            "--count",
            "1",
            "--from",
            big
        ]),
        format!("{big}\t1/102\n")
    );
    assert_eq!(
        ok(&["index-of", "1/102", "--target", "unit"]),
        format!("{big}\n")
    );
}

#[test]
fn question_mark_forms() {
    for algo in ["bcf", "mediant", "denjoy"] {
        assert_eq!(ok(&["qmark", "2/5", "--algo", algo]), "3/2^3\t0.011\n");
    }
    assert_eq!(ok(&["qmark", "0", "--algo", "denjoy"]), "0/2^0\t0.0\n");
    assert_eq!(ok(&["qmark-inv", "3/8"]), "2/5\n");
    assert_eq!(ok(&["qmark-inv", "0.011"]), "2/5\n");
}

#[test]
fn conversions() {
    assert_eq!(ok(&["convert", "[1,1,2]c", "--to", "bcf"]), "[3,3;2...]\n");
    assert_eq!(ok(&["convert", "[3,3;2...]", "--to", "cf"]), "[1,1,2]c\n");
    // without the tail marker a head is read as a finite expansion
    assert_eq!(ok(&["eval", "[3,3]"]), "5/8\n");
    assert_eq!(ok(&["eval", "(0 2)"]), "3/8\n");
    assert_eq!(ok(&["eval", "[2,4;2...]"]), "2/5\n");
}

#[test]
fn verify_suites() {
    let out = ok(&["verify", "action", "--bound", "100"]);
    assert!(out.starts_with("action: checked "), "{out}");
    assert!(out.contains(": 3044\n"), "{out}");
    ok(&["verify", "qmark", "--bound", "50"]);
    let all = ok(&["verify", "all", "--bound", "1"]);
    assert_eq!(
        all.lines().filter(|l| !l.starts_with(' ')).count(),
        7,
        "{all}"
    );
    let report = json(&["verify", "conjugacy", "--bound", "20"]);
    assert_eq!(report[0]["passed"], Value::Bool(true));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| ratcount(args).status.code();
    assert_eq!(code(&["expand", "3/2"]), Some(2));
    assert_eq!(code(&["expand", "1/3", "--system", "binary"]), Some(2));
    assert_eq!(code(&["orbit", "X", "0"]), Some(2));
    assert_eq!(code(&["qmark", "1/2", "--algo", "nope"]), Some(2));
    assert_eq!(code(&["verify", "nope"]), Some(2));
    assert_eq!(code(&["no-such-command"]), Some(2));
    assert_eq!(code(&["graph-data", "T", "--samples", "1"]), Some(2));
    let out = ratcount(&["orbit", "G", "1/2", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1/2\n0\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("step 1"));
}

#[test]
fn output_is_deterministic() {
    let runs: &[&[&str]] = &[
        &["--format", "json", "verify", "all", "--bound", "8"],
        &["--format", "csv", "graph-data", "R2", "--samples", "64"],
        &["enumerate", "--target", "dyadic", "--count", "100"],
    ];
    for args in runs {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
}

#[test]
fn json_round_trips() {
    for x in ["0", "1/3", "2/5", "71/200", "3/8"] {
        for system in ["cf", "bcf", "binary", "blocks"] {
            let out = ratcount(&["--format", "json", "expand", x, "--system", system]);
            if !out.status.success() {
                continue;
            }
            let doc = String::from_utf8(out.stdout).unwrap();
            let value = json(&["eval", doc.trim()]);
            assert_eq!(
                value["value"],
                Value::String(x.to_string()),
                "{system} of {x}"
            );
        }
    }
    let orbit = json(&["orbit", "T", "0", "--steps", "3"]);
    assert_eq!(
        orbit["orbit"],
        serde_json::json!(["0", "1/2", "1/3", "2/3"])
    );
    let q = json(&["qmark", "2/5"]);
    assert_eq!(ok(&["qmark-inv", q["value"].as_str().unwrap()]), "2/5\n");
    let rows = json(&["enumerate", "--count", "4"]);
    for row in rows.as_array().unwrap() {
        let (n, value) = (row["n"].as_str().unwrap(), row["value"].as_str().unwrap());
        assert_eq!(ok(&["index-of", value]), format!("{n}\n"));
    }
}
