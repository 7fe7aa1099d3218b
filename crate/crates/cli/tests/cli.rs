mod common;

use std::fs;

use common::{run, schema, schema_errors};
use serde_json::{json, Value};

fn small_verify_args() -> Vec<&'static str> {
    vec![
        "verify-paper",
        "--z-range",
        "20",
        "--delta-count",
        "10",
        "--eps-trials",
        "5",
        "--samples",
        "500",
    ]
}

#[test]
fn every_command_emits_a_schema_valid_report() {
    let validator = schema();
    let dir = tempfile::tempdir().unwrap();
    let space = dir.path().join("space.json");
    let map = dir.path().join("map.json");
    fs::write(&space, r#"{"a": "[[a]]", "b": "[[a,b]]"}"#).unwrap();
    fs::write(&map, r#"{"a": "a", "b": "b"}"#).unwrap();
    let (space, map) = (space.to_str().unwrap(), map.to_str().unwrap());
    let invocations: Vec<Vec<&str>> = vec![
        small_verify_args(),
        vec!["enumerate", "--size", "2"],
        vec!["enumerate", "--size", "4"],
        vec!["check-universal", "--max-x", "2", "--max-y", "2"],
        vec![
            "search-product-quotient",
            "--max-x",
            "2",
            "--max-y",
            "1",
            "--mode",
            "box",
        ],
        vec!["check-continuity", space, space, map],
    ];
    for args in invocations {
        let out = run(&args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let report = out.json();
        assert_eq!(report["command"], args[0]);
        assert_eq!(report["overall"], "pass");
        let errors = schema_errors(&validator, &report);
        assert!(errors.is_empty(), "{args:?}:\n{errors}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = schema();
    let good = json!({
        "command": "enumerate",
        "config": {},
        "checks": [{"name": "x", "status": "pass", "witness": null}],
        "overall": "pass",
    });
    assert!(validator.is_valid(&good));
    let mut bad_status = good.clone();
    bad_status["overall"] = json!("ok");
    assert!(!validator.is_valid(&bad_status));
    let mut no_checks = good.clone();
    no_checks["checks"] = json!([]);
    assert!(!validator.is_valid(&no_checks));
    let mut search = good.clone();
    search["command"] = json!("check-universal");
    assert!(!validator.is_valid(&search), "search reports need a result");
}

#[test]
fn output_is_deterministic() {
    let args = small_verify_args();
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);

    let mut other_seed = args.clone();
    other_seed.extend(["--seed", "7"]);
    assert_ne!(a.stdout, run(&other_seed).stdout);

    let s1 = run(&["search-product-quotient", "--max-x", "2", "--max-y", "2"]);
    let s2 = run(&["search-product-quotient", "--max-x", "2", "--max-y", "2"]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["check-universal", "--max-x", "3", "--max-y", "2"];
    let default = run(&args);
    let single = std::process::Command::new(common::BIN)
        .args(args)
        .env("NBHD_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(single.status.success());
    assert_eq!(default.stdout.as_bytes(), single.stdout.as_slice());

    let bad = std::process::Command::new(common::BIN)
        .args(args)
        .env("NBHD_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["enumerate", "--size", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["result"]["stacks_per_point"], 5);
    assert_eq!(
        report["result"]["structure_list"].as_array().unwrap().len(),
        125
    );
}

#[test]
fn enumerate_counts() {
    for (size, per_point, structures) in [
        (1, 1, "1"),
        (2, 2, "4"),
        (3, 5, "125"),
        (4, 19, "130321"),
        (5, 167, "129891985607"),
    ] {
        let report = run(&["enumerate", "--size", &size.to_string()]).json();
        assert_eq!(
            report["result"]["stacks_per_point"], per_point,
            "size {size}"
        );
        assert_eq!(report["result"]["structures"], structures, "size {size}");
        assert_eq!(report["result"].get("structure_list").is_some(), size <= 3);
    }
}

#[test]
fn usage_and_validation_errors_exit_with_2() {
    let cases: &[&[&str]] = &[
        &[],
        &["no-such-command"],
        &["verify-paper", "--q", "1/0"],
        &["verify-paper", "--q", "abc"],
        &["verify-paper", "--mode", "C"],
        &["verify-paper", "--samples", "0"],
        &["verify-paper", "--delta-count", "0"],
        &["verify-paper", "--window", "-1"],
        &["enumerate", "--size", "0"],
        &["enumerate", "--size", "6"],
        &["check-universal", "--max-x", "4"],
        &["search-product-quotient", "--mode", "diagonal"],
        &[
            "check-continuity",
            "/nonexistent/a.json",
            "/nonexistent/b.json",
            "/nonexistent/c.json",
        ],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_with_0() {
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["verify-paper", "--help"]).code, 0);
}

#[test]
fn check_continuity_reports_witness_and_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    // b has only {a,b} as a neighborhood, so b -> v misses {v}.
    let dom = write("dom.json", r#"{"a": "[[a]]", "b": "[[a,b]]"}"#);
    let cod = write("cod.json", r#"{"u": [["u"]], "v": [["v"]]}"#);
    let map = write("map.json", r#"{"a": "u", "b": "v"}"#);
    let out = run(&["check-continuity", &dom, &cod, &map]);
    assert_eq!(out.code, 1);
    let report = out.json();
    assert_eq!(report["overall"], "fail");
    assert_eq!(report["result"]["discontinuities"], json!(["b"]));
    let failing: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["witness"]["neighborhood"], json!(["v"]));
    assert_eq!(failing[0]["witness"]["image_stack"], "[[u,v]]");

    // Every map into an indiscrete space is continuous.
    let indiscrete = write("ind.json", r#"{"u": "[[u,v]]", "v": "[[u,v]]"}"#);
    assert_eq!(run(&["check-continuity", &dom, &indiscrete, &map]).code, 0);

    let partial = write("partial.json", r#"{"a": "u"}"#);
    assert_eq!(run(&["check-continuity", &dom, &cod, &partial]).code, 2);
    let not_nbd = write("bad.json", r#"{"u": "[[v]]", "v": "[[v]]"}"#);
    assert_eq!(run(&["check-continuity", &dom, &not_nbd, &map]).code, 2);
    let garbage = write("garbage.json", "{");
    assert_eq!(run(&["check-continuity", &garbage, &cod, &map]).code, 2);
}
