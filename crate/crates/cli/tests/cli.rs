//! End-to-end tests of the binary: exit codes, report round-trips,
//! golden serializations of the built-in games.

use std::path::PathBuf;
use std::process::{Command, Output};

fn equirobust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equirobust"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmpfile(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("equirobust-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn examples_listing_is_stable_and_exits_zero() {
    let a = equirobust(&["examples"]);
    assert!(a.status.success());
    let text = stdout_of(&a);
    assert!(text.contains("flesch-2x2x2"));
    assert!(text.contains("moulin-vial-4x4"));
    let b = equirobust(&["examples"]);
    assert_eq!(stdout_of(&a), stdout_of(&b));
}

#[test]
fn analyze_success_exit_zero() {
    let out = equirobust(&[
        "analyze",
        "--example",
        "matching-pennies",
        "--run",
        "nash",
        "--run",
        "zerosum",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("equilibria: 1"));
    assert!(text.contains("value \"0\""));
}

#[test]
fn input_errors_exit_one() {
    // unknown example
    let out = equirobust(&["analyze", "--example", "nope", "--run", "nash"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown analysis
    let out = equirobust(&["analyze", "--example", "matching-pennies", "--run", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    // invalid parameter arity / name
    let out = equirobust(&[
        "analyze",
        "--example",
        "matching-pennies",
        "--param",
        "eps=1",
        "--run",
        "nash",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // decimal parameters are rejected
    let out = equirobust(&[
        "analyze",
        "--example",
        "flesch-2x2x2",
        "--param",
        "eps=0.5",
        "--run",
        "nash",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // malformed game file
    let path = tmpfile("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = equirobust(&["analyze", "--file", path.to_str().unwrap(), "--run", "nash"]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_file(&path).ok();
    // missing source entirely
    let out = equirobust(&["analyze", "--run", "nash"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn precondition_failures_exit_two() {
    // probe-unique-ce on a game with many correlated equilibria
    let out = equirobust(&[
        "analyze",
        "--example",
        "moulin-vial-3x3",
        "--run",
        "probe-unique-ce",
        "--samples",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // zerosum analysis of a non-zero-sum game
    let out = equirobust(&[
        "analyze",
        "--example",
        "prisoners-dilemma",
        "--run",
        "zerosum",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // symmetric analysis of an asymmetric game
    let out = equirobust(&[
        "analyze",
        "--example",
        "matching-pennies",
        "--run",
        "symmetric-nash",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_roundtrips_and_fingerprint_is_stable() {
    let path = tmpfile("report.json");
    let args = [
        "analyze",
        "--example",
        "counting-3x3",
        "--param",
        "eps=1/10",
        "--run",
        "ce-vertices",
        "--run",
        "nash",
        "--json",
    ];
    let out = equirobust(&[&args[..], &[path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    // lossless round-trip
    let again = serde_json::to_string(&parsed).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&again).unwrap();
    assert_eq!(parsed, reparsed);
    assert_eq!(parsed["results"]["ce-vertices"]["count"], 6);
    assert_eq!(parsed["results"]["nash"]["count"], 4);
    assert!(parsed["command"].as_str().unwrap().contains("--example counting-3x3"));

    // same input, same fingerprint; different input, different fingerprint
    let out2 = equirobust(&[&args[..], &[path.to_str().unwrap()]].concat());
    assert!(out2.status.success());
    let second: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed["fingerprint"], second["fingerprint"]);
    std::fs::remove_file(&path).ok();
}

#[test]
fn file_input_and_profile_verification() {
    // write matching pennies to a file by hand
    let path = tmpfile("pennies.json");
    std::fs::write(
        &path,
        r#"{"players":2,"strategies":[2,2],
            "payoffs":[[[1,-1],[-1,1]],[[-1,1],[1,-1]]]}"#,
    )
    .unwrap();
    let report_path = tmpfile("pennies-report.json");
    let out = equirobust(&[
        "analyze",
        "--file",
        path.to_str().unwrap(),
        "--run",
        "quasi-strict",
        "--profile",
        "1/2,1/2;1/2,1/2",
        "--json",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    std::fs::remove_file(&report_path).ok();
    let qs = &report["results"]["quasi-strict"];
    assert_eq!(qs["nash"], true);
    assert_eq!(qs["quasi_strict"], true);
    assert_eq!(qs["strict"], false);
    std::fs::remove_file(&path).ok();
}

#[test]
fn probe_via_cli() {
    let report_path = tmpfile("probe-report.json");
    let out = equirobust(&[
        "analyze",
        "--example",
        "prisoners-dilemma",
        "--run",
        "probe-unique-ce",
        "--samples",
        "6",
        "--delta",
        "1/8",
        "--grid",
        "16",
        "--seed",
        "5",
        "--json",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    std::fs::remove_file(&report_path).ok();
    let probe = &report["results"]["probe-unique-ce"];
    assert_eq!(probe["persistence_fraction"], "1");
    assert_eq!(probe["sample_count"], 6);
}

#[test]
fn probe_count_requires_counter() {
    let out = equirobust(&[
        "analyze",
        "--example",
        "counting-3x3",
        "--run",
        "probe-count",
        "--samples",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = equirobust(&[
        "analyze",
        "--example",
        "counting-3x3",
        "--run",
        "probe-count",
        "--counter",
        "extreme-ce",
        "--samples",
        "4",
        "--delta",
        "1/100",
    ]);
    assert!(out.status.success());
}

/// The built-in games reproduce their displayed matrices entry for entry.
#[test]
fn golden_registry_serializations() {
    use equirobust_core::registry;
    use equirobust_core::rational::rat;

    let golden = |expected: &str, actual: serde_json::Value| {
        let expected: serde_json::Value = serde_json::from_str(expected).unwrap();
        assert_eq!(actual, expected);
    };

    golden(
        r#"{"players":2,"strategies":[["T","M","B"],["L","M","R"]],
            "payoffs":[[["0","-1","-1"],["-1","1/10","-1"],["0","0","0"]],
                       [["0","-1","0"],["-1","1/10","0"],["-1","-1","0"]]]}"#,
        registry::counting_3x3(&rat(1, 10)).to_json(),
    );

    golden(
        r#"{"players":2,"strategies":[["T","M","B"],["L","M","R"]],
            "payoffs":[[["-1","1","1"],["0","0","-1"],["0","-1","0"]],
                       [["-1","0","0"],["1","0","-1"],["1","-1","0"]]]}"#,
        registry::sym_3x3(&rat(1, 1)).to_json(),
    );

    golden(
        r#"{"players":3,"strategies":[["T","B"],["L","R"],["W","E"]],
            "payoffs":[[[["1","1"],["0","1"]],[["1","0"],["1","0"]]],
                       [[["1","0"],["1","1"]],[["1","1"],["0","0"]]],
                       [[["1","1/2"],["1","0"]],[["0","1"],["1","0"]]]]}"#,
        registry::flesch_2x2x2(&rat(1, 2)).to_json(),
    );

    golden(
        r#"{"players":2,"strategies":[4,4],
            "payoffs":[[["0","2","1","-1"],["1","0","2","-1"],["2","1","0","-1"],["2","2","2","0"]],
                       [["0","1","2","2"],["2","0","1","2"],["1","2","0","2"],["-1","-1","-1","0"]]]}"#,
        registry::moulin_vial_4x4(&rat(2, 1)).to_json(),
    );

    golden(
        r#"{"rows":3,"cols":2,"matrix":[["-1","0"],["0","-1"],["0","-1"]]}"#,
        registry::zerosum_3x2(&rat(1, 1)).to_json(),
    );

    golden(
        r#"{"players":1,"strategies":[2],"payoffs":[["0","1"]]}"#,
        registry::one_person(&rat(1, 1)).to_json(),
    );

    golden(
        r#"{"players":2,"strategies":[2,2],
            "payoffs":[[["1","0"],["0","-1"]],[["1","0"],["0","-1"]]]}"#,
        registry::coord_2x2(&rat(1, 1)).to_json(),
    );
}

#[test]
fn matrix_game_json_roundtrip() {
    use equirobust_core::rational::rat;
    use equirobust_core::registry;
    use equirobust_core::zerosum::MatrixGame;
    let m = registry::zerosum_3x2(&rat(1, 3));
    let v = m.to_json();
    let back = MatrixGame::from_json(&v).unwrap();
    assert_eq!(back, m);
    assert!(MatrixGame::from_json(&serde_json::json!({"rows": 1})).is_err());
}
