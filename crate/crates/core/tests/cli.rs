use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ppcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppcc")).args(args).output().expect("ppcc runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn measure_disc_of_had2() {
    let m = fixture("had2.sign");
    let out = ppcc(&["measure", "--matrix", m.to_str().unwrap(), "--which", "disc"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["value"], "1/4");
    assert_eq!(r["value_f64"], 0.25);
}

#[test]
fn measure_csv() {
    let m = fixture("had2.sign");
    let out = ppcc(&["measure", "--matrix", m.to_str().unwrap(), "--which", "disc-prime", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "which,rows,cols,value,value_f64");
    assert!(lines[1].starts_with("disc-prime,2,2,"));
}

#[test]
fn measure_bp_worked_example() {
    let m = fixture("identity2.bool");
    let out = ppcc(&["measure", "--matrix", m.to_str().unwrap(), "--which", "bp", "--eps", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 2.0);
}

#[test]
fn measure_mc_hadamard() {
    let m = fixture("hadamard2.sign");
    let out = ppcc(&["measure", "--matrix", m.to_str().unwrap(), "--which", "mc"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let v = r["value"].as_f64().unwrap();
    assert!((v - 2f64.sqrt()).abs() < 0.05 * 2f64.sqrt(), "{v}");
    assert_eq!(r["flagged"], false);
}

#[test]
fn missing_file_is_usage_error() {
    let out = ppcc(&["measure", "--matrix", "missing.file", "--which", "disc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("file not found"));
    let out = ppcc(&["measure", "--matrix", "missing.file"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(ppcc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ppcc(&["verify", "--suite", "nope"]).status.code(), Some(2));
    let m = fixture("identity2.bool");
    let out = ppcc(&["measure", "--matrix", m.to_str().unwrap(), "--which", "bp", "--eps", "a third"]);
    assert_eq!(out.status.code(), Some(2));
    let x = fixture("x.json");
    let out = ppcc(&["compile", "--protocols", x.to_str().unwrap(), "--poly", "z1 +"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compile_lemma1_verifies() {
    let (x, y) = (fixture("x.json"), fixture("y.json"));
    let emit = std::env::temp_dir().join(format!("ppcc-compiled-{}.json", std::process::id()));
    let out = ppcc(&[
        "compile",
        "--protocols",
        x.to_str().unwrap(),
        y.to_str().unwrap(),
        "--poly",
        "z1*z2 - 2*z1 + 3",
        "--emit",
        emit.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["verified"], true);
    // x has gaps 2 on row 0 and 0 on row 1; y has gaps -1, 1 by column
    let want: Vec<i64> = [(2, -1), (2, 1), (0, -1), (0, 1)].iter().map(|&(a, b)| a * b - 2 * a + 3).collect();
    let got: Vec<i64> = r["gap_grid"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().parse().unwrap()).collect();
    assert_eq!(got, want);
    let emitted = ppcc::protocols::serialize::parse_guess(&std::fs::read_to_string(&emit).unwrap()).unwrap();
    let _ = std::fs::remove_file(&emit);
    assert_eq!(emitted.gap_grid().iter().map(|v| v.to_string()).collect::<Vec<_>>(), got.iter().map(|v| v.to_string()).collect::<Vec<_>>());
}

#[test]
fn compile_majority_and_rational() {
    let (x, y) = (fixture("x.json"), fixture("y.json"));
    let (x, y) = (x.to_str().unwrap(), y.to_str().unwrap());
    let out = ppcc(&["compile", "--protocols", x, y, x, "--majority"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["mode"], "majority");
    let out = ppcc(&["compile", "--protocols", x, y, "--rational", "(z1 + 1) / (z2 - 3)"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["verified"], true);
}

#[test]
fn amplify_error_third() {
    let (i, m) = (fixture("error_third.json"), fixture("error_third.bool"));
    let out = ppcc(&["amplify", "--input", i.to_str().unwrap(), "--matrix", m.to_str().unwrap(), "--t", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["base_error"], "1/3");
    // 1 - P[Bin(3, 2/3) >= 2] = 7/27
    assert_eq!(r["error"], "7/27");
    assert_eq!(r["within_tail"], true);
}

#[test]
fn amplify_with_newman_is_deterministic() {
    let (i, m) = (fixture("error_third.json"), fixture("error_third.bool"));
    let args = [
        "amplify",
        "--input",
        i.to_str().unwrap(),
        "--matrix",
        m.to_str().unwrap(),
        "--t",
        "3",
        "--trials",
        "60",
        "--seed",
        "11",
    ];
    let a = ppcc(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, ppcc(&args).stdout);
    assert!(json(&a)["newman"]["trials"].is_number());
}

#[test]
fn pipeline_fixtures() {
    for name in ["and", "or2", "boundary"] {
        let (i, m) = (fixture(&format!("tarui_{name}.json")), fixture(&format!("tarui_{name}.bool")));
        let out = ppcc(&["pipeline", "--input", i.to_str().unwrap(), "--matrix", m.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let want = if name == "boundary" { "1/3" } else { "0" };
        assert_eq!(json(&out)["max_error"], want, "{name}");
    }
}

#[test]
fn pipeline_wrong_language_fails_with_witness() {
    let (i, m) = (fixture("tarui_or2.json"), fixture("tarui_and.bool"));
    let out = ppcc(&["pipeline", "--input", i.to_str().unwrap(), "--matrix", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("(0,0)"), "{}", stderr(&out));
}

#[test]
fn verify_gap_algebra_is_reproducible() {
    let args = ["verify", "--suite", "gap-algebra", "--seed", "7"];
    let a = ppcc(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let r = json(&a);
    assert_eq!(r["passed"], true);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["cases"].as_array().unwrap().len(), 1000);
    assert_eq!(r["summary"][0]["detail"], "1000 of 1000 cases passed");
    assert_eq!(a.stdout, ppcc(&args).stdout);
}

#[test]
fn verify_writes_report_file() {
    let path = std::env::temp_dir().join(format!("ppcc-verify-{}.json", std::process::id()));
    let out = ppcc(&["verify", "--suite", "yao", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let _ = std::fs::remove_file(&path);
    assert_eq!(r["suite"], "yao");
    assert_eq!(r["tool"], "ppcc");
}
