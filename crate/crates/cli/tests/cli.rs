use std::process::{Command, Output};

use serde_json::{json, Value};

const CARLITZ: &str = "kind = \"carlitz\"\nfq = \"GF(3)\"\n";
const RANK2: &str = "kind = \"drinfeld\"\nfq = \"GF(3)\"\nphi_t = [\"theta\", \"1\", \"1\"]\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffmotive"))
        .args(args)
        .output()
        .unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], json!(1));
    v
}

#[test]
fn two_twists_recipe() {
    let v = json_of(&["examples", "4.5", "--m", "1", "--n", "2"]);
    assert_eq!(v["weights"], json!(["1", "2"]));
    assert_eq!(v["certificate"]["verdict"], "DOES-NOT-APPLY");
    assert_eq!(v["certificate"]["failing"], json!(["no integral weights"]));
}

#[test]
fn carlitz_charpoly_over_f9() {
    // X - p_θ(t) with p_θ = t^2 + 1 the minimal polynomial of the generator
    let v = json_of(&["charpoly", CARLITZ, "--field", "GF(3^2)"]);
    assert_eq!(v["coefficients"], json!(["2*t^2 + 2", "1"]));
    assert_eq!((v["rank"].clone(), v["d"].clone()), (json!(1), json!(2)));
}

#[test]
fn condition_sum() {
    let v = json_of(&["check-condition", "--z", "t*(t-1)", "--p", "t", "--n", "1"]);
    assert_eq!((v["sum"].clone(), v["holds"].clone()), (json!(1), json!(true)));
    assert_eq!(v["twist_weight"], "-2");
    let v = json_of(&[
        "check-condition",
        "--fq",
        "GF(2)",
        "--z",
        "(t^2+t+1)*(t+1)",
        "--p",
        "t^2+t+1",
    ]);
    assert_eq!((v["sum"].clone(), v["holds"].clone()), (json!(1), json!(false)));
}

#[test]
fn rank_two_weights_and_certificate() {
    let v = json_of(&["weights", RANK2, "--place", "theta"]);
    assert_eq!(v["weights"], json!(["1/2", "1/2"]));
    assert_eq!(v["integral"], json!(false));
    let v = json_of(&["check-imai", RANK2, "--place", "theta", "--z", "t", "--p", "t"]);
    assert_eq!(v["verdict"], "APPLIES");
    assert!(v["schema_note"].as_str().unwrap().contains("not claimed"));
}

#[test]
fn shtuka_anchor_through_the_cli() {
    let v = json_of(&["shtuka-hp", CARLITZ, "--prime", "t+1"]);
    assert_eq!(
        (v["t_N"].clone(), v["t_H"].clone(), v["mu"].clone()),
        (json!(1), json!(1), json!([-1]))
    );
    let v = json_of(&["shtuka-hp", CARLITZ, "--prime", "t", "--twist", "1", "--twist", "2"]);
    assert_eq!(v["mu"], json!([2]));
    assert_eq!(v["weakly_admissible"], "ADMISSIBLE");
}

#[test]
fn table_format_flattens() {
    let out = run(&["--format", "table", "examples", "4.8", "--p", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("certificate.verdict") && l.ends_with("DOES-NOT-APPLY")));
    assert!(text.lines().any(|l| l.starts_with("rank") && l.ends_with('3')));
}

#[test]
fn exit_codes() {
    let out = run(&["factor", "t +* 1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 4"));
    assert!(out.stdout.is_empty());

    let out = run(&["weights", "kind = \"drinfeld\"\nfq = GF(3)\n"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ribet-scan"));

    assert_eq!(
        run(&["tower-check", "--q", "3", "--levels", "3"]).status.code(),
        Some(3)
    );
    let out = run(&[
        "shtuka-hp",
        CARLITZ,
        "--prime",
        "t",
        "--twist",
        "-4",
        "--precision",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // a verdict of DOES-NOT-APPLY is still a successful run
    assert_eq!(run(&["examples", "4.8", "--p", "3"]).status.code(), Some(0));
}

#[test]
fn higher_degree_characteristic_needs_the_flag() {
    let out = run(&["shtuka-hp", CARLITZ, "--field", "GF(3^2)"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&["shtuka-hp", CARLITZ, "--field", "GF(3^2)", "--allow-higher-degree"]);
    assert_eq!(v["mu"], json!([-1]));
}
