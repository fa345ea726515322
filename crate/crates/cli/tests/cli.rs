use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use exchkit::json::law_from_json;
use serde_json::Value;

const URN: &str = r#"{"alphabet":["0","1"],"n":2,"weights":{"1:1":"1"}}"#;

fn exchkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exchkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_exchkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Compares against `tests/golden/<name>.json`; set `EXCHKIT_BLESS=1` to
/// rewrite the file instead.
fn golden(name: &str, args: &[&str]) {
    let out = exchkit(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", &format!("{name}.json")]
        .iter()
        .collect();
    let actual = String::from_utf8(out.stdout).unwrap();
    if std::env::var_os("EXCHKIT_BLESS").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

#[test]
fn urn_law_is_refuted_at_three() {
    let report = json(&exchkit(&["extend", "--N", "3", URN]));
    assert_eq!(report["verdict"], "not_extendible");
    assert_eq!(report["norm"], "2/1");
    assert!(report["witness"].is_null());
    assert_eq!(report["refutation"]["values"]["1:1"], "2/1");
}

#[test]
fn norm_at_n_is_one() {
    let law = r#"{"alphabet":["x","y","z"],"n":2,"weights":{"1:1:0":"1/3","0:0:2":"2/3"}}"#;
    let report = json(&exchkit(&["norm", "--N", "2", "--brute-force", law]));
    assert_eq!(report["norm"], "1/1");
    assert_eq!(report["brute_force"]["agrees"], true);
}

#[test]
fn appendix_covariance() {
    let report = json(&exchkit(&["corpus", "appendix-a1", "--max-N", "12"]));
    assert_eq!(report["covariance"]["cov"], "3/16");
    assert_eq!(report["probe"]["outcome"], "refuted_at");
    let claims = report["claims"].as_array().unwrap();
    assert!(claims.iter().all(|c| c["holds"] == true));
}

#[test]
fn golden_reports() {
    golden("extend_urn_3", &["extend", "--N", "3", URN]);
    golden("norm_urn_3", &["norm", "--N", "3", "--brute-force", URN]);
    golden("types_3_2", &["types", "--k", "3", "--mass", "2"]);
    golden("invert_2_1_0", &["invert", "--mu", "2:1:0", "--N", "4"]);
    golden("urn_2_1", &["urn", "--nu", "2:1", "--n", "2", "--alphabet", "a,b", "--brute-force"]);
    golden("appendix_a1", &["corpus", "appendix-a1", "--max-N", "12"]);
    golden("intro_urn", &["corpus", "intro-urn"]);
    golden("gnedin_1_linear", &["corpus", "gnedin", "--j", "1", "--profile", "linear"]);
    golden("represent_urn", &["represent", "--grid-depth", "2", URN]);
    golden("sweep_small", &["corpus", "duality-sweep", "--seed", "3", "--count", "25"]);
}

#[test]
fn input_sources_agree() {
    let inline = exchkit(&["extend", "--N", "4", URN]);
    let piped = with_stdin(&["extend", "--N", "4"], URN);
    let dashed = with_stdin(&["extend", "--N", "4", "-"], URN);
    let path = std::env::temp_dir().join(format!("exchkit-cli-{}.json", std::process::id()));
    std::fs::write(&path, URN).unwrap();
    let file = exchkit(&["extend", "--N", "4", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(json(&inline), json(&piped));
    assert_eq!(json(&inline), json(&dashed));
    assert_eq!(json(&inline), json(&file));
}

#[test]
fn emitted_laws_reparse() {
    let urn = json(&exchkit(&["urn", "--nu", "3:2:1", "--n", "3"]));
    let law = law_from_json(&urn["law"]).unwrap();
    assert_eq!(exchkit::json::law_to_json(&law), urn["law"]);

    let product = r#"{"alphabet":["0","1"],"n":2,"weights":{"2:0":"1/4","1:1":"1/2","0:2":"1/4"}}"#;
    let report = json(&exchkit(&["extend", "--N", "4", product]));
    assert_eq!(report["verdict"], "extendible");
    let witness = law_from_json(&report["witness"]).unwrap();
    assert_eq!(exchkit::json::law_to_json(&witness), report["witness"]);
    // the witness is itself a law the CLI accepts
    let again = json(&exchkit(&["norm", "--N", "4", &report["witness"].to_string()]));
    assert_eq!(again["norm"], "1/1");
}

#[test]
fn runs_are_deterministic() {
    let args = ["corpus", "duality-sweep", "--seed", "11", "--count", "30", "--max-N", "4"];
    let first = exchkit(&args);
    let second = exchkit(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json(&first)["all_hold"], true);
}

#[test]
fn corollary_flag() {
    let g = r#"{"alphabet":["0","1"],"m":2,"values":{"2:0":"-1","1:1":"2","0:2":"-1"}}"#;
    let report = json(&exchkit(&["extend", "--N", "3", "--function", g, "--epsilon", "1/2", URN]));
    assert_eq!(report["corollary"]["holds"], false);
    let out = exchkit(&["extend", "--N", "3", "--function", g, "--epsilon", "0", URN]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lp_verify_checks_supplied_outcomes() {
    let program = r#"{"sense":"maximize","objective":["1","1"],
        "constraints":[{"coeffs":["1","2"],"relation":"<=","rhs":"4"},
                       {"coeffs":["3","1"],"relation":"<=","rhs":"6"}]}"#;
    let solved = json(&exchkit(&["lp-verify", program]));
    assert_eq!(solved["verified"], true);
    assert_eq!(solved["outcome"]["objective_value"], "14/5");

    let mut outcome = solved["outcome"].clone();
    outcome["objective_value"] = Value::from("3");
    let doc = format!(r#"{{"program": {program}, "outcome": {outcome}}}"#);
    assert_eq!(json(&exchkit(&["lp-verify", &doc]))["verified"], false);
}

#[test]
fn text_format() {
    let out = exchkit(&["--format", "text", "extend", "--N", "3", URN]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: not_extendible"));
    assert!(text.contains("norm: 2/1"));
}

#[test]
fn input_errors_exit_one_and_name_the_field() {
    let out = exchkit(&["extend", "--N", "3", "{not json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("malformed JSON"));

    let wrong_mass = r#"{"alphabet":["0","1"],"n":2,"weights":{"1:2":"1"}}"#;
    let out = exchkit(&["extend", "--N", "3", wrong_mass]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("field `weights`"), "{}", stderr(&out));

    let float = r#"{"alphabet":["0","1"],"n":2,"weights":{"1:1":0.5,"2:0":0.5}}"#;
    let out = exchkit(&["norm", "--N", "3", float]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("1:1"), "{}", stderr(&out));

    let extra = r#"{"alphabet":["0","1"],"n":2,"weights":{"1:1":"1"},"color":"red"}"#;
    let out = exchkit(&["norm", "--N", "3", extra]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("color"));

    let out = exchkit(&["extend", "--N", "1", URN]);
    assert_eq!(out.status.code(), Some(1));

    let out = exchkit(&["extend", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(exchkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn capacity_errors_exit_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_exchkit"))
        .args(["norm", "--N", "9", URN])
        .env("EXCHKIT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("capacity"));

    let out = Command::new(env!("CARGO_BIN_EXE_exchkit"))
        .args(["norm", "--N", "12", "--brute-force", URN])
        .env("EXCHKIT_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
