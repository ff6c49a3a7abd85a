use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn catbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catbound"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn cup_on_so5() {
    let o = catbound(&["cup", "corpus/so5.lsc", "SO5_mod2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("cup_so5.txt"));
    let o = catbound(&["cup", "corpus/so5.lsc", "SO5_mod2", "--format", "json"]);
    let j = json(&o);
    assert_eq!(j["cup"], 8);
    assert_eq!(j["witness"], serde_json::json!([7, 1]));
    assert_eq!(j["witness_text"], "x1^7 x3^1");
}

#[test]
fn missing_file_is_a_domain_error() {
    let o = catbound(&["cup", "missing.lsc", "R"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.lsc"));
    assert!(o.stdout.is_empty());
}

#[test]
fn parse_errors_are_reported_with_positions() {
    let f = fixture("broken.lsc");
    let o = catbound(&["cup", &f, "X"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("broken.lsc:3:1"), "{}", stderr(&o));
    let o = catbound(&["validate", &f]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(catbound(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(catbound(&["table", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(catbound(&["cup", "only-one-arg"]).status.code(), Some(2));
    assert_eq!(catbound(&["table", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(catbound(&[]).status.code(), Some(2));
}

#[test]
fn table_text_golden() {
    let o = catbound(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("table.txt"));
}

#[test]
fn table_json_has_so9() {
    let o = catbound(&["table", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    let so9 = &j["spaces"]["SO(9)"];
    for inv in ["cup", "sigmacat", "cat", "Cat"] {
        assert_eq!(so9[inv]["lower"], 20, "{inv}");
        assert_eq!(so9[inv]["upper"], 20, "{inv}");
        assert_eq!(so9[inv]["determined"], true, "{inv}");
    }
    assert_eq!(so9["ganea"], "holds");
    assert_eq!(j["spaces"]["Spin(9)"]["cat"]["determined"], false);
}

#[test]
fn output_is_deterministic_and_seed_independent() {
    let a = stdout(&catbound(&["table", "--format", "json"]));
    let b = stdout(&catbound(&["table", "--format", "json"]));
    assert_eq!(a, b);
    let c = stdout(&catbound(&["table", "--format", "json", "--seed", "17"]));
    assert_eq!(a, c);
}

#[test]
fn wgt_on_space_uses_evenness_weights() {
    let o = catbound(&["wgt", "corpus/pu.lsc", "PU(3)", "--format", "json"]);
    let j = json(&o);
    assert_eq!(j["wgt_lower"], 6);
    assert_eq!(j["weights"], serde_json::json!([1, 2, 1]));
    let o = catbound(&["wgt", "corpus/pu.lsc", "SU3_C3_mod3", "--format", "json"]);
    assert_eq!(json(&o)["wgt_lower"], 4);
}

#[test]
fn bound_golden() {
    let o = catbound(&["bound", "SO(6)"]);
    assert_eq!(stdout(&o), golden("bound_so6.txt"));
    let o = catbound(&["bound", "Nowhere"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ledger_golden_and_refusal() {
    let o = catbound(&["ledger", "Sp1_SO5_RP7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("ledger_so5.txt"));

    let dir = std::env::temp_dir().join(format!("catbound-ledger-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(fixture("sp2_d4.lsc"), dir.join("sp2_d4.lsc")).unwrap();
    let d = dir.display().to_string();
    let o = catbound(&["ledger", "Sp1_Sp2_S7_d4", "--corpus", &d]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Sp1_Sp2_S7_d4"));
    // The general bundle bound still applies: (1 + 1)(1 + 1) - 1.
    let o = catbound(&["bound", "Sp(2)", "--corpus", &d, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["Cat"]["upper"], 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_ganea() {
    let o = catbound(&["check-ganea", "PU(3)"]);
    assert_eq!(stdout(&o), "PU(3): holds (cat = sigmacat)\n");
    let o = catbound(&["check-ganea", "SO(6)"]);
    assert_eq!(stdout(&o), "SO(6): holds (cat = cup)\n");
    let o = catbound(&["check-ganea", "--format", "json"]);
    let j = json(&o);
    assert_eq!(j["Spin(9)"]["ganea"], "unknown");
    assert_eq!(j["SO(9)"]["rule"], "cat-equals-cup");
}

#[test]
fn validate_shipped_corpus() {
    let o = catbound(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("ok: 15 file(s)"));
    let o = catbound(&["validate", "--corpus", "corpus", "--format", "json"]);
    assert_eq!(json(&o)["ok"], true);
}

#[test]
fn every_subcommand_emits_json() {
    for args in [
        vec!["cup", "corpus/so3.lsc", "SO3_mod2"],
        vec!["wgt", "corpus/so3.lsc", "SO(3)"],
        vec!["bound", "G2"],
        vec!["table"],
        vec!["ledger", "G2_SO7_RP7"],
        vec!["check-ganea"],
        vec!["validate"],
    ] {
        let mut a = args.clone();
        a.extend(["--format", "json"]);
        let o = catbound(&a);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        json(&o);
    }
}
