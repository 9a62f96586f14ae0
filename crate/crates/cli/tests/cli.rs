use std::path::PathBuf;

use assert_cmd::cargo::cargo_bin_cmd;
use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.json"))
}

fn fx(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = cargo_bin_cmd!("pdcontract").args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn file_json(p: &PathBuf) -> Value {
    json(&std::fs::read_to_string(p).unwrap())
}

#[test]
fn six_unit_contract_gives_table_2() {
    let dir = TempDir::new().unwrap();
    let c = dir.path().join("six.json");
    std::fs::write(&c, r#"{"scheme":"lemma1","epsilons":[],"amounts":[[6],[6]]}"#).unwrap();
    let (code, out) = run(&["apply", &fx("table-1"), c.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out), file_json(&fixture("table-2")));
}

#[test]
fn lemma1_contract_round_trips_to_tables_7_8() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run(&["make-contract", &fx("tables-5-6"), "--scheme", "lemma1", "--eps-ladder", "flat:1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["amounts"], json("[[2],[2],[2]]"));
    let c = dir.path().join("c.json");
    std::fs::write(&c, out).unwrap();
    let (code, out) = run(&["apply", &fx("tables-5-6"), c.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out), file_json(&fixture("tables-7-8")));
}

#[test]
fn strong_nash_counterexample_golden() {
    cargo_bin_cmd!("pdcontract")
        .args(["check-eq", &fx("tables-7-8"), "--profile", "1,1,1", "--strong"])
        .assert()
        .code(3)
        .stdout(
            r#"{
  "counterexample": {
    "after": 18,
    "before": 16,
    "coalition": [
      1,
      2
    ],
    "deviation": [
      2,
      2,
      1
    ]
  },
  "is_nash": true,
  "is_strong": false,
  "is_unique_nash": true,
  "profile": [
    1,
    1,
    1
  ],
  "strict": true
}
"#,
        );
}

#[test]
fn reproduce_section_4_text_golden() {
    cargo_bin_cmd!("pdcontract")
        .args(["reproduce-paper", "--section", "4", "--output", "text"])
        .assert()
        .success()
        .stdout(
            "table-10 at p=(7,2): match
table-11: match
tables-14-15 at r=(1,3,5): match
tables-16-17: match
reward p=(5,3) does not optimize: match
conditional punish r=(2,2,2) keeps (2,2,2) an equilibrium: match
directed punish r1=10 is not strong: match
equal-split punish r1=10 is not strong: match
",
        );
}

#[test]
fn validate_pd_exit_codes() {
    let (code, out) = run(&["validate-pd", &fx("table-1"), "--recursive-oracle"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["validate-pd", &fx("tables-5-6")]);
    assert_eq!(code, 3);
    let v = json(&out);
    assert_eq!(v["is_pd"], false);
    assert_eq!(v["first_violation"]["players"], json("[1,2]"));
}

#[test]
fn lemma_checks_on_a_generated_dilemma() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run(&["gen", "pd", "--seed", "3", "--counts", "3,2,2"]);
    assert_eq!(code, 0);
    let g = dir.path().join("g.json");
    std::fs::write(&g, out).unwrap();
    let (code, out) = run(&["validate-pd", g.to_str().unwrap(), "--lemmas", "--recursive-oracle"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(json(&out)["lemmas"]["lemma6"]["holds"], true);
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "pd", "--seed", "11", "--trials", "3", "--output", "text"]);
    let b = run(&["gen", "pd", "--seed", "11", "--trials", "3", "--output", "text"]);
    assert_eq!(a, b);
    assert_eq!(a.1.lines().count(), 3);
}

#[test]
fn theorem1_verifies_on_table_1() {
    let (code, out) = run(&["verify-theorems", &fx("table-1"), "--theorem", "1"]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["reports"][0]["passed"], true);
    assert_eq!(v["reports"][0]["optimizes"], true);
}

#[test]
fn contracts_need_a_dilemma() {
    let (code, out) = run(&["make-contract", &fx("tables-5-6"), "--scheme", "theorem1"]);
    assert_eq!(code, 3);
    assert!(json(&out)["error"].as_str().unwrap().contains("not a prisoner's dilemma"));
}

#[test]
fn symmetric_schedule_is_order_c() {
    let dir = TempDir::new().unwrap();
    let (code, sched) = run(&["gen", "symmetric-pgg", "--seed", "5"]);
    assert_eq!(code, 0);
    let s = dir.path().join("s.json");
    std::fs::write(&s, sched).unwrap();
    let (code, out) = run(&["gen", "pgg", "--schedule", s.to_str().unwrap(), "--check-order"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["gen", "pgg", "--schedule", s.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(json(&out)["payoffs"].is_array());
}

#[test]
fn suites_report_counts() {
    let (code, out) = run(&["run-suite", "section4"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["run-suite", "theorem1", "--trials", "3", "--seed", "7"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["passed"], 3);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["check-eq", &fx("table-1")]).0, 2);
    assert_eq!(run(&["run-suite", "nope"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["check-eq", &fx("table-1"), "--profile", "1,x"]).0, 2);
}

#[test]
fn input_errors_exit_4() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"players": 2, "strategies": [2, 2], "payoffs": [[1, 2, 3], [1, 2, 3, 4]]}"#).unwrap();
    assert_eq!(run(&["validate-pd", bad.to_str().unwrap()]).0, 4);
    assert_eq!(run(&["validate-pd", "/nonexistent/game.json"]).0, 4);
    assert_eq!(run(&["check-eq", &fx("table-1"), "--profile", "1,3"]).0, 4);
    let c = dir.path().join("c.json");
    std::fs::write(&c, r#"{"scheme":"bribe","epsilons":[],"amounts":null}"#).unwrap();
    assert_eq!(run(&["apply", &fx("table-1"), c.to_str().unwrap()]).0, 4);
    std::fs::write(&c, r#"{"scheme":"lemma1","epsilons":[],"amounts":[[1],[1],[1]]}"#).unwrap();
    assert_eq!(run(&["apply", &fx("table-1"), c.to_str().unwrap()]).0, 4);
}
