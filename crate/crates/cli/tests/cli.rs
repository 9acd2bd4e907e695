use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pyragas"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

/// Writes the catalog document `name` into `dir`.
fn catalog_file(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    stdout(&run(&["catalog", "--name", name, "--out", path.to_str().unwrap()]));
    path
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

fn verdict<'a>(envelope: &'a Value, rule: &str) -> &'a Value {
    envelope["results"]["verdicts"].as_array().unwrap().iter().find(|v| v["rule"] == rule).unwrap()
}

#[test]
fn scalar_benchmark_is_excluded() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "scalar-equilibrium");
    let env = json(&run(&["analyze", p.to_str().unwrap()]));
    assert_eq!(env["tool"], "pyragas");
    assert_eq!(env["command"], "analyze");
    assert_eq!(verdict(&env, "odd-number-equilibrium")["outcome"], "excluded");
    assert_eq!(env["results"]["controlled"]["unstable"], 1);
}

#[test]
fn nonresonant_focus_is_not_excluded_and_says_why() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "focus-nonresonant");
    let env = json(&run(&["analyze", p.to_str().unwrap()]));
    for rule in ["odd-number-equilibrium", "any-number-real-equilibrium", "any-number-complex-equilibrium"] {
        assert_eq!(verdict(&env, rule)["outcome"], "not-excluded", "{rule}");
    }
    let premises = verdict(&env, "any-number-complex-equilibrium")["premises"].as_array().unwrap();
    assert!(premises.iter().any(|p| p["name"].as_str().unwrap().contains("resonant") && p["holds"] == false));
}

#[test]
fn periodic_analysis_reports_multipliers_and_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "constructed-periodic");
    let env = json(&run(&["analyze", p.to_str().unwrap(), "--nodes", "32"]));
    assert_eq!(env["results"]["nodes"], 32);
    assert_eq!(verdict(&env, "odd-number-periodic")["outcome"], "excluded");
    assert!(env["results"]["controlled"]["real_above_one"].as_u64().unwrap() >= 1);
}

#[test]
fn malformed_json_exits_2_with_schema_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"kind": "equilibrium", "dimension": 1, "field": {"expressions": ["x1"]}, "point": [0], "gain": [0.1], "delay": "2"}"#).unwrap();
    let out = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`delay`"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_and_bad_flags_exit_2() {
    assert_eq!(run(&["analyze", "/nonexistent/problem.json"]).status.code(), Some(2));
    assert_eq!(run(&["hopf", "--lambda", "-1", "--delay", "1"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "--name", "no-such-case"]).status.code(), Some(2));
}

fn without_timing(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms").expect("timing present");
    v
}

#[test]
fn identical_runs_give_identical_envelopes() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "focus-resonant");
    let p = p.to_str().unwrap();
    for args in [vec!["analyze", p], vec!["simulate", p, "--seed", "7", "--horizon", "10"], vec!["locus", p, "--path", "imaginary"]] {
        let a = stdout(&run(&args));
        let b = stdout(&run(&args));
        assert_eq!(without_timing(&a), without_timing(&b));
        let strip = |s: &str| s.lines().filter(|l| !l.contains("\"timing_ms\"")).collect::<Vec<_>>().join("\n");
        assert_eq!(strip(&a), strip(&b), "byte-level difference for {args:?}");
    }
    let other = stdout(&run(&["simulate", p, "--seed", "8", "--horizon", "10"]));
    let first = stdout(&run(&["simulate", p, "--seed", "7", "--horizon", "10"]));
    assert_ne!(without_timing(&other)["results"], without_timing(&first)["results"]);
}

#[test]
fn digest_depends_only_on_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "scalar-equilibrium");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    // Same document with different key order and layout.
    let mut keys: Vec<(String, Value)> = doc.as_object().unwrap().clone().into_iter().collect();
    keys.reverse();
    let body: Vec<String> = keys.iter().map(|(k, v)| format!("{k:?}: {v}")).collect();
    let q = dir.path().join("reordered.json");
    std::fs::write(&q, format!("{{{}}}", body.join(", "))).unwrap();
    let a = json(&run(&["analyze", p.to_str().unwrap()]));
    let b = json(&run(&["analyze", q.to_str().unwrap()]));
    assert_eq!(a["input_digest"], b["input_digest"]);
    assert!(a["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn hopf_csv_has_the_closed_form_row() {
    let out = stdout(&run(&["hopf", "--lambda", "0.05", "--delay", &std::f64::consts::TAU.to_string(), "--branches", "0", "--samples", "5", "--guard", "0.1", "--csv"]));
    assert!(out.starts_with("m,omega,re_k,im_k\n"));
    let rows = csv_rows(&out);
    let row = rows.iter().find(|r| (r[1] - 0.5).abs() < 1e-12).expect("sample at omega = 0.5");
    assert_eq!(row[0], 0.0);
    assert!((row[2] + 0.025).abs() < 1e-12 && (row[3] - 0.25).abs() < 1e-12, "{row:?}");
}

#[test]
fn hopf_three_branches_and_empty_list() {
    let out = stdout(&run(&["hopf", "--lambda", "0.05", "--delay", &std::f64::consts::TAU.to_string(), "--samples", "50", "--csv"]));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 150);
    for m in 0..3 {
        assert_eq!(rows.iter().filter(|r| r[0] == m as f64).count(), 50);
    }
    let empty = stdout(&run(&["hopf", "--lambda", "0.05", "--delay", "1", "--branches", "", "--csv"]));
    assert_eq!(empty, "m,omega,re_k,im_k\n");
}

#[test]
fn csv_dialect() {
    let out = stdout(&run(&["hopf", "--lambda", "0.3", "--delay", "2", "--samples", "7", "--csv"]));
    assert!(!out.contains('\r') && out.ends_with('\n'));
    for line in out.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 4);
        for c in &cells[1..] {
            let mantissa = c.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{c}");
        }
    }
}

#[test]
fn locus_real_sweep_keeps_scalar_root_real() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "scalar-equilibrium");
    let out = stdout(&run(&["locus", p.to_str().unwrap(), "--path", "real", "--from", "-1", "--to", "1", "--csv"]));
    assert!(out.starts_with("s,re,im,trace\n"));
    let rows = csv_rows(&out);
    let dominant: Vec<&Vec<f64>> = rows.iter().filter(|r| r[3] == 0.0).collect();
    assert!(dominant.len() > 5);
    assert!(dominant.iter().all(|r| r[2] == 0.0));
}

#[test]
fn locus_resonant_trace_stays_on_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "focus-resonant");
    let rows = csv_rows(&stdout(&run(&["locus", p.to_str().unwrap(), "--path", "real", "--csv"])));
    let first = rows.iter().find(|r| r[0] == 0.0 && r[2].abs() > 0.5).expect("unstable focus root at s = 0");
    let id = first[3];
    let line = first[2];
    let trace: Vec<&Vec<f64>> = rows.iter().filter(|r| r[3] == id).collect();
    assert!(trace.len() > 3);
    assert!(trace.iter().all(|r| (r[2] - line).abs() < 1e-8), "{trace:?}");
}

#[test]
fn zero_length_path_gives_one_sample() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "scalar-equilibrium");
    let rows = csv_rows(&stdout(&run(&["locus", p.to_str().unwrap(), "--from", "0.3", "--to", "0.3", "--csv"])));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[0] == 0.3));
}

#[test]
fn periodic_locus_only_along_the_homotopy() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "scalar-periodic");
    assert_eq!(run(&["locus", p.to_str().unwrap(), "--path", "real"]).status.code(), Some(2));
    let env = json(&run(&["locus", p.to_str().unwrap(), "--path", "homotopy", "--nodes", "16"]));
    assert_eq!(env["results"]["quantity"], "multipliers");
    assert!(!env["results"]["traces"].as_array().unwrap().is_empty());
}

fn summary(env: &Value) -> &Value {
    &env["results"]["summary"]
}

#[test]
fn simulate_unstable_scalar_grows_consistently() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "scalar-equilibrium");
    let traj = dir.path().join("traj.csv");
    let env = json(&run(&["simulate", p.to_str().unwrap(), "--trajectory", traj.to_str().unwrap()]));
    let s = summary(&env);
    let rate = s["growth"]["rate"].as_f64().unwrap();
    let dominant = s["dominant_root"]["re"].as_f64().unwrap();
    assert!(rate > 0.0);
    assert!((rate - dominant).abs() < 1e-3 * dominant, "{rate} vs {dominant}");
    assert_eq!(s["consistent"], true);
    assert_eq!(env["seed"], 0);
    let text = std::fs::read_to_string(&traj).unwrap();
    assert!(text.starts_with("t,x1\n"));
    assert!(csv_rows(&text).len() > 1000);
}

#[test]
fn simulate_stable_field_decays() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("stable.json");
    std::fs::write(&p, r#"{"kind": "equilibrium", "dimension": 1, "field": {"expressions": ["-x1"]}, "point": [0], "gain": [0], "delay": 1}"#).unwrap();
    let s = summary(&json(&run(&["simulate", p.to_str().unwrap()]))).clone();
    assert!(s["growth"]["rate"].as_f64().unwrap() < 0.0);
    assert_eq!(s["consistent"], true);
}

#[test]
fn simulate_from_the_exact_equilibrium_is_marginal() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "scalar-equilibrium");
    let s = summary(&json(&run(&["simulate", p.to_str().unwrap(), "--amplitude", "0"]))).clone();
    assert_eq!(s["growth"]["stability"], "marginal");
    assert!(s["growth"]["rate"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(s["consistent"], Value::Null);
}

#[test]
fn simulate_blow_up_is_reported_not_failed() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("fast.json");
    std::fs::write(&p, r#"{"kind": "equilibrium", "dimension": 1, "field": {"expressions": ["x1 + x1^2"]}, "point": [0], "gain": [0], "delay": 1}"#).unwrap();
    let s = summary(&json(&run(&["simulate", p.to_str().unwrap(), "--horizon", "200", "--amplitude", "1e-3"]))).clone();
    assert_eq!(s["blow_up"], true);
    assert_eq!(s["consistent"], true);
}

#[test]
fn simulate_rejects_periodic_problems() {
    let dir = tempfile::tempdir().unwrap();
    let p = catalog_file(dir.path(), "scalar-periodic");
    assert_eq!(run(&["simulate", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_file_is_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("cases.json");
    stdout(&run(&["catalog", "--out", target.to_str().unwrap()]));
    let env: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    let cases = env["results"].as_array().unwrap();
    assert!(cases.iter().any(|c| c["name"] == "focus-resonant"));
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}

#[test]
fn every_catalog_document_analyzes() {
    let dir = tempfile::tempdir().unwrap();
    let list = stdout(&run(&["catalog", "--csv"]));
    for line in list.lines().skip(1) {
        let name = line.split(',').next().unwrap();
        let p = catalog_file(dir.path(), name);
        let out = run(&["analyze", p.to_str().unwrap(), "--nodes", "24"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

const VALID: &str = r#"{"kind": "equilibrium", "dimension": 2,
  "field": {"expressions": ["a*x1 - x2", "x1 + a*x2"], "params": {"a": 0.1}},
  "point": [0, 0], "gain": [0.2, 0, 0, 0.2], "delay": 3,
  "tolerances": {"tol_one": 1e-6}, "region": {"re_min": -0.1, "re_max": 2, "im_max": 5}}"#;

/// Values of the wrong JSON type for any field of the schema.
fn wrong_value() -> impl Strategy<Value = Value> {
    prop_oneof![
        Just(Value::Null),
        Just(Value::Bool(true)),
        Just(Value::String("x".into())),
        Just(serde_json::json!({"unexpected": 1})),
        Just(serde_json::json!([[1], "a"])),
        Just(serde_json::json!(-1)),
    ]
}

#[derive(Debug, Clone)]
enum Mutation {
    Remove(&'static str),
    Replace(&'static str, Value),
    UnknownKey(bool),
    Truncate(usize),
    Garbage(Vec<u8>),
    BadSemantics(usize),
}

fn mutation() -> impl Strategy<Value = Mutation> {
    let keys = prop::sample::select(vec!["kind", "dimension", "field", "point", "gain", "delay", "tolerances", "region"]);
    let required = prop::sample::select(vec!["kind", "dimension", "field", "gain", "delay"]);
    prop_oneof![
        required.prop_map(Mutation::Remove),
        (keys, wrong_value()).prop_map(|(k, v)| Mutation::Replace(k, v)),
        any::<bool>().prop_map(Mutation::UnknownKey),
        (1usize..VALID.len() - 1).prop_map(Mutation::Truncate),
        prop::collection::vec(any::<u8>(), 1..16).prop_map(Mutation::Garbage),
        (0usize..8).prop_map(Mutation::BadSemantics),
    ]
}

fn apply(m: &Mutation) -> Vec<u8> {
    let mut doc: Value = serde_json::from_str(VALID).unwrap();
    let obj = doc.as_object_mut().unwrap();
    match m {
        Mutation::Remove(k) => {
            obj.remove(*k);
        }
        Mutation::Replace(k, v) => {
            // `null` is an absent optional; keep the case malformed.
            let v = if v.is_null() && matches!(*k, "point" | "tolerances" | "region") { Value::Bool(false) } else { v.clone() };
            obj.insert(k.to_string(), v);
        }
        Mutation::UnknownKey(top) => {
            let target = if *top { obj } else { obj.get_mut("field").unwrap().as_object_mut().unwrap() };
            target.insert("extra".into(), Value::from(1));
        }
        Mutation::Truncate(n) => return VALID.as_bytes()[..*n].to_vec(),
        Mutation::Garbage(bytes) => {
            let mut out = VALID.as_bytes().to_vec();
            out.extend_from_slice(b" ");
            out.extend_from_slice(bytes);
            out.extend_from_slice(b"}");
            return out;
        }
        Mutation::BadSemantics(i) => {
            let (k, v) = [
                ("kind", serde_json::json!("periodic")),
                ("dimension", serde_json::json!(0)),
                ("dimension", serde_json::json!(3)),
                ("gain", serde_json::json!([1, 2, 3])),
                ("delay", serde_json::json!(0)),
                ("point", serde_json::json!([0])),
                ("field", serde_json::json!({"expressions": ["x1 +", "x2"]})),
                ("region", serde_json::json!({"re_min": 1, "re_max": 0, "im_max": 1})),
            ][*i]
                .clone();
            obj.insert(k.into(), v);
        }
    }
    serde_json::to_vec(&doc).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn malformed_documents_exit_2(m in mutation()) {
        let bytes = apply(&m);
        prop_assume!(std::str::from_utf8(&bytes).map_or(true, |t| t.trim() != VALID.trim()));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("doc.json");
        std::fs::write(&p, &bytes).unwrap();
        let out = run(&["analyze", p.to_str().unwrap()]);
        prop_assert_eq!(out.status.code(), Some(2), "{:?}: {}", m, String::from_utf8_lossy(&out.stderr));
        prop_assert!(!out.stderr.is_empty());
    }
}

#[test]
fn the_unmutated_document_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("doc.json");
    std::fs::write(&p, VALID).unwrap();
    stdout(&run(&["analyze", p.to_str().unwrap()]));
}
