use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const CHAIN: &str = r#"{"q":2,"poset":{"elements":["a","b"],"covers":[["a","b"]]}}"#;
const ANTICHAIN_2: &str = r#"{"q":2,"poset":{"elements":["a","b"]}}"#;
const THRESHOLD: &str = r#"{"q":2,"poset":{"elements":["a","b","c"]},"dims":{"a":2,"b":2,"c":2}}"#;
const A_BELOW_B: &str = r#"{"q":2,"poset":{"elements":["a","b","c"],"covers":[["a","b"]]}}"#;

fn instance(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn posetmep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posetmep")).args(args).output().unwrap()
}

fn with_instance(verb: &str, text: &str, extra: &[&str]) -> (i32, Value) {
    let f = instance(text);
    let mut args = vec![verb, "--instance", f.path().to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = posetmep(&args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json)
}

#[test]
fn poset_reports_hierarchy_and_automorphisms() {
    let (code, r) = with_instance("poset", CHAIN, &[]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["hierarchical"], true);
    assert_eq!(r["result"]["levels"]["b"], 2);
    let (_, r) = with_instance("poset", ANTICHAIN_2, &[]);
    assert_eq!(r["result"]["udp"], true);
}

#[test]
fn isometry_orders() {
    let (code, r) = with_instance("isometries", CHAIN, &["--brute-force"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["order"], "2");
    assert_eq!(r["result"]["brute_force_matches"], true);
    let (_, r) = with_instance("isometries", ANTICHAIN_2, &[]);
    assert_eq!(r["result"]["order"], "2");
}

#[test]
fn mep_threshold_fails_with_replayable_counterexample() {
    let (code, r) = with_instance("mep", THRESHOLD, &["--brute-force"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["holds"], false);
    assert_eq!(r["result"]["counterexample_replays"], true);
    assert_eq!(r["result"]["agreement"], true);
}

#[test]
fn mep_modes() {
    assert_eq!(with_instance("mep", CHAIN, &[]).0, 0);
    assert_eq!(with_instance("mep", A_BELOW_B, &["--mode", "psupport"]).0, 0);
}

#[test]
fn macwilliams_and_audit() {
    let (code, r) = with_instance("macwilliams", A_BELOW_B, &[]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["witness"]["replays"], true);
    let (code, r) = with_instance("audit", THRESHOLD, &[]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["mep"], false);
    for key in ["transitive", "condition_d", "dual_partition_matches", "macwilliams", "reflexive"] {
        assert_eq!(r["result"][key], true, "{key}");
    }
}

#[test]
fn lattice_values() {
    let out = posetmep(&["lattice", "subspace", "3", "2"]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["minimal_length"], 4);
    let r: Value = serde_json::from_slice(&posetmep(&["lattice", "boolean", "2"]).stdout).unwrap();
    assert_eq!(r["result"]["minimal_length"], 2);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let f = instance(THRESHOLD);
    let path = f.path().to_str().unwrap();
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = strip(posetmep(&["audit", "--instance", path]));
    let b = strip(posetmep(&["audit", "--instance", path]));
    assert_eq!(a, b);
}

#[test]
fn corrupted_instance_exits_with_validation_code() {
    let (code, _) = with_instance("poset", r#"{"q": 2, "poset": {"elements": ["a""#, &[]);
    assert_eq!(code, 2);
    let (code, _) = with_instance("poset", r#"{"q":2,"poset":{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}}"#, &[]);
    assert_eq!(code, 2);
    let out = posetmep(&["poset", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_exceeded_exits_with_three() {
    let (code, _) = with_instance("mep", THRESHOLD, &["--brute-force", "--bound", "10"]);
    assert_eq!(code, 3);
}

#[test]
fn quick_acceptance_passes() {
    let out = posetmep(&["accept", "--quick"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(out.status.success(), "{stderr}");
    assert_eq!(stderr.lines().filter(|l| l.contains(" PASS ")).count(), 10);
}

#[test]
fn text_output() {
    let f = instance(CHAIN);
    let out = posetmep(&["poset", "--text", "--instance", f.path().to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: poset\npassed: true\n"));
}
