use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_matinv-degree"));
    c.env_remove("MATINV_CACHE_DIR").env_remove("MATINV_PRIME_BITS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn repeated_probe_output_is_byte_identical() {
    let args = ["degseq", "--q", "3", "--n", "3", "--method", "probe", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let d: Vec<u64> = v["records"].as_array().unwrap().iter().map(|r| r["degree"].as_u64().unwrap()).collect();
    assert_eq!(d, [1, 7, 16, 19]);
}

#[test]
fn both_methods_agree() {
    let o = run(&["degseq", "--q", "4", "--n", "3", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["agreement"], Value::Bool(true));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["delta", "--q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--q", "3", "--props", "9.9"]).status.code(), Some(2));
    assert_eq!(run(&["picard", "--q", "3", "--convention", "paper-literal"]).status.code(), Some(1));
    assert_eq!(run(&["picard", "--q", "3"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--q", "3"]).status.code(), Some(0));
    assert_eq!(run(&["degseq", "--q", "3", "--prime-bits", "40"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn delta_value() {
    let o = run(&["delta", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let d: f64 = v["delta_decimal"].as_str().unwrap().parse().unwrap();
    assert!((d - (7.0 + 3.0 * 5f64.sqrt()) / 2.0).abs() < 1e-12);
}

#[test]
fn prime_bits_from_env_and_flag() {
    let args = ["degseq", "--q", "3", "--n", "1", "--method", "probe"];
    let env = bin().args(args).env("MATINV_PRIME_BITS", "62").output().unwrap();
    assert_eq!(json(&env)["config"]["prime_bits"], 62);
    let flag = bin()
        .args(args)
        .args(["--prime-bits", "63"])
        .env("MATINV_PRIME_BITS", "62")
        .output()
        .unwrap();
    assert_eq!(json(&flag)["config"]["prime_bits"], 63);
    for r in json(&flag)["records"].as_array().unwrap().iter().skip(1) {
        for p in r["primes"].as_array().unwrap() {
            assert!(p.as_u64().unwrap() >= 1 << 62);
        }
    }
}

#[test]
fn cache_via_env() {
    let dir = tempfile::tempdir().unwrap();
    let with_cache = |args: &[&str]| bin().args(args).env("MATINV_CACHE_DIR", dir.path()).output().unwrap();
    let args = ["degseq", "--q", "3", "--n", "2", "--method", "probe", "--seed", "4"];
    let first = json(&with_cache(&args));
    assert_eq!(first["from_cache"], false);
    let second = json(&with_cache(&args));
    assert_eq!(second["from_cache"], true);
    assert_eq!(first["records"][2]["degree"], second["records"][2]["degree"]);
    let listing = json(&with_cache(&["cache", "inspect"]));
    assert_eq!(listing["listing"]["entries"].as_array().unwrap().len(), 3);
    let cleared = with_cache(&["cache", "clear"]);
    assert_eq!(cleared.status.code(), Some(0));
    assert_eq!(json(&cleared)["removed_entries"], 3);
    let listing = json(&with_cache(&["cache", "inspect"]));
    assert!(listing["listing"]["entries"].as_array().unwrap().is_empty());
}

#[test]
fn csv_only_for_degree_tables() {
    assert_eq!(run(&["picard", "--q", "3", "--format", "csv"]).status.code(), Some(2));
    let o = run(&["degseq", "--q", "3", "--n", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("q,n,method,degree"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn image_check_by_id() {
    let o = run(&["verify", "--q", "4", "--props", "3.1", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn matrix_dimension() {
    let v = json(&run(&["picard", "--q", "6", "--emit", "matrix"]));
    assert_eq!(v["report"]["dimension"], 74);
}

#[test]
fn eval_reduced_map() {
    let o = run(&["eval", "--map", "khat", "--matrix", "[[1,2],[3,4]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["eval", "--matrix", "[[1,2],[3]]"]).status.code(), Some(2));
}
