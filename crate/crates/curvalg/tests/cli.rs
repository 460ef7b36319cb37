use std::path::PathBuf;
use std::process::{Command, Output};

use curvalg::format::parse_operator;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn curvalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvalg")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn worked_schur_product_from_files() {
    let o = curvalg(&["compose", &path("schur_a.json"), &path("schur_b.json")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let got = parse_operator(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let want = parse_operator(&std::fs::read_to_string(fixture("schur_product.json")).unwrap()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn identity_composition_is_byte_identical() {
    let op = std::fs::read(fixture("op_2_2.json")).unwrap();
    let left = curvalg(&["compose", &path("identity_2_2.json"), &path("op_2_2.json")]);
    assert_eq!(code(&left), 0);
    assert_eq!(left.stdout, op);
    let right = curvalg(&["compose", &path("op_2_2.json"), &path("identity_2_2.json")]);
    assert_eq!(right.stdout, op);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("curvalg-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("product.json");
    let o = curvalg(&["compose", &path("schur_a.json"), &path("schur_b.json"), "--out", target.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let stdout = curvalg(&["compose", &path("schur_a.json"), &path("schur_b.json")]).stdout;
    assert_eq!(std::fs::read(&target).unwrap(), stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn malformed_file_exits_2() {
    let o = curvalg(&["compose", &path("malformed.json"), &path("op_2_2.json")]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));
    assert_eq!(code(&curvalg(&["compose", &path("missing.json"), &path("op_2_2.json")])), 2);
}

#[test]
fn ground_mismatch_exits_3() {
    let o = curvalg(&["compose", &path("op_2_2.json"), &path("finite_op.json")]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ground mismatch"));
}

#[test]
fn usage_errors_exit_4() {
    assert_eq!(code(&curvalg(&["verify", "no-such-suite"])), 4);
    assert_eq!(code(&curvalg(&["verify", "cybe", "--tau", "1"])), 4);
    assert_eq!(code(&curvalg(&["verify", "cybe", "--tol=-1", "--seed", "1"])), 4);
    assert_eq!(code(&curvalg(&["frobnicate"])), 4);
    // Random sweeps refuse to run without a seed.
    assert_eq!(code(&curvalg(&["verify", "cybe"])), 4);
}

#[test]
fn help_exits_0() {
    let o = curvalg(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("verify"));
}

#[test]
fn cybe_example_passes() {
    let o = curvalg(&["verify", "cybe", "--n", "2", "--c", "1", "--tau", "0,1", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["pass"], true);
    assert!(r["max_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(r["parameters"]["seed"], 7);
    assert_eq!(r["parameters"]["tau"], serde_json::json!([0.0, 1.0]));
    assert!(r["truncation"]["rel_tol"].is_number());
    assert_eq!(r["residuals"].as_array().unwrap().len(), r["checks"].as_array().unwrap().len());
}

#[test]
fn exact_examples_pass() {
    for args in [&["verify", "tau", "--n", "2", "--d", "2"][..], &["verify", "bruhat", "--d", "4"][..]] {
        let o = curvalg(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let r = json(&o);
        assert_eq!(r["max_residual"], 0.0);
        assert!(r["parameters"]["seed"].is_null());
        assert!(r["truncation"].is_null());
    }
}

#[test]
fn every_suite_runs() {
    for suite in ["express", "orbits", "w", "automorphy", "en"] {
        let o = curvalg(&["verify", suite, "--seed", "11"]);
        assert_eq!(code(&o), 0, "{suite}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["suite"], suite);
    }
    let o = curvalg(&["verify", "heisenberg", "--n", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn failing_check_exits_1_with_a_report() {
    // No invertible intertwiner between the two models at n = 2.
    let o = curvalg(&["verify", "heisenberg", "--n", "2"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["pass"], false);
    let failed: Vec<&str> = r["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed, ["functional model"]);
}

#[test]
fn out_of_range_parameters_exit_3() {
    assert_eq!(code(&curvalg(&["verify", "tau", "--n", "9"])), 3);
    assert_eq!(code(&curvalg(&["verify", "cybe", "--n", "2", "--c", "2", "--seed", "1"])), 3);
    assert_eq!(code(&curvalg(&["schur", "--n", "4", "--d", "2"])), 3);
}

fn without_timestamp(o: &Output) -> Value {
    let mut v = json(o);
    v.as_object_mut().unwrap().remove("timestamp").expect("report has a timestamp");
    v
}

#[test]
fn reports_are_deterministic_apart_from_the_timestamp() {
    let args = ["verify", "cybe", "--n", "3", "--c", "2", "--tau", "0.3,1.1", "--seed", "5"];
    let a = curvalg(&args);
    let b = curvalg(&args);
    assert_eq!(without_timestamp(&a), without_timestamp(&b));
    let strip = |o: &Output| -> String {
        String::from_utf8_lossy(&o.stdout).lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    let other = curvalg(&["verify", "cybe", "--n", "3", "--c", "2", "--tau", "0.3,1.1", "--seed", "6"]);
    assert_ne!(without_timestamp(&a), without_timestamp(&other));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("curvalg-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"n": 3, "c": 2, "tau": [0.3, 1.1], "seed": 4}"#).unwrap();
    let o = curvalg(&["verify", "cybe", "--in", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(code(&o), 0);
    let p = &json(&o)["parameters"];
    assert_eq!((p["n"].as_u64(), p["c"].as_i64(), p["seed"].as_u64()), (Some(3), Some(2), Some(9)));
    std::fs::write(&cfg, r#"{"n": 3, "colour": 1}"#).unwrap();
    assert_eq!(code(&curvalg(&["verify", "cybe", "--in", cfg.to_str().unwrap()])), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

fn count_matrices(n: usize, d: u32) -> usize {
    // Brute force over all n x n grids with entries in 0..=d.
    let cells = n * n;
    let mut count = 0;
    let mut digits = vec![0u32; cells];
    loop {
        if digits.iter().sum::<u32>() == d {
            count += 1;
        }
        let mut k = 0;
        while k < cells && digits[k] == d {
            digits[k] = 0;
            k += 1;
        }
        if k == cells {
            return count;
        }
        digits[k] += 1;
    }
}

#[test]
fn schur_tables() {
    let o = curvalg(&["schur", "--n", "2", "--d", "2"]);
    assert_eq!(code(&o), 0);
    let t = json(&o);
    assert_eq!(t["basis_size"].as_u64().unwrap() as usize, count_matrices(2, 2));
    assert_eq!(t["associative"], true);
    let worked: Vec<&Value> = t["constants"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["a"] == serde_json::json!([[0, 1], [0, 1]]) && e["b"] == serde_json::json!([[0, 0], [1, 1]]))
        .collect();
    assert_eq!(worked.len(), 2);
    assert!(worked.iter().all(|e| e["value"] == "1"));

    let t = json(&curvalg(&["schur", "--n", "1", "--d", "3"]));
    assert_eq!(t["basis"], serde_json::json!([[[3]]]));
    assert_eq!(t["constants"], serde_json::json!([{"a": [[3]], "b": [[3]], "c": [[3]], "value": "1"}]));

    let o = curvalg(&["schur", "--n", "2", "--d", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["basis_size"].as_u64().unwrap() as usize, count_matrices(2, 3));
}
