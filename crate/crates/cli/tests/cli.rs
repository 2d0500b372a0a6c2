use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn saito(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saito"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run saito")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn grassmann_oracle_agrees() {
    let dir = TempDir::new().unwrap();
    let o = saito(dir.path(), &["grassmann", "--r", "2", "--n", "3", "--oracle"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("tables agree (21 products)"), "{}", stderr(&o));
    let table: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(table["r"], 2);
    assert!(!table["entries"].as_array().unwrap().is_empty());
}

#[test]
fn grassmann_writes_file_and_csv() {
    let dir = TempDir::new().unwrap();
    let o = saito(dir.path(), &["grassmann", "--r", "2", "--n", "2", "--metric", "--out", "g23.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("g23.json")).unwrap()).unwrap();
    assert_eq!(table["metric"].as_array().unwrap().len(), 3);
    // s1 * s11 = q
    let hit = table["entries"].as_array().unwrap().iter().any(|e| {
        e["lambda"] == serde_json::json!([1]) && e["mu"] == serde_json::json!([1, 1]) && e["q"] == serde_json::json!([[1, 1]])
    });
    assert!(hit);
    let o = saito(dir.path(), &["grassmann", "--r", "2", "--n", "3", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("lambda,mu,nu,qpow,coef\n"));
}

#[test]
fn gw_numbers() {
    let dir = TempDir::new().unwrap();
    let o = saito(dir.path(), &["gw", "--dmax", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["N"], serde_json::json!([1, 1, 12]));
    let o = saito(dir.path(), &["gw", "--dmax", "3", "--format", "pretty"]);
    assert_eq!(stdout(&o), "N=[1,1,12]\n");
}

#[test]
fn verify_constructed_family() {
    let dir = TempDir::new().unwrap();
    let o = saito(dir.path(), &["pn", "--n", "3", "--out", "pn3.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = saito(dir.path(), &["verify", "--family", "pn3.json", "--order", "4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rep: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["status"], "pass");
}

#[test]
fn verify_detects_broken_family() {
    let dir = TempDir::new().unwrap();
    saito(dir.path(), &["pn", "--n", "2", "--out", "pn2.json"]);
    let path = dir.path().join("pn2.json");
    let mut fam: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    fam["B0"][1][0] = serde_json::json!([{"exps": [], "coef": [[0, "5"]]}]);
    std::fs::write(&path, fam.to_string()).unwrap();
    let o = saito(dir.path(), &["verify", "--family", "pn2.json", "--order", "2"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let rep: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["status"], "fail");
    assert!(rep["witness"].is_string());
}

#[test]
fn hm_extends_and_verifies() {
    let dir = TempDir::new().unwrap();
    saito(dir.path(), &["pn", "--n", "2", "--out", "pn2.json"]);
    let psi = serde_json::json!({
        "new_vars": ["t0", "t2"],
        "omega": ["1", "0", "0"],
        "psi": [
            [{"exps": [1, 0], "coef": [[0, "1"]]}],
            [],
            [{"exps": [0, 1], "coef": [[0, "1"]]}]
        ]
    });
    std::fs::write(dir.path().join("psi.json"), psi.to_string()).unwrap();
    let o = saito(dir.path(), &["hm", "--family", "pn2.json", "--psi", "psi.json", "--order", "4", "--out", "big.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("checks pass"));
    let o = saito(dir.path(), &["verify", "--family", "big.json", "--order", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn mirror_compare() {
    let dir = TempDir::new().unwrap();
    let o = saito(dir.path(), &["mirror", "--n", "2", "--wedge", "2", "--compare"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["comparison"]["status"], "pass");
    // z^3 + 27 q
    assert_eq!(v["point"]["charpoly"], serde_json::json!([[[1, "27/1"]], [], [], [[0, "1/1"]]]));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let o = saito(dir.path(), &["grassmann", "--r", "2", "--n", "3", "--bogus"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("Usage"));
    let o = saito(dir.path(), &["grassmann", "--r", "4", "--n", "3"]);
    assert_eq!(code(&o), 2);
    let o = saito(dir.path(), &["verify", "--family", "missing.json"]);
    assert_eq!(code(&o), 2);
    let o = saito(dir.path(), &["gw", "--dmax", "2", "--format", "csv"]);
    assert_eq!(code(&o), 2);
    let o = saito(dir.path(), &["pn", "--n", "2", "--config", "nope.toml"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unwritable_output_exits_one() {
    let dir = TempDir::new().unwrap();
    let o = saito(dir.path(), &["pn", "--n", "2", "--out", "no/such/dir/x.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn config_file_and_overrides() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("saito.toml"), "format = \"pretty\"\n").unwrap();
    let o = saito(dir.path(), &["gw", "--dmax", "2"]);
    assert_eq!(stdout(&o), "N=[1,1]\n");
    let o = saito(dir.path(), &["gw", "--dmax", "2", "--format", "json"]);
    assert!(stdout(&o).trim_start().starts_with('{'));
    std::fs::write(dir.path().join("saito.toml"), "colour = true\n").unwrap();
    let o = saito(dir.path(), &["gw", "--dmax", "2"]);
    assert_eq!(code(&o), 2);
    std::fs::write(dir.path().join("saito.toml"), "b_max = 0\n").unwrap();
    let o = saito(dir.path(), &["gw", "--dmax", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["grassmann", "--r", "3", "--n", "5", "--oracle"][..],
        &["mirror", "--n", "3", "--compare"][..],
        &["pn", "--n", "4"][..],
    ] {
        let a = saito(dir.path(), args);
        let b = saito(dir.path(), args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), 0);
    }
}
