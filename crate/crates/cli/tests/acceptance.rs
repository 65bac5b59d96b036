//! Acceptance gate: runs `mls scenario acceptance` with one and with eight
//! workers in separate processes, prints one line per criterion, and fails
//! if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(workers: &str, out: &Path) -> BTreeMap<String, Vec<u8>> {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/acceptance.toml");
    let o = Command::new(env!("CARGO_BIN_EXE_mls"))
        .args(["--workers", workers, "scenario", "acceptance", cfg.to_str().unwrap()])
        .env("MLS_OUT_DIR", out)
        .output()
        .expect("binary runs");
    assert!(o.status.success(), "scenario failed: {}", String::from_utf8_lossy(&o.stderr));
    fs::read_dir(out)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn brief(v: &Value) -> String {
    let Some(map) = v.as_object() else { return v.to_string() };
    map.iter()
        .filter(|(_, x)| !x.is_array())
        .map(|(k, x)| match x.as_f64() {
            Some(f) if x.is_f64() => format!("{k}={f:.6}"),
            _ => format!("{k}={x}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[test]
fn acceptance_criteria() {
    let one = tempfile::tempdir().unwrap();
    let eight = tempfile::tempdir().unwrap();
    let a = run("1", one.path());
    let b = run("8", eight.path());
    let criteria: Vec<Value> = serde_json::from_slice(&a["acceptance.json"]).unwrap();
    assert_eq!(criteria.len(), 14);

    let mut failed = Vec::new();
    for c in &criteria {
        let id = c["id"].as_u64().unwrap();
        let mut pass = c["pass"].as_bool().unwrap();
        let mut detail = brief(&c["values"]);
        if id == 14 {
            let same = a == b;
            detail.push_str(&format!(" cross_process_identical={same}"));
            pass &= same;
        }
        println!("criterion {id:>2} {} {}: {detail}", if pass { "PASS" } else { "FAIL" }, c["name"].as_str().unwrap());
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
