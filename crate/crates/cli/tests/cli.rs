use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn quotforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quotforge"))
        .args(args)
        .env_remove("QUOTFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn payload(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const STABLE_D2: &str = r#"{"field":{"kind":"rational"},"d":2,"r":2,
  "B1":[[0,0],[0,0]],"B2":[[0,0],[0,0]],"vectors":[[1,0],[0,1]]}"#;

const SHIFT: &str = r#"{"field":{"kind":"rational"},"d":3,"r":1,
  "B1":[[0,0,0],[1,0,0],[0,1,0]],"B2":[[0,0,0],[0,0,0],[1,0,0]],"vectors":[[1,0,0]]}"#;

#[test]
fn stable_example() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.json", STABLE_D2);
    let out = quotforge(&["stable", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        payload(&out),
        serde_json::json!({"stable": true, "w_slice": false})
    );
}

#[test]
fn unstable_exits_one() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "u.json",
        r#"{"field":{"kind":"rational"},"d":2,"r":1,"B1":[[0,0],[0,0]],"B2":[[0,0],[0,0]],"vectors":[[1,0]]}"#,
    );
    let out = quotforge(&["stable", s(&f)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(payload(&out)["stable"], false);
}

#[test]
fn census_example() {
    let out = quotforge(&["census", "--d", "2", "--r", "1", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(payload(&out)["quot_points"], "3");
}

#[test]
fn census_budget_exit_code() {
    let out = Command::new(env!("CARGO_BIN_EXE_quotforge"))
        .args(["census", "--d", "2", "--r", "1", "--q", "2"])
        .env("QUOTFORGE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn census_payload_independent_of_jobs() {
    let args = ["census", "--d", "3", "--r", "1", "--q", "2"];
    let one = quotforge(&[&args[..], &["--jobs", "1"]].concat());
    let four = quotforge(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let fact = quotforge(&[&args[..], &["--factorized", "--jobs", "3"]].concat());
    assert_eq!(payload(&fact)["quot_points"], payload(&one)["quot_points"]);
}

#[test]
fn orbit_reflexive_with_identity() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.json", SHIFT);
    let out = quotforge(&["orbit", s(&f), s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let w = &payload(&out)["witness"];
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(w[i][j], if i == j { "1" } else { "0" });
        }
    }
}

#[test]
fn orbit_distinct_exits_one() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", SHIFT);
    let b = write(
        &dir,
        "b.json",
        r#"{"field":{"kind":"rational"},"d":3,"r":1,
          "B1":[[0,0,0],[1,0,0],[0,1,0]],"B2":[[0,0,0],[0,0,0],[0,0,0]],"vectors":[[1,0,0]]}"#,
    );
    let out = quotforge(&["orbit", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(payload(&out)["equivalent"], false);
}

#[test]
fn bridge_pipeline_returns_to_orbit() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [("stable", STABLE_D2), ("shift", SHIFT)] {
        let original = write(&dir, &format!("{name}.json"), text);
        let pres = quotforge(&["bridge", "to-presentation", s(&original)]);
        assert_eq!(pres.status.code(), Some(0));
        let pres_file = write(
            &dir,
            &format!("{name}.pres.json"),
            std::str::from_utf8(&pres.stdout).unwrap(),
        );
        let datum = quotforge(&["bridge", "to-datum", s(&pres_file)]);
        assert_eq!(datum.status.code(), Some(0));
        let back = write(
            &dir,
            &format!("{name}.back.json"),
            std::str::from_utf8(&datum.stdout).unwrap(),
        );
        assert_eq!(
            quotforge(&["orbit", s(&original), s(&back)]).status.code(),
            Some(0)
        );
    }
}

#[test]
fn jordan_lemma_and_connect() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "shift.json", SHIFT);
    let frame = quotforge(&["jordan", s(&f)]);
    assert_eq!(frame.status.code(), Some(0));
    assert_eq!(payload(&frame)["mu"], serde_json::json!([3]));

    let lemma = quotforge(&["lemma23", s(&f), "--samples", "5"]);
    assert_eq!(lemma.status.code(), Some(0));
    assert_eq!(payload(&lemma)["pencil_samples"], 5);

    let swapped = write(
        &dir,
        "c.json",
        r#"{"field":{"kind":"rational"},"d":2,"r":2,"B1":[[0,0],[0,0]],"B2":[[0,0],[0,0]],"vectors":[[0,1],[1,0]]}"#,
    );
    let cert = quotforge(&["connect", s(&swapped)]);
    assert_eq!(cert.status.code(), Some(0));
    let cert = payload(&cert);
    assert!(cert["failures"].as_u64().unwrap() <= cert["bound"].as_u64().unwrap());
    assert_eq!(cert["bound"], 6);
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "g.json", "{ not json");
    assert_eq!(quotforge(&["stable", s(&garbage)]).status.code(), Some(2));
    assert_eq!(quotforge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        quotforge(&["stable", "/nonexistent/file.json"])
            .status
            .code(),
        Some(2)
    );

    let noncommuting = write(
        &dir,
        "n.json",
        r#"{"field":{"kind":"rational"},"d":2,"r":1,"B1":[[0,0],[1,0]],"B2":[[0,1],[0,0]],"vectors":[[1,0]]}"#,
    );
    assert_eq!(
        quotforge(&["stable", s(&noncommuting)]).status.code(),
        Some(2)
    );
    let out = quotforge(&["validate", s(&noncommuting)]);
    assert_eq!(out.status.code(), Some(1));
    let kinds: Vec<String> = payload(&out)["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["kind"].as_str().unwrap().to_string())
        .collect();
    assert!(kinds.contains(&"non_commuting".to_string()));
}

#[test]
fn connect_rejects_prime_fields() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "p.json",
        r#"{"field":{"kind":"prime","p":2},"d":1,"r":1,"B1":[[0]],"B2":[[0]],"vectors":[[1]]}"#,
    );
    assert_eq!(quotforge(&["connect", s(&f)]).status.code(), Some(2));
}
