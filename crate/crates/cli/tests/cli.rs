use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn lie(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lie"))
        .args(args)
        .env_remove("LIE_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("lie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn classify_reports_the_predicates() {
    let out = lie(&["--json", "classify", "catalog:g_7_5"], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dim_der"], 10);
    assert_eq!(v["dim_pder"], 13);
    assert_eq!(v["admits_nonsingular_prederivation"], true);
    assert_eq!(v["admits_nonsingular_derivation"], false);
    assert_eq!(v["strongly_nilpotent"], false);
}

#[test]
fn certificates_carry_rational_strings() {
    let out = lie(&["--json", "classify", "catalog:heisenberg3", "--certificates"], None);
    assert!(out.status.success());
    let v = json(&out);
    let cert = &v["admits_nonsingular_derivation"]["certificates"][0];
    assert_eq!(cert["kind"], "witness");
    assert!(cert["det"].is_string());
}

#[test]
fn catalog_round_trip_through_stdin() {
    for name in ["g_7_1", "remark_algebra", "mu11_71"] {
        let get = lie(&["--json", "catalog", "get", name], None);
        assert!(get.status.success());
        let text = String::from_utf8(get.stdout).unwrap();
        let piped = lie(&["--json", "classify", "-"], Some(&text));
        let direct = lie(&["--json", "classify", &format!("catalog:{name}")], None);
        assert!(piped.status.success() && direct.status.success());
        assert_eq!(json(&piped), json(&direct), "{name}");
    }
}

#[test]
fn parameterized_catalog_entries() {
    let out = lie(&["--json", "der", "catalog:model_filiform", "--param", "n=5"], None);
    assert!(out.status.success());
    assert_eq!(json(&out)["kind"], "derivation");
    let out = lie(&["classify", "catalog:g_n_alpha", "--param", "n=7"], None);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "parameter");
}

#[test]
fn input_errors_exit_with_two() {
    let out = lie(&["classify", "catalog:no_such_algebra"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = lie(&["check", "-"], Some("{ not json"));
    assert_eq!(out.status.code(), Some(2));
    let out = lie(&["series", "/nonexistent/file.json"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_jacobi_is_a_mathematical_negative() {
    let bad = r#"{"dim": 3, "name": "bad", "brackets": [
        {"i": 1, "j": 2, "c": [[1, "1"]]},
        {"i": 2, "j": 3, "c": [[2, "1"]]}
    ]}"#;
    let out = lie(&["--json", "check", "-"], Some(bad));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["jacobi_ok"], false);
    let out = lie(&["check", "catalog:sl2"], None);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn affine_with_a_prederivation_file() {
    let p = temp_file(
        "g75.json",
        r#"[["1","0","0","0","0","0","0"],
            ["0","1","0","0","0","0","0"],
            ["0","0","2","0","0","0","0"],
            ["0","0","1","3","0","0","0"],
            ["0","0","0","0","3","0","0"],
            ["0","0","0","0","0","4","0"],
            ["0","0","0","0","0","0","5"]]"#,
    );
    let out = lie(
        &["--json", "affine", "catalog:g_7_5", "--prederivation", p.to_str().unwrap()],
        None,
    );
    let v = json(&out);
    assert_eq!(v["is_prederivation"], true);
    assert_eq!(v["det"], "360");
    assert_eq!(v["commutator_identity"], true);
    assert_eq!(v["is_affine"], false);
    assert_eq!(out.status.code(), Some(1));

    let d = temp_file("h3.json", r#"[["1","0","0"],["0","2","0"],["0","0","3"]]"#);
    let out = lie(
        &["--json", "affine", "catalog:heisenberg3", "--prederivation", d.to_str().unwrap()],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["is_affine"], true);
}

#[test]
fn filiform_generation_and_check() {
    let alpha = "(2,6)=1,(2,11)=1";
    let out = lie(&["--json", "filiform", "gen", "--n", "11", "--alpha", alpha, "--check"], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["jacobi_ok"], true);
    assert_eq!(v["algebra"]["dim"], 11);
    let out = lie(&["filiform", "gen", "--n", "11", "--alpha", "(2,5)=1,(3,7)=1", "--check"], None);
    assert_eq!(out.status.code(), Some(1));
    let out = lie(&["filiform", "gen", "--n", "11", "--alpha", "(1,2)=1"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_classification() {
    let manifest = temp_file("manifest.txt", "# algebras\ncatalog:heisenberg3\ncatalog:g_n_alpha n=7 alpha=1\n");
    let out = lie(
        &["--json", "classify", "--batch", manifest.to_str().unwrap(), "--jobs", "2"],
        None,
    );
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["characteristically_nilpotent"], true);
}

#[test]
fn seed_from_the_environment() {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lie"));
    let out = cmd.args(["--json", "classify", "catalog:heisenberg3", "--certificates"]).env("LIE_SEED", "7").output().unwrap();
    let seeded = json(&out);
    let flagged = json(&lie(&["--json", "--seed", "7", "classify", "catalog:heisenberg3", "--certificates"], None));
    assert_eq!(seeded, flagged);
}

#[test]
fn table7_and_series() {
    let out = lie(&["--json", "table7"], None);
    assert!(out.status.success());
    let rows = json(&out);
    let mismatched: Vec<&str> = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["matches"] == false)
        .map(|r| r["algebra"].as_str().unwrap())
        .collect();
    assert_eq!(mismatched, ["g_7_7"]);
    let out = lie(&["--json", "series", "catalog:model_filiform", "--param", "n=6"], None);
    let v = json(&out);
    assert_eq!(v["filiform"], true);
    assert_eq!(v["nilindex"], 5);
}

#[test]
fn catalog_listing() {
    let out = lie(&["--json", "catalog", "list"], None);
    assert!(out.status.success());
    let names: Vec<String> = json(&out)
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.iter().any(|n| n == "g_7_5"));
    assert!(names.iter().any(|n| n == "mu11_62"));
}
