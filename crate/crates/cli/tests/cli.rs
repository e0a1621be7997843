use std::path::PathBuf;
use std::process::{Command, Output};

fn gspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gspin")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gspin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_writes_json() {
    let out = scratch("z2.json");
    let o = gspin(&[
        "verify",
        "--group",
        "Z2",
        "--subgroup",
        "whole",
        "--window",
        "0,1",
        "--suites",
        "group,double,hopf",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"overall\": true"));
    assert!(text.contains("\"version\""));
}

#[test]
fn markdown_to_stdout() {
    let o = gspin(&[
        "verify",
        "--group",
        "S3",
        "--subgroup",
        "(123)",
        "--window",
        "0,1",
        "--suites",
        "double",
        "--format",
        "markdown",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("### double: pass"));
}

#[test]
fn exit_codes() {
    let non_normal = gspin(&["verify", "--group", "S3", "--subgroup", "(12)", "--window", "0,1", "--suites", "field"]);
    assert_eq!(non_normal.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&non_normal.stderr).contains("normal"));

    let unexpected =
        gspin(&["verify", "--group", "S3", "--subgroup", "(123)", "--window", "0,1", "--suites", "double-negative"]);
    assert_eq!(unexpected.status.code(), Some(1));

    let huge = gspin(&[
        "verify",
        "--group",
        "S3",
        "--subgroup",
        "(123)",
        "--window",
        "0,1",
        "--suites",
        "field",
        "--cap",
        "100",
    ]);
    assert_eq!(huge.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&huge.stderr).contains("972"));

    let env_cap = Command::new(env!("CARGO_BIN_EXE_gspin"))
        .args(["verify", "--group", "S3", "--subgroup", "(123)", "--window", "0,1", "--suites", "field"])
        .env("GSPIN_BASIS_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(env_cap.status.code(), Some(3));
}

#[test]
fn run_matrix_config() {
    let cfg = scratch("matrix.toml");
    std::fs::write(
        &cfg,
        "[[run]]\ngroup = \"Z4\"\nsubgroup = [\"2\"]\nwindow = [0, 0]\nsuites = [\"double\", \"field\"]\n\n\
         [[run]]\ngroup = \"S3\"\nsubgroup = [\"(12)\"]\nwindow = [0, 1]\nsuites = [\"double-negative\"]\n",
    )
    .unwrap();
    let o = gspin(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("expected-failure"));
}

#[test]
fn ingest_group() {
    let good = scratch("z3.txt");
    std::fs::write(&good, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    let o = gspin(&["ingest-group", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("order: 3"));

    let bad = scratch("bad.txt");
    std::fs::write(&bad, "3\n0 1 2\n1 2 0\n2 1 1\n").unwrap();
    assert_eq!(gspin(&["ingest-group", bad.to_str().unwrap()]).status.code(), Some(2));
}
