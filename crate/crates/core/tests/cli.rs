mod common;

use std::path::Path;
use std::process::Command;

use common::corpus::corpus_dir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mergeweaver"))
}

fn scenario_args(cmd: &mut Command, dir: &Path) {
    for v in ["base", "left", "right"] {
        cmd.arg(format!("--{v}")).arg(dir.join(v));
    }
}

fn write(dir: &Path, file: &str, text: &str) {
    let p = dir.join(file);
    std::fs::create_dir_all(p.parent().unwrap()).unwrap();
    std::fs::write(p, text).unwrap();
}

#[test]
fn resolve_writes_both_resolutions() {
    let out = tempfile::tempdir().unwrap();
    let mut cmd = bin();
    cmd.arg("resolve");
    scenario_args(&mut cmd, &corpus_dir().join("motivating"));
    let o = cmd
        .args(["--trace", "--dump-script", "--dump-peg", "--no-timing", "--out"])
        .arg(out.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["conflicts"].as_array().unwrap().len(), 1);
    assert_eq!(report["conflicts"][0]["type"], "C1");
    let strategies: Vec<&str> = report["resolutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["strategy"].as_str().unwrap())
        .collect();
    assert_eq!(strategies, ["example", "rule"]);
    assert!(report.get("timingMs").is_none());
    let p = out.path();
    for f in [
        "merged/app/XmlConfigBuilder.java",
        "example/01-C1.diff",
        "example/01-C1.script.json",
        "example/01-C1.trace.json",
        "example/01-C1/app/XmlConfigBuilder.java",
        "rule/01-C1.diff",
        "peg/merged.json",
    ] {
        assert!(p.join(f).is_file(), "missing {f}");
    }
    let diff = std::fs::read_to_string(p.join("rule/01-C1.diff")).unwrap();
    assert!(diff.contains("+                SerializerConfig typeSerializerConfig = new SerializerConfig();"));
}

#[test]
fn detect_reports_to_file() {
    let out = tempfile::tempdir().unwrap();
    let report = out.path().join("r.json");
    let mut cmd = bin();
    cmd.arg("detect");
    scenario_args(&mut cmd, &corpus_dir().join("tax-c20"));
    let o = cmd.arg("--report").arg(&report).output().unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["conflicts"][0]["type"], "C20");
    assert_eq!(v["resolutions"].as_array().unwrap().len(), 0);
    assert!(v["timingMs"]["detect"].is_u64());
}

#[test]
fn textual_and_syntax_errors_have_their_own_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(&p.join("base"), "A.java", "class A {\n    int a;\n}\n");
    write(&p.join("left"), "A.java", "class A {\n    int b;\n}\n");
    write(&p.join("right"), "A.java", "class A {\n    int c;\n}\n");
    let mut cmd = bin();
    cmd.arg("detect");
    scenario_args(&mut cmd, p);
    assert_eq!(cmd.output().unwrap().status.code(), Some(3));

    write(&p.join("right"), "A.java", "class A {\n    int a;\n}\n");
    write(&p.join("right"), "B.java", "class B {\n    int\n}\n");
    let mut cmd = bin();
    cmd.arg("detect");
    scenario_args(&mut cmd, p);
    assert_eq!(cmd.output().unwrap().status.code(), Some(2));
}

#[test]
fn merge_writes_the_merged_version() {
    let out = tempfile::tempdir().unwrap();
    let mut cmd = bin();
    cmd.arg("merge");
    scenario_args(&mut cmd, &corpus_dir().join("tax-c14"));
    assert!(cmd.arg("--out").arg(out.path()).status().unwrap().success());
    let text = std::fs::read_to_string(out.path().join("app/Limits.java")).unwrap();
    assert_eq!(text.matches("private int limit;").count(), 2);
}

#[test]
fn eval_against_golden_key() {
    let corpus = corpus_dir();
    let out = tempfile::tempdir().unwrap();
    let report = out.path().join("eval.json");
    let o = bin()
        .arg("eval")
        .arg(&corpus)
        .arg("--golden")
        .arg(corpus.join("golden.toml"))
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["scenarios"], 45);
    assert!(v["perStrategy"]["example"]["accuracy"].is_f64());
}
