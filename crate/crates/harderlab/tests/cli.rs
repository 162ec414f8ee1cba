//! End-to-end checks of the command-line surface: exit codes, wire
//! formats, and report determinism.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_harderlab"))
}

fn fixtures_dir() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .display()
        .to_string()
}

#[test]
fn zeta_neg_value() {
    let out = bin().args(["special", "zeta-neg", "--k", "12"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("691/32760"), "{text}");
}

#[test]
fn fp_rank_one() {
    let out = bin()
        .args(["fp", "--p", "2", "--twoT", r#"{"n":1,"twoT":[[4]]}"#])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("F_2(B, X) = 1 + 2*X"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    let out = bin().arg("nonsense-subcommand").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["fp", "--p", "2", "--twoT", r#"{"n":1,"twoT":[[3]]}"#])
        .output()
        .unwrap();
    // odd diagonal: rejected as usage
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capability_errors_exit_three() {
    // rank-5 local factors are a declared extension point
    let out = bin()
        .args([
            "eisenstein",
            "--degree",
            "5",
            "--weight",
            "16",
            "--twoT",
            r#"{"n":5,"twoT":[[2,0,0,0,0],[0,2,0,0,0],[0,0,2,0,0],[0,0,0,2,0],[0,0,0,0,2]]}"#,
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn lifts_weights_and_sign_check() {
    let out = bin()
        .args(["lifts", "weights", "--theorem", "atobe1", "--k", "10", "--j", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("[12, 12, 6, 6]"));
    let spec = r#"{"pieces":[{"kind":"siegel2","k":10,"j":4,"d":2},{"kind":"trivial","d":1}],"i0":1}"#;
    let out = bin().args(["lifts", "sign-check", "--spec", spec]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("holds"));
}

#[test]
fn verify_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let out = bin()
            .args([
                "verify",
                "--case",
                "harder-14-4",
                "--fixtures",
                &fixtures_dir(),
                "--json",
            ])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let body = std::fs::read_to_string(&path).unwrap();
        // strip the timing field
        let mut v: serde_json::Value = serde_json::from_str(&body).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        reports.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(reports[0], reports[1], "reports must be byte-identical up to timing");
}

#[test]
fn epsilon_polynomial_output() {
    let out = bin()
        .args([
            "epsilon",
            "--k",
            "6",
            "--l",
            "6",
            "--n1",
            "2",
            "--n2",
            "4",
            "--t1",
            r#"{"n":2,"twoT":[[2,1],[1,2]]}"#,
            "--t2",
            r#"{"n":4,"twoT":[[2,0,0,0],[0,2,0,0],[0,0,0,0],[0,0,0,0]]}"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
