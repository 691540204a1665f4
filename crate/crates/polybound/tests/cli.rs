use std::process::{Command, Output};

use serde_json::Value;

fn polybound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polybound")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn bounds_defaults_to_csv() {
    let o = polybound(&["bounds", "--k-max", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("k,bound_id,value"), "{text}");
    assert!(text.contains("melas"));
}

#[test]
fn json_carries_the_schema_version() {
    for args in [
        &["--format", "json", "compare", "--k-max", "10"][..],
        &["--format", "json", "critical-root", "--n", "3", "--q", "100"],
        &["--format", "json", "spectrum", "--domain", "disk", "--k-max", "5"],
        &["--format", "json", "deep-bounds", "--k-max", "10"],
    ] {
        let o = polybound(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        assert_eq!(v["schema_version"], 1, "{args:?}");
        assert!(v["command"].is_string());
    }
}

#[test]
fn compare_on_closed_forms_passes() {
    let o = polybound(&["--format", "json", "compare", "--domain", "disk", "--k-max", "50"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn soundness_violation_exits_2() {
    let o = polybound(&["compare", "--bound", "master", "--oracle", "fd:0.125:none", "--k-max", "49", "--tolerance", "0"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn configuration_errors_exit_3() {
    assert_eq!(code(&polybound(&["bounds", "--bound", "levine_protter", "--l", "1"])), 3);
    assert_eq!(code(&polybound(&["critical-root", "--n", "3", "--q", "0.5"])), 3);
    assert_eq!(code(&polybound(&["frobnicate"])), 3);
    assert_eq!(code(&polybound(&["compare", "--k-min", "10", "--k-max", "5"])), 3);
    assert_eq!(code(&polybound(&["--config", "/nonexistent/polybound.toml", "compare"])), 3);
    assert_eq!(code(&polybound(&["--help"])), 0);
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(
        &cfg,
        r#"
l = 1
k_range = [1, 20]
bounds = ["li_yau", "melas", "master_bound"]
oracle = "closed_form"
output = "json"

[domain]
shape = "rectangle"
sides = [1.0, 2.0]
"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let o = polybound(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "compare"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 60);
    assert!((v["volume"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    std::fs::write(&cfg, "l = 1\nk_range = [1, 5]\nbogus = 3\n").unwrap();
    assert_eq!(code(&polybound(&["--config", cfg.to_str().unwrap(), "compare"])), 3);
}

#[test]
fn coefficient_audit_lists_the_constants() {
    let o = polybound(&["deep-bounds", "--audit-coefficients"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("145252"));
    assert!(text.contains("Mismatch") || text.contains("mismatch"));
}

#[test]
fn lemma_verification_exit_codes() {
    assert_eq!(code(&polybound(&["verify-lemma", "--lemma", "g-convexity", "--grid", "coarse"])), 0);
    assert_eq!(code(&polybound(&["verify-lemma", "--lemma", "polynomial", "--grid", "coarse"])), 2);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["--seed", "5", "--format", "json", "verify-lemma", "--lemma", "moment", "--grid", "coarse", "--sets", "6"];
    let a = polybound(&args);
    let b = polybound(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn range_and_list_flags() {
    let o = polybound(&["spectrum", "--domain", "disk", "--k", "1..4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("index,eigenvalue,error_estimate,method"));
    assert_eq!(text.lines().count(), 5);

    let o = polybound(&["bounds", "--bounds", "li_yau,melas", "--k", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 3);

    assert_eq!(code(&polybound(&["bounds", "--k", "3..x"])), 3);
    assert_eq!(code(&polybound(&["critical-root", "--n", "3", "--Q", "100"])), 0);
}
