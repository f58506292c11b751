use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dw-exterior"))
}

fn write(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("cfg.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn bad_exponent_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "[sweep]\np = 0.5\n");
    let out = bin()
        .args(["lifespan-sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep.p"));
}

#[test]
fn missing_file_is_a_config_error() {
    let out = bin().args(["heat-decay", "--config", "/nonexistent/cfg.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_kind_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "kind = \"global-decay\"\n");
    let out = bin().args(["inequalities", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn passing_run_writes_summary_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "kind = \"inequalities\"\n[hardy]\nfuzz_count = 20\n");
    let out_dir = dir.path().join("o");
    let out = bin()
        .args(["inequalities", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["all_passed"], true);
    assert_eq!(summary["checks"].as_array().unwrap().len(), 3);
    assert!(out_dir.join("summary.md").exists() && out_dir.join("hardy_fuzz.csv").exists());
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "[positivity]\ncount = 2\n[linear]\ndrs = [0.2, 0.1]\nmatsumura_times = [1.0, 3.0, 10.0]\nlog_times = [1.0, 10.0]\n",
    );
    let out = bin()
        .args(["linear-estimates", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("o"))
        .args(["--jobs", "1"])
        .output()
        .unwrap();
    // the modal spread is a closed-form quantity and exceeds 2
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("modal-matsumura: FAIL"));
}

#[test]
fn same_seed_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "[hardy]\nfuzz_count = 50\n");
    let run = |name: &str, seed: &str| {
        let out_dir = dir.path().join(name);
        let status = bin()
            .args(["inequalities", "--seed", seed, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out_dir)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        std::fs::read(out_dir.join("hardy_fuzz.csv")).unwrap()
    };
    let a = run("a", "7");
    let b = run("b", "7");
    let c = run("c", "8");
    assert_eq!(a, b);
    assert_ne!(a, c);
}
