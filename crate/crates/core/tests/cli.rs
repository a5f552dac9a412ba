use std::path::Path;
use std::process::{Command, Output};

fn inflap(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inflap"))
        .args(args)
        .env_remove("INFLAP_OUT_DIR")
        .current_dir(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn verify_identities_passes_with_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("ident");
    let o = inflap(
        &["verify-identities", "--seed", "7", "--count", "20", "--out-dir", out.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("identities.csv").exists());
    assert!(out.join("manifest.json").exists());
}

#[test]
fn regularity_scan_writes_scan_and_fit() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("scan");
    let o = inflap(
        &[
            "regularity-scan",
            "--alpha",
            "1.5",
            "--p",
            "2",
            "--meshes",
            "5,6,7,8",
            "--s",
            "-3",
            "--out-dir",
            out.to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["scan.csv", "summary.json", "scan_data.dat", "scan_fit.dat", "power_scan.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
}

#[test]
fn empty_config_is_rejected_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("empty.cfg");
    std::fs::write(&cfg, "").unwrap();
    let out = tmp.path().join("never");
    let o = inflap(
        &["verify-identities", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn misspelled_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "seed = 3\ncuont = 10\n").unwrap();
    let out = tmp.path().join("never");
    let o = inflap(
        &["verify-identities", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cuont"));
    assert!(!out.exists());
}

#[test]
fn unknown_flag_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = inflap(&["solve2d", "--bogus", "1"], tmp.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |dir: &str| {
        let out = tmp.path().join(dir);
        let o = inflap(
            &[
                "solve2d",
                "--n",
                "17",
                "--eps-schedule",
                "0.4,0.2",
                "--out-dir",
                out.to_str().unwrap(),
            ],
            tmp.path(),
        );
        assert!(code(&o) <= 1, "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let a = run("a");
    let b = run("b");
    for name in ["continuation.csv", "run_log.csv", "solution.csv", "summary.json"] {
        let x = std::fs::read(a.join(name)).unwrap();
        let y = std::fs::read(b.join(name)).unwrap();
        assert!(x == y, "{name} differs between runs");
    }
}

#[test]
fn out_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_inflap"))
        .args(["solve1d", "--n", "257"])
        .env("INFLAP_OUT_DIR", &out)
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("solution.csv").exists());

    // flags win over the environment
    let flag = tmp.path().join("from_flag");
    let o = Command::new(env!("CARGO_BIN_EXE_inflap"))
        .args(["solve1d", "--n", "257", "--out-dir", flag.to_str().unwrap()])
        .env("INFLAP_OUT_DIR", tmp.path().join("ignored"))
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(flag.join("solution.csv").exists());
    assert!(!tmp.path().join("ignored").exists());
}
