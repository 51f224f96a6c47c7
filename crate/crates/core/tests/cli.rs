use std::path::Path;
use std::process::{Command, Output};

fn nanbu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nanbu")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn bad_configs_exit_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let broken = write(dir.path(), "broken.toml", "n_list = [64, 128\nseed = ");
    assert_eq!(code(&nanbu(&["n-scan", "--config", &broken, "--out", out])), 2);
    let unknown = write(dir.path(), "unknown.toml", "kernal = \"hard_sphere\"\n");
    assert_eq!(code(&nanbu(&["k-scan", "--config", &unknown, "--out", out])), 2);
    let few = write(dir.path(), "few.toml", "replicas = 5\n");
    assert_eq!(code(&nanbu(&["k-scan", "--config", &few, "--out", out])), 2);
    assert_eq!(code(&nanbu(&["verify", "--config", &broken, "--out", out])), 2);
    let missing = dir.path().join("nope.toml");
    assert_eq!(code(&nanbu(&["simulate", "--config", missing.to_str().unwrap(), "--out", out])), 2);
    assert_eq!(code(&nanbu(&["frobnicate"])), 2);
}

#[test]
fn empty_verify_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.toml", "");
    let o = nanbu(&["verify", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("verify_report.json").exists());
}

#[test]
fn small_verify_config_runs_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "v.toml", "geometry_samples = 200\ncollision_samples = 200\nw2_instances = 10\n");
    let o = nanbu(&["verify", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 3, "{text}");
}

fn run_both(cmd: &str, cfg_text: &str) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", cfg_text);
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}"));
        let o = nanbu(&[cmd, "--config", &cfg, "--threads", threads, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let csv = std::fs::read(out.join("results.csv")).unwrap();
        let manifest = std::fs::read(out.join("manifest.json")).unwrap();
        files.push((csv, manifest));
    }
    assert_eq!(files[0].0, files[1].0, "{cmd}: results.csv differs across thread counts");
    assert_eq!(files[0].1, files[1].1, "{cmd}: manifest.json differs across thread counts");
    let text = String::from_utf8(files[0].0.clone()).unwrap();
    assert!(text.starts_with("statistic,N,K,t,value,stderr,replicas,seed"));
}

#[test]
fn n_scan_is_byte_identical_across_threads() {
    run_both("n-scan", "law = \"two_point\"\nk = 8.0\nn_list = [8, 16, 32]\nhorizon = 0.5\nreplicas = 30\nseed = 4\n");
}

#[test]
fn k_scan_is_byte_identical_across_threads() {
    run_both("k-scan", "kernel = \"hard_potential\"\ngamma = 0.5\nn = 24\nk_list = [2.0, 4.0, 8.0]\nhorizon = 0.5\nreplicas = 30\nseed = 4\n");
}

#[test]
fn simulate_writes_snapshots_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", "n = 32\nk = 8.0\nhorizon = 1.0\nsnapshot_times = [0.0, 0.5, 1.0]\n");
    let out = dir.path().join("sim");
    let o = nanbu(&["simulate", "--config", &cfg, "--seed", "11", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for i in 0..3 {
        let snap = std::fs::read_to_string(out.join(format!("snapshot_{i:03}.csv"))).unwrap();
        assert_eq!(snap.lines().count(), 33);
        assert!(snap.starts_with("particle,vx,vy,vz"));
    }
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["config"]["seed"], 11);
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn w2_between_csv_clouds() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "vx,vy,vz\n0,0,0\n1,0,0\n");
    let b = write(dir.path(), "b.csv", "vx,vy,vz\n0,2,0\n1,2,0\n");
    let o = nanbu(&["w2", &a, &b]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let w2sq: f64 = text.lines().next().unwrap().strip_prefix("w2sq ").unwrap().parse().unwrap();
    assert!((w2sq - 4.0).abs() < 1e-12);
    let bad = write(dir.path(), "bad.csv", "vx,vy\n1,2\n");
    assert_ne!(code(&nanbu(&["w2", &a, &bad])), 0);
}

#[test]
fn threshold_violation_exits_with_status_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "k.toml", "n = 16\nk_list = [2.0, 4.0, 8.0]\nhorizon = 0.3\nreplicas = 30\nmax_slope = -100.0\n");
    let o = nanbu(&["k-scan", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
}
