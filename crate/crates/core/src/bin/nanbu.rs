use clap::{Args, Parser, Subcommand};
use nanbu::harness::scans::{acceptance_failures, COUPLED_GAP, ENERGY_MEAN, EPSILON_N, W2_TO_REF};
use nanbu::harness::{emit_report, run_epsilon_scan, run_invariant_suite, run_k_scan, run_n_scan, trend, Axis, ScanConfig, ScanRow, VerifyConfig};
use nanbu::sim::{io::write_snapshot, run, SimConfig};
use nanbu::transport::w2_unequal;
use nanbu::{NanbuError, Result};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nanbu", version, about = "Nanbu particle system: simulation, convergence scans and invariant checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads. Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// One run; writes a snapshot CSV per snapshot time.
    Simulate(Common),
    /// W₂² to a reference cloud over the N list.
    NScan(Common),
    /// Coupled cutoff gap over the K list.
    KScan(Common),
    /// Invariant suite. Without --config the full suite runs.
    Verify(Common),
    /// Exact W₂² between two `vx,vy,vz` CSV clouds.
    W2 {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Monte Carlo ε_N of the initial law over the N list.
    EpsilonN(Common),
}

enum Outcome {
    Pass,
    Violation(Vec<String>),
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| NanbuError::Config(e.to_string()))?;
    }
    Ok(())
}

fn load_scan(c: &Common) -> Result<ScanConfig> {
    set_threads(c.threads)?;
    let mut cfg = match &c.config {
        Some(p) => ScanConfig::load(p)?,
        None => ScanConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn simulate(c: &Common) -> Result<Outcome> {
    let cfg = load_scan(c)?;
    let sim = SimConfig {
        n: cfg.n,
        k_levels: vec![cfg.k],
        kernel: cfg.kernel_spec()?,
        horizon: cfg.horizon,
        seed: cfg.seed,
        replica: 0,
        law: cfg.initial_law()?,
        snapshot_times: cfg.snapshot_times.clone(),
    };
    let tr = run(&sim)?;
    std::fs::create_dir_all(&c.out)?;
    let mut rows = Vec::new();
    for (i, s) in tr.snapshots.iter().enumerate() {
        write_snapshot(&c.out.join(format!("snapshot_{i:03}.csv")), &s.velocities)?;
        let e: Vec<f64> = s.velocities.iter().map(|v| v.norm_sq()).collect();
        let ms = nanbu::stats::mean_se(&e);
        rows.push(ScanRow { statistic: ENERGY_MEAN.into(), n: cfg.n, k: cfg.k, t: s.t, value: ms.mean, stderr: ms.se, replicas: 1, seed: cfg.seed });
    }
    emit_report(&rows, &c.out, "simulate", &cfg, json!({ "events": tr.events }))?;
    println!("simulated N={} K={} to t={}: {} events, {} snapshots in {}", cfg.n, cfg.k, cfg.horizon, tr.events, tr.snapshots.len(), c.out.display());
    Ok(Outcome::Pass)
}

fn print_trend(tr: &nanbu::harness::Trend) {
    match &tr.slope {
        Some(f) => println!("{}: log-log slope {:.4} ± {:.4}, Spearman {:.4}", tr.statistic, f.slope, f.ci95, tr.spearman),
        None => println!("{}: no slope (too few positive points), Spearman {:.4}", tr.statistic, tr.spearman),
    }
}

fn n_scan(c: &Common) -> Result<Outcome> {
    let cfg = load_scan(c)?;
    let out = run_n_scan(&cfg)?;
    let tr = trend(&out.rows, W2_TO_REF, Axis::N);
    print_trend(&tr);
    if !out.reliable {
        eprintln!("warning: reference clouds differ by W2^2 = {:e}, not 4x below the scan values; results flagged unreliable", out.reference_gap);
    }
    emit_report(&out.rows, &c.out, "n-scan", &cfg, json!({ "reference_gap": out.reference_gap, "reliable": out.reliable, "trend": tr }))?;
    finish(acceptance_failures(&cfg, &tr))
}

fn k_scan(c: &Common) -> Result<Outcome> {
    let cfg = load_scan(c)?;
    let rows = run_k_scan(&cfg)?;
    let tr = trend(&rows, COUPLED_GAP, Axis::K);
    print_trend(&tr);
    emit_report(&rows, &c.out, "k-scan", &cfg, json!({ "trend": tr }))?;
    finish(acceptance_failures(&cfg, &tr))
}

fn epsilon_n(c: &Common) -> Result<Outcome> {
    let cfg = load_scan(c)?;
    let rows = run_epsilon_scan(&cfg)?;
    let tr = trend(&rows, EPSILON_N, Axis::N);
    print_trend(&tr);
    emit_report(&rows, &c.out, "epsilon-n", &cfg, json!({ "trend": tr }))?;
    finish(acceptance_failures(&cfg, &tr))
}

fn finish(failures: Vec<String>) -> Result<Outcome> {
    Ok(if failures.is_empty() { Outcome::Pass } else { Outcome::Violation(failures) })
}

fn verify(c: &Common) -> Result<Outcome> {
    set_threads(c.threads)?;
    let mut cfg = match &c.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| NanbuError::Config(format!("{}: {e}", p.display())))?;
            VerifyConfig::parse(&text)?
        }
        None => VerifyConfig::full(),
    };
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    let rep = run_invariant_suite(&cfg)?;
    std::fs::create_dir_all(&c.out)?;
    let path = c.out.join("verify_report.json");
    let text = serde_json::to_string_pretty(&rep).map_err(|e| NanbuError::input(e.to_string()))?;
    std::fs::write(&path, text + "\n")?;
    for ch in &rep.checks {
        println!("{} {}", if ch.passed { "PASS" } else { "FAIL" }, ch.name);
    }
    if rep.passed {
        println!("all {} checks passed; report in {}", rep.checks.len(), path.display());
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Violation(vec![format!("see {}", path.display())]))
    }
}

fn w2(a: &Path, b: &Path, threads: Option<usize>) -> Result<Outcome> {
    set_threads(threads)?;
    let ca = nanbu::sim::io::read_cloud(a)?;
    let cb = nanbu::sim::io::read_cloud(b)?;
    let r = w2_unequal(&ca, &cb)?;
    println!("w2sq {}\nw2 {}", r.cost, r.distance());
    Ok(Outcome::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Simulate(c) => simulate(c),
        Command::NScan(c) => n_scan(c),
        Command::KScan(c) => k_scan(c),
        Command::Verify(c) => verify(c),
        Command::W2 { a, b, threads } => w2(a, b, *threads),
        Command::EpsilonN(c) => epsilon_n(c),
    };
    match res {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violation(msgs)) => {
            for m in msgs {
                eprintln!("acceptance violation: {m}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
