//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use nanbu::harness::scans::{COUPLED_GAP, EPSILON_N, W2_TO_REF};
use nanbu::harness::verify::{collision_metrics, energy_metrics, generator_metrics, geometry_metrics, identity_metrics, kernel_families, maxwell_metrics, w2_metrics};
use nanbu::harness::{run_epsilon_scan, run_k_scan, run_n_scan, trend, Axis, LawKind, ScanConfig, ScanRow};
use nanbu::inequality::check_fundest;
use nanbu::kernel::KernelFamily;
use nanbu::rng::{purpose, stream};
use nanbu::sim::{gaussian, CouplingMode};
use nanbu::stats::mean_se;
use nanbu::transport::{gaussian_sobolev_expectation, sobolev_distance_sq, SobolevGrid};
use nanbu::Vec3;
use rayon::prelude::*;
use std::time::{Duration, Instant};

const SEED: u64 = 20240601;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn gap_at(rows: &[ScanRow], k: f64) -> f64 {
    let t = rows.iter().map(|r| r.t).fold(f64::NEG_INFINITY, f64::max);
    rows.iter().find(|r| r.statistic == COUPLED_GAP && r.k == k && r.t == t).map(|r| r.value).expect("gap row")
}

fn geometry() -> Verdict {
    let m = geometry_metrics(100_000, SEED);
    verdict(m.identity_residual <= 1e-9 && m.distance_excess <= 1e-9, format!("identity residual {:.2e}, distance excess {:.2e}", m.identity_residual, m.distance_excess))
}

fn collision() -> Verdict {
    let m = collision_metrics(100_000, SEED);
    let ok = m.norm_residual <= 1e-10 && m.momentum_residual <= 1e-10 && m.energy_residual <= 1e-10;
    verdict(ok, format!("|c|² {:.2e}, momentum {:.2e}, energy {:.2e}", m.norm_residual, m.momentum_residual, m.energy_residual))
}

fn identities() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in kernel_families() {
        match identity_metrics(&spec, 1000, SEED) {
            Ok(m) => {
                ok &= m.square_residual <= 1e-8 && m.mean_residual <= 1e-8;
                parts.push(format!("{:?} {:.1e}/{:.1e}", spec.family, m.square_residual, m.mean_residual));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{:?} error {e}", spec.family));
            }
        }
    }
    verdict(ok, parts.join(", "))
}

fn coupling_inequality() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in kernel_families() {
        match check_fundest(10_000, &[1.0, 8.0, 64.0], &spec, 1e-6, SEED) {
            Ok(r) => {
                ok &= r.passed();
                parts.push(format!("{:?} {} violations, smallest slack {:.2e}", spec.family, r.violations, r.worst_scaled_margin));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{:?} error {e}", spec.family));
            }
        }
    }
    verdict(ok, parts.join("; "))
}

fn maxwell_specialization() -> Verdict {
    match maxwell_metrics(10_000, &[1.0, 8.0, 64.0], SEED) {
        Ok(m) => verdict(
            m.max_abs_a1 == 0.0 && m.a2_residual <= 1e-9 && m.swap_residual <= 1e-10,
            format!("max|A1| {:.1e}, A2 residual {:.2e}, swap residual {:.2e}", m.max_abs_a1, m.a2_residual, m.swap_residual),
        ),
        Err(e) => verdict(false, format!("error {e}")),
    }
}

fn generator() -> Verdict {
    let g = generator_metrics(500, SEED);
    let e = energy_metrics(200, SEED);
    match (g, e) {
        (Ok(g), Ok(e)) => {
            let worst = e.z_scores.iter().fold(0.0f64, |a, z| a.max(z.abs()));
            let ok = g.gof_p_value > 1e-3 && e.z_scores.len() == 5 && worst <= 4.0;
            verdict(ok, format!("event count p = {:.3}, mean {:.1} vs {:.1}; energy max |z| {:.2} over {} times", g.gof_p_value, g.mean_events, g.expected_events, worst, e.z_scores.len()))
        }
        (g, e) => verdict(false, format!("error {:?} {:?}", g.err(), e.err())),
    }
}

fn w2_solver() -> Verdict {
    match w2_metrics(200, SEED) {
        Ok(m) => verdict(
            m.brute_force_residual <= 1e-12 && m.translation_residual <= 1e-12,
            format!("brute force {:.1e}, translation {:.1e}", m.brute_force_residual, m.translation_residual),
        ),
        Err(e) => verdict(false, format!("error {e}")),
    }
}

fn epsilon_rate() -> Verdict {
    let cfg = ScanConfig { n_list: vec![32, 64, 128, 256, 512, 1024], replicas: 50, target_factor: 8, seed: SEED, ..Default::default() };
    match run_epsilon_scan(&cfg) {
        Ok(rows) => {
            let tr = trend(&rows, EPSILON_N, Axis::N);
            match tr.slope {
                Some(f) => verdict(f.slope <= -1.0 / 3.0 + 0.05, format!("slope {:.3} ± {:.3}", f.slope, f.ci95)),
                None => verdict(false, "no slope".into()),
            }
        }
        Err(e) => verdict(false, format!("error {e}")),
    }
}

fn sobolev_identity() -> Verdict {
    let grid = SobolevGrid::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [64usize, 256] {
        let vals: Vec<f64> = (0..100u64)
            .into_par_iter()
            .map(|r| {
                let mut rng = stream(SEED, purpose::SAMPLE, (n as u64) << 20 | r);
                let cloud: Vec<Vec3> = (0..n).map(|_| gaussian(&mut rng)).collect();
                sobolev_distance_sq(&cloud, |xi| ((-0.5 * xi.norm_sq()).exp(), 0.0), 2.0, &grid).expect("valid grid")
            })
            .collect();
        let ms = mean_se(&vals);
        let want = gaussian_sobolev_expectation(n, 1.0, 2.0).expect("s > 3/2");
        let z = (ms.mean - want) / ms.se;
        ok &= z.abs() <= 4.0;
        parts.push(format!("N={n}: {:.4e} vs {:.4e} (z {:.2})", ms.mean, want, z));
    }
    verdict(ok, parts.join(", "))
}

fn cutoff_scaling() -> Verdict {
    let cfg = ScanConfig {
        kernel: KernelFamily::MaxwellMolecules,
        nu: 0.5,
        n: 512,
        horizon: 2.0,
        k_list: (1..=7).map(|e| 2f64.powi(e)).collect(),
        replicas: 50,
        coupling: CouplingMode::Aligned,
        seed: SEED,
        ..Default::default()
    };
    match run_k_scan(&cfg) {
        Ok(rows) => match trend(&rows, COUPLED_GAP, Axis::K).slope {
            Some(f) => verdict(f.slope <= -2.0, format!("slope {:.3} ± {:.3}", f.slope, f.ci95)),
            None => verdict(false, "no slope".into()),
        },
        Err(e) => verdict(false, format!("error {e}")),
    }
}

fn n_scaling() -> Verdict {
    let cfg = ScanConfig {
        kernel: KernelFamily::MaxwellMolecules,
        nu: 0.5,
        law: LawKind::TwoPoint,
        k: 64.0,
        n_list: vec![64, 128, 256, 512, 1024, 2048],
        horizon: 2.0,
        replicas: 30,
        seed: SEED,
        ..Default::default()
    };
    match run_n_scan(&cfg) {
        Ok(out) => {
            let tr = trend(&out.rows, W2_TO_REF, Axis::N);
            match tr.slope {
                Some(f) => verdict(
                    tr.spearman < -0.9 && f.slope <= -1.0 / 3.0 + 0.1,
                    format!("slope {:.3} ± {:.3}, Spearman {:.3}, reference gap {:.2e} (reliable: {})", f.slope, f.ci95, tr.spearman, out.reference_gap, out.reliable),
                ),
                None => verdict(false, "no slope".into()),
            }
        }
        Err(e) => verdict(false, format!("error {e}")),
    }
}

fn hard_sphere_inertness() -> Verdict {
    let cfg = ScanConfig {
        kernel: KernelFamily::HardSphere,
        law: LawKind::Maxwellian,
        n: 512,
        horizon: 2.0,
        k_list: vec![4.0, 8.0, 16.0, 32.0, 64.0],
        replicas: 30,
        seed: SEED,
        ..Default::default()
    };
    match run_k_scan(&cfg) {
        Ok(rows) => {
            let (g4, g32) = (gap_at(&rows, 4.0), gap_at(&rows, 32.0));
            verdict(g32 <= g4 / 10.0, format!("gap(4) {g4:.4e}, gap(32) {g32:.4e}"))
        }
        Err(e) => verdict(false, format!("error {e}")),
    }
}

fn main() {
    // `cargo test` forwards filter arguments; run everything unless asked to list
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    type Criterion = (u32, &'static str, u64, fn() -> Verdict);
    let criteria: [Criterion; 12] = [
        (1, "geometry identities", 5, geometry),
        (2, "collision closed forms", 5, collision),
        (3, "quadrature identities", 60, identities),
        (4, "coupling inequality", 600, coupling_inequality),
        (5, "maxwell specialization", 30, maxwell_specialization),
        (6, "generator rate and mean energy", 120, generator),
        (7, "W2 solver", 60, w2_solver),
        (8, "empirical W2 rate", 1200, epsilon_rate),
        (9, "negative Sobolev identity", 300, sobolev_identity),
        (10, "cutoff scaling", 1800, cutoff_scaling),
        (11, "particle-number scaling", 2700, n_scaling),
        (12, "hard-sphere cutoff inertness", 1200, hard_sphere_inertness),
    ];
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let v = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget);
        let ok = v.passed && in_time;
        if !ok {
            failed += 1;
        }
        let time_note = if in_time { String::new() } else { format!(" over the {budget} s budget") };
        println!("criterion {id:>2} {} {name}: {} [{:.1} s{time_note}]", if ok { "PASS" } else { "FAIL" }, v.detail, took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
