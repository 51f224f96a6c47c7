//! The invariant suite behind `nanbu verify`. Each check returns raw
//! metrics; thresholds are applied in [`run_invariant_suite`].

use crate::error::{NanbuError, Result};
use crate::geometry::{c_dev, gamma_vec, post_collision, tanaka_angles};
use crate::inequality::{a_terms, check_a3_bounds, check_fundest, check_g_squared_diff, check_phik_regularity, closed_piece_integrals, stress_quadruple, A3Majorant};
use crate::kernel::{one_minus_cos, KernelSpec};
use crate::rng::{purpose, stream, StreamRng};
use crate::sim::{gaussian, run, InitialLaw, SimConfig};
use crate::stats::{paired_diff, poisson_gof};
use crate::transport::w2_exact;
use crate::vec3::Vec3;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Sample counts of the suite. A file with no keys runs nothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub geometry_samples: usize,
    pub collision_samples: usize,
    pub identity_samples: usize,
    pub fundest_samples: usize,
    pub fundest_k: Vec<f64>,
    pub maxwell_samples: usize,
    pub a3_samples: usize,
    pub constant_grid: usize,
    pub generator_replicas: usize,
    pub energy_replicas: usize,
    pub w2_instances: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            geometry_samples: 0,
            collision_samples: 0,
            identity_samples: 0,
            fundest_samples: 0,
            fundest_k: vec![],
            maxwell_samples: 0,
            a3_samples: 0,
            constant_grid: 0,
            generator_replicas: 0,
            energy_replicas: 0,
            w2_instances: 0,
            seed: 1,
        }
    }
}

impl VerifyConfig {
    /// The full suite used when no config file is given.
    pub fn full() -> Self {
        VerifyConfig {
            geometry_samples: 100_000,
            collision_samples: 100_000,
            identity_samples: 1000,
            fundest_samples: 10_000,
            fundest_k: vec![1.0, 8.0, 64.0],
            maxwell_samples: 10_000,
            a3_samples: 4000,
            constant_grid: 41,
            generator_replicas: 500,
            energy_replicas: 200,
            w2_instances: 200,
            seed: 1,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| NanbuError::Config(e.to_string()))
    }
}

pub fn kernel_families() -> [KernelSpec; 3] {
    [
        KernelSpec::maxwell(0.5).expect("valid"),
        KernelSpec::hard_potential(0.5, 0.5).expect("valid"),
        KernelSpec::hard_sphere(),
    ]
}

fn scaled_gaussian(rng: &mut StreamRng) -> Vec3 {
    gaussian(rng) * 10f64.powf(rng.random_range(-2.0..2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryMetrics {
    /// max |Γ(X,φ)·Γ(Y,φ+φ₀) − X·Y cos²(φ+φ₁) − |X||Y| sin²(φ+φ₁)| / (|X||Y|)
    pub identity_residual: f64,
    /// max (|Γ(X,φ) − Γ(Y,φ+φ₀)| − |X−Y|) / (|X| + |Y|)
    pub distance_excess: f64,
    pub samples: usize,
}

pub fn geometry_metrics(samples: usize, seed: u64) -> GeometryMetrics {
    let rows: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, purpose::SAMPLE, i);
            let x = scaled_gaussian(&mut rng);
            // every tenth pair nearly collinear
            let y = if i % 10 == 0 { x * rng.random_range(-3.0..3.0) + gaussian(&mut rng) * 1e-9 } else { scaled_gaussian(&mut rng) };
            let phi = rng.random_range(0.0..TAU);
            let (p0, p1) = tanaka_angles(x, y);
            let (gx, gy) = (gamma_vec(x, phi).expect("nonzero"), gamma_vec(y, phi + p0).expect("nonzero"));
            let (nx, ny) = (x.norm(), y.norm());
            let rhs = x.dot(y) * (phi + p1).cos().powi(2) + nx * ny * (phi + p1).sin().powi(2);
            let id = (gx.dot(gy) - rhs).abs() / (nx * ny);
            let ex = ((gx - gy).norm() - (x - y).norm()) / (nx + ny);
            (id, ex)
        })
        .collect();
    GeometryMetrics {
        identity_residual: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        distance_excess: rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max),
        samples,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionMetrics {
    /// max relative error of |c|² against (1 − cos θ) x² / 2
    pub norm_residual: f64,
    pub momentum_residual: f64,
    pub energy_residual: f64,
    pub samples: usize,
}

pub fn collision_metrics(samples: usize, seed: u64) -> CollisionMetrics {
    let kernels = kernel_families();
    let rows: Vec<(f64, f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, purpose::SAMPLE, i);
            let spec = kernels[(i % 3) as usize];
            let (v, w) = (scaled_gaussian(&mut rng), scaled_gaussian(&mut rng));
            let z = 10f64.powf(rng.random_range(-3.0..3.0));
            let phi = rng.random_range(0.0..TAU);
            let x = (v - w).norm();
            let c = c_dev(v, w, z, phi, &spec);
            let th = spec.deviation_angle(z, x);
            let want = 0.5 * one_minus_cos(th) * x * x;
            let norm = if want > 0.0 { (c.norm_sq() - want).abs() / want } else { c.norm_sq() };
            let (v2, w2) = post_collision(v, w, th, phi);
            let p = ((v2 + w2) - (v + w)).norm() / (v.norm() + w.norm());
            let e0 = v.norm_sq() + w.norm_sq();
            let e = (v2.norm_sq() + w2.norm_sq() - e0).abs() / e0;
            (norm, p, e)
        })
        .collect();
    let max = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    CollisionMetrics { norm_residual: max(|r| r.0), momentum_residual: max(|r| r.1), energy_residual: max(|r| r.2), samples }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityMetrics {
    pub kernel: KernelSpec,
    /// max |∫∫|c|² − x²Φ_K| / (x²Φ_K)
    pub square_residual: f64,
    /// max |∫∫c + XΦ_K| / (|X|Φ_K)
    pub mean_residual: f64,
    pub samples: usize,
}

pub fn identity_metrics(spec: &KernelSpec, samples: usize, seed: u64) -> Result<IdentityMetrics> {
    let rows: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, purpose::SAMPLE, i);
            let (v, w) = (scaled_gaussian(&mut rng), scaled_gaussian(&mut rng));
            let k = 2f64.powf(rng.random_range(0.0..6.0));
            let xv = v - w;
            let x = xv.norm();
            let (sq, mean) = closed_piece_integrals(v, w, k, spec, 256)?;
            let phi = spec.phi_k(x, k)?;
            Ok(((sq - x * x * phi).abs() / (x * x * phi), (mean + xv * phi).norm() / (x * phi)))
        })
        .collect::<Result<_>>()?;
    Ok(IdentityMetrics {
        kernel: *spec,
        square_residual: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        mean_residual: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellMetrics {
    pub max_abs_a1: f64,
    /// max |A₂ − ζ_K(−|v−ṽ|² + |v_*−ṽ_*|²)|
    pub a2_residual: f64,
    /// max |A₂(q) + A₂(q with the pair members exchanged)| over all kernels
    pub swap_residual: f64,
    pub samples: usize,
}

pub fn maxwell_metrics(samples: usize, k_list: &[f64], seed: u64) -> Result<MaxwellMetrics> {
    let mx = KernelSpec::maxwell(0.5)?;
    let kernels = kernel_families();
    let rows: Vec<(f64, f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let q = stress_quadruple(seed, i);
            let (mut a1, mut a2, mut sw) = (0.0f64, 0.0f64, 0.0f64);
            for &k in k_list {
                let a = a_terms(&q, k, &mx)?;
                let want = mx.zeta_k(k)? * (-(q.v - q.v_tilde).norm_sq() + (q.v_star - q.v_tilde_star).norm_sq());
                a1 = a1.max(a.a1.abs());
                a2 = a2.max((a.a2 - want).abs());
                let spec = kernels[(i % 3) as usize];
                let s = a_terms(&q, k, &spec)?.a2 + a_terms(&q.swap_pairs(), k, &spec)?.a2;
                sw = sw.max(s.abs());
            }
            Ok((a1, a2, sw))
        })
        .collect::<Result<_>>()?;
    let max = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(MaxwellMetrics { max_abs_a1: max(|r| r.0), a2_residual: max(|r| r.1), swap_residual: max(|r| r.2), samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorMetrics {
    pub replicas: usize,
    pub expected_events: f64,
    pub mean_events: f64,
    pub gof_p_value: f64,
}

/// Event counts on [0, 10] with N = 16, K = 4 against Poisson(2π·15·4·10).
pub fn generator_metrics(replicas: usize, seed: u64) -> Result<GeneratorMetrics> {
    let spec = KernelSpec::maxwell(0.5)?;
    let (n, k, t) = (16usize, 4.0, 10.0);
    let counts: Vec<u64> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut c = SimConfig::new(n, k, spec, t, InitialLaw::Maxwellian { sigma: 1.0 }, seed);
            c.replica = r;
            Ok(run(&c)?.events)
        })
        .collect::<Result<_>>()?;
    let lambda = TAU * (n - 1) as f64 * k * t;
    let gof = poisson_gof(&counts, lambda)?;
    Ok(GeneratorMetrics {
        replicas,
        expected_events: lambda,
        mean_events: counts.iter().sum::<u64>() as f64 / replicas as f64,
        gof_p_value: gof.p_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyMetrics {
    pub replicas: usize,
    pub times: Vec<f64>,
    /// (mean energy change since t = 0) / SE at each time
    pub z_scores: Vec<f64>,
}

/// Replica-mean energy drift of the one-sided dynamics at five times.
pub fn energy_metrics(replicas: usize, seed: u64) -> Result<EnergyMetrics> {
    let spec = KernelSpec::hard_potential(0.5, 0.5)?;
    let times = vec![0.0, 0.4, 0.8, 1.2, 1.6, 2.0];
    let per: Vec<Vec<f64>> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut c = SimConfig::new(64, 8.0, spec, 2.0, InitialLaw::two_point_default(), seed);
            c.replica = r;
            c.snapshot_times = times.clone();
            Ok(run(&c)?.snapshots.iter().map(|s| s.velocities.iter().map(|v| v.norm_sq()).sum::<f64>() / 64.0).collect())
        })
        .collect::<Result<_>>()?;
    let e0: Vec<f64> = per.iter().map(|r| r[0]).collect();
    let z_scores = (1..times.len())
        .map(|s| {
            let es: Vec<f64> = per.iter().map(|r| r[s]).collect();
            let d = paired_diff(&es, &e0);
            if d.se > 0.0 {
                d.mean / d.se
            } else {
                0.0
            }
        })
        .collect();
    Ok(EnergyMetrics { replicas, times: times[1..].to_vec(), z_scores })
}

/// Minimum of (1/n) Σ |a_i − b_σ(i)|² over all permutations σ.
pub fn brute_force_w2(a: &[Vec3], b: &[Vec3]) -> f64 {
    fn rec(a: &[Vec3], b: &[Vec3], used: &mut Vec<bool>, i: usize, acc: f64, best: &mut f64) {
        if i == a.len() {
            *best = best.min(acc);
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                rec(a, b, used, i + 1, acc + (a[i] - b[j]).norm_sq(), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(a, b, &mut vec![false; b.len()], 0, 0.0, &mut best);
    best / a.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct W2Metrics {
    pub instances: usize,
    pub brute_force_residual: f64,
    pub translation_residual: f64,
}

/// Exact W₂² against permutation enumeration for n = 1..=7, plus the
/// identity W₂²(a + h, b) = W₂²(a, b) + 2h·(ā − b̄) + |h|².
pub fn w2_metrics(instances: usize, seed: u64) -> Result<W2Metrics> {
    let mut bf = 0.0f64;
    let mut tr = 0.0f64;
    for i in 0..instances as u64 {
        let mut rng = stream(seed, purpose::SAMPLE, i);
        let n = 1 + (i % 7) as usize;
        let a: Vec<Vec3> = (0..n).map(|_| gaussian(&mut rng)).collect();
        let b: Vec<Vec3> = (0..n).map(|_| gaussian(&mut rng) * 2.0).collect();
        let exact = w2_exact(&a, &b)?.cost;
        bf = bf.max((exact - brute_force_w2(&a, &b)).abs());
        let h = gaussian(&mut rng);
        let shifted: Vec<Vec3> = a.iter().map(|v| *v + h).collect();
        let mean = |c: &[Vec3]| c.iter().fold(Vec3::ZERO, |s, v| s + *v) * (1.0 / n as f64);
        let want = exact + 2.0 * h.dot(mean(&a) - mean(&b)) + h.norm_sq();
        tr = tr.max((w2_exact(&shifted, &b)?.cost - want).abs());
    }
    Ok(W2Metrics { instances, brute_force_residual: bf, translation_residual: tr })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

fn outcome<T: Serialize>(name: &str, passed: bool, detail: &T) -> CheckOutcome {
    CheckOutcome { name: name.into(), passed, detail: serde_json::to_value(detail).expect("serializable") }
}

/// Run every check with a nonzero count. No checks means a pass.
pub fn run_invariant_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let seed = cfg.seed;
    let mut checks = Vec::new();
    if cfg.geometry_samples > 0 {
        let m = geometry_metrics(cfg.geometry_samples, seed);
        checks.push(outcome("geometry", m.identity_residual <= 1e-9 && m.distance_excess <= 1e-12, &m));
    }
    if cfg.collision_samples > 0 {
        let m = collision_metrics(cfg.collision_samples, seed);
        checks.push(outcome("collision", m.norm_residual <= 1e-10 && m.momentum_residual <= 1e-10 && m.energy_residual <= 1e-10, &m));
    }
    if cfg.identity_samples > 0 {
        for spec in kernel_families() {
            let m = identity_metrics(&spec, cfg.identity_samples, seed)?;
            checks.push(outcome("closed_piece_identities", m.square_residual <= 1e-8 && m.mean_residual <= 1e-8, &m));
        }
    }
    if cfg.fundest_samples > 0 && !cfg.fundest_k.is_empty() {
        for spec in kernel_families() {
            let rep = check_fundest(cfg.fundest_samples, &cfg.fundest_k, &spec, 1e-6, seed)?;
            checks.push(outcome("coupling_inequality", rep.passed(), &rep));
        }
    }
    if cfg.maxwell_samples > 0 {
        let ks = if cfg.fundest_k.is_empty() { vec![1.0, 8.0, 64.0] } else { cfg.fundest_k.clone() };
        let m = maxwell_metrics(cfg.maxwell_samples, &ks, seed)?;
        checks.push(outcome("maxwell_specialization", m.max_abs_a1 == 0.0 && m.a2_residual <= 1e-9 && m.swap_residual <= 1e-10, &m));
    }
    if cfg.a3_samples > 0 {
        let cases = [
            (kernel_families()[0], A3Majorant::Maxwell, vec![1.0, 4.0, 16.0, 64.0]),
            (kernel_families()[1], A3Majorant::HardPotential, vec![1.0, 4.0, 16.0, 64.0]),
            (kernel_families()[2], A3Majorant::HardSphere { q: 0.5 }, vec![1.0, 2.0, 4.0, 8.0, 16.0]),
        ];
        for (spec, maj, ks) in cases {
            let rep = check_a3_bounds(cfg.a3_samples, cfg.a3_samples, &spec, &ks, maj, 2.0, seed)?;
            checks.push(outcome("a3_majorant", rep.passed(), &rep));
        }
    }
    if cfg.constant_grid > 1 {
        let m = cfg.constant_grid;
        let grid: Vec<f64> = (0..m).map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / (m - 1) as f64)).collect();
        for spec in kernel_families() {
            let c4 = check_g_squared_diff(&grid, &grid, &spec)?;
            checks.push(outcome("g_difference_constant", c4.sup.is_finite() && c4.sup > 0.0, &c4));
        }
        for spec in &kernel_families()[1..] {
            let fits = check_phik_regularity(&[1.0, 8.0, 64.0, 512.0], spec, &grid, seed, 200)?;
            let ok = fits.iter().all(|f| f.growth.is_finite() && f.lipschitz.is_finite() && f.vector.is_finite());
            checks.push(outcome("cutoff_weight_regularity", ok, &fits));
        }
        let mx = kernel_families()[0];
        let spread = [1.0, 8.0, 64.0]
            .iter()
            .map(|&k| {
                let vals: Vec<f64> = grid.iter().map(|&x| mx.phi_k(x, k)).collect::<Result<_>>()?;
                Ok(vals.iter().map(|v| (v - vals[0]).abs()).fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?;
        checks.push(outcome("maxwell_weight_constant", spread.iter().all(|s| *s == 0.0), &spread));
    }
    if cfg.generator_replicas > 0 {
        let m = generator_metrics(cfg.generator_replicas, seed)?;
        checks.push(outcome("event_rate", m.gof_p_value > 1e-3, &m));
    }
    if cfg.energy_replicas > 1 {
        let m = energy_metrics(cfg.energy_replicas, seed)?;
        checks.push(outcome("mean_energy", m.z_scores.iter().all(|z| z.abs() <= 4.0), &m));
    }
    if cfg.w2_instances > 0 {
        let m = w2_metrics(cfg.w2_instances, seed)?;
        checks.push(outcome("w2_exact", m.brute_force_residual <= 1e-12 && m.translation_residual <= 1e-12, &m));
    }
    Ok(SuiteReport { passed: checks.iter().all(|c| c.passed), checks })
}
