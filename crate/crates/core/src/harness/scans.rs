use super::config::ScanConfig;
use super::report::ScanRow;
use crate::error::{NanbuError, Result};
use crate::rng::{purpose, stream};
use crate::sim::{gaussian, mean_sq_gap, run, run_coupled_cutoffs, InitialLaw, SimConfig, Snapshot};
use crate::stats::{mean_se, slope_fit, spearman, SlopeFit};
use crate::transport::w2_unequal;
use crate::vec3::Velocity;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const W2_TO_REF: &str = "w2sq_to_ref";
pub const W2_TO_EXACT: &str = "w2sq_to_exact";
pub const COUPLED_GAP: &str = "coupled_gap";
pub const ENERGY_MEAN: &str = "energy_mean";
pub const EPSILON_N: &str = "epsilonN";

fn sim_config(cfg: &ScanConfig, n: usize, k_levels: Vec<f64>, seed: u64, replica: u64) -> Result<SimConfig> {
    Ok(SimConfig {
        n,
        k_levels,
        kernel: cfg.kernel_spec()?,
        horizon: cfg.horizon,
        seed,
        replica,
        law: cfg.initial_law()?,
        snapshot_times: cfg.snapshot_times.clone(),
    })
}

fn row(stat: &str, n: usize, k: f64, t: f64, xs: &[f64], seed: u64) -> ScanRow {
    let ms = mean_se(xs);
    ScanRow { statistic: stat.into(), n, k, t, value: ms.mean, stderr: ms.se, replicas: xs.len(), seed }
}

#[derive(Debug, Clone, Serialize)]
pub struct NScanOutput {
    pub rows: Vec<ScanRow>,
    /// W₂² between two independent reference clouds at the horizon.
    pub reference_gap: f64,
    /// False when the reference gap is not 4× below every scan value.
    pub reliable: bool,
}

/// For each N, R replicas at cutoff `k`, compared by W₂² with one
/// reference cloud of `reference_size()` particles (independent seed).
/// Maxwellian data are stationary, so they are also compared with fresh
/// Gaussian samples of the reference size.
pub fn run_n_scan(cfg: &ScanConfig) -> Result<NScanOutput> {
    cfg.validate_n_scan()?;
    let n_ref = cfg.reference_size();
    let ref_seed: u64 = stream(cfg.seed, purpose::REFERENCE, 0).random();
    let (r0, r1) = rayon::join(
        || run(&sim_config(cfg, n_ref, vec![cfg.k], ref_seed, 0)?),
        || run(&sim_config(cfg, n_ref, vec![cfg.k], ref_seed, 1)?),
    );
    let (r0, r1) = (r0?, r1?);
    let exact = match cfg.initial_law()? {
        InitialLaw::Maxwellian { sigma } => Some(sigma),
        _ => None,
    };
    let grid: Vec<f64> = r0.snapshots.iter().map(|s| s.t).collect();
    let reps = cfg.replicas;
    // one task per (scan position, replica); repeated N get fresh replicas
    let tasks: Vec<(usize, u64)> = (0..cfg.n_list.len()).flat_map(|p| (0..reps as u64).map(move |r| (p, (p * reps) as u64 + r))).collect();
    let per: Vec<Vec<(f64, f64, f64)>> = tasks
        .par_iter()
        .map(|&(p, replica)| {
            let n = cfg.n_list[p];
            let tr = run(&sim_config(cfg, n, vec![cfg.k], cfg.seed, replica)?)?;
            tr.snapshots
                .iter()
                .zip(&r0.snapshots)
                .enumerate()
                .map(|(s, (snap, reference))| {
                    let to_ref = w2_unequal(&snap.velocities, &reference.velocities)?.cost;
                    let to_exact = match exact {
                        Some(sigma) => {
                            let mut rng = stream(cfg.seed, purpose::EXACT_SAMPLE, replica * grid.len() as u64 + s as u64);
                            let fresh: Vec<Velocity> = (0..n_ref).map(|_| gaussian(&mut rng) * sigma).collect();
                            w2_unequal(&snap.velocities, &fresh)?.cost
                        }
                        None => f64::NAN,
                    };
                    let energy = crate::stats::pairwise_sum_by(&snap.velocities, |v| v.norm_sq()) / n as f64;
                    Ok((to_ref, to_exact, energy))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for p in 0..cfg.n_list.len() {
        let n = cfg.n_list[p];
        let block = &per[p * reps..(p + 1) * reps];
        for (s, &t) in grid.iter().enumerate() {
            let col = |f: fn(&(f64, f64, f64)) -> f64| block.iter().map(|r| f(&r[s])).collect::<Vec<f64>>();
            rows.push(row(W2_TO_REF, n, cfg.k, t, &col(|r| r.0), cfg.seed));
            rows.push(row(ENERGY_MEAN, n, cfg.k, t, &col(|r| r.2), cfg.seed));
            if exact.is_some() {
                rows.push(row(W2_TO_EXACT, n, cfg.k, t, &col(|r| r.1), cfg.seed));
            }
        }
    }
    let reference_gap = w2_unequal(final_cloud(&r0.snapshots), final_cloud(&r1.snapshots))?.cost;
    let smallest = rows.iter().filter(|r| r.statistic == W2_TO_REF).map(|r| r.value).fold(f64::INFINITY, f64::min);
    Ok(NScanOutput { rows, reference_gap, reliable: 4.0 * reference_gap <= smallest })
}

fn final_cloud(s: &[Snapshot]) -> &[Velocity] {
    &s.last().expect("horizon snapshot").velocities
}

/// Coupled runs over the K list on one event stream per replica; reports
/// (1/N) Σ |V^{K_l} − V^{K_max}|² at each snapshot time.
pub fn run_k_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    cfg.validate_k_scan()?;
    let levels = cfg.k_list.clone();
    let per: Vec<Vec<Vec<f64>>> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| {
            let run = run_coupled_cutoffs(&sim_config(cfg, cfg.n, levels.clone(), cfg.seed, r)?, cfg.coupling)?;
            let top = run.snapshots.last().expect("top level");
            Ok(run
                .snapshots
                .iter()
                .map(|lvl| lvl.iter().zip(top).map(|(a, b)| mean_sq_gap(&a.velocities, &b.velocities)).collect())
                .collect())
        })
        .collect::<Result<_>>()?;
    let grid = sim_config(cfg, cfg.n, levels.clone(), cfg.seed, 0)?.snapshot_grid();
    let mut rows = Vec::new();
    for (l, &k) in levels.iter().enumerate() {
        for (s, &t) in grid.iter().enumerate() {
            let xs: Vec<f64> = per.iter().map(|r| r[l][s]).collect();
            rows.push(row(COUPLED_GAP, cfg.n, k, t, &xs, cfg.seed));
        }
    }
    Ok(rows)
}

/// ε_N estimates over the N list, target samples of size target_factor·N.
pub fn run_epsilon_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    let law = cfg.initial_law()?;
    if cfg.n_list.is_empty() {
        return Err(NanbuError::Config("n_list is empty".into()));
    }
    cfg.n_list
        .iter()
        .map(|&n| {
            let e = crate::transport::epsilon_n_estimate(&law, n, cfg.replicas, cfg.target_factor * n, cfg.seed)?;
            Ok(ScanRow { statistic: EPSILON_N.into(), n, k: 0.0, t: 0.0, value: e.mean, stderr: e.se, replicas: e.replicas, seed: cfg.seed })
        })
        .collect()
}

/// Log-log slope and Spearman correlation of one statistic against N
/// (or K) at the last snapshot time; nonpositive values are left out of
/// the fit.
#[derive(Debug, Clone, Serialize)]
pub struct Trend {
    pub statistic: String,
    pub slope: Option<SlopeFit>,
    pub spearman: f64,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    N,
    K,
}

pub fn trend(rows: &[ScanRow], statistic: &str, axis: Axis) -> Trend {
    let t_last = rows.iter().filter(|r| r.statistic == statistic).map(|r| r.t).fold(f64::NEG_INFINITY, f64::max);
    let mut pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.statistic == statistic && r.t == t_last)
        .map(|r| (if axis == Axis::N { r.n as f64 } else { r.k }, r.value))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let pos: Vec<(f64, f64)> = pts.iter().copied().filter(|p| p.1 > 0.0 && p.0 > 0.0).collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    Trend {
        statistic: statistic.into(),
        slope: slope_fit(&pos).ok(),
        spearman: if pts.len() >= 2 { spearman(&xs, &ys) } else { f64::NAN },
        points: pts,
    }
}

/// Apply the optional thresholds of the config; returns the failures.
pub fn acceptance_failures(cfg: &ScanConfig, tr: &Trend) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(max) = cfg.max_slope {
        match &tr.slope {
            Some(f) if f.slope <= max => {}
            Some(f) => out.push(format!("{} slope {:.4} > {max}", tr.statistic, f.slope)),
            None => out.push(format!("{}: too few positive points for a slope", tr.statistic)),
        }
    }
    if let Some(max) = cfg.max_spearman {
        if !(tr.spearman < max) {
            out.push(format!("{} Spearman {:.4} >= {max}", tr.statistic, tr.spearman));
        }
    }
    out
}
