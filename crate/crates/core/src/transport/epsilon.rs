use super::w2_unequal;
use crate::error::{NanbuError, Result};
use crate::rng::{purpose, stream};
use crate::sim::InitialLaw;
use crate::stats::mean_se;
use crate::vec3::Vec3;
use rayon::prelude::*;
use serde::Serialize;

/// Monte Carlo estimate of E W₂²(f, μ^N), the law f being represented by a
/// fresh M-sample per replica. The estimate carries an O(ε_M) bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonEstimate {
    pub n: usize,
    pub reference_size: usize,
    pub replicas: usize,
    pub mean: f64,
    pub se: f64,
}

pub fn epsilon_n_estimate(law: &InitialLaw, n: usize, replicas: usize, m: usize, seed: u64) -> Result<EpsilonEstimate> {
    if m < 8 * n {
        return Err(NanbuError::input(format!("reference size {m} is below 8N = {}", 8 * n)));
    }
    if replicas < 30 {
        return Err(NanbuError::input(format!("need at least 30 replicas, got {replicas}")));
    }
    if n == 0 {
        return Err(NanbuError::input("N must be positive"));
    }
    law.validate()?;
    let costs: Vec<f64> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, purpose::SAMPLE, r);
            let sample: Vec<Vec3> = (0..n).map(|_| law.sample(&mut rng)).collect();
            let mut rng = stream(seed, purpose::TARGET_SAMPLE, r);
            let target: Vec<Vec3> = (0..m).map(|_| law.sample(&mut rng)).collect();
            w2_unequal(&sample, &target).map(|t| t.cost)
        })
        .collect::<Result<_>>()?;
    let ms = mean_se(&costs);
    Ok(EpsilonEstimate { n, reference_size: m, replicas, mean: ms.mean, se: ms.se })
}
