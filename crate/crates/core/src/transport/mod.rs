//! Exact quadratic Wasserstein distances between uniform point clouds.

mod epsilon;
mod hungarian;
mod simplex;
mod sobolev;

pub use epsilon::{epsilon_n_estimate, EpsilonEstimate};
pub use hungarian::{assignment, w2_exact, w2_exact_with_limit, DEFAULT_MAX_ASSIGNMENT};
pub use simplex::{transport_plan, w2_unequal, w2_unequal_with_limit, DEFAULT_MAX_ARCS};
pub use sobolev::{gaussian_sobolev_expectation, sobolev_distance_sq, SobolevGrid};

use crate::error::{NanbuError, Result};
use crate::vec3::Vec3;

/// Optimal coupling found by a solver.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    /// `perm[i]` is the atom of b matched with atom i of a.
    Assignment(Vec<usize>),
    /// (i, j, mass) triples with positive mass; masses sum to 1.
    Flow(Vec<(usize, usize, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportResult {
    /// W₂², the squared distance.
    pub cost: f64,
    pub plan: Plan,
    pub exact: bool,
}

impl TransportResult {
    pub fn distance(&self) -> f64 {
        self.cost.max(0.0).sqrt()
    }
}

#[inline]
pub(crate) fn sq_dist(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm_sq()
}

pub(crate) fn check_cloud(name: &str, c: &[Vec3]) -> Result<()> {
    if c.is_empty() {
        return Err(NanbuError::input(format!("point cloud {name} is empty")));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(NanbuError::input(format!("point cloud {name} has non-finite coordinates")));
    }
    Ok(())
}

/// Squared transport cost of a plan, recomputed from the clouds.
pub fn plan_cost(a: &[Vec3], b: &[Vec3], plan: &Plan) -> f64 {
    match plan {
        Plan::Assignment(p) => {
            let d: Vec<f64> = p.iter().enumerate().map(|(i, &j)| sq_dist(a[i], b[j])).collect();
            crate::stats::pairwise_sum(&d) / a.len() as f64
        }
        Plan::Flow(f) => {
            let d: Vec<f64> = f.iter().map(|&(i, j, w)| w * sq_dist(a[i], b[j])).collect();
            crate::stats::pairwise_sum(&d)
        }
    }
}
