//! Dense assignment by shortest augmenting paths with potentials, O(n³).
//! Costs are evaluated from the coordinates on demand, nothing n² is stored.

use super::{check_cloud, sq_dist, Plan, TransportResult};
use crate::error::{NanbuError, Result};
use crate::vec3::Vec3;

pub const DEFAULT_MAX_ASSIGNMENT: usize = 4096;

/// Minimum-cost perfect matching for the cost |a_i − b_j|².
/// Returns `perm` with `perm[i]` the column assigned to row i.
pub fn assignment(a: &[Vec3], b: &[Vec3]) -> Vec<usize> {
    let n = a.len();
    assert_eq!(n, b.len());
    // 1-based rows and columns; column 0 is a sentinel.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let ai = a[i0 - 1];
            let ui = u[i0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = sq_dist(ai, b[j - 1]) - ui - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[row_of[j] - 1] = j - 1;
    }
    perm
}

/// W₂² between two clouds of equal size, with the optimal permutation.
pub fn w2_exact(a: &[Vec3], b: &[Vec3]) -> Result<TransportResult> {
    w2_exact_with_limit(a, b, DEFAULT_MAX_ASSIGNMENT)
}

pub fn w2_exact_with_limit(a: &[Vec3], b: &[Vec3], max_n: usize) -> Result<TransportResult> {
    check_cloud("a", a)?;
    check_cloud("b", b)?;
    if a.len() != b.len() {
        return Err(NanbuError::input(format!("cloud sizes differ: {} vs {}", a.len(), b.len())));
    }
    if a.len() > max_n {
        return Err(NanbuError::Capacity(format!(
            "assignment of size {} exceeds the limit {max_n}; subsample or raise the limit",
            a.len()
        )));
    }
    let perm = assignment(a, b);
    let plan = Plan::Assignment(perm);
    let cost = super::plan_cost(a, b, &plan);
    Ok(TransportResult { cost, plan, exact: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_translated() {
        let a = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 2.0, 0.5), Vec3::new(-1.0, 0.3, 2.0)];
        assert_eq!(w2_exact(&a, &a).unwrap().cost, 0.0);
        let h = Vec3::new(0.5, -0.25, 1.0);
        let b: Vec<Vec3> = a.iter().rev().map(|v| *v + h).collect();
        let r = w2_exact(&a, &b).unwrap();
        assert!((r.cost - h.norm_sq()).abs() < 1e-12);
        assert_eq!(r.plan, Plan::Assignment(vec![2, 1, 0]));
    }

    #[test]
    fn errors() {
        let a = vec![Vec3::ZERO; 3];
        assert!(matches!(w2_exact(&a, &a[..2]), Err(NanbuError::Input(_))));
        assert!(matches!(w2_exact_with_limit(&a, &a, 2), Err(NanbuError::Capacity(_))));
        assert!(w2_exact(&[], &[]).is_err());
    }
}
