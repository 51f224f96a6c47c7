//! Primal network simplex for the uniform-marginal transportation problem
//! between n and m atoms. The bipartite graph is complete and uncapacitated,
//! so arcs are implicit: arc e joins source e / m to sink e % m and its cost
//! is recomputed from the coordinates. Only tree arcs carry flow, which is
//! therefore stored per node (the flow on the arc to the parent).
//!
//! Spanning-tree bookkeeping (thread order, subtree sizes, last successors)
//! and the block-search pivot follow the classical LEMON layout.

use super::{check_cloud, sq_dist, Plan, TransportResult};
use crate::error::{NanbuError, Result};
use crate::vec3::Vec3;

/// Largest n·m accepted by default.
pub const DEFAULT_MAX_ARCS: usize = 1 << 26;

const NONE: usize = usize::MAX;
const TREE: u8 = 0;
const LOWER: u8 = 1;
const UP: i8 = 1;
const DOWN: i8 = -1;

struct Solver<'a> {
    a: &'a [Vec3],
    b: &'a [Vec3],
    n: usize,
    m: usize,
    arc_num: usize,
    root: usize,
    art_cost: f64,
    eps: f64,
    supply: Vec<i64>,
    state: Vec<u8>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    pred_dir: Vec<i8>,
    pred_flow: Vec<i64>,
    thread: Vec<usize>,
    rev_thread: Vec<usize>,
    succ_num: Vec<usize>,
    last_succ: Vec<usize>,
    pi: Vec<f64>,
    dirty_revs: Vec<usize>,
    block_size: usize,
    next_arc: usize,
    in_arc: usize,
    join: usize,
    u_in: usize,
    v_in: usize,
    u_out: usize,
    delta: i64,
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl<'a> Solver<'a> {
    fn new(a: &'a [Vec3], b: &'a [Vec3]) -> Self {
        let (n, m) = (a.len(), b.len());
        let node_num = n + m;
        let arc_num = n * m;
        let g = gcd(n, m);
        let mut supply = vec![(m / g) as i64; n];
        supply.extend(std::iter::repeat_n(-((n / g) as i64), m));

        // Any pairwise squared distance is at most the squared bounding-box diagonal.
        let mut lo = a[0];
        let mut hi = a[0];
        for v in a.iter().chain(b) {
            lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        let max_cost = (hi - lo).norm_sq();
        let art_cost = (max_cost + 1.0) * node_num as f64;

        let root = node_num;
        let total = node_num + 1;
        let mut s = Solver {
            a,
            b,
            n,
            m,
            arc_num,
            root,
            art_cost,
            eps: 16.0 * f64::EPSILON * art_cost,
            supply,
            state: vec![LOWER; arc_num + node_num],
            parent: vec![NONE; total],
            pred: vec![NONE; total],
            pred_dir: vec![UP; total],
            pred_flow: vec![0; total],
            thread: vec![0; total],
            rev_thread: vec![0; total],
            succ_num: vec![0; total],
            last_succ: vec![0; total],
            pi: vec![0.0; total],
            dirty_revs: Vec::new(),
            block_size: ((arc_num as f64).sqrt() as usize).max(10),
            next_arc: 0,
            in_arc: 0,
            join: 0,
            u_in: 0,
            v_in: 0,
            u_out: 0,
            delta: 0,
        };
        s.thread[root] = 0;
        s.rev_thread[0] = root;
        s.succ_num[root] = total;
        s.last_succ[root] = root - 1;
        for u in 0..node_num {
            let e = arc_num + u;
            s.parent[u] = root;
            s.pred[u] = e;
            s.thread[u] = u + 1;
            s.rev_thread[u + 1] = u;
            s.succ_num[u] = 1;
            s.last_succ[u] = u;
            s.state[e] = TREE;
            if s.supply[u] >= 0 {
                s.pred_dir[u] = UP;
                s.pi[u] = 0.0;
                s.pred_flow[u] = s.supply[u];
            } else {
                s.pred_dir[u] = DOWN;
                s.pi[u] = art_cost;
                s.pred_flow[u] = -s.supply[u];
            }
        }
        s
    }

    // Artificial arcs point from supply nodes to the root and from the root
    // to demand nodes.
    #[inline]
    fn source(&self, e: usize) -> usize {
        if e < self.arc_num {
            e / self.m
        } else {
            let u = e - self.arc_num;
            if self.supply[u] >= 0 {
                u
            } else {
                self.root
            }
        }
    }

    #[inline]
    fn target(&self, e: usize) -> usize {
        if e < self.arc_num {
            self.n + e % self.m
        } else {
            let u = e - self.arc_num;
            if self.supply[u] >= 0 {
                self.root
            } else {
                u
            }
        }
    }

    #[inline]
    fn cost(&self, e: usize) -> f64 {
        if e < self.arc_num {
            sq_dist(self.a[e / self.m], self.b[e % self.m])
        } else if self.supply[e - self.arc_num] >= 0 {
            0.0
        } else {
            self.art_cost
        }
    }

    /// Block search over the real arcs, resuming where the last search stopped.
    fn find_entering_arc(&mut self) -> bool {
        let mut min = -self.eps;
        let mut found = false;
        let mut cnt = self.block_size;
        let start = self.next_arc;
        let (mut s, mut t) = (start / self.m, start % self.m);
        let mut e = start;
        for _ in 0..self.arc_num {
            if self.state[e] == LOWER {
                let c = sq_dist(self.a[s], self.b[t]) + self.pi[s] - self.pi[self.n + t];
                if c < min {
                    min = c;
                    self.in_arc = e;
                    found = true;
                }
            }
            e += 1;
            t += 1;
            if t == self.m {
                t = 0;
                s += 1;
                if e == self.arc_num {
                    e = 0;
                    s = 0;
                }
            }
            cnt -= 1;
            if cnt == 0 {
                if found {
                    self.next_arc = e;
                    return true;
                }
                cnt = self.block_size;
            }
        }
        if found {
            self.next_arc = e;
        }
        found
    }

    fn find_join_node(&mut self) {
        let mut u = self.source(self.in_arc);
        let mut v = self.target(self.in_arc);
        while u != v {
            if self.succ_num[u] < self.succ_num[v] {
                u = self.parent[u];
            } else {
                v = self.parent[v];
            }
        }
        self.join = u;
    }

    /// Strongly feasible leaving-arc rule. Entering arcs are always at their
    /// lower bound, so the cycle runs source → target along the entering arc.
    fn find_leaving_arc(&mut self) -> bool {
        let first = self.source(self.in_arc);
        let second = self.target(self.in_arc);
        let mut delta = i64::MAX;
        let mut result = 0;
        let mut u = first;
        while u != self.join {
            if self.pred_dir[u] == UP && self.pred_flow[u] < delta {
                delta = self.pred_flow[u];
                self.u_out = u;
                result = 1;
            }
            u = self.parent[u];
        }
        let mut u = second;
        while u != self.join {
            if self.pred_dir[u] == DOWN && self.pred_flow[u] <= delta {
                delta = self.pred_flow[u];
                self.u_out = u;
                result = 2;
            }
            u = self.parent[u];
        }
        if result == 1 {
            self.u_in = first;
            self.v_in = second;
        } else {
            self.u_in = second;
            self.v_in = first;
        }
        self.delta = delta;
        result != 0
    }

    fn change_flow(&mut self) {
        let val = self.delta;
        if val > 0 {
            let mut u = self.source(self.in_arc);
            while u != self.join {
                self.pred_flow[u] -= self.pred_dir[u] as i64 * val;
                u = self.parent[u];
            }
            let mut u = self.target(self.in_arc);
            while u != self.join {
                self.pred_flow[u] += self.pred_dir[u] as i64 * val;
                u = self.parent[u];
            }
        }
        self.state[self.in_arc] = TREE;
        let out = self.pred[self.u_out];
        debug_assert_eq!(self.pred_flow[self.u_out], 0);
        self.state[out] = LOWER;
    }

    fn update_tree_structure(&mut self) {
        let (u_in, v_in, u_out, join) = (self.u_in, self.v_in, self.u_out, self.join);
        let old_rev_thread = self.rev_thread[u_out];
        let old_succ_num = self.succ_num[u_out];
        let old_last_succ = self.last_succ[u_out];
        let v_out = self.parent[u_out];
        let in_dir = if u_in == self.source(self.in_arc) { UP } else { DOWN };

        if u_in == u_out {
            self.parent[u_in] = v_in;
            self.pred[u_in] = self.in_arc;
            self.pred_dir[u_in] = in_dir;
            self.pred_flow[u_in] = self.delta;
            if self.thread[v_in] != u_out {
                let mut after = self.thread[old_last_succ];
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
                after = self.thread[v_in];
                self.thread[v_in] = u_out;
                self.rev_thread[u_out] = v_in;
                self.thread[old_last_succ] = after;
                self.rev_thread[after] = old_last_succ;
            }
        } else {
            let thread_continue =
                if old_rev_thread == v_in { self.thread[old_last_succ] } else { self.thread[v_in] };

            // Re-hang the stem u_in .. u_out under v_in, reversing its parent links.
            let mut stem = u_in;
            let mut par_stem = v_in;
            let mut last = self.last_succ[u_in];
            let mut after = self.thread[last];
            self.thread[v_in] = u_in;
            self.dirty_revs.clear();
            self.dirty_revs.push(v_in);
            while stem != u_out {
                let next_stem = self.parent[stem];
                self.thread[last] = next_stem;
                self.dirty_revs.push(last);

                let before = self.rev_thread[stem];
                self.thread[before] = after;
                self.rev_thread[after] = before;

                self.parent[stem] = par_stem;
                par_stem = stem;
                stem = next_stem;

                last = if self.last_succ[stem] == self.last_succ[par_stem] {
                    self.rev_thread[par_stem]
                } else {
                    self.last_succ[stem]
                };
                after = self.thread[last];
            }
            self.parent[u_out] = par_stem;
            self.thread[last] = thread_continue;
            self.rev_thread[thread_continue] = last;
            self.last_succ[u_out] = last;

            if old_rev_thread != v_in {
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
            }
            for k in 0..self.dirty_revs.len() {
                let u = self.dirty_revs[k];
                let t = self.thread[u];
                self.rev_thread[t] = u;
            }

            // Shift the pred arcs (and their flows) one step along the stem.
            let mut tmp_sc = 0usize;
            let tmp_ls = self.last_succ[u_out];
            let mut u = u_out;
            while u != u_in {
                let p = self.parent[u];
                self.pred[u] = self.pred[p];
                self.pred_flow[u] = self.pred_flow[p];
                self.pred_dir[u] = -self.pred_dir[p];
                tmp_sc += self.succ_num[u] - self.succ_num[p];
                self.succ_num[u] = tmp_sc;
                self.last_succ[p] = tmp_ls;
                u = p;
            }
            self.pred[u_in] = self.in_arc;
            self.pred_dir[u_in] = in_dir;
            self.pred_flow[u_in] = self.delta;
            self.succ_num[u_in] = old_succ_num;
        }

        let up_limit_out = if self.last_succ[join] == v_in { join } else { NONE };
        let last_succ_out = self.last_succ[u_out];
        let mut u = v_in;
        while u != NONE && self.last_succ[u] == v_in {
            self.last_succ[u] = last_succ_out;
            u = self.parent[u];
        }

        if join != old_rev_thread && v_in != old_rev_thread {
            let mut u = v_out;
            while u != up_limit_out && self.last_succ[u] == old_last_succ {
                self.last_succ[u] = old_rev_thread;
                u = self.parent[u];
            }
        } else if last_succ_out != old_last_succ {
            let mut u = v_out;
            while u != up_limit_out && self.last_succ[u] == old_last_succ {
                self.last_succ[u] = last_succ_out;
                u = self.parent[u];
            }
        }

        let mut u = v_in;
        while u != join {
            self.succ_num[u] += old_succ_num;
            u = self.parent[u];
        }
        let mut u = v_out;
        while u != join {
            self.succ_num[u] -= old_succ_num;
            u = self.parent[u];
        }
    }

    fn update_potential(&mut self) {
        let sigma = self.pi[self.v_in] - self.pi[self.u_in] - self.pred_dir[self.u_in] as f64 * self.cost(self.in_arc);
        let end = self.thread[self.last_succ[self.u_in]];
        let mut u = self.u_in;
        while u != end {
            self.pi[u] += sigma;
            u = self.thread[u];
        }
    }

    fn solve(&mut self) -> Result<()> {
        while self.find_entering_arc() {
            self.find_join_node();
            if !self.find_leaving_arc() {
                return Err(NanbuError::Numerical { msg: "transport problem unbounded".into(), estimate: f64::NAN });
            }
            self.change_flow();
            self.update_tree_structure();
            self.update_potential();
        }
        for u in 0..self.root {
            if self.pred[u] >= self.arc_num && self.pred_flow[u] != 0 {
                return Err(NanbuError::Numerical {
                    msg: "artificial arc carries flow at optimum".into(),
                    estimate: f64::NAN,
                });
            }
        }
        Ok(())
    }

    fn plan(&self) -> Vec<(usize, usize, i64)> {
        let mut out: Vec<(usize, usize, i64)> = (0..self.root)
            .filter(|&u| self.pred[u] < self.arc_num && self.pred_flow[u] > 0)
            .map(|u| {
                let e = self.pred[u];
                (e / self.m, e % self.m, self.pred_flow[u])
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Optimal plan between uniform measures on a (n atoms) and b (m atoms),
/// as (i, j, mass) triples.
pub fn transport_plan(a: &[Vec3], b: &[Vec3]) -> Result<Vec<(usize, usize, f64)>> {
    let mut s = Solver::new(a, b);
    s.solve()?;
    let total = (a.len() * (b.len() / gcd(a.len(), b.len()))) as f64;
    Ok(s.plan().into_iter().map(|(i, j, f)| (i, j, f as f64 / total)).collect())
}

/// W₂² between uniform measures of possibly different sizes.
pub fn w2_unequal(a: &[Vec3], b: &[Vec3]) -> Result<TransportResult> {
    w2_unequal_with_limit(a, b, DEFAULT_MAX_ARCS)
}

pub fn w2_unequal_with_limit(a: &[Vec3], b: &[Vec3], max_arcs: usize) -> Result<TransportResult> {
    check_cloud("a", a)?;
    check_cloud("b", b)?;
    let arcs = a.len().checked_mul(b.len()).unwrap_or(usize::MAX);
    if arcs > max_arcs {
        let keep = ((max_arcs / a.len().min(b.len())).max(1)).min(a.len().max(b.len()));
        return Err(NanbuError::Capacity(format!(
            "{} x {} transport problem exceeds {max_arcs} arcs; subsample the larger cloud to at most {keep} atoms",
            a.len(),
            b.len()
        )));
    }
    let plan = Plan::Flow(transport_plan(a, b)?);
    let cost = super::plan_cost(a, b, &plan);
    Ok(TransportResult { cost, plan, exact: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{purpose, stream};
    use crate::sim::InitialLaw;

    fn cloud(n: usize, seed: u64) -> Vec<Vec3> {
        let law = InitialLaw::Maxwellian { sigma: 1.0 };
        let mut rng = stream(seed, purpose::SAMPLE, 0);
        (0..n).map(|_| law.sample(&mut rng)).collect()
    }

    fn marginals_ok(plan: &[(usize, usize, f64)], n: usize, m: usize) {
        let mut rows = vec![0.0; n];
        let mut cols = vec![0.0; m];
        for &(i, j, w) in plan {
            rows[i] += w;
            cols[j] += w;
        }
        assert!(rows.iter().all(|r| (r - 1.0 / n as f64).abs() < 1e-12));
        assert!(cols.iter().all(|c| (c - 1.0 / m as f64).abs() < 1e-12));
    }

    #[test]
    fn single_source_is_forced() {
        let x = Vec3::new(0.5, -1.0, 2.0);
        let b = cloud(7, 3);
        let r = w2_unequal(&[x], &b).unwrap();
        let want: f64 = b.iter().map(|v| (x - *v).norm_sq()).sum::<f64>() / 7.0;
        assert!((r.cost - want).abs() < 1e-12);
    }

    #[test]
    fn matches_assignment_for_equal_sizes() {
        for (n, seed) in [(5, 1), (17, 2), (64, 3), (200, 4)] {
            let (a, b) = (cloud(n, seed), cloud(n, seed + 100));
            let ns = w2_unequal(&a, &b).unwrap();
            let hu = super::super::w2_exact(&a, &b).unwrap();
            assert!((ns.cost - hu.cost).abs() < 1e-10, "n={n}: {} vs {}", ns.cost, hu.cost);
        }
    }

    #[test]
    fn unequal_marginals() {
        let (a, b) = (cloud(30, 5), cloud(84, 6));
        let plan = transport_plan(&a, &b).unwrap();
        marginals_ok(&plan, 30, 84);
        assert!(plan.len() <= 30 + 84 - 1);
    }

    #[test]
    fn capacity_error_suggests_subsampling() {
        let (a, b) = (cloud(10, 1), cloud(20, 2));
        match w2_unequal_with_limit(&a, &b, 100) {
            Err(NanbuError::Capacity(msg)) => assert!(msg.contains("subsample")),
            other => panic!("{other:?}"),
        }
    }
}
