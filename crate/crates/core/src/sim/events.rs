use super::ParticleState;
use crate::geometry::c_dev_k;
use crate::kernel::KernelSpec;
use crate::rng::StreamRng;
use rand::Rng;
use rand_distr::Exp1;
use std::f64::consts::TAU;

/// One atom of the driving Poisson measure: at time `t` particle `i`
/// collides with partner `j` using intensity coordinate `z` and azimuth `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionEvent {
    pub t: f64,
    pub i: usize,
    pub j: usize,
    pub z: f64,
    pub phi: f64,
}

/// Superposition of all pair clocks at the top cutoff. The total rate is
/// 2π K_max (N−1); the ordered pair is uniform among the N(N−1) pairs.
#[derive(Debug, Clone)]
pub struct EventStream {
    n: usize,
    k_max: f64,
    rate: f64,
    t: f64,
    rng: StreamRng,
}

impl EventStream {
    pub fn new(n: usize, k_max: f64, rng: StreamRng) -> Self {
        assert!(n >= 2, "need at least two particles");
        let rate = TAU * k_max * (n - 1) as f64;
        EventStream { n, k_max, rate, t: 0.0, rng }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn next_event(&mut self) -> CollisionEvent {
        let gap: f64 = self.rng.sample(Exp1);
        self.t += gap / self.rate;
        let i = self.rng.random_range(0..self.n);
        let mut j = self.rng.random_range(0..self.n - 1);
        if j >= i {
            j += 1;
        }
        let z = self.rng.random::<f64>() * self.k_max;
        let phi = self.rng.random::<f64>() * TAU;
        CollisionEvent { t: self.t, i, j, z, phi }
    }
}

impl Iterator for EventStream {
    type Item = CollisionEvent;
    fn next(&mut self) -> Option<CollisionEvent> {
        Some(self.next_event())
    }
}

/// v_i ← v_i + c_K(v_i, v_j, z, φ). The partner is left untouched.
/// Returns whether the velocity changed.
#[inline]
pub fn apply_event(state: &mut ParticleState, ev: &CollisionEvent, k: f64, spec: &KernelSpec) -> bool {
    apply_with_phi(state, ev, ev.phi, k, spec)
}

#[inline]
pub(crate) fn apply_with_phi(state: &mut ParticleState, ev: &CollisionEvent, phi: f64, k: f64, spec: &KernelSpec) -> bool {
    state.time = ev.t;
    state.events_applied += 1;
    if ev.z > k {
        return false;
    }
    let (vi, vj) = (state.velocities[ev.i], state.velocities[ev.j]);
    let c = c_dev_k(vi, vj, ev.z, phi, k, spec);
    if c.is_zero() {
        return false;
    }
    state.velocities[ev.i] = vi + c;
    true
}
