//! Event-driven simulation of the N-particle jump process with cutoff K.

mod coupled;
mod diagnostics;
mod events;
pub mod io;
mod law;
mod run;

pub use coupled::{run_coupled_cutoffs, CouplingMode, CoupledRun};
pub use diagnostics::{diagnostics, Diagnostics};
pub use events::{apply_event, CollisionEvent, EventStream};
pub use law::{gaussian, sample_initial, InitialLaw};
pub use run::{run, SimConfig, Snapshot, Trajectory};

use crate::vec3::Velocity;

/// Velocities of all particles plus the clock and the number of events drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    pub velocities: Vec<Velocity>,
    pub time: f64,
    pub events_applied: u64,
}

impl ParticleState {
    pub fn new(velocities: Vec<Velocity>) -> Self {
        ParticleState { velocities, time: 0.0, events_applied: 0 }
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }

    /// (1/N) Σ |v_i|².
    pub fn energy(&self) -> f64 {
        crate::stats::pairwise_sum_by(&self.velocities, |v| v.norm_sq()) / self.len() as f64
    }
}

/// (1/N) Σ |a_i − b_i|² between two labelled clouds of the same size.
pub fn mean_sq_gap(a: &[Velocity], b: &[Velocity]) -> f64 {
    assert_eq!(a.len(), b.len());
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| (*x - *y).norm_sq()).collect();
    crate::stats::pairwise_sum(&d) / a.len() as f64
}
