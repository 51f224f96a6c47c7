use super::events::{apply_event, EventStream};
use super::law::{sample_initial, InitialLaw};
use super::ParticleState;
use crate::error::{NanbuError, Result};
use crate::kernel::{check_cutoff, KernelSpec};
use crate::rng::{purpose, stream};
use crate::vec3::Velocity;

/// One simulation (or one coupled bundle). `replica` selects the random
/// streams, so replica r of a scan is reproducible on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    /// Cutoff levels, ascending. The last one drives the event stream.
    pub k_levels: Vec<f64>,
    pub kernel: KernelSpec,
    pub horizon: f64,
    pub seed: u64,
    pub replica: u64,
    pub law: InitialLaw,
    /// Times in [0, horizon] at which the cloud is recorded. Empty means
    /// the horizon only.
    pub snapshot_times: Vec<f64>,
}

impl SimConfig {
    pub fn new(n: usize, k: f64, kernel: KernelSpec, horizon: f64, law: InitialLaw, seed: u64) -> Self {
        SimConfig { n, k_levels: vec![k], kernel, horizon, seed, replica: 0, law, snapshot_times: vec![] }
    }

    pub fn k_max(&self) -> f64 {
        *self.k_levels.last().expect("validated config has a cutoff")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(NanbuError::input("need N >= 2 particles"));
        }
        if self.k_levels.is_empty() {
            return Err(NanbuError::input("no cutoff level given"));
        }
        for k in &self.k_levels {
            check_cutoff(*k)?;
        }
        if self.k_levels.windows(2).any(|w| w[0] > w[1]) {
            return Err(NanbuError::input("cutoff levels must be ascending"));
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return Err(NanbuError::input("horizon must be finite and >= 0"));
        }
        if self.snapshot_times.iter().any(|t| !(*t >= 0.0 && *t <= self.horizon)) {
            return Err(NanbuError::input("snapshot times must lie in [0, horizon]"));
        }
        self.kernel.validate()?;
        self.law.validate()
    }

    /// Snapshot grid, sorted, horizon included.
    pub fn snapshot_grid(&self) -> Vec<f64> {
        let mut ts = self.snapshot_times.clone();
        if ts.is_empty() {
            ts.push(self.horizon);
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }

    pub(crate) fn initial_state(&self) -> Result<ParticleState> {
        let mut rng = stream(self.seed, purpose::INITIAL, self.replica);
        sample_initial(self.n, &self.law, &mut rng)
    }

    pub(crate) fn event_stream(&self) -> EventStream {
        EventStream::new(self.n, self.k_max(), stream(self.seed, purpose::EVENTS, self.replica))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub velocities: Vec<Velocity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    /// Events drawn up to the horizon (including inert ones).
    pub events: u64,
}

/// Simulate at the top cutoff and record the cloud at each snapshot time.
/// A snapshot at time s shows every event with t ≤ s and none after.
pub fn run(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let mut state = config.initial_state()?;
    let k = config.k_max();
    let grid = config.snapshot_grid();
    let mut snapshots = Vec::with_capacity(grid.len());
    let mut next = 0;
    let mut events = config.event_stream();
    loop {
        let ev = events.next_event();
        while next < grid.len() && grid[next] < ev.t {
            snapshots.push(Snapshot { t: grid[next], velocities: state.velocities.clone() });
            next += 1;
        }
        if ev.t > config.horizon {
            break;
        }
        apply_event(&mut state, &ev, k, &config.kernel);
    }
    Ok(Trajectory { snapshots, events: state.events_applied })
}
