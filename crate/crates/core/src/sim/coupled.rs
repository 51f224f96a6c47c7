use super::events::apply_with_phi;
use super::run::{SimConfig, Snapshot};
use super::ParticleState;
use crate::error::Result;
use crate::geometry::tanaka_angles;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// How lower cutoff levels reuse the azimuth of the shared event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// Level l uses φ + φ₀(X_top, X_l), the azimuth offset aligning its
    /// relative-velocity frame with the top level's, so nearby pairs get
    /// nearby deviations.
    #[default]
    Aligned,
    /// Every level uses the raw φ of the event.
    Shared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledRun {
    pub k_levels: Vec<f64>,
    /// `snapshots[l][s]`: level l at the s-th snapshot time.
    pub snapshots: Vec<Vec<Snapshot>>,
    pub events: u64,
}

impl CoupledRun {
    /// Clouds at the final snapshot, one per level.
    pub fn finals(&self) -> Vec<&[crate::vec3::Velocity]> {
        self.snapshots.iter().map(|s| s.last().expect("at least one snapshot").velocities.as_slice()).collect()
    }
}

/// Run every cutoff level on one event stream drawn at the top level.
/// Level l applies an event iff z ≤ K_l; all levels start from the same cloud.
pub fn run_coupled_cutoffs(config: &SimConfig, mode: CouplingMode) -> Result<CoupledRun> {
    config.validate()?;
    let init = config.initial_state()?;
    let levels = config.k_levels.clone();
    let m = levels.len();
    let top = m - 1;
    let mut states: Vec<ParticleState> = vec![init; m];
    let grid = config.snapshot_grid();
    let mut snapshots: Vec<Vec<Snapshot>> = vec![Vec::with_capacity(grid.len()); m];
    let mut next = 0;
    let mut events = config.event_stream();
    let spec = config.kernel;
    loop {
        let ev = events.next_event();
        while next < grid.len() && grid[next] < ev.t {
            for (l, s) in states.iter().enumerate() {
                snapshots[l].push(Snapshot { t: grid[next], velocities: s.velocities.clone() });
            }
            next += 1;
        }
        if ev.t > config.horizon {
            break;
        }
        let x_top = states[top].velocities[ev.i] - states[top].velocities[ev.j];
        for l in 0..top {
            let phi = match mode {
                CouplingMode::Shared => ev.phi,
                CouplingMode::Aligned if ev.z <= levels[l] => {
                    let x = states[l].velocities[ev.i] - states[l].velocities[ev.j];
                    let (phi0, _) = tanaka_angles(x_top, x);
                    (ev.phi + phi0) % TAU
                }
                CouplingMode::Aligned => ev.phi,
            };
            apply_with_phi(&mut states[l], &ev, phi, levels[l], &spec);
        }
        apply_with_phi(&mut states[top], &ev, ev.phi, levels[top], &spec);
    }
    Ok(CoupledRun { k_levels: levels, snapshots, events: states[top].events_applied })
}
