//! Particle simulation of Nanbu's system for the homogeneous Boltzmann
//! equation with angular cutoff, exact W₂ distances between empirical
//! measures, and numerical checks of the analytic estimates behind the
//! convergence rates.

pub mod error;
pub mod geometry;
pub mod kernel;
pub mod quadrature;
pub mod vec3;

pub use error::{NanbuError, Result};
pub use kernel::{KernelFamily, KernelSpec};
pub use vec3::{Vec3, Velocity};
pub mod rng;
pub mod sim;
pub mod stats;
pub mod transport;
pub mod inequality;
pub mod harness;
