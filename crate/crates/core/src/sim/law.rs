use super::ParticleState;
use crate::error::{NanbuError, Result};
use crate::vec3::{Vec3, Velocity};
use rand::Rng;
use rand_distr::StandardNormal;
use std::sync::Arc;

/// Law of the i.i.d. initial velocities.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialLaw {
    /// Centred Gaussian with per-component standard deviation sigma.
    Maxwellian { sigma: f64 },
    /// Uniform on the ball of the given radius.
    UniformBall { radius: f64 },
    /// Mixture p δ_a + (1−p) δ_b.
    TwoPoint { a: Vec3, b: Vec3, p: f64 },
    /// Point mass. Only useful for degenerate checks.
    Dirac { v0: Vec3 },
    /// Resampling (with replacement) of a fixed list of velocities.
    Empirical { points: Arc<Vec<Vec3>> },
}

impl InitialLaw {
    /// Symmetric two-point law at ±e₁.
    pub fn two_point_default() -> Self {
        InitialLaw::TwoPoint { a: Vec3::axis(0), b: -Vec3::axis(0), p: 0.5 }
    }

    /// Read `vx,vy,vz` rows from a CSV file.
    pub fn from_csv(path: &std::path::Path) -> Result<Self> {
        let points = super::io::read_cloud(path)?;
        if points.is_empty() {
            return Err(NanbuError::input(format!("{} holds no velocities", path.display())));
        }
        Ok(InitialLaw::Empirical { points: Arc::new(points) })
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            InitialLaw::Maxwellian { sigma } => *sigma >= 0.0 && sigma.is_finite(),
            InitialLaw::UniformBall { radius } => *radius >= 0.0 && radius.is_finite(),
            InitialLaw::TwoPoint { a, b, p } => a.is_finite() && b.is_finite() && (0.0..=1.0).contains(p),
            InitialLaw::Dirac { v0 } => v0.is_finite(),
            InitialLaw::Empirical { points } => !points.is_empty() && points.iter().all(|v| v.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(NanbuError::input(format!("invalid initial law {self:?}")))
        }
    }

    /// E|V|², used by the moment checks.
    pub fn second_moment(&self) -> f64 {
        match self {
            InitialLaw::Maxwellian { sigma } => 3.0 * sigma * sigma,
            InitialLaw::UniformBall { radius } => 0.6 * radius * radius,
            InitialLaw::TwoPoint { a, b, p } => p * a.norm_sq() + (1.0 - p) * b.norm_sq(),
            InitialLaw::Dirac { v0 } => v0.norm_sq(),
            InitialLaw::Empirical { points } => {
                points.iter().map(|v| v.norm_sq()).sum::<f64>() / points.len() as f64
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Velocity {
        match self {
            InitialLaw::Maxwellian { sigma } => gaussian(rng) * *sigma,
            InitialLaw::UniformBall { radius } => {
                let g = gaussian(rng);
                let n = g.norm();
                if n == 0.0 {
                    return Vec3::ZERO;
                }
                let r: f64 = rng.random::<f64>().cbrt() * radius;
                g * (r / n)
            }
            InitialLaw::TwoPoint { a, b, p } => {
                if rng.random::<f64>() < *p {
                    *a
                } else {
                    *b
                }
            }
            InitialLaw::Dirac { v0 } => *v0,
            InitialLaw::Empirical { points } => points[rng.random_range(0..points.len())],
        }
    }
}

/// Standard Gaussian 3-vector.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    Vec3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// N i.i.d. draws from the law.
pub fn sample_initial<R: Rng + ?Sized>(n: usize, law: &InitialLaw, rng: &mut R) -> Result<ParticleState> {
    law.validate()?;
    Ok(ParticleState::new((0..n).map(|_| law.sample(rng)).collect()))
}
