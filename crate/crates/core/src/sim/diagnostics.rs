use crate::stats::pairwise_sum_by;
use crate::vec3::Velocity;
use serde::Serialize;

/// Moments of a velocity cloud.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// ⟨|v|⟩, ⟨|v|²⟩, ⟨|v|⁴⟩.
    pub moment1: f64,
    pub moment2: f64,
    pub moment4: f64,
    pub exp_moment_order: f64,
    /// ⟨exp(|v|^q)⟩; +∞ when it overflows.
    pub exp_moment: f64,
    pub exp_moment_overflow: bool,
    pub max_speed: f64,
}

pub fn diagnostics(velocities: &[Velocity], q: f64) -> Diagnostics {
    let n = velocities.len().max(1) as f64;
    let m = |f: &dyn Fn(f64) -> f64| pairwise_sum_by(velocities, |v| f(v.norm())) / n;
    let exp_moment = m(&|r| r.powf(q).exp());
    Diagnostics {
        moment1: m(&|r| r),
        moment2: m(&|r| r * r),
        moment4: m(&|r| (r * r) * (r * r)),
        exp_moment_order: q,
        exp_moment,
        exp_moment_overflow: !exp_moment.is_finite(),
        max_speed: velocities.iter().map(|v| v.norm()).fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{purpose, stream};
    use crate::sim::law::gaussian;
    use crate::vec3::Vec3;

    #[test]
    fn point_cloud() {
        let v0 = Vec3::new(1.0, 2.0, 2.0);
        let d = diagnostics(&[v0; 5], 1.0);
        assert!((d.moment2 - 9.0).abs() < 1e-12);
        assert!((d.max_speed - 3.0).abs() < 1e-12);
        assert!((d.exp_moment - 3f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn overflow_is_flagged() {
        let d = diagnostics(&[Vec3::new(1e3, 0.0, 0.0)], 2.0);
        assert!(d.exp_moment_overflow);
        assert!(d.exp_moment.is_infinite());
    }

    #[test]
    fn gaussian_fourth_moment() {
        let mut rng = stream(2, purpose::SAMPLE, 0);
        let n = 100_000;
        let vs: Vec<Vec3> = (0..n).map(|_| gaussian(&mut rng)).collect();
        let d = diagnostics(&vs, 1.0);
        let r4: Vec<f64> = vs.iter().map(|v| v.norm_sq().powi(2)).collect();
        let se = crate::stats::mean_se(&r4).se;
        assert!((d.moment4 - 15.0).abs() < 5.0 * se);
        assert!(d.moment2 >= 0.0);
    }
}
