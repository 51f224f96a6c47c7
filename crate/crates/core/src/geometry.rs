//! Collision geometry: azimuthal frames, the deviation vectors and the
//! azimuth alignment between two relative velocities.

use crate::error::{NanbuError, Result};
use crate::kernel::{one_minus_cos, KernelSpec};
use crate::vec3::{Vec3, Velocity};
use std::f64::consts::TAU;

/// Two axes orthogonal to X, each of length |X|, such that
/// (X/|X|, i/|X|, j/|X|) is a right-handed orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub i_vec: Vec3,
    pub j_vec: Vec3,
}

/// Index of the canonical axis least aligned with x (ties go to the lower index).
fn least_aligned_axis(x: Vec3) -> usize {
    let a = [x.x.abs(), x.y.abs(), x.z.abs()];
    let mut best = 0;
    for k in 1..3 {
        if a[k] < a[best] {
            best = k;
        }
    }
    best
}

pub fn frame(x: Vec3) -> Result<Frame> {
    let n = x.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(NanbuError::domain("frame of a zero or non-finite vector"));
    }
    Ok(frame_unchecked(x, n))
}

#[inline]
fn frame_unchecked(x: Vec3, norm: f64) -> Frame {
    let e = Vec3::axis(least_aligned_axis(x));
    let xe = x.cross(e);
    let i_vec = xe * (norm / xe.norm());
    let j_vec = (x / norm).cross(i_vec);
    Frame { i_vec, j_vec }
}

impl Frame {
    /// cos φ I + sin φ J.
    #[inline]
    pub fn at(&self, phi: f64) -> Vec3 {
        let (s, c) = phi.sin_cos();
        self.i_vec * c + self.j_vec * s
    }
}

/// Γ(X, φ) = cos φ I(X) + sin φ J(X).
pub fn gamma_vec(x: Vec3, phi: f64) -> Result<Vec3> {
    Ok(frame(x)?.at(phi))
}

/// Velocity increment a = −(1−cos θ)/2 X + (sin θ)/2 Γ(X, φ), X = v − v_*.
/// Zero when v = v_*.
#[inline]
pub fn deviation_a(v: Velocity, v_star: Velocity, theta: f64, phi: f64) -> Vec3 {
    let x = v - v_star;
    let n = x.norm();
    if n == 0.0 || theta == 0.0 {
        return Vec3::ZERO;
    }
    let f = frame_unchecked(x, n);
    x * (-0.5 * one_minus_cos(theta)) + f.at(phi) * (0.5 * theta.sin())
}

/// a with the deviation angle G(z / |v−v_*|^γ).
#[inline]
pub fn c_dev(v: Velocity, v_star: Velocity, z: f64, phi: f64, spec: &KernelSpec) -> Vec3 {
    let x = (v - v_star).norm();
    if x == 0.0 {
        return Vec3::ZERO;
    }
    deviation_a(v, v_star, spec.deviation_angle(z, x), phi)
}

/// c gated by z ≤ K.
#[inline]
pub fn c_dev_k(v: Velocity, v_star: Velocity, z: f64, phi: f64, k: f64, spec: &KernelSpec) -> Vec3 {
    if z > k {
        Vec3::ZERO
    } else {
        c_dev(v, v_star, z, phi, spec)
    }
}

/// Elastic pair map (v, v_*) → (v + a, v_* − a).
pub fn post_collision(v: Velocity, v_star: Velocity, theta: f64, phi: f64) -> (Velocity, Velocity) {
    let a = deviation_a(v, v_star, theta, phi);
    (v + a, v_star - a)
}

/// Azimuth offsets (φ₀, φ₁) such that for all φ
/// Γ(X,φ)·Γ(Y,φ+φ₀) = X·Y cos²(φ+φ₁) + |X||Y| sin²(φ+φ₁),
/// which gives |Γ(X,φ) − Γ(Y,φ+φ₀)| ≤ |X − Y|. Both angles lie in [0, 2π).
pub fn tanaka_angles(x: Vec3, y: Vec3) -> (f64, f64) {
    let (nx, ny) = (x.norm(), y.norm());
    if nx == 0.0 || ny == 0.0 || x == y {
        return (0.0, 0.0);
    }
    let fx = frame_unchecked(x, nx);
    let fy = frame_unchecked(y, ny);
    let cr = x.cross(y);
    let ncr = cr.norm();
    // Common unit normal to X and Y. For (nearly) collinear pairs any normal
    // to X works; J(X) gives zero offsets whenever the two frames agree.
    let n = if ncr < 1e-12 * nx * ny { fx.j_vec / nx } else { cr / ncr };
    let azimuth = |f: &Frame, v: Vec3, nv: f64| {
        let i = n.cross(v / nv) * nv;
        i.dot(f.j_vec).atan2(i.dot(f.i_vec))
    };
    let phi_x = azimuth(&fx, x, nx);
    let phi_y = azimuth(&fy, y, ny);
    ((phi_y - phi_x).rem_euclid(TAU), (-phi_x).rem_euclid(TAU))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn check_frame(x: Vec3) {
        let f = frame(x).unwrap();
        let n = x.norm();
        assert!(f.i_vec.dot(x).abs() <= 1e-12 * n * n);
        assert!(f.j_vec.dot(x).abs() <= 1e-12 * n * n);
        assert!(f.i_vec.dot(f.j_vec).abs() <= 1e-12 * n * n);
        assert!((f.i_vec.norm() - n).abs() <= 1e-12 * n);
        assert!((f.j_vec.norm() - n).abs() <= 1e-12 * n);
        let d = Vec3::det(x / n, f.i_vec / n, f.j_vec / n);
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frame_examples() {
        check_frame(Vec3::new(1.0, 0.0, 0.0));
        check_frame(Vec3::new(0.0, 0.0, 2.0));
        check_frame(Vec3::new(3.0, 4.0, 0.0));
        let f = frame(Vec3::new(0.0, 0.0, 2.0)).unwrap();
        assert_eq!(f.i_vec.norm(), 2.0);
        assert!(frame(Vec3::ZERO).is_err());
    }

    #[test]
    fn gamma_examples() {
        let x = Vec3::new(1.0, 2.0, 2.0);
        assert_eq!(gamma_vec(x, 0.0).unwrap(), frame(x).unwrap().i_vec);
        assert!((gamma_vec(x, 1.1).unwrap().norm() - 3.0).abs() < 1e-14);
        let mut s = Vec3::ZERO;
        for k in 0..64 {
            s += gamma_vec(x, TAU * k as f64 / 64.0).unwrap();
        }
        assert!((s / 64.0).norm() < 1e-12);
    }

    #[test]
    fn deviation_examples() {
        let v = Vec3::new(0.3, -1.0, 2.0);
        assert_eq!(deviation_a(v, v, 1.0, 0.5), Vec3::ZERO);
        let x = Vec3::new(2.0, 0.0, 0.0);
        let a = deviation_a(x, Vec3::ZERO, FRAC_PI_2, 0.0);
        let want = x * -0.5 + frame(x).unwrap().i_vec * 0.5;
        assert!((a - want).norm() < 1e-15);
        assert_eq!(deviation_a(x, Vec3::ZERO, 0.0, 1.0), Vec3::ZERO);
    }

    #[test]
    fn cutoff_gate() {
        let spec = KernelSpec::maxwell(0.5).unwrap();
        let (v, w) = (Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.5));
        assert_eq!(c_dev_k(v, w, 5.0, 1.0, 4.0, &spec), Vec3::ZERO);
        assert_eq!(c_dev_k(v, w, 4.0, 1.0, 4.0, &spec), c_dev(v, w, 4.0, 1.0, &spec));
        let hs = KernelSpec::hard_sphere();
        let x = (v - w).norm();
        assert_eq!(c_dev(v, w, FRAC_PI_2 * x, 0.3, &hs), Vec3::ZERO);
    }

    #[test]
    fn post_collision_identity_angle() {
        let (v, w) = (Vec3::new(1.0, 2.0, 3.0), Vec3::new(-1.0, 0.5, 0.0));
        assert_eq!(post_collision(v, w, 0.0, 2.0), (v, w));
    }

    #[test]
    fn tanaka_orthogonal_axes() {
        let (x, y) = (Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0));
        let (p0, p1) = tanaka_angles(x, y);
        for phi in [0.0, PI / 4.0, FRAC_PI_2, 1.7] {
            let lhs = gamma_vec(x, phi).unwrap().dot(gamma_vec(y, phi + p0).unwrap());
            let rhs = x.dot(y) * (phi + p1).cos().powi(2) + (phi + p1).sin().powi(2);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn tanaka_collinear_and_degenerate() {
        let x = Vec3::new(0.2, -1.0, 0.7);
        assert_eq!(tanaka_angles(x, x), (0.0, 0.0));
        assert_eq!(tanaka_angles(x, Vec3::ZERO), (0.0, 0.0));
        for y in [x * 2.5, x * -0.3] {
            let (p0, p1) = tanaka_angles(x, y);
            assert!(p0.min(TAU - p0) < 1e-12 && p1.min(TAU - p1) < 1e-12);
            for phi in [0.1, 2.0, 4.0] {
                let d = (gamma_vec(x, phi).unwrap() - gamma_vec(y, phi + p0).unwrap()).norm();
                assert!(d <= (x - y).norm() + 1e-12);
            }
        }
    }
}
