//! Negative Sobolev norm ‖μ − f‖²_{H^{−s}} = ∫ (1+|ξ|²)^{−s} |μ̂(ξ) − f̂(ξ)|² dξ
//! of an empirical measure against a law given by its characteristic function.

use crate::error::{NanbuError, Result};
use crate::quadrature::{gauss_legendre, integrate, integrate_to_inf, QuadTol};
use crate::vec3::Vec3;
use std::f64::consts::{PI, TAU};

/// Spherical product grid: Gauss–Legendre in the radius on [0, radius] and
/// in cos θ, uniform in the azimuth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevGrid {
    pub radius: f64,
    pub n_radial: usize,
    pub n_polar: usize,
    pub n_azimuth: usize,
}

impl Default for SobolevGrid {
    fn default() -> Self {
        SobolevGrid { radius: 8.0, n_radial: 32, n_polar: 24, n_azimuth: 48 }
    }
}

fn weight(r2: f64, s: f64) -> f64 {
    (1.0 + r2).powf(-s)
}

/// Grid quadrature of the defining integral on |ξ| ≤ radius. Beyond the
/// radius the characteristic functions are treated as decorrelated, so the
/// tail contributes (1/N) ∫_{|ξ|>R} (1+|ξ|²)^{−s} dξ, its expected value
/// when f̂ has decayed there.
pub fn sobolev_distance_sq<F>(cloud: &[Vec3], f_hat: F, s: f64, grid: &SobolevGrid) -> Result<f64>
where
    F: Fn(Vec3) -> (f64, f64),
{
    if !(s > 1.5) {
        return Err(NanbuError::input(format!("the H^-s integral diverges for s = {s} <= 3/2")));
    }
    if cloud.is_empty() || grid.n_radial == 0 || grid.n_polar == 0 || grid.n_azimuth == 0 || !(grid.radius > 0.0) {
        return Err(NanbuError::input("empty cloud or degenerate Sobolev grid"));
    }
    let n = cloud.len() as f64;
    let (xr, wr) = gauss_legendre(grid.n_radial);
    let (xc, wc) = gauss_legendre(grid.n_polar);
    let half_r = 0.5 * grid.radius;
    let dphi = TAU / grid.n_azimuth as f64;
    let mut total = 0.0;
    for (ci, &c) in xc.iter().enumerate() {
        let sin_t = (1.0 - c * c).max(0.0).sqrt();
        for p in 0..grid.n_azimuth {
            let (sp, cp) = (p as f64 * dphi).sin_cos();
            let dir = Vec3::new(sin_t * cp, sin_t * sp, c);
            let proj: Vec<f64> = cloud.iter().map(|v| dir.dot(*v)).collect();
            let mut line = 0.0;
            for (ri, &x) in xr.iter().enumerate() {
                let r = half_r * (x + 1.0);
                let (mut re, mut im) = (0.0, 0.0);
                for &q in &proj {
                    let (si, co) = (r * q).sin_cos();
                    re += co;
                    im -= si;
                }
                let (fr, fi) = f_hat(dir * r);
                let d2 = (re / n - fr).powi(2) + (im / n - fi).powi(2);
                line += wr[ri] * half_r * r * r * weight(r * r, s) * d2;
            }
            total += wc[ci] * dphi * line;
        }
    }
    let tail = integrate_to_inf(|r| 4.0 * PI * r * r * weight(r * r, s), grid.radius, grid.radius, QuadTol::new(1e-14, 1e-12))?;
    Ok(total + tail.value / n)
}

/// E‖μ^N − f‖²_{H^{−s}} for f the centred Gaussian with per-component
/// standard deviation sigma: (4π/N) ∫_0^∞ r² (1+r²)^{−s} (1 − e^{−σ² r²}) dr.
pub fn gaussian_sobolev_expectation(n: usize, sigma: f64, s: f64) -> Result<f64> {
    if !(s > 1.5) {
        return Err(NanbuError::input(format!("the H^-s integral diverges for s = {s} <= 3/2")));
    }
    let tol = QuadTol::new(1e-14, 1e-12);
    let g = |r: f64| 4.0 * PI * r * r * weight(r * r, s) * (-(sigma * r).powi(2)).exp_m1().abs();
    let head = integrate(g, 0.0, 1.0, tol)?;
    let tail = integrate_to_inf(g, 1.0, 1.0, tol)?;
    Ok((head.value + tail.value) / n as f64)
}
