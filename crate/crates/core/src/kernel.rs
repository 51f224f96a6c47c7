//! Collision kernel: the angular weight β, its tail integral H, the inverse G
//! and the integrated deviation weights Φ_K, Ψ_K.

use crate::error::{NanbuError, Result};
use crate::quadrature::{integrate, Quad, QuadTol};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    MaxwellMolecules,
    HardPotential,
    HardSphere,
}

/// Velocity exponent `gamma` and angular exponent `nu` of the kernel
/// |v−v_*|^γ β(θ). Hard spheres use β ≡ 1 and ignore `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub gamma: f64,
    pub nu: f64,
}

/// 1 − cos θ without cancellation for small θ.
#[inline]
pub fn one_minus_cos(theta: f64) -> f64 {
    let s = (0.5 * theta).sin();
    2.0 * s * s
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(NanbuError::domain(format!("nu must lie in (0,1), got {nu}")));
    }
    Ok(())
}

/// Validated cutoff level, K ≥ 1.
pub fn check_cutoff(k: f64) -> Result<()> {
    if !(k >= 1.0) || k.is_nan() {
        return Err(NanbuError::domain(format!("cutoff K must be >= 1, got {k}")));
    }
    Ok(())
}

impl KernelSpec {
    pub fn maxwell(nu: f64) -> Result<Self> {
        check_nu(nu)?;
        Ok(KernelSpec { family: KernelFamily::MaxwellMolecules, gamma: 0.0, nu })
    }

    pub fn hard_potential(gamma: f64, nu: f64) -> Result<Self> {
        check_nu(nu)?;
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(NanbuError::domain(format!("hard potentials need gamma in (0,1), got {gamma}")));
        }
        Ok(KernelSpec { family: KernelFamily::HardPotential, gamma, nu })
    }

    pub fn hard_sphere() -> Self {
        KernelSpec { family: KernelFamily::HardSphere, gamma: 1.0, nu: 0.0 }
    }

    /// Re-check the family/exponent invariants, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        match self.family {
            KernelFamily::MaxwellMolecules => {
                check_nu(self.nu)?;
                if self.gamma != 0.0 {
                    return Err(NanbuError::domain("Maxwell molecules need gamma = 0"));
                }
            }
            KernelFamily::HardPotential => {
                Self::hard_potential(self.gamma, self.nu)?;
            }
            KernelFamily::HardSphere => {
                if self.gamma != 1.0 {
                    return Err(NanbuError::domain("hard spheres need gamma = 1"));
                }
            }
        }
        Ok(())
    }

    pub fn is_hard_sphere(&self) -> bool {
        self.family == KernelFamily::HardSphere
    }

    /// Exponent 1 − 2/ν of the cutoff error for the power-law families.
    pub fn cutoff_exponent(&self) -> Option<f64> {
        (!self.is_hard_sphere()).then(|| 1.0 - 2.0 / self.nu)
    }

    pub fn beta(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(NanbuError::domain(format!("theta must lie in (0, pi/2), got {theta}")));
        }
        Ok(if self.is_hard_sphere() { 1.0 } else { theta.powf(-1.0 - self.nu) })
    }

    /// H(θ) = ∫_θ^{π/2} β.
    pub fn h(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(NanbuError::domain(format!("theta must lie in (0, pi/2], got {theta}")));
        }
        Ok(if self.is_hard_sphere() {
            FRAC_PI_2 - theta
        } else {
            (theta.powf(-self.nu) - FRAC_PI_2.powf(-self.nu)) / self.nu
        })
    }

    /// G = H⁻¹, extended by 0 beyond the range of H. Values z ≤ 0 give π/2.
    #[inline]
    pub fn g(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return FRAC_PI_2;
        }
        if self.is_hard_sphere() {
            (FRAC_PI_2 - z).max(0.0)
        } else {
            (self.nu * z + FRAC_PI_2.powf(-self.nu)).powf(-1.0 / self.nu)
        }
    }

    /// x^γ, with x^0 = 1 also at x = 0.
    #[inline]
    pub fn speed_factor(&self, x: f64) -> f64 {
        if self.gamma == 0.0 {
            1.0
        } else if self.gamma == 1.0 {
            x
        } else {
            x.powf(self.gamma)
        }
    }

    /// Deviation angle G(z / x^γ) of a pair with relative speed x.
    /// A vanishing speed factor sends the angle to 0.
    #[inline]
    pub fn deviation_angle(&self, z: f64, x: f64) -> f64 {
        let s = self.speed_factor(x);
        if s == 0.0 {
            0.0
        } else {
            self.g(z / s)
        }
    }

    /// Φ_K(x) = π ∫_0^K (1 − cos G(z/x^γ)) dz.
    pub fn phi_k(&self, x: f64, k: f64) -> Result<f64> {
        self.phi_k_tol(x, k, QuadTol::default()).map(|q| q.value)
    }

    pub fn phi_k_tol(&self, x: f64, k: f64, tol: QuadTol) -> Result<Quad> {
        check_speed(x)?;
        check_cutoff(k)?;
        let s = self.speed_factor(x);
        if s == 0.0 {
            return Ok(Quad { value: 0.0, error: 0.0 });
        }
        if self.is_hard_sphere() {
            let m = k.min(FRAC_PI_2 * s);
            let value = PI * (m - s * one_minus_cos(m / s));
            return Ok(Quad { value, error: 0.0 });
        }
        let q = integrate(|z| one_minus_cos(self.g(z / s)), 0.0, k, scaled(tol))?;
        Ok(Quad { value: PI * q.value, error: PI * q.error })
    }

    /// ζ_K = Φ_K(1), the x-independent value for Maxwell molecules.
    pub fn zeta_k(&self, k: f64) -> Result<f64> {
        self.phi_k(1.0, k)
    }

    /// Ψ_K(x) = π ∫_K^∞ (1 − cos G(z/x^γ)) dz.
    pub fn psi_k(&self, x: f64, k: f64) -> Result<f64> {
        self.psi_k_tol(x, k, QuadTol::default()).map(|q| q.value)
    }

    pub fn psi_k_tol(&self, x: f64, k: f64, tol: QuadTol) -> Result<Quad> {
        check_speed(x)?;
        check_cutoff(k)?;
        let s = self.speed_factor(x);
        if s == 0.0 {
            return Ok(Quad { value: 0.0, error: 0.0 });
        }
        if self.is_hard_sphere() {
            let end = FRAC_PI_2 * s;
            if k >= end {
                return Ok(Quad { value: 0.0, error: 0.0 });
            }
            let value = PI * ((end - k) - s * (k / s).cos());
            return Ok(Quad { value: value.max(0.0), error: 0.0 });
        }
        // Quadrature up to z_far, then the tail in the angle variable,
        // where ∫_{z_far}^∞ (1−cos G(z/s)) dz = s ∫_0^{G(z_far/s)} (1−cos θ) β(θ) dθ.
        let z_far = 16.0 * k.max(s);
        let q = integrate(|z| one_minus_cos(self.g(z / s)), k, z_far, scaled(tol))?;
        let tail = s * power_law_moment(self.g(z_far / s), self.nu);
        Ok(Quad { value: PI * (q.value + tail), error: PI * q.error })
    }
}

fn check_speed(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(NanbuError::domain(format!("relative speed must be finite and >= 0, got {x}")));
    }
    Ok(())
}

// The integrals are reported after multiplying by π.
fn scaled(tol: QuadTol) -> QuadTol {
    QuadTol { abs: tol.abs / PI, ..tol }
}

/// ∫_0^θ (1 − cos t) t^(−1−ν) dt by its alternating power series.
/// Only called with θ well below π/2 where a handful of terms suffice.
pub(crate) fn power_law_moment(theta: f64, nu: f64) -> f64 {
    let t2 = theta * theta;
    let mut pow = theta.powf(2.0 - nu);
    let mut fact = 2.0;
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..40 {
        let term = sign * pow / (fact * (2 * k) as f64 - fact * nu);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        pow *= t2;
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
        sign = -sign;
    }
    sum
}
