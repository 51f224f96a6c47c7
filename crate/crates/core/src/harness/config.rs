use crate::error::{NanbuError, Result};
use crate::kernel::{KernelFamily, KernelSpec};
use crate::sim::{CouplingMode, InitialLaw};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    Maxwellian,
    TwoPoint,
    UniformBall,
    File,
}

/// Flat run configuration shared by every subcommand. Each command reads
/// the keys it needs; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub kernel: KernelFamily,
    pub gamma: f64,
    pub nu: f64,
    pub law: LawKind,
    /// Maxwellian component standard deviation.
    pub sigma: f64,
    /// Uniform-ball radius.
    pub radius: f64,
    /// Two-point law p δ_a + (1−p) δ_b.
    pub point_a: [f64; 3],
    pub point_b: [f64; 3],
    pub weight: f64,
    /// `vx,vy,vz` CSV resampled with replacement when `law = "file"`.
    pub law_file: Option<String>,
    /// Particle count for `simulate` and `k-scan`.
    pub n: usize,
    /// Cutoff for `simulate` and `n-scan`.
    pub k: f64,
    pub n_list: Vec<usize>,
    pub k_list: Vec<f64>,
    pub horizon: f64,
    pub snapshot_times: Vec<f64>,
    pub replicas: usize,
    /// Reference cloud size for `n-scan`; 0 means 4·max(n_list).
    pub n_ref: usize,
    /// Target sample size factor M/N for `epsilon-n`.
    pub target_factor: usize,
    pub seed: u64,
    pub coupling: CouplingMode,
    /// Optional acceptance thresholds; a violated one exits with status 1.
    pub max_slope: Option<f64>,
    pub max_spearman: Option<f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            kernel: KernelFamily::MaxwellMolecules,
            gamma: 0.0,
            nu: 0.5,
            law: LawKind::Maxwellian,
            sigma: 1.0,
            radius: 1.0,
            point_a: [1.0, 0.0, 0.0],
            point_b: [-1.0, 0.0, 0.0],
            weight: 0.5,
            law_file: None,
            n: 256,
            k: 64.0,
            n_list: vec![64, 128, 256, 512],
            k_list: vec![2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
            horizon: 2.0,
            snapshot_times: vec![],
            replicas: 30,
            n_ref: 0,
            target_factor: 8,
            seed: 1,
            coupling: CouplingMode::Aligned,
            max_slope: None,
            max_spearman: None,
        }
    }
}

impl ScanConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| NanbuError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| NanbuError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Canonical TOML text, hashed into the manifest.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn kernel_spec(&self) -> Result<KernelSpec> {
        match self.kernel {
            KernelFamily::MaxwellMolecules => KernelSpec::maxwell(self.nu),
            KernelFamily::HardPotential => KernelSpec::hard_potential(self.gamma, self.nu),
            KernelFamily::HardSphere => Ok(KernelSpec::hard_sphere()),
        }
    }

    pub fn initial_law(&self) -> Result<InitialLaw> {
        let law = match self.law {
            LawKind::Maxwellian => InitialLaw::Maxwellian { sigma: self.sigma },
            LawKind::UniformBall => InitialLaw::UniformBall { radius: self.radius },
            LawKind::TwoPoint => InitialLaw::TwoPoint {
                a: Vec3::from_array(self.point_a),
                b: Vec3::from_array(self.point_b),
                p: self.weight,
            },
            LawKind::File => {
                let path = self.law_file.as_ref().ok_or_else(|| NanbuError::Config("law = \"file\" needs law_file".into()))?;
                InitialLaw::from_csv(Path::new(path))?
            }
        };
        law.validate()?;
        Ok(law)
    }

    /// Reference size actually used by the N-scan.
    pub fn reference_size(&self) -> usize {
        if self.n_ref == 0 {
            4 * self.n_list.iter().copied().max().unwrap_or(0)
        } else {
            self.n_ref
        }
    }

    pub fn validate_scan(&self) -> Result<()> {
        self.kernel_spec()?;
        if self.replicas < 30 {
            return Err(NanbuError::Config(format!("scans need replicas >= 30, got {}", self.replicas)));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(NanbuError::Config("horizon must be finite and >= 0".into()));
        }
        Ok(())
    }

    pub fn validate_n_scan(&self) -> Result<()> {
        self.validate_scan()?;
        let max_n = self.n_list.iter().copied().max().ok_or_else(|| NanbuError::Config("n_list is empty".into()))?;
        if self.n_list.iter().any(|n| *n < 2) {
            return Err(NanbuError::Config("every N must be >= 2".into()));
        }
        if self.reference_size() < 4 * max_n {
            return Err(NanbuError::Config(format!("n_ref = {} is below 4·max(N) = {}", self.reference_size(), 4 * max_n)));
        }
        Ok(())
    }

    pub fn validate_k_scan(&self) -> Result<()> {
        self.validate_scan()?;
        if self.k_list.is_empty() {
            return Err(NanbuError::Config("k_list is empty".into()));
        }
        if self.k_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(NanbuError::Config("k_list must be strictly ascending".into()));
        }
        Ok(())
    }
}
