//! Scan configuration: a JSON-serializable description of a randomized scan.

use serde::{Deserialize, Serialize};

use crate::entropy::{EntropySpec, ScalarFunction};
use crate::error::{Error, Result};

/// Total-dimension cap for sampled systems.
pub const DIM_CAP: usize = 64;

fn default_dims() -> Vec<usize> {
    vec![2, 3, 4, 5, 6]
}

fn default_p_grid() -> Vec<f64> {
    vec![0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
}

fn default_layouts() -> Vec<Vec<usize>> {
    vec![vec![2, 2, 2, 2]]
}

fn default_functions() -> Vec<String> {
    ["log", "power:0.5", "power:-0.5", "power:2", "power:-1"]
        .map(String::from)
        .to_vec()
}

fn default_specs() -> Vec<String> {
    ["renyi:0.5", "renyi:2", "tsallis:0.5", "tsallis:2"]
        .map(String::from)
        .to_vec()
}

fn default_min_eig() -> f64 {
    1e-3
}

fn default_dt() -> f64 {
    1e-4
}

/// Configuration of a randomized scan. Reports are pure functions of this
/// value.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScanConfig {
    pub master_seed: u64,
    pub trials: usize,
    /// System dimensions for ensemble scans, cycled over trials.
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    /// Ensemble weights, cycled over trials.
    #[serde(default = "default_p_grid")]
    pub p_grid: Vec<f64>,
    /// Four-part layouts (a, A, B, b) for pure-state scans.
    #[serde(default = "default_layouts")]
    pub layouts: Vec<Vec<usize>>,
    /// Commutator functions for mixing scans: `log` or `power:<beta>`.
    #[serde(default = "default_functions")]
    pub functions: Vec<String>,
    /// Entropy specs for entangling scans.
    #[serde(default = "default_specs")]
    pub specs: Vec<String>,
    /// Eigenvalue floor requested from the density sampler.
    #[serde(default = "default_min_eig")]
    pub min_eig: f64,
    /// Step for finite-difference cross-checks.
    #[serde(default = "default_dt")]
    pub dt: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            master_seed: 42,
            trials: 1000,
            dims: default_dims(),
            p_grid: default_p_grid(),
            layouts: default_layouts(),
            functions: default_functions(),
            specs: default_specs(),
            min_eig: default_min_eig(),
            dt: default_dt(),
        }
    }
}

impl ScanConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parameter(format!("bad scan config JSON: {e}")))
    }

    pub fn parsed_functions(&self) -> Result<Vec<ScalarFunction>> {
        self.functions.iter().map(|s| ScalarFunction::parse(s)).collect()
    }

    pub fn parsed_specs(&self) -> Result<Vec<EntropySpec>> {
        self.specs.iter().map(|s| EntropySpec::parse(s)).collect()
    }

    /// Validates the fields shared by all scans plus the parts named in
    /// `needs`.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.min_eig < 0.0 {
            return Err(Error::Parameter("min_eig must be non-negative".into()));
        }
        if self.dt <= 0.0 {
            return Err(Error::Parameter("dt must be positive".into()));
        }
        for &d in &self.dims {
            if !(2..=DIM_CAP).contains(&d) {
                return Err(Error::Parameter(format!(
                    "dimension {d} outside the supported range 2..={DIM_CAP}"
                )));
            }
            if self.min_eig * d as f64 >= 1.0 {
                return Err(Error::Parameter(format!(
                    "min_eig {} infeasible at dimension {d}",
                    self.min_eig
                )));
            }
        }
        for &p in &self.p_grid {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Parameter(format!(
                    "ensemble weight {p} outside (0,1)"
                )));
            }
        }
        for layout in &self.layouts {
            if layout.len() != 4 {
                return Err(Error::Parameter(format!(
                    "layout {layout:?} must have four parts (a, A, B, b)"
                )));
            }
            if layout.contains(&0) {
                return Err(Error::Parameter(format!(
                    "layout {layout:?} has a zero dimension"
                )));
            }
            let total: usize = layout.iter().product();
            if total > DIM_CAP {
                return Err(Error::Parameter(format!(
                    "layout {layout:?} exceeds the total-dimension cap {DIM_CAP}"
                )));
            }
            if layout[2] > layout[1] {
                return Err(Error::Parameter(format!(
                    "layout {layout:?} must have d_B <= d_A"
                )));
            }
        }
        self.parsed_functions()?;
        self.parsed_specs()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_validates() {
        ScanConfig::default().validate().unwrap();
    }

    #[test]
    fn json_round_trip_preserves_config() {
        let cfg = ScanConfig {
            master_seed: 7,
            trials: 10,
            ..Default::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back = ScanConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg = ScanConfig::from_json(r#"{"master_seed": 1, "trials": 5}"#).unwrap();
        assert_eq!(cfg.dims, vec![2, 3, 4, 5, 6]);
        assert_eq!(cfg.p_grid.len(), 7);
        cfg.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut cfg = ScanConfig::default();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = ScanConfig::default();
        cfg.dims = vec![1];
        assert!(cfg.validate().is_err());

        let mut cfg = ScanConfig::default();
        cfg.p_grid = vec![1.5];
        assert!(cfg.validate().is_err());

        let mut cfg = ScanConfig::default();
        cfg.layouts = vec![vec![2, 2, 3, 2]]; // d_B > d_A
        assert!(cfg.validate().is_err());

        let mut cfg = ScanConfig::default();
        cfg.functions = vec!["sinh".into()];
        assert!(cfg.validate().is_err());

        let mut cfg = ScanConfig::default();
        cfg.layouts = vec![vec![4, 4, 4, 4]]; // 256 > cap
        assert!(cfg.validate().is_err());
    }
}
