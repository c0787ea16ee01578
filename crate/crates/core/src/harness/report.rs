//! Scan reports: per-trial comparison rows, a summary with the argmax
//! witness, and CSV/JSON emission.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::harness::ScanConfig;
use crate::linalg::CMatrix;

/// One rate-versus-bound comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub trial: usize,
    /// Master seed; every row carries it so CSV slices stay reproducible.
    pub seed: u64,
    /// Ensemble dimension ("4") or pure-state layout ("2x2x2x2").
    pub dim: String,
    pub p: f64,
    /// Commutator function for mixing rows, empty for entangling rows.
    pub function: String,
    /// Entropy spec for entangling rows, empty for mixing rows.
    pub spec: String,
    pub rate: f64,
    pub bound_name: String,
    pub bound_value: f64,
    pub regime_valid: bool,
    /// |rate| / bound_value (0 when the bound vanishes).
    pub ratio: f64,
}

impl ScanRow {
    pub fn ratio_of(rate: f64, bound: f64) -> f64 {
        if bound.abs() < 1e-300 {
            0.0
        } else {
            rate.abs() / bound
        }
    }
}

/// A matrix serialized as nested [re, im] pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl NamedMatrix {
    pub fn from_matrix(name: impl Into<String>, m: &CMatrix) -> Self {
        let dim = m.nrows();
        let entries = (0..dim)
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self {
            name: name.into(),
            dim,
            entries,
        }
    }
}

/// The inputs behind the extremal row of a scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub trial: usize,
    pub context: String,
    pub matrices: Vec<NamedMatrix>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanSummary {
    pub trials: usize,
    pub comparisons: usize,
    pub regime_valid_comparisons: usize,
    /// Count of regime-valid comparisons whose rate exceeded the bound plus
    /// the scan's slack.
    pub violations: usize,
    /// Largest |rate|/bound over regime-valid comparisons.
    pub max_ratio: f64,
    pub max_ratio_trial: Option<usize>,
    /// Trials skipped because an operation rejected its inputs.
    pub errors: usize,
    pub first_error: Option<String>,
    pub argmax_witness: Option<WitnessRecord>,
}

impl ScanSummary {
    pub fn empty(trials: usize) -> Self {
        Self {
            trials,
            comparisons: 0,
            regime_valid_comparisons: 0,
            violations: 0,
            max_ratio: 0.0,
            max_ratio_trial: None,
            errors: 0,
            first_error: None,
            argmax_witness: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

/// Stable CSV schema; one row per trial × bound comparison.
pub const CSV_HEADER: &str =
    "trial,seed,dim,p,function,spec,rate,bound_name,bound_value,regime_valid,ratio";

impl ScanReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.trial,
                r.seed,
                r.dim,
                r.p,
                r.function,
                r.spec,
                r.rate,
                r.bound_name,
                r.bound_value,
                r.regime_valid,
                r.ratio
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One-line human summary for CLI output.
    pub fn one_line(&self, label: &str) -> String {
        format!(
            "{label}: {} trials, {} comparisons ({} in regime), {} violations, max ratio {:.6}{}",
            self.summary.trials,
            self.summary.comparisons,
            self.summary.regime_valid_comparisons,
            self.summary.violations,
            self.summary.max_ratio,
            if self.summary.errors > 0 {
                format!(", {} trials errored", self.summary.errors)
            } else {
                String::new()
            }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_schema_is_stable() {
        let report = ScanReport {
            config: ScanConfig::default(),
            rows: vec![ScanRow {
                trial: 0,
                seed: 42,
                dim: "3".into(),
                p: 0.1,
                function: "log".into(),
                spec: String::new(),
                rate: 0.25,
                bound_name: "nine_p_log".into(),
                bound_value: 2.0723,
                regime_valid: true,
                ratio: 0.12,
            }],
            summary: ScanSummary::empty(1),
        };
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row = lines.next().unwrap();
        assert!(row.starts_with("0,42,3,0.1,log,,0.25,nine_p_log,"));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn json_round_trips() {
        let report = ScanReport {
            config: ScanConfig::default(),
            rows: vec![],
            summary: ScanSummary::empty(0),
        };
        let text = report.to_json();
        let back: ScanReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.summary.trials, 0);
    }
}
