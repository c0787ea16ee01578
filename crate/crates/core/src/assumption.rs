//! Verification of the growth condition behind the commutator bound.
//!
//! The condition on an increasing f: for 0 < y < x ≤ 1, whenever
//! f(x) − f(y) > f(1) − f(p), then √(y/x)·(f(x) − f(y)) ≤ √p·(f(1) − f(p)).
//!
//! Positive powers carry a closed-form sufficiency threshold on p; for other
//! functions the condition is probed on geometric grids. Grid results certify
//! only at grid resolution and are labelled "grid-certified", never "proved".

use crate::entropy::ScalarFunction;
use crate::error::{Error, Result};

/// Absolute slack on the grid comparison; genuine violations are O(1).
const VIOLATION_TOL: f64 = 1e-12;
/// Smallest grid point for the geometric (x, y) grids.
const GRID_MIN: f64 = 1e-6;

/// Closed-form threshold for positive powers.
#[derive(Debug, Clone, Copy)]
pub struct GammaThreshold {
    /// γ(β) = β + 1 − √((β+1)² − 1), in (0, 1).
    pub gamma: f64,
    /// p_max = γ(β)^{1/β}: the condition is proved for p below this.
    pub p_max: f64,
}

/// γ(β) and the induced p-threshold for f(t) = t^β, β > 0.
pub fn gamma_threshold(beta: f64) -> Result<GammaThreshold> {
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "threshold defined for positive exponents, got {beta}"
        )));
    }
    let b1 = beta + 1.0;
    let gamma = b1 - (b1 * b1 - 1.0).sqrt();
    Ok(GammaThreshold {
        gamma,
        p_max: gamma.powf(1.0 / beta),
    })
}

/// Certification record for negative powers.
#[derive(Debug, Clone)]
pub struct NegativePowerCertificate {
    pub certified: bool,
    pub note: String,
}

/// Reports the closed-form certification claim for f(t) = −t^β, β < 0: all
/// p in (0, 1), with the argument split at β = −2 (the threshold quadratic
/// q² − 2(β+1)q + 1 has no admissible root above 1 for −2 ≤ β < 0, and its
/// larger root is negative for β < −2).
pub fn negative_power_certified(beta: f64) -> Result<NegativePowerCertificate> {
    if beta >= 0.0 || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "negative-power certificate defined for beta < 0, got {beta}"
        )));
    }
    let note = if beta >= -2.0 {
        "all p: the threshold quadratic has negative discriminant for -2 <= beta < 0".to_string()
    } else {
        "all p: the larger root of the threshold quadratic is negative for beta < -2".to_string()
    };
    Ok(NegativePowerCertificate {
        certified: true,
        note,
    })
}

/// Turning point t₀ of h_β(t) = t·(t + 1 − q)⁻¹·|1 − t|^{2β}.
///
/// For β > 0 and q in (0, 1), h_β increases on [0, t₀] and decreases after;
/// for β < 0 and q > 1 the root sits in (1, ∞).
pub fn turning_point(beta: f64, q: f64) -> Result<f64> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Domain("exponent must be nonzero".into()));
    }
    if beta > 0.0 {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::Domain(format!(
                "for positive exponents q must lie in (0,1), got {q}"
            )));
        }
        let b = 2.0 * beta;
        let disc = (b + 1.0) * (b + 1.0) * (1.0 - q) * (1.0 - q) + 4.0 * b * (1.0 - q);
        Ok((disc.sqrt() - (b + 1.0) * (1.0 - q)) / (2.0 * b))
    } else {
        if q <= 1.0 {
            return Err(Error::Domain(format!(
                "for negative exponents q must exceed 1, got {q}"
            )));
        }
        let b = 2.0 * beta;
        let disc = (b + 1.0) * (b + 1.0) * (q - 1.0) * (q - 1.0) - 4.0 * b * (q - 1.0);
        Ok((disc.sqrt() + (b + 1.0) * (q - 1.0)) / (-2.0 * b))
    }
}

/// A grid pair where the growth condition failed.
#[derive(Debug, Clone, Copy)]
pub struct AssumptionViolation {
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Grid-check report; `certified` holds exactly when no violations were
/// found, at grid resolution only.
#[derive(Debug, Clone)]
pub struct AssumptionReport {
    pub function: String,
    pub p: f64,
    pub grid_n: usize,
    pub violations: Vec<AssumptionViolation>,
    pub certified: bool,
}

/// Checks the growth condition on a geometric grid of (x, y) pairs with
/// `grid_n` points per axis between 1e−6 and 1: for every pair with
/// 0 < y < x ≤ 1 and f(x) − f(y) > f(1) − f(p), the comparison
/// √(y/x)·(f(x) − f(y)) ≤ √p·(f(1) − f(p)) + 1e−12 must hold.
pub fn check_assumption(f: &ScalarFunction, p: f64, grid_n: usize) -> Result<AssumptionReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0,1), got {p}")));
    }
    if grid_n < 100 {
        return Err(Error::Parameter(format!(
            "grid must have at least 100 points per axis, got {grid_n}"
        )));
    }
    let grid = geometric_grid(GRID_MIN, 1.0, grid_n);
    let values: Result<Vec<f64>> = grid.iter().map(|&t| f.eval(t)).collect();
    let values = values?;
    let f1 = f.eval(1.0)?;
    let fp = f.eval(p)?;
    let threshold = f1 - fp;
    let rhs = p.sqrt() * threshold;

    let mut violations = Vec::new();
    for i in 0..grid.len() {
        for j in 0..i {
            let (x, fx) = (grid[i], values[i]);
            let (y, fy) = (grid[j], values[j]);
            let gap = fx - fy;
            if gap > threshold {
                let lhs = (y / x).sqrt() * gap;
                if lhs > rhs + VIOLATION_TOL {
                    violations.push(AssumptionViolation { x, y, lhs, rhs });
                }
            }
        }
    }
    let certified = violations.is_empty();
    Ok(AssumptionReport {
        function: f.name(),
        p,
        grid_n,
        violations,
        certified,
    })
}

/// Report of the sufficient monotone-dominance check on
/// g(y) = f̊(f(y) + f(1) − f(p))^{−1/2}·√y·(f(1) − f(y)).
#[derive(Debug, Clone)]
pub struct GMonotoneReport {
    pub function: String,
    pub p: f64,
    /// g(p) = √p·(f(1) − f(p)).
    pub g_at_p: f64,
    /// Largest g(y) over the y grid in (0, p).
    pub max_g: f64,
    /// The y attaining `max_g`.
    pub argmax_y: f64,
    /// Whether g(y) ≤ g(p) held throughout the grid.
    pub dominated: bool,
    /// Whether g was non-decreasing along the grid.
    pub monotone_increasing: bool,
}

/// Evaluates g on a geometric y grid in (0, p) and reports whether
/// g(y) ≤ g(p) throughout — the sufficient condition for the growth bound.
/// Requires the function's inverse.
pub fn g_monotone_check(f: &ScalarFunction, p: f64, grid_n: usize) -> Result<GMonotoneReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0,1), got {p}")));
    }
    if !f.has_inverse() {
        return Err(Error::Domain(format!(
            "{} has no inverse; the monotone-dominance check needs one",
            f.name()
        )));
    }
    if grid_n < 2 {
        return Err(Error::Parameter("grid must have at least 2 points".into()));
    }
    let f1 = f.eval(1.0)?;
    let fp = f.eval(p)?;
    let g_at_p = p.sqrt() * (f1 - fp);

    let grid = geometric_grid(GRID_MIN.min(p / 2.0), p, grid_n);
    let mut max_g = f64::NEG_INFINITY;
    let mut argmax_y = grid[0];
    let mut monotone_increasing = true;
    let mut prev = f64::NEG_INFINITY;
    for &y in &grid {
        let arg = f.eval(y)? + f1 - fp;
        let x_hat = f.inverse(arg)?;
        if x_hat <= 0.0 {
            return Err(Error::Domain(format!(
                "inverse returned non-positive pivot {x_hat:.3e} at y = {y:.3e}"
            )));
        }
        let g = x_hat.powf(-0.5) * y.sqrt() * (f1 - f.eval(y)?);
        if g > max_g {
            max_g = g;
            argmax_y = y;
        }
        if g < prev - 1e-12 {
            monotone_increasing = false;
        }
        prev = g;
    }
    Ok(GMonotoneReport {
        function: f.name(),
        p,
        g_at_p,
        max_g,
        argmax_y,
        dominated: max_g <= g_at_p + VIOLATION_TOL,
        monotone_increasing,
    })
}

/// How a certification decision was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificationMethod {
    /// Closed-form threshold (powers).
    ClosedForm,
    /// Geometric grid search (logarithm, custom functions).
    GridCertified,
}

/// Licensing decision for a (function, p) pair.
#[derive(Debug, Clone)]
pub struct Certification {
    pub certified: bool,
    pub method: CertificationMethod,
    pub note: String,
}

/// Grid size used when licensing falls back to the grid check.
const LICENSE_GRID: usize = 300;

/// Decides whether the growth condition is certified for `f` at `p`:
/// positive powers use the closed-form threshold, negative powers the
/// closed-form all-p claim, everything else a 300-point grid check.
pub fn certify(f: &ScalarFunction, p: f64) -> Result<Certification> {
    if let Some(beta) = f.power_exponent() {
        if beta > 0.0 {
            let gt = gamma_threshold(beta)?;
            let certified = p < gt.p_max;
            return Ok(Certification {
                certified,
                method: CertificationMethod::ClosedForm,
                note: format!(
                    "p = {p:.4} {} threshold {:.4}",
                    if certified { "below" } else { "at or above" },
                    gt.p_max
                ),
            });
        }
        let cert = negative_power_certified(beta)?;
        return Ok(Certification {
            certified: cert.certified,
            method: CertificationMethod::ClosedForm,
            note: cert.note,
        });
    }
    let report = check_assumption(f, p, LICENSE_GRID)?;
    Ok(Certification {
        certified: report.certified,
        method: CertificationMethod::GridCertified,
        note: if report.certified {
            format!("grid-certified with {LICENSE_GRID} points per axis")
        } else {
            format!(
                "grid found {} violations; worst lhs {:.6} vs rhs {:.6}",
                report.violations.len(),
                report
                    .violations
                    .iter()
                    .map(|v| v.lhs)
                    .fold(f64::NEG_INFINITY, f64::max),
                report.violations.first().map(|v| v.rhs).unwrap_or(0.0)
            )
        },
    })
}

fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (ln_lo + (ln_hi - ln_lo) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
