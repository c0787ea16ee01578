//! Entropy functionals and the scalar function family used inside
//! commutators.
//!
//! A [`ScalarFunction`] is a monotonically increasing function on (0, 1]
//! together with its antiderivative and, when available, its inverse. These
//! are the functions the commutator bounds are stated for. An
//! [`EntropySpec`] is an entropy functional; every spec induces a commutator
//! kernel f with F′ = f + const, which drives the analytic rate formulas.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::DensityOperator;

/// Singularity floor for functions undefined at 0 (logarithm, negative
/// powers). Matrix functions reject spectra below this.
pub const SPECTRAL_FLOOR: f64 = 1e-12;

/// Grid size for the constructor-time monotonicity check.
const MONOTONICITY_GRID: usize = 1000;

/// Shared scalar map used for custom functions and entropy kernels.
#[derive(Clone)]
pub struct SpectralFn(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl SpectralFn {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

impl fmt::Debug for SpectralFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SpectralFn(..)")
    }
}

#[derive(Debug, Clone)]
enum FunctionKind {
    /// f(t) = ln t.
    Log,
    /// f(t) = sign(β)·t^β for β ≠ 0; increasing for either sign of β.
    SignedPower { beta: f64 },
    /// User-supplied function with explicit antiderivative and optional
    /// inverse.
    Custom {
        name: String,
        f: SpectralFn,
        antiderivative: Option<SpectralFn>,
        inverse: Option<SpectralFn>,
        domain_min: f64,
    },
}

/// Monotonically increasing scalar function with antiderivative and optional
/// inverse, certified increasing on a 1000-point grid at construction.
#[derive(Debug, Clone)]
pub struct ScalarFunction {
    kind: FunctionKind,
}

impl ScalarFunction {
    pub fn log() -> Self {
        Self {
            kind: FunctionKind::Log,
        }
    }

    pub fn signed_power(beta: f64) -> Result<Self> {
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::Domain("power exponent must be nonzero".into()));
        }
        Ok(Self {
            kind: FunctionKind::SignedPower { beta },
        })
    }

    /// Builds a custom function; the antiderivative must be supplied
    /// explicitly when bound evaluation needs it (no quadrature is
    /// performed). Fails when the evaluator is not increasing on the grid.
    pub fn custom(
        name: impl Into<String>,
        f: SpectralFn,
        antiderivative: Option<SpectralFn>,
        inverse: Option<SpectralFn>,
        domain_min: f64,
    ) -> Result<Self> {
        let candidate = Self {
            kind: FunctionKind::Custom {
                name: name.into(),
                f,
                antiderivative,
                inverse,
                domain_min,
            },
        };
        candidate.check_monotone()?;
        Ok(candidate)
    }

    /// Parses the CLI grammar: `log` or `power:<beta>`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("log") {
            return Ok(Self::log());
        }
        if let Some(rest) = t.strip_prefix("power:") {
            let beta: f64 = rest
                .parse()
                .map_err(|_| Error::Parameter(format!("bad power exponent {rest:?}")))?;
            return Self::signed_power(beta);
        }
        Err(Error::Parameter(format!(
            "unknown function {t:?}; expected `log` or `power:<beta>`"
        )))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FunctionKind::Log => "log".into(),
            FunctionKind::SignedPower { beta } => format!("power:{beta}"),
            FunctionKind::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    /// Exponent β for signed powers, if this function is one.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            FunctionKind::SignedPower { beta } => Some(beta),
            _ => None,
        }
    }

    pub fn is_log(&self) -> bool {
        matches!(self.kind, FunctionKind::Log)
    }

    /// Smallest admissible operator eigenvalue when this function is applied
    /// to a spectrum: the 1e−12 floor for singular functions, 0 otherwise.
    pub fn spectral_floor(&self) -> f64 {
        match self.kind {
            FunctionKind::Log => SPECTRAL_FLOOR,
            FunctionKind::SignedPower { beta } => {
                if beta < 0.0 {
                    SPECTRAL_FLOOR
                } else {
                    0.0
                }
            }
            FunctionKind::Custom { domain_min, .. } => domain_min,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match &self.kind {
            FunctionKind::Log => {
                if t < SPECTRAL_FLOOR {
                    Err(Error::Domain(format!("log undefined at {t:.3e}")))
                } else {
                    Ok(t.ln())
                }
            }
            FunctionKind::SignedPower { beta } => {
                if *beta < 0.0 && t < SPECTRAL_FLOOR {
                    return Err(Error::Domain(format!(
                        "negative power undefined at {t:.3e}"
                    )));
                }
                if t < 0.0 {
                    return Err(Error::Domain(format!("power undefined at {t:.3e}")));
                }
                Ok(beta.signum() * t.powf(*beta))
            }
            FunctionKind::Custom { f, domain_min, .. } => {
                if t < *domain_min {
                    return Err(Error::Domain(format!(
                        "custom function undefined at {t:.3e}"
                    )));
                }
                Ok(f.eval(t))
            }
        }
    }

    pub fn has_antiderivative(&self) -> bool {
        match &self.kind {
            FunctionKind::Log => true,
            FunctionKind::SignedPower { beta } => *beta > -1.0,
            FunctionKind::Custom { antiderivative, .. } => antiderivative.is_some(),
        }
    }

    /// F(q) = ∫₀^q f(t) dt, normalized so F(0) = 0. Fails when the integral
    /// diverges at 0 (powers β ≤ −1) or no antiderivative was supplied.
    pub fn antiderivative(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain(format!(
                "antiderivative evaluated outside [0,1]: {q}"
            )));
        }
        match &self.kind {
            FunctionKind::Log => {
                // ∫₀^q ln t dt = q ln q − q, continuously extended to 0.
                if q == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(q * q.ln() - q)
                }
            }
            FunctionKind::SignedPower { beta } => {
                if *beta <= -1.0 {
                    return Err(Error::Domain(format!(
                        "antiderivative of t^{beta} diverges at 0"
                    )));
                }
                Ok(beta.signum() * q.powf(beta + 1.0) / (beta + 1.0))
            }
            FunctionKind::Custom { antiderivative, .. } => antiderivative
                .as_ref()
                .map(|af| af.eval(q))
                .ok_or_else(|| {
                    Error::Domain("custom function has no antiderivative".into())
                }),
        }
    }

    pub fn has_inverse(&self) -> bool {
        match &self.kind {
            FunctionKind::Log | FunctionKind::SignedPower { .. } => true,
            FunctionKind::Custom { inverse, .. } => inverse.is_some(),
        }
    }

    /// Inverse function f̊ with f̊(f(t)) = t on the domain.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        match &self.kind {
            FunctionKind::Log => Ok(s.exp()),
            FunctionKind::SignedPower { beta } => {
                if *beta > 0.0 {
                    if s < 0.0 {
                        return Err(Error::Domain(format!(
                            "inverse of t^{beta} undefined at {s}"
                        )));
                    }
                    Ok(s.powf(1.0 / beta))
                } else {
                    // f(t) = −t^β maps (0, 1] onto [−1, −∞)·sign; invert via −s.
                    if s >= 0.0 {
                        return Err(Error::Domain(format!(
                            "inverse of -t^{beta} undefined at {s}"
                        )));
                    }
                    Ok((-s).powf(1.0 / beta))
                }
            }
            FunctionKind::Custom { inverse, .. } => inverse
                .as_ref()
                .map(|inv| inv.eval(s))
                .ok_or_else(|| Error::Domain("custom function has no inverse".into())),
        }
    }

    fn check_monotone(&self) -> Result<()> {
        let lo = self.spectral_floor().max(1e-6);
        let hi = 1.0;
        let mut prev = self.eval(lo)?;
        for k in 1..MONOTONICITY_GRID {
            let t = lo + (hi - lo) * k as f64 / (MONOTONICITY_GRID - 1) as f64;
            let v = self.eval(t)?;
            if v < prev - 1e-12 {
                return Err(Error::Invariant(format!(
                    "function {} is not monotonically increasing near t = {t:.6}",
                    self.name()
                )));
            }
            prev = v;
        }
        Ok(())
    }
}

/// Ingredients for the analytic rate of an entropy spec: the prefactor k₁,
/// the commutator kernel f (with F′ = f + const), the smallest admissible
/// eigenvalue for the kernel, and the normalizer F for log-trace forms.
pub struct RateParts {
    pub k1: f64,
    pub kernel: SpectralFn,
    pub floor: f64,
    pub normalizer: Option<SpectralFn>,
}

/// Entropy functional.
#[derive(Debug, Clone)]
pub enum EntropySpec {
    /// S(ρ) = −Tr ρ ln ρ.
    VonNeumann,
    /// S_α(ρ) = (1−α)⁻¹ ln Tr ρ^α, α > 0, α ≠ 1.
    Renyi(f64),
    /// S_q(ρ) = (q−1)⁻¹ (1 − Tr ρ^q), q > 0, q ≠ 1.
    Tsallis(f64),
    /// S(ρ) = k₁·Tr F(ρ) + k₂ with F′ = f + const.
    TraceForm {
        k1: f64,
        k2: f64,
        big_f: SpectralFn,
        kernel: SpectralFn,
        kernel_floor: f64,
        label: String,
    },
    /// S(ρ) = k₁·ln Tr F(ρ) + k₂ with F′ = f + const.
    LogTraceForm {
        k1: f64,
        k2: f64,
        big_f: SpectralFn,
        kernel: SpectralFn,
        kernel_floor: f64,
        label: String,
    },
}

impl EntropySpec {
    pub fn renyi(alpha: f64) -> Result<Self> {
        if alpha <= 0.0 || alpha == 1.0 || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "Renyi order must be positive and differ from 1, got {alpha}"
            )));
        }
        Ok(Self::Renyi(alpha))
    }

    pub fn tsallis(q: f64) -> Result<Self> {
        if q <= 0.0 || q == 1.0 || !q.is_finite() {
            return Err(Error::Domain(format!(
                "Tsallis order must be positive and differ from 1, got {q}"
            )));
        }
        Ok(Self::Tsallis(q))
    }

    pub fn trace_form(
        label: impl Into<String>,
        k1: f64,
        k2: f64,
        big_f: SpectralFn,
        kernel: SpectralFn,
        kernel_floor: f64,
    ) -> Self {
        Self::TraceForm {
            k1,
            k2,
            big_f,
            kernel,
            kernel_floor,
            label: label.into(),
        }
    }

    pub fn log_trace_form(
        label: impl Into<String>,
        k1: f64,
        k2: f64,
        big_f: SpectralFn,
        kernel: SpectralFn,
        kernel_floor: f64,
    ) -> Self {
        Self::LogTraceForm {
            k1,
            k2,
            big_f,
            kernel,
            kernel_floor,
            label: label.into(),
        }
    }

    /// Parses `von-neumann` (or `vn`), `renyi:<alpha>`, `tsallis:<q>`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("von-neumann") || t.eq_ignore_ascii_case("vn") {
            return Ok(Self::VonNeumann);
        }
        if let Some(rest) = t.strip_prefix("renyi:") {
            let alpha: f64 = rest
                .parse()
                .map_err(|_| Error::Parameter(format!("bad Renyi order {rest:?}")))?;
            return Self::renyi(alpha);
        }
        if let Some(rest) = t.strip_prefix("tsallis:") {
            let q: f64 = rest
                .parse()
                .map_err(|_| Error::Parameter(format!("bad Tsallis order {rest:?}")))?;
            return Self::tsallis(q);
        }
        Err(Error::Parameter(format!(
            "unknown entropy spec {t:?}; expected `von-neumann`, `renyi:<alpha>` or `tsallis:<q>`"
        )))
    }

    pub fn name(&self) -> String {
        match self {
            Self::VonNeumann => "von-neumann".into(),
            Self::Renyi(a) => format!("renyi:{a}"),
            Self::Tsallis(q) => format!("tsallis:{q}"),
            Self::TraceForm { label, .. } => format!("trace-form:{label}"),
            Self::LogTraceForm { label, .. } => format!("log-trace-form:{label}"),
        }
    }

    /// Evaluates the entropy on a density operator's spectrum. Zero
    /// eigenvalues follow the 0·ln 0 = 0 and 0^c = 0 conventions; eigenvalues
    /// within the positivity tolerance of zero count as exact zeros, since
    /// fractional powers would otherwise amplify roundoff (√1e−16 = 1e−8) far
    /// beyond the certified accuracy.
    pub fn evaluate(&self, rho: &DensityOperator) -> Result<f64> {
        let eigs: Vec<f64> = rho
            .eigenvalues()
            .iter()
            .map(|&v| if v <= SPECTRAL_FLOOR { 0.0 } else { v })
            .collect();
        match self {
            Self::VonNeumann => Ok(eigs
                .iter()
                .filter(|&&v| v > 0.0)
                .map(|&v| -v * v.ln())
                .sum()),
            Self::Renyi(alpha) => {
                let s: f64 = eigs
                    .iter()
                    .filter(|&&v| v > 0.0)
                    .map(|&v| v.powf(*alpha))
                    .sum();
                if s <= 0.0 {
                    return Err(Error::Domain("Tr(rho^alpha) vanished".into()));
                }
                Ok(s.ln() / (1.0 - alpha))
            }
            Self::Tsallis(q) => {
                let s: f64 = eigs
                    .iter()
                    .filter(|&&v| v > 0.0)
                    .map(|&v| v.powf(*q))
                    .sum();
                Ok((1.0 - s) / (q - 1.0))
            }
            Self::TraceForm { k1, k2, big_f, .. } => {
                let s: f64 = eigs.iter().map(|&v| big_f.eval(v)).sum();
                Ok(k1 * s + k2)
            }
            Self::LogTraceForm { k1, k2, big_f, .. } => {
                let s: f64 = eigs.iter().map(|&v| big_f.eval(v)).sum();
                if s <= 0.0 {
                    return Err(Error::Domain(format!(
                        "Tr F(rho) = {s} is not positive; log-trace form undefined"
                    )));
                }
                Ok(k1 * s.ln() + k2)
            }
        }
    }

    /// Prefactor, commutator kernel, eigenvalue floor, and normalizer for
    /// the analytic rate of this spec.
    pub fn rate_parts(&self) -> RateParts {
        match self {
            Self::VonNeumann => RateParts {
                k1: -1.0,
                kernel: SpectralFn::new(f64::ln),
                floor: SPECTRAL_FLOOR,
                normalizer: None,
            },
            Self::Renyi(alpha) => {
                let a = *alpha;
                RateParts {
                    k1: 1.0 / (1.0 - a),
                    kernel: SpectralFn::new(move |x| a * x.powf(a - 1.0)),
                    floor: if a < 1.0 { SPECTRAL_FLOOR } else { 0.0 },
                    normalizer: Some(SpectralFn::new(move |x| x.powf(a))),
                }
            }
            Self::Tsallis(q) => {
                let q = *q;
                RateParts {
                    k1: 1.0 / (1.0 - q),
                    kernel: SpectralFn::new(move |x| q * x.powf(q - 1.0)),
                    floor: if q < 1.0 { SPECTRAL_FLOOR } else { 0.0 },
                    normalizer: None,
                }
            }
            Self::TraceForm {
                k1,
                kernel,
                kernel_floor,
                ..
            } => RateParts {
                k1: *k1,
                kernel: kernel.clone(),
                floor: *kernel_floor,
                normalizer: None,
            },
            Self::LogTraceForm {
                k1,
                big_f,
                kernel,
                kernel_floor,
                ..
            } => RateParts {
                k1: *k1,
                kernel: kernel.clone(),
                floor: *kernel_floor,
                normalizer: Some(big_f.clone()),
            },
        }
    }
}

/// Evaluates an entropy functional on a density operator.
pub fn entropy_eval(rho: &DensityOperator, spec: &EntropySpec) -> Result<f64> {
    spec.evaluate(rho)
}

/// Binary entropy S(p) = −p ln p − (1−p) ln(1−p) for p in (0, 1).
pub fn binary_entropy(p: f64) -> Result<f64> {
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::Domain(format!(
            "binary entropy defined on (0,1), got {p}"
        )));
    }
    Ok(-p * p.ln() - (1.0 - p) * (1.0 - p).ln())
}

/// Deviations of the Rényi and Tsallis entropies at orders 1 ± ε from the
/// von Neumann entropy; both families converge to it as the order tends
/// to 1, so each deviation is O(ε) for full-rank states.
#[derive(Debug, Clone)]
pub struct LimitReport {
    pub renyi_below: f64,
    pub renyi_above: f64,
    pub tsallis_below: f64,
    pub tsallis_above: f64,
}

impl LimitReport {
    pub fn max(&self) -> f64 {
        self.renyi_below
            .max(self.renyi_above)
            .max(self.tsallis_below)
            .max(self.tsallis_above)
    }
}

/// Compares S_{1±ε} (Rényi) and S_{q=1±ε} (Tsallis) against the von Neumann
/// entropy on a full-rank state.
pub fn limit_consistency(rho: &DensityOperator, eps: f64) -> Result<LimitReport> {
    if !(0.0..=1e-3).contains(&eps) || eps == 0.0 {
        return Err(Error::Parameter(format!(
            "epsilon must lie in (0, 1e-3], got {eps}"
        )));
    }
    if rho.min_eigenvalue() <= SPECTRAL_FLOOR {
        return Err(Error::Domain(
            "limit consistency requires a full-rank state".into(),
        ));
    }
    let s = entropy_eval(rho, &EntropySpec::VonNeumann)?;
    let rb = entropy_eval(rho, &EntropySpec::renyi(1.0 - eps)?)?;
    let ra = entropy_eval(rho, &EntropySpec::renyi(1.0 + eps)?)?;
    let tb = entropy_eval(rho, &EntropySpec::tsallis(1.0 - eps)?)?;
    let ta = entropy_eval(rho, &EntropySpec::tsallis(1.0 + eps)?)?;
    Ok(LimitReport {
        renyi_below: (rb - s).abs(),
        renyi_above: (ra - s).abs(),
        tsallis_below: (tb - s).abs(),
        tsallis_above: (ta - s).abs(),
    })
}
