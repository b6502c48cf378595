//! Average secrecy throughput `T = (B/N)(1 - ε̄)` for a single-antenna
//! access point.
//!
//! Every estimator replaces the conditional error probability by its
//! linear ramp around `x₀(γ_E)`. They differ in how the outer expectation
//! over `γ_E ~ Gamma(K_E, ρ_E)` is carried out:
//!
//! | [`Method`] | outer expectation |
//! |---|---|
//! | `RampIntegral` | adaptive quadrature |
//! | `SplitQuadrature` | Chebyshev rule on `[0, M₁]`, closed-form tail |
//! | `ClosedForm` | closed-form tail from `0` |
//! | `HighSnr` | closed form with `P → ∞` |
//! | `InfiniteBlocklength` | `N → ∞` limit |

use std::fmt;
use std::str::FromStr;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::fbl::CodingParams;
use crate::scalar::{count, lit, ln_pow, Scalar};
use crate::specfun::{gamma_q, integrate, ln_gamma, ln_gamma_q, ChebyshevNodes, QuadOptions};

/// Gamma tail mass left out of the outer integral of the ramp estimator.
const TAIL_MASS: f64 = 1e-10;

/// Split point `M₁` and Chebyshev node count `M₂` of the split quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub m1: T,
    pub m2: usize,
}

impl<T: Scalar> QuadratureConfig<T> {
    pub fn new(m1: T, m2: usize) -> Result<Self> {
        let q = Self { m1, m2 };
        q.validate()?;
        Ok(q)
    }

    /// `M₁ = 10`, `M₂ = 20`.
    pub fn single_antenna_default() -> Self {
        Self { m1: lit(10.0), m2: 20 }
    }

    /// `M₁ = 30`, `M₂ = 20`.
    pub fn multi_antenna_default() -> Self {
        Self { m1: lit(30.0), m2: 20 }
    }

    pub fn for_config(cfg: &SystemConfig<T>) -> Self {
        if cfg.is_single_antenna() {
            Self::single_antenna_default()
        } else {
            Self::multi_antenna_default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m1 >= T::zero()) || !self.m1.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "split point M₁ = {} must be finite and nonnegative",
                self.m1
            )));
        }
        if self.m2 == 0 {
            return Err(Error::InvalidConfig(
                "Chebyshev node count M₂ must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Result<ChebyshevNodes<T>> {
        ChebyshevNodes::new(self.m2)
    }
}

/// Which estimator produced a [`ThroughputEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Ramp approximation integrated numerically against the `γ_E` density.
    RampIntegral,
    /// Chebyshev quadrature below `M₁` plus a closed-form tail.
    SplitQuadrature,
    /// The closed-form tail applied from `γ_E = 0`.
    ClosedForm,
    /// Closed form in the limit of infinite transmit power.
    HighSnr,
    /// `(B/N)·P{γ_A > γ_E}`.
    InfiniteBlocklength,
    /// Multi-antenna split quadrature under MRT with artificial noise.
    MultiAntenna,
    /// Monte Carlo average of the exact error probability.
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::RampIntegral,
        Method::SplitQuadrature,
        Method::ClosedForm,
        Method::HighSnr,
        Method::InfiniteBlocklength,
        Method::MultiAntenna,
        Method::MonteCarlo,
    ];

    /// Stable short name used by the CLI and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Method::RampIntegral => "theorem1",
            Method::SplitQuadrature => "prop1",
            Method::ClosedForm => "prop2",
            Method::HighSnr => "high_snr",
            Method::InfiniteBlocklength => "infinite_N",
            Method::MultiAntenna => "theorem3",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                let names: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
                Error::InvalidConfig(format!("unknown method `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

/// Conditions under which the closed forms are known to lose accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValidityWarning<T> {
    /// `|k·ρ_A| ≤ 1`: the ramp is wide relative to the actuator SNR scale.
    ShallowRamp { k_rho_a: T },
    /// Mean eavesdropper SNR below 1 (0 dB); the tail approximation
    /// `V_E ≈ 1` is poor.
    WeakEavesdropper { mean_eve_snr: T },
}

impl<T: Scalar> fmt::Display for ValidityWarning<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidityWarning::ShallowRamp { k_rho_a } => write!(f, "|k·ρ_A| = {} ≤ 1", k_rho_a.abs()),
            ValidityWarning::WeakEavesdropper { mean_eve_snr } => {
                write!(f, "mean eavesdropper SNR {mean_eve_snr} < 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics<T> {
    /// Ramp slope times the actuator SNR scale, at `γ_E = K_E·ρ_E`.
    pub k_rho_a: T,
    /// `K_E·ρ_E`.
    pub mean_eve_snr: T,
    pub warnings: Vec<ValidityWarning<T>>,
}

impl<T: Scalar> Diagnostics<T> {
    pub fn for_config(cfg: &SystemConfig<T>) -> Result<Self> {
        let params = CodingParams::from_config(cfg)?;
        let mean_eve_snr = cfg.mean_eve_snr();
        let lp = params.linearize(mean_eve_snr)?;
        let k_rho_a = lp.slope * cfg.power_split * cfg.snr_actuator;
        let mut warnings = Vec::new();
        if k_rho_a.abs() <= T::one() {
            warnings.push(ValidityWarning::ShallowRamp { k_rho_a });
        }
        if mean_eve_snr < T::one() {
            warnings.push(ValidityWarning::WeakEavesdropper { mean_eve_snr });
        }
        Ok(Self {
            k_rho_a,
            mean_eve_snr,
            warnings,
        })
    }
}

/// A throughput value in bits per channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputEstimate<T> {
    pub bpcu: T,
    pub method: Method,
    pub diagnostics: Diagnostics<T>,
}

impl<T: Scalar> ThroughputEstimate<T> {
    /// Clamps `value` into `[0, B/N]` and attaches diagnostics for `cfg`.
    pub fn new(cfg: &SystemConfig<T>, value: T, method: Method) -> Result<Self> {
        let bpcu = value.max(T::zero()).min(cfg.rate());
        Ok(Self {
            bpcu,
            method,
            diagnostics: Diagnostics::for_config(cfg)?,
        })
    }

    /// `1 - T·N/B`.
    pub fn average_error(&self, cfg: &SystemConfig<T>) -> T {
        T::one() - self.bpcu / cfg.rate()
    }
}

fn require_single_antenna<T: Scalar>(cfg: &SystemConfig<T>, what: &str) -> Result<()> {
    cfg.validate()?;
    if !cfg.is_single_antenna() {
        return Err(Error::Misuse(format!(
            "{what} assumes a single-antenna access point, got K_A = {}",
            cfg.antennas_ap
        )));
    }
    Ok(())
}

/// Success probability `P{γ_A > ramp}` given `γ_E`, under the ramp
/// approximation with exponential `γ_A`: `e^{-x₀/ρ_A}·sinh(u)/u` with
/// `u = 1/(2|k|ρ_A)`, capped at 1.
pub(crate) fn ramp_success<T: Scalar>(params: &CodingParams<T>, snr_actuator: T, gamma_e: T) -> Result<T> {
    let lp = params.linearize(gamma_e)?;
    let u = lit::<T>(0.5) / (lp.slope.abs() * snr_actuator);
    let shape = if u < lit(1e-4) {
        T::one() + u * u / lit(6.0)
    } else {
        u.sinh() / u
    };
    Ok(((-lp.x0 / snr_actuator).exp() * shape).min(T::one()))
}

/// `ln` of the `Gamma(K_E, ρ_E)` density.
fn ln_gamma_pdf<T: Scalar>(y: T, shape: T, scale: T) -> T {
    ln_pow(y, shape - T::one()) - y / scale - shape * scale.ln() - ln_gamma(shape)
}

/// Smallest `c` (to within bisection tolerance) with `Q(K_E, c/ρ_E) < mass`.
fn gamma_cutoff<T: Scalar>(shape: T, scale: T, mass: T) -> Result<T> {
    let mut hi = shape.max(T::one());
    while gamma_q(shape, hi)? >= mass {
        hi = hi + hi;
    }
    let mut lo = T::zero();
    for _ in 0..200 {
        let mid = lit::<T>(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gamma_q(shape, mid)? >= mass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi * scale)
}

/// Ramp estimator: the conditional success probability integrated
/// numerically against the `γ_E` density up to the `1 - 10⁻¹⁰` quantile.
pub fn throughput_ramp_integral<T: Scalar>(cfg: &SystemConfig<T>) -> Result<ThroughputEstimate<T>> {
    require_single_antenna(cfg, "ramp-integral throughput")?;
    let params = CodingParams::from_config(cfg)?;
    let shape: T = count(cfg.antennas_eve as u64);
    let scale = cfg.snr_eve;
    let cutoff = gamma_cutoff(shape, scale, lit::<T>(TAIL_MASS).max(T::epsilon()))?;
    let opts = QuadOptions::default().with_abs_tol(T::epsilon());
    // the ramp is well defined for every γ_E ≥ 0 since x₀ > 0 under δ < 1/2
    let integrand = |y: T| -> T {
        match ramp_success(&params, cfg.snr_actuator, y) {
            Ok(s) => s * ln_gamma_pdf(y, shape, scale).exp(),
            Err(_) => T::nan(),
        }
    };
    let success = integrate(integrand, T::zero(), cutoff, &opts)?.value;
    ThroughputEstimate::new(cfg, cfg.rate() * success, Method::RampIntegral)
}

/// `ln` of the closed-form success mass beyond `γ_E = M₁`, normalized by
/// `ρ_E^{K_E}Γ(K_E)`:
/// `-K_E ln(ρ_Eϖ₂) - (ϖ₁-1)/ρ_A + ln Q(K_E, ϖ₂M₁)`.
pub(crate) fn ln_tail_success<T: Scalar>(params: &CodingParams<T>, cfg: &SystemConfig<T>, m1: T) -> Result<T> {
    let shape: T = count(cfg.antennas_eve as u64);
    let scale1 = params.threshold_scale();
    let rate2 = scale1 / cfg.snr_actuator + cfg.snr_eve.recip();
    let ln_ratio = (scale1 * cfg.snr_eve / cfg.snr_actuator).ln_1p();
    // Q(K_E, 0) = 1 also when ϖ₂ overflows at tiny blocklengths
    let ln_upper = if m1 == T::zero() {
        T::zero()
    } else {
        ln_gamma_q(shape, rate2 * m1)?
    };
    Ok(-shape * ln_ratio - params.threshold_scale_m1() / cfg.snr_actuator + ln_upper)
}

/// Closed-form average success probability `1 - ε̄` at a possibly
/// non-integer blocklength.
pub(crate) fn closed_form_success<T: Scalar>(params: &CodingParams<T>, cfg: &SystemConfig<T>) -> Result<T> {
    Ok(ln_tail_success(params, cfg, T::zero())?.exp())
}

/// Split-quadrature estimator: Chebyshev rule on `[0, M₁]` for the
/// integrand `z^{K_E-1} e^{-x₀(z)/ρ_A - z/ρ_E}`, closed-form tail beyond.
pub fn throughput_split_quadrature<T: Scalar>(
    cfg: &SystemConfig<T>,
    quad: &QuadratureConfig<T>,
) -> Result<ThroughputEstimate<T>> {
    require_single_antenna(cfg, "split-quadrature throughput")?;
    quad.validate()?;
    let params = CodingParams::from_config(cfg)?;
    let head = split_head(&params, cfg, quad)?;
    let tail = ln_tail_success(&params, cfg, quad.m1)?.exp();
    ThroughputEstimate::new(cfg, cfg.rate() * (head + tail), Method::SplitQuadrature)
}

/// Chebyshev part of the split quadrature, already normalized.
pub(crate) fn split_head<T: Scalar>(
    params: &CodingParams<T>,
    cfg: &SystemConfig<T>,
    quad: &QuadratureConfig<T>,
) -> Result<T> {
    let shape: T = count(cfg.antennas_eve as u64);
    let norm = shape * cfg.snr_eve.ln() + ln_gamma(shape);
    let nodes = quad.nodes()?;
    Ok(nodes.integrate(
        |z| {
            let x0 = params.threshold(z);
            (ln_pow(z, shape - T::one()) - x0 / cfg.snr_actuator - z / cfg.snr_eve - norm).exp()
        },
        quad.m1,
    ))
}

/// Closed-form estimator `(B/N)(ρ_Eϖ₂)^{-K_E} e^{-(ϖ₁-1)/ρ_A}`; the split
/// quadrature with `M₁ = 0`.
pub fn throughput_closed_form<T: Scalar>(cfg: &SystemConfig<T>) -> Result<ThroughputEstimate<T>> {
    require_single_antenna(cfg, "closed-form throughput")?;
    let params = CodingParams::from_config(cfg)?;
    let success = closed_form_success(&params, cfg)?;
    ThroughputEstimate::new(cfg, cfg.rate() * success, Method::ClosedForm)
}

/// Limit of the closed form as the transmit power grows with the SNR
/// ratio `ρ_E/ρ_A` fixed: `(B/N)(1 + (ρ_E/ρ_A)ϖ₁)^{-K_E}`.
pub fn throughput_high_snr<T: Scalar>(cfg: &SystemConfig<T>) -> Result<ThroughputEstimate<T>> {
    require_single_antenna(cfg, "high-SNR throughput")?;
    let params = CodingParams::from_config(cfg)?;
    let shape: T = count(cfg.antennas_eve as u64);
    let ratio = cfg.snr_eve / cfg.snr_actuator;
    let success = (-shape * (ratio * params.threshold_scale()).ln_1p()).exp();
    ThroughputEstimate::new(cfg, cfg.rate() * success, Method::HighSnr)
}

/// `(B/N)(ρ_A/(ρ_A+ρ_E))^{K_E}`.
pub fn throughput_infinite_blocklength<T: Scalar>(cfg: &SystemConfig<T>) -> Result<ThroughputEstimate<T>> {
    require_single_antenna(cfg, "infinite-blocklength throughput")?;
    ThroughputEstimate::new(
        cfg,
        cfg.rate() * infinite_blocklength_success(cfg),
        Method::InfiniteBlocklength,
    )
}

/// `P{γ_A > γ_E} = (ρ_A/(ρ_A+ρ_E))^{K_E}` for the single-antenna model.
pub(crate) fn infinite_blocklength_success<T: Scalar>(cfg: &SystemConfig<T>) -> T {
    let shape: T = count(cfg.antennas_eve as u64);
    (-shape * (cfg.snr_eve / cfg.snr_actuator).ln_1p()).exp()
}
