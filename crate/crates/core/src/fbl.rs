//! Finite-blocklength secrecy primitives: secrecy capacity, dispersion,
//! the achievable secrecy rate, the resulting decoding error probability
//! and its first-order (ramp) linearization.

use crate::config::SystemConfig;
use crate::error::{domain, Error, Result};
use crate::scalar::{count, lit, Scalar};
use crate::specfun::{gauss_q, gauss_q_inv};

/// `max(0, log₂(1+γ_A) - log₂(1+γ_E))`.
pub fn secrecy_capacity<T: Scalar>(gamma_a: T, gamma_e: T) -> T {
    ((gamma_a.ln_1p() - gamma_e.ln_1p()) * T::LOG2_E()).max(T::zero())
}

/// Channel dispersion `1 - (1+γ)^{-2}`, written as `γ(γ+2)/(1+γ)²` so small
/// SNRs keep full relative precision.
pub fn channel_dispersion<T: Scalar>(gamma: T) -> T {
    let one_plus = T::one() + gamma;
    if one_plus.is_infinite() {
        return T::one();
    }
    gamma * (gamma + lit(2.0)) / (one_plus * one_plus)
}

/// Rate, capacity and dispersions at one SNR pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint<T> {
    pub rate: T,
    pub secrecy_capacity: T,
    pub dispersion_a: T,
    pub dispersion_e: T,
}

fn check_probability<T: Scalar>(function: &'static str, name: &str, p: T) -> Result<()> {
    if p > T::zero() && p < T::one() {
        Ok(())
    } else {
        Err(domain(function, format!("{name} = {p} must lie in (0, 1)")))
    }
}

/// Achievable secrecy rate (bits per channel use) at blocklength `n`, error
/// target `eps` and leakage `delta`; zero when `γ_A ≤ γ_E`.
pub fn rate_point<T: Scalar>(n: u64, eps: T, delta: T, gamma_a: T, gamma_e: T) -> Result<RatePoint<T>> {
    check_probability("secrecy_rate", "ε", eps)?;
    check_probability("secrecy_rate", "δ", delta)?;
    if n == 0 {
        return Err(domain("secrecy_rate", "blocklength must be positive"));
    }
    let capacity = secrecy_capacity(gamma_a, gamma_e);
    let dispersion_a = channel_dispersion(gamma_a);
    let dispersion_e = channel_dispersion(gamma_e);
    let rate = if gamma_a > gamma_e {
        let n: T = count(n);
        let penalty_a = (dispersion_a / n).sqrt() * gauss_q_inv(eps)?;
        let penalty_e = (dispersion_e / n).sqrt() * gauss_q_inv(delta)?;
        (capacity - (penalty_a + penalty_e) * T::LOG2_E()).max(T::zero())
    } else {
        T::zero()
    };
    Ok(RatePoint {
        rate,
        secrecy_capacity: capacity,
        dispersion_a,
        dispersion_e,
    })
}

/// Achievable secrecy rate alone; see [`rate_point`].
pub fn secrecy_rate<T: Scalar>(n: u64, eps: T, delta: T, gamma_a: T, gamma_e: T) -> Result<T> {
    rate_point(n, eps, delta, gamma_a, gamma_e).map(|r| r.rate)
}

/// Coding parameters with the blocklength relaxed to a real number.
///
/// Caches `Q⁻¹(δ)`; everything that evaluates the error probability or
/// the decoding threshold many times goes through this type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodingParams<T> {
    pub bits: T,
    pub blocklength: T,
    pub qinv_leakage: T,
}

impl<T: Scalar> CodingParams<T> {
    /// `bits ≥ 0`, `blocklength > 0`, `leakage ∈ (0, 1/2)`.
    pub fn new(bits: T, blocklength: T, leakage: T) -> Result<Self> {
        if !(leakage > T::zero() && leakage < lit(0.5)) {
            return Err(Error::InvalidConfig(format!(
                "leakage δ = {leakage} violates δ ∈ (0, 1/2)"
            )));
        }
        if !(blocklength > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "blocklength N = {blocklength} must be positive"
            )));
        }
        if !(bits >= T::zero()) {
            return Err(Error::InvalidConfig(format!("bits B = {bits} must be nonnegative")));
        }
        Ok(Self {
            bits,
            blocklength,
            qinv_leakage: gauss_q_inv(leakage)?,
        })
    }

    pub fn from_config(cfg: &SystemConfig<T>) -> Result<Self> {
        cfg.validate()?;
        Self::new(count(cfg.bits), count(cfg.blocklength), cfg.leakage)
    }

    pub fn with_blocklength(mut self, blocklength: T) -> Self {
        self.blocklength = blocklength;
        self
    }

    /// `(B/N)·ln 2`, the packet rate in nats.
    pub fn rate_nats(&self) -> T {
        self.bits / self.blocklength * T::LN_2()
    }

    /// `√(V_E/N)·Q⁻¹(δ)`.
    pub fn leakage_penalty(&self, gamma_e: T) -> T {
        (channel_dispersion(gamma_e) / self.blocklength).sqrt() * self.qinv_leakage
    }

    /// Actuator SNR at which the conditional error probability equals 1/2:
    /// `x₀ = e^{√(V_E/N)Q⁻¹(δ) + (B/N)ln2}(1+γ_E) - 1`.
    pub fn threshold(&self, gamma_e: T) -> T {
        let s = self.leakage_penalty(gamma_e) + self.rate_nats();
        s.exp_m1() * (T::one() + gamma_e) + gamma_e
    }

    /// `dx₀/dγ_E`. The `1/√(γ(γ+2))` factor is integrable at zero; the
    /// argument is floored at 1e-30 to keep it finite.
    pub fn threshold_slope(&self, gamma_e: T) -> T {
        let y = gamma_e.max(lit(1e-30));
        let s = self.leakage_penalty(y) + self.rate_nats();
        let singular = self.qinv_leakage / (self.blocklength.sqrt() * (T::one() + y) * (y * (y + lit(2.0))).sqrt());
        s.exp() * (T::one() + singular)
    }

    /// `ln ϖ₁ = Q⁻¹(δ)/√N + (B/N)ln2`, the threshold exponent once `V_E ≈ 1`.
    pub fn ln_threshold_scale(&self) -> T {
        self.qinv_leakage / self.blocklength.sqrt() + self.rate_nats()
    }

    /// `ϖ₁`: `x₀ ≈ ϖ₁(1+γ_E) - 1` for large `γ_E`.
    pub fn threshold_scale(&self) -> T {
        self.ln_threshold_scale().exp()
    }

    /// `ϖ₁ - 1` without cancellation.
    pub fn threshold_scale_m1(&self) -> T {
        self.ln_threshold_scale().exp_m1()
    }

    /// Conditional decoding error probability; exactly 1 when `γ_A ≤ γ_E`.
    pub fn error_prob(&self, gamma_a: T, gamma_e: T) -> T {
        if !(gamma_a > gamma_e) {
            return T::one();
        }
        let margin = gamma_a.ln_1p() - gamma_e.ln_1p() - self.leakage_penalty(gamma_e) - self.rate_nats();
        let scale = (self.blocklength / channel_dispersion(gamma_a)).sqrt();
        gauss_q(scale * margin)
    }

    /// Tangent-line ramp around `x₀` for a conditioned eavesdropper SNR.
    pub fn linearize(&self, gamma_e: T) -> Result<LinearizationPoint<T>> {
        let x0 = self.threshold(gamma_e);
        if !(x0 > T::zero()) {
            return Err(domain("linearize", format!("ramp center x₀ = {x0} must be positive")));
        }
        let two_pi = T::PI() + T::PI();
        let slope = -(self.blocklength / (two_pi * x0 * (x0 + lit(2.0)))).sqrt();
        Ok(LinearizationPoint { x0, slope })
    }
}

/// Decoding error probability for the packet size and blocklength of `cfg`.
pub fn decoding_error_prob<T: Scalar>(cfg: &SystemConfig<T>, gamma_a: T, gamma_e: T) -> Result<T> {
    Ok(CodingParams::from_config(cfg)?.error_prob(gamma_a, gamma_e))
}

/// Ramp center `x₀` and slope `k < 0` of the linearized error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizationPoint<T> {
    pub x0: T,
    pub slope: T,
}

impl<T: Scalar> LinearizationPoint<T> {
    /// Start of the ramp, `x₀ + 1/(2k)`; the ramp equals 1 below it.
    pub fn lower_edge(&self) -> T {
        self.x0 + lit::<T>(0.5) / self.slope
    }

    /// End of the ramp, `x₀ - 1/(2k)`; the ramp equals 0 above it.
    pub fn upper_edge(&self) -> T {
        self.x0 - lit::<T>(0.5) / self.slope
    }

    pub fn error_prob(&self, gamma_a: T) -> T {
        if gamma_a < self.lower_edge() {
            T::one()
        } else if gamma_a > self.upper_edge() {
            T::zero()
        } else {
            (lit::<T>(0.5) + self.slope * (gamma_a - self.x0))
                .max(T::zero())
                .min(T::one())
        }
    }
}

/// Linearization of the conditional error probability around `x₀(γ_E)`.
pub fn linearize<T: Scalar>(cfg: &SystemConfig<T>, gamma_e: T) -> Result<LinearizationPoint<T>> {
    CodingParams::from_config(cfg)?.linearize(gamma_e)
}

/// Piecewise-linear error probability of a [`LinearizationPoint`].
pub fn ramp_error_prob<T: Scalar>(lp: &LinearizationPoint<T>, gamma_a: T) -> T {
    lp.error_prob(gamma_a)
}
