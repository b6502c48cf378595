//! Secrecy throughput for a multi-antenna access point using MRT with
//! artificial noise, against an MMSE eavesdropper.
//!
//! With the ramp approximation and integration by parts,
//! `1 - ε̄ = ∫₀^∞ F_E(y) f_A(x₀(y)) x₀'(y) dy`. The head `[0, M₁]` is
//! handled by a Chebyshev rule; on the tail `x₀(y) ≈ ϖ₁(1+y) - 1`, which
//! reduces it to a regularized gamma tail minus a weighted sum of integrals
//! `Θ = ∫_{M₁}^∞ Aₙ(y) y^{n+p-1} e^{-ϖ₃y} dy`.

use crate::channel::{ln_actuator_pdf, survival_unchecked};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::fbl::CodingParams;
use crate::montecarlo::{simulate_capacity_probability, McOptions, MonteCarloResult};
use crate::scalar::{count, ln_pow, log_sum_exp, Scalar};
use crate::single_antenna::{Method, QuadratureConfig, ThroughputEstimate};
use crate::specfun::{gamma_q, ln_binomial, ln_factorial, ln_gamma, ln_gamma_upper, ln_tricomi_integral, QuadOptions};

use rand_distr::{Distribution, StandardNormal};

/// Indices and constants that define one `Θ` integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaContext<T> {
    /// Eavesdropper survival term index, `1..=K_E`.
    pub n: u32,
    /// Binomial index of the actuator density, `0..=K_A-1`.
    pub p: u32,
    /// Artificial-noise power ratio `τ`.
    pub tau: T,
    /// Exponential rate `ϖ₃ = (ϖ₁ρ_E + ρ_A)/(ηρ_Aρ_E)`.
    pub rate: T,
    /// Lower integration limit `M₁`.
    pub m1: T,
    pub antennas_ap: u32,
    pub antennas_eve: u32,
}

impl<T: Scalar> ThetaContext<T> {
    pub fn new(cfg: &SystemConfig<T>, params: &CodingParams<T>, n: u32, p: u32, m1: T) -> Result<Self> {
        if n == 0 || n > cfg.antennas_eve || p >= cfg.antennas_ap {
            return Err(Error::Misuse(format!(
                "theta indices (n, p) = ({n}, {p}) outside 1..={} × 0..{}",
                cfg.antennas_eve, cfg.antennas_ap
            )));
        }
        let scale1 = params.threshold_scale();
        let rate = (scale1 * cfg.snr_eve + cfg.snr_actuator) / (cfg.power_split * cfg.snr_actuator * cfg.snr_eve);
        Ok(Self {
            n,
            p,
            tau: cfg.an_power_ratio(),
            rate,
            m1,
            antennas_ap: cfg.antennas_ap,
            antennas_eve: cfg.antennas_eve,
        })
    }

    /// The defining integrand `Aₙ(y) y^{n+p-1} e^{-ϖ₃y}`.
    pub fn integrand(&self, y: T) -> T {
        (self.ln_interference(y) + ln_pow(y, count((self.n + self.p - 1) as u64)) - self.rate * y).exp()
    }

    fn ln_interference(&self, y: T) -> T {
        if self.branch() == ThetaBranch::IncompleteGamma {
            return T::zero();
        }
        let ka = self.antennas_ap as u64;
        let ty = self.tau * y;
        let terms: Vec<T> = (0..=(self.antennas_eve - self.n) as u64)
            .map(|m| ln_binomial::<T>(ka - 1, m) + ln_pow(ty, count(m)))
            .collect();
        log_sum_exp(&terms) - count::<T>(ka - 1) * ty.ln_1p()
    }

    pub fn branch(&self) -> ThetaBranch {
        ThetaBranch::select(self)
    }
}

/// Closed form used for a given `Θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaBranch {
    /// `Aₙ ≡ 1`: `ϖ₃^{-(n+p)} Γ(n+p, ϖ₃M₁)`.
    IncompleteGamma,
    /// Binomial expansion over Tricomi functions.
    Tricomi,
}

impl ThetaBranch {
    /// `IncompleteGamma` exactly when `Aₙ ≡ 1`, i.e. `η = 1` or
    /// `K_E ≥ K_A - 1 + n`.
    pub fn select<T: Scalar>(ctx: &ThetaContext<T>) -> Self {
        if ctx.tau == T::zero() || ctx.antennas_eve + 1 >= ctx.antennas_ap + ctx.n {
            ThetaBranch::IncompleteGamma
        } else {
            ThetaBranch::Tricomi
        }
    }
}

/// `Θ` through the requested branch; it must be the one [`ThetaBranch::select`] picks.
pub fn theta_integral<T: Scalar>(ctx: &ThetaContext<T>, branch: ThetaBranch) -> Result<T> {
    let mut table = TricomiTable::default();
    ln_theta(ctx, branch, &mut table, &QuadOptions::default()).map(T::exp)
}

/// `ln Θ` through the automatically selected branch.
pub fn ln_theta_integral<T: Scalar>(ctx: &ThetaContext<T>) -> Result<T> {
    let mut table = TricomiTable::default();
    ln_theta(ctx, ctx.branch(), &mut table, &QuadOptions::default())
}

/// Memoized `ln(Γ(q+1) U(q+1, q-K_A+3, z))` for one `z`, shared by every
/// `Θ` with the same constants.
#[derive(Debug, Default)]
struct TricomiTable<T> {
    key: Option<(T, u32)>,
    values: Vec<T>,
}

impl<T: Scalar> TricomiTable<T> {
    fn get(&mut self, q: usize, z: T, antennas_ap: u32, opts: &QuadOptions<T>) -> Result<T> {
        if self.key != Some((z, antennas_ap)) {
            self.key = Some((z, antennas_ap));
            self.values.clear();
        }
        while self.values.len() <= q {
            let qq: T = count(self.values.len() as u64);
            let a = qq + T::one();
            let b = qq + count(3) - count(antennas_ap as u64);
            self.values.push(ln_tricomi_integral(a, b, z, opts)?);
        }
        Ok(self.values[q])
    }
}

fn ln_theta<T: Scalar>(
    ctx: &ThetaContext<T>,
    branch: ThetaBranch,
    table: &mut TricomiTable<T>,
    opts: &QuadOptions<T>,
) -> Result<T> {
    if branch != ctx.branch() {
        return Err(Error::Internal(format!(
            "theta branch {branch:?} requested for (n, p) = ({}, {}) where {:?} applies",
            ctx.n,
            ctx.p,
            ctx.branch()
        )));
    }
    let s = ctx.n + ctx.p;
    match branch {
        ThetaBranch::IncompleteGamma => {
            let s: T = count(s as u64);
            Ok(-s * ctx.rate.ln() + ln_gamma_upper(s, ctx.rate * ctx.m1)?)
        }
        ThetaBranch::Tricomi => {
            let ka = ctx.antennas_ap as u64;
            let (tau, m1) = (ctx.tau, ctx.m1);
            let stretch = (T::one() + tau * m1) / tau;
            let z = ctx.rate * stretch;
            let common = -ctx.rate * m1 - count::<T>(ka - 1) * (tau * m1).ln_1p();
            let mut terms = Vec::new();
            for m in 0..=(ctx.antennas_eve - ctx.n) as u64 {
                let power = (s - 1) as u64 + m;
                let outer = ln_binomial::<T>(ka - 1, m) + count::<T>(m) * tau.ln();
                for q in 0..=power {
                    let inner = ln_binomial::<T>(power, q)
                        + ln_pow(m1, count(power - q))
                        + count::<T>(q + 1) * stretch.ln()
                        + table.get(q as usize, z, ctx.antennas_ap, opts)?;
                    terms.push(outer + inner);
                }
            }
            Ok(common + log_sum_exp(&terms))
        }
    }
}

/// Split-quadrature throughput for MRT with artificial noise.
///
/// Holds for any `K_A ≥ 1`; with `K_A = 1` it reduces to the
/// single-antenna split quadrature up to the `V_E ≈ 1` tail approximation.
pub fn throughput_multi_antenna<T: Scalar>(
    cfg: &SystemConfig<T>,
    quad: &QuadratureConfig<T>,
) -> Result<ThroughputEstimate<T>> {
    cfg.validate()?;
    quad.validate()?;
    let params = CodingParams::from_config(cfg)?;
    let success = multi_antenna_success(cfg, &params, quad)?;
    ThroughputEstimate::new(cfg, cfg.rate() * success, Method::MultiAntenna)
}

fn multi_antenna_success<T: Scalar>(
    cfg: &SystemConfig<T>,
    params: &CodingParams<T>,
    quad: &QuadratureConfig<T>,
) -> Result<T> {
    let ka = cfg.antennas_ap;
    let shape: T = count(ka as u64);
    let act_scale = cfg.power_split * cfg.snr_actuator;
    let eve_scale = cfg.power_split * cfg.snr_eve;
    let m1 = quad.m1;

    let nodes = quad.nodes()?;
    let head = nodes.integrate(
        |z| {
            let cdf = T::one() - survival_unchecked(z, cfg);
            cdf * ln_actuator_pdf(params.threshold(z), cfg).exp() * params.threshold_slope(z)
        },
        m1,
    );

    let scale1 = params.threshold_scale();
    let scale1_m1 = params.threshold_scale_m1();
    let upper_tail = gamma_q(shape, (scale1 * (m1 + T::one()) - T::one()) / act_scale)?;

    let prefactor = scale1.ln() - scale1_m1 / act_scale - shape * act_scale.ln() - ln_gamma(shape);
    let opts = QuadOptions::default();
    let mut table = TricomiTable::default();
    let mut terms = Vec::new();
    for p in 0..ka {
        let weight = ln_binomial::<T>(ka as u64 - 1, p as u64)
            + count::<T>(p as u64) * scale1.ln()
            + ln_pow(scale1_m1, count((ka - 1 - p) as u64));
        for n in 1..=cfg.antennas_eve {
            let ctx = ThetaContext::new(cfg, params, n, p, m1)?;
            let theta = ln_theta(&ctx, ctx.branch(), &mut table, &opts)?;
            terms.push(weight + theta - ln_factorial::<T>(n as u64 - 1) - count::<T>(n as u64 - 1) * eve_scale.ln());
        }
    }
    let correction = (prefactor + log_sum_exp(&terms)).exp();
    Ok(head + upper_tail - correction)
}

/// `(B/N)·P{γ_A > γ_E}` with the probability estimated by Monte Carlo on
/// the matrix channel model. Also returns the raw probability estimate.
pub fn throughput_infinite_blocklength_multi<T>(
    cfg: &SystemConfig<T>,
    opts: &McOptions,
) -> Result<(ThroughputEstimate<T>, MonteCarloResult<T>)>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
{
    cfg.validate()?;
    let prob = simulate_capacity_probability(cfg, opts)?;
    let est = ThroughputEstimate::new(cfg, cfg.rate() * prob.mean, Method::InfiniteBlocklength)?;
    Ok((est, prob))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate_to_infinity, QuadOptions};

    fn fig4(ka: u32, eta: f64, n: u64) -> SystemConfig<f64> {
        SystemConfig::multi_antenna(200, n, 1e-2, 10.0, 2.0, ka, 3, eta).unwrap()
    }

    fn quadrature_theta(ctx: &ThetaContext<f64>) -> f64 {
        let opts = QuadOptions::default().with_rel_tol(1e-12);
        let scale = 1.0 / ctx.rate;
        integrate_to_infinity(|y| ctx.integrand(y), ctx.m1, scale, &opts)
            .unwrap()
            .value
    }

    #[test]
    fn branch_follows_interference_factor() {
        let cfg = fig4(4, 0.7, 400);
        let params = CodingParams::from_config(&cfg).unwrap();
        for n in 1..=3 {
            let ctx = ThetaContext::new(&cfg, &params, n, 0, 30.0).unwrap();
            assert_eq!(ctx.branch(), ThetaBranch::Tricomi);
        }
        let cfg = fig4(2, 0.7, 400);
        let params = CodingParams::from_config(&cfg).unwrap();
        let ctx = ThetaContext::new(&cfg, &params, 2, 0, 30.0).unwrap();
        assert_eq!(ctx.branch(), ThetaBranch::IncompleteGamma);
        let ctx = ThetaContext::new(&cfg, &params, 3, 0, 30.0).unwrap();
        assert_eq!(ctx.branch(), ThetaBranch::Tricomi);
        assert!(matches!(
            theta_integral(&ctx, ThetaBranch::IncompleteGamma),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn incomplete_gamma_branch_at_zero_split() {
        let cfg = fig4(3, 1.0, 400);
        let params = CodingParams::from_config(&cfg).unwrap();
        let ctx = ThetaContext::new(&cfg, &params, 2, 1, 0.0).unwrap();
        let got = theta_integral(&ctx, ThetaBranch::IncompleteGamma).unwrap();
        let expected = 2.0 / ctx.rate.powi(3);
        assert!((got - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn tricomi_branch_matches_quadrature() {
        let cfg = fig4(4, 0.7, 400);
        let params = CodingParams::from_config(&cfg).unwrap();
        for (n, p, m1) in [(1, 0, 30.0), (2, 3, 30.0), (3, 1, 0.0)] {
            let ctx = ThetaContext::new(&cfg, &params, n, p, m1).unwrap();
            let got = theta_integral(&ctx, ctx.branch()).unwrap();
            let oracle = quadrature_theta(&ctx);
            assert!(
                (got - oracle).abs() < 1e-6 * oracle,
                "({n},{p},{m1}): {got} vs {oracle}"
            );
        }
    }

    #[test]
    fn single_antenna_reduction_tracks_split_quadrature() {
        let cfg = SystemConfig::single_antenna(200, 400, 1e-2, 10.0, 2.0, 2).unwrap();
        let quad = QuadratureConfig::single_antenna_default();
        let multi: f64 = throughput_multi_antenna(&cfg, &quad).unwrap().bpcu;
        let single = crate::single_antenna::throughput_split_quadrature(&cfg, &quad)
            .unwrap()
            .bpcu;
        assert!((multi - single).abs() < 0.02 * single, "{multi} vs {single}");
    }

    #[test]
    fn throughput_in_range_and_grows_with_antennas() {
        let quad = QuadratureConfig::multi_antenna_default();
        let mut last = 0.0;
        for ka in 1..=4 {
            let cfg = fig4(ka, 1.0, 400);
            let t = throughput_multi_antenna(&cfg, &quad).unwrap().bpcu;
            assert!(t > last && t <= cfg.rate());
            last = t;
        }
    }
}
