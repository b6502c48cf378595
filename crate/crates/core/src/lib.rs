//! Secrecy throughput of short-packet (finite-blocklength) transmissions
//! observed by a multi-antenna eavesdropper.
//!
//! The crate provides
//! - the finite-blocklength secrecy primitives ([`fbl`]),
//! - closed-form and quadrature throughput approximations for single- and
//!   multi-antenna access points ([`single_antenna`], [`multi_antenna`]),
//! - blocklength, bit-count and power-split optimizers ([`optimizer`]),
//! - a seeded, thread-count-independent Monte Carlo oracle ([`montecarlo`])
//!   built on an explicit channel simulator ([`channel`]).
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the CLI uses.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod error;
pub mod fbl;
pub mod montecarlo;
pub mod multi_antenna;
pub mod optimizer;
pub mod scalar;
pub mod single_antenna;
pub mod specfun;

pub use channel::{eavesdropper_sinr_cdf, sample_multi_antenna, sample_single_antenna, ChannelSample};
pub use config::{db_to_linear, linear_to_db, LinkBudget, SystemConfig};
pub use error::{Error, Result};
pub use fbl::{LinearizationPoint, RatePoint};
pub use montecarlo::{EmpiricalCdf, McOptions, MonteCarloResult};
pub use multi_antenna::{ThetaBranch, ThetaContext};
pub use optimizer::{Constraints, OptimizationResult};
pub use scalar::Scalar;
pub use single_antenna::{Diagnostics, Method, QuadratureConfig, ThroughputEstimate, ValidityWarning};

pub type SystemConfig64 = SystemConfig<f64>;
pub type SystemConfig32 = SystemConfig<f32>;
pub type LinkBudget64 = LinkBudget<f64>;
pub type QuadratureConfig64 = QuadratureConfig<f64>;
pub type ThroughputEstimate64 = ThroughputEstimate<f64>;
pub type ThroughputEstimate32 = ThroughputEstimate<f32>;
pub type MonteCarloResult64 = MonteCarloResult<f64>;
pub type OptimizationResult64 = OptimizationResult<f64>;
pub type Constraints64 = Constraints<f64>;
pub type ChannelSample64 = ChannelSample<f64>;

/// Evaluates `method` on `cfg`. Monte Carlo backed methods (`MonteCarlo`,
/// and `InfiniteBlocklength` with `K_A > 1`) use `mc`.
pub fn evaluate<T>(
    cfg: &SystemConfig<T>,
    method: Method,
    quad: &QuadratureConfig<T>,
    mc: &McOptions,
) -> Result<ThroughputEstimate<T>>
where
    T: Scalar,
    rand_distr::StandardNormal: rand_distr::Distribution<T>,
{
    match method {
        Method::RampIntegral => single_antenna::throughput_ramp_integral(cfg),
        Method::SplitQuadrature => single_antenna::throughput_split_quadrature(cfg, quad),
        Method::ClosedForm => single_antenna::throughput_closed_form(cfg),
        Method::HighSnr => single_antenna::throughput_high_snr(cfg),
        Method::InfiniteBlocklength if cfg.is_single_antenna() => single_antenna::throughput_infinite_blocklength(cfg),
        Method::InfiniteBlocklength => {
            multi_antenna::throughput_infinite_blocklength_multi(cfg, mc).map(|(est, _)| est)
        }
        Method::MultiAntenna => multi_antenna::throughput_multi_antenna(cfg, quad),
        Method::MonteCarlo => {
            let r = montecarlo::simulate_average_throughput(cfg, mc)?;
            ThroughputEstimate::new(cfg, r.mean, Method::MonteCarlo)
        }
    }
}
