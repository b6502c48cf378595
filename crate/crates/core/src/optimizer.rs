//! Blocklength, packet-size and power-split optimization.
//!
//! The closed-form single-antenna throughput is quasi-concave in the relaxed
//! blocklength `N`; its stationary point is the root of
//! `Ξ(N) = (ϖ₁/ρ_A)(Q⁻¹(δ)/(2√N) + (B/N)ln2)(1 + K_E/ϖ₂) - 1`, which is
//! decreasing in `N`. The average error `ε̄(N)` of the same closed form is
//! decreasing in `N`, so an error target becomes a lower bound on `N`.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::config::SystemConfig;
use crate::error::{domain, Error, Result};
use crate::fbl::CodingParams;
use crate::multi_antenna::throughput_multi_antenna;
use crate::scalar::{count, lit, Scalar};
use crate::single_antenna::{closed_form_success, infinite_blocklength_success, QuadratureConfig, ThroughputEstimate};

const MAX_BISECTIONS: usize = 400;

/// Reliability and latency limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraints<T> {
    /// Largest tolerated average decoding error probability.
    pub zeta_eps: T,
    /// Largest tolerated blocklength.
    pub zeta_n: u64,
}

impl<T: Scalar> Constraints<T> {
    pub fn new(zeta_eps: T, zeta_n: u64) -> Result<Self> {
        let c = Self { zeta_eps, zeta_n };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zeta_eps > T::zero() && self.zeta_eps < T::one()) {
            return Err(Error::InvalidConfig(format!(
                "error target ζ_ε = {} violates ζ_ε ∈ (0, 1)",
                self.zeta_eps
            )));
        }
        if self.zeta_n == 0 {
            return Err(Error::InvalidConfig("blocklength limit ζ_N must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult<T> {
    /// Optimal integer blocklength; `None` when infeasible.
    pub n_opt: Option<u64>,
    /// Closed-form throughput at `n_opt` (0 when infeasible).
    pub throughput: T,
    pub feasible: bool,
    /// Stationary point of the relaxed problem.
    pub continuous_root: T,
}

fn require_single_antenna<T: Scalar>(cfg: &SystemConfig<T>) -> Result<()> {
    cfg.validate()?;
    if !cfg.is_single_antenna() {
        return Err(Error::Misuse(format!(
            "blocklength optimization assumes K_A = 1, got K_A = {}",
            cfg.antennas_ap
        )));
    }
    Ok(())
}

fn params_at<T: Scalar>(cfg: &SystemConfig<T>, n: T) -> Result<CodingParams<T>> {
    CodingParams::new(count(cfg.bits), n, cfg.leakage)
}

/// `Ξ(N)` for continuous `N > 0`; positive where the closed-form
/// throughput increases with `N`.
pub fn xi<T: Scalar>(n: T, cfg: &SystemConfig<T>) -> Result<T> {
    cfg.validate()?;
    let params = params_at(cfg, n)?;
    let scale1 = params.threshold_scale();
    let rate2 = scale1 / cfg.snr_actuator + cfg.snr_eve.recip();
    let shape: T = count(cfg.antennas_eve as u64);
    let drift = params.qinv_leakage / (lit::<T>(2.0) * n.sqrt()) + params.rate_nats();
    Ok(scale1 / cfg.snr_actuator * drift * (T::one() + shape / rate2) - T::one())
}

/// Closed-form throughput at a continuous blocklength.
pub fn throughput_at<T: Scalar>(cfg: &SystemConfig<T>, n: T) -> Result<T> {
    let params = params_at(cfg, n)?;
    Ok(count::<T>(cfg.bits) / n * closed_form_success(&params, cfg)?)
}

/// Closed-form average error probability at a continuous blocklength.
pub fn average_error_at<T: Scalar>(cfg: &SystemConfig<T>, n: T) -> Result<T> {
    let params = params_at(cfg, n)?;
    Ok(T::one() - closed_form_success(&params, cfg)?)
}

/// Root of `Ξ` by bracket expansion from `[1, 2]` and bisection to
/// floating-point resolution.
pub fn stationary_blocklength<T: Scalar>(cfg: &SystemConfig<T>) -> Result<T> {
    cfg.validate()?;
    let (mut lo, mut hi) = (T::one(), lit::<T>(2.0));
    while xi(lo, cfg)? <= T::zero() {
        hi = lo;
        lo = lo * lit(0.5);
        if lo < lit(1e-12) {
            return Err(Error::NoConvergence {
                routine: "stationary blocklength",
                detail: "no positive Ξ above 1e-12".into(),
            });
        }
    }
    while xi(hi, cfg)? > T::zero() {
        lo = hi;
        hi = hi + hi;
        if !hi.is_finite() || hi > lit(1e300) {
            return Err(Error::NoConvergence {
                routine: "stationary blocklength",
                detail: "Ξ stays positive".into(),
            });
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = lit::<T>(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if xi(mid, cfg)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // whichever end has the smaller |Ξ|
    Ok(if xi(lo, cfg)?.abs() <= xi(hi, cfg)?.abs() {
        lo
    } else {
        hi
    })
}

fn to_count<T: Scalar>(x: T) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Internal(format!("blocklength {x} not representable as an integer")))
}

/// Integer blocklength maximizing the closed-form throughput: the better
/// of `⌊N*⌋` and `⌈N*⌉`, the smaller on a tie.
pub fn optimal_blocklength<T: Scalar>(cfg: &SystemConfig<T>) -> Result<OptimizationResult<T>> {
    require_single_antenna(cfg)?;
    let root = stationary_blocklength(cfg)?;
    let floor = to_count(root.floor())?.max(1);
    let ceil = to_count(root.ceil())?.max(1);
    let (t_floor, t_ceil) = (throughput_at(cfg, count(floor))?, throughput_at(cfg, count(ceil))?);
    let (n, t) = if t_ceil > t_floor {
        (ceil, t_ceil)
    } else {
        (floor, t_floor)
    };
    Ok(OptimizationResult {
        n_opt: Some(n),
        throughput: t,
        feasible: true,
        continuous_root: root,
    })
}

/// Blocklength at which the closed-form average error equals `zeta_eps`.
///
/// Fails with [`Error::Infeasible`] when `zeta_eps` does not exceed the
/// infinite-blocklength error floor `1 - (ρ_A/(ρ_A+ρ_E))^{K_E}`.
pub fn error_inverse<T: Scalar>(cfg: &SystemConfig<T>, zeta_eps: T) -> Result<T> {
    require_single_antenna(cfg)?;
    if !(zeta_eps > T::zero() && zeta_eps < T::one()) {
        return Err(domain("error_inverse", format!("target {zeta_eps} must lie in (0, 1)")));
    }
    let floor = T::one() - infinite_blocklength_success(cfg);
    if zeta_eps <= floor {
        return Err(Error::Infeasible(format!(
            "error target {zeta_eps} is not above the infinite-blocklength floor {floor}"
        )));
    }
    let err = |n: T| average_error_at(cfg, n);
    let (mut lo, mut hi) = (T::one(), lit::<T>(2.0));
    while err(lo)? <= zeta_eps {
        hi = lo;
        lo = lo * lit(0.5);
        if lo < lit(1e-12) {
            return Ok(hi);
        }
    }
    while err(hi)? > zeta_eps {
        lo = hi;
        hi = hi + hi;
        if !hi.is_finite() || hi > lit(1e300) {
            return Err(Error::Infeasible(format!(
                "error target {zeta_eps} is not reached at any blocklength"
            )));
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = lit::<T>(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if err(mid)? > zeta_eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the upper end always satisfies the target
    Ok(hi)
}

/// Optimal blocklength under an error target and a blocklength limit: the
/// unconstrained integer optimum clamped to `[⌈ε̄⁻¹(ζ_ε)⌉, ζ_N]`, both ends
/// included.
pub fn constrained_optimal_blocklength<T: Scalar>(
    cfg: &SystemConfig<T>,
    cons: &Constraints<T>,
) -> Result<OptimizationResult<T>> {
    require_single_antenna(cfg)?;
    cons.validate()?;
    let unconstrained = optimal_blocklength(cfg)?;
    let infeasible = OptimizationResult {
        n_opt: None,
        throughput: T::zero(),
        feasible: false,
        continuous_root: unconstrained.continuous_root,
    };
    let lower = match error_inverse(cfg, cons.zeta_eps) {
        Ok(n) => to_count(n.ceil())?.max(1),
        Err(Error::Infeasible(_)) => return Ok(infeasible),
        Err(e) => return Err(e),
    };
    if lower > cons.zeta_n {
        return Ok(infeasible);
    }
    let n = unconstrained
        .n_opt
        .expect("unconstrained optimum exists")
        .clamp(lower, cons.zeta_n);
    Ok(OptimizationResult {
        n_opt: Some(n),
        throughput: throughput_at(cfg, count(n))?,
        feasible: true,
        continuous_root: unconstrained.continuous_root,
    })
}

/// One-dimensional search over the packet size `B`, each with its own
/// (constrained) optimal blocklength. Ties go to the smaller `N`, then the
/// smaller `B`. When no `B` is feasible the first `B` is returned with its
/// infeasible result.
pub fn joint_optimize_bits_blocklength<T: Scalar>(
    cfg: &SystemConfig<T>,
    cons: Option<&Constraints<T>>,
    bits: RangeInclusive<u64>,
) -> Result<(u64, OptimizationResult<T>)> {
    if bits.is_empty() {
        return Err(domain("joint_optimize_bits_blocklength", "empty packet-size range"));
    }
    let results: Vec<(u64, OptimizationResult<T>)> = bits
        .clone()
        .into_par_iter()
        .map(|b| {
            let c = cfg.clone().with_bits(b);
            let r = match cons {
                Some(cons) => constrained_optimal_blocklength(&c, cons)?,
                None => optimal_blocklength(&c)?,
            };
            Ok((b, r))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(u64, OptimizationResult<T>)> = None;
    for (b, r) in results.iter().copied().filter(|(_, r)| r.feasible) {
        let better = match &best {
            None => true,
            Some((_, cur)) => r.throughput > cur.throughput || (r.throughput == cur.throughput && r.n_opt < cur.n_opt),
        };
        if better {
            best = Some((b, r));
        }
    }
    Ok(best.unwrap_or(results[0]))
}

/// `{0.01, 0.02, …, 0.99, 1.0}`.
pub fn default_power_split_grid<T: Scalar>() -> Vec<T> {
    (1..=100).map(|i| count::<T>(i) / lit(100.0)).collect()
}

/// Power split maximizing the multi-antenna throughput over `grid`;
/// ties go to the larger split.
pub fn optimal_power_allocation<T: Scalar>(
    cfg: &SystemConfig<T>,
    quad: &QuadratureConfig<T>,
    grid: &[T],
) -> Result<(T, ThroughputEstimate<T>)> {
    cfg.validate()?;
    if cfg.antennas_ap < 2 {
        return Err(Error::Misuse("power split optimization needs K_A ≥ 2".into()));
    }
    if grid.is_empty() {
        return Err(domain("optimal_power_allocation", "empty power-split grid"));
    }
    let mut estimates: Vec<(T, ThroughputEstimate<T>)> = grid
        .par_iter()
        .map(|&eta| {
            let c = cfg.clone().with_power_split(eta);
            c.validate()?;
            Ok((eta, throughput_multi_antenna(&c, quad)?))
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, (eta, est)) in estimates.iter().enumerate() {
        let (best_eta, best_est) = &estimates[best];
        if est.bpcu > best_est.bpcu || (est.bpcu == best_est.bpcu && eta > best_eta) {
            best = i;
        }
    }
    Ok(estimates.swap_remove(best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2a() -> SystemConfig<f64> {
        SystemConfig::single_antenna(200, 400, 1e-2, 10.0, 2.0, 2).unwrap()
    }

    #[test]
    fn xi_limits_and_root() {
        let cfg = fig2a();
        assert!((xi(1e12, &cfg).unwrap() + 1.0).abs() < 1e-4);
        assert!(xi(1e-6, &cfg).unwrap() > 1e3);
        let root = stationary_blocklength(&cfg).unwrap();
        assert!(xi(root, &cfg).unwrap().abs() < 1e-8);
    }

    #[test]
    fn optimum_matches_integer_scan() {
        let cfg = fig2a();
        let r = optimal_blocklength(&cfg).unwrap();
        let limit = (10.0 * r.continuous_root).ceil() as u64;
        let mut best = (1, 0.0);
        for n in 1..=limit {
            let t = throughput_at(&cfg, n as f64).unwrap();
            if t > best.1 {
                best = (n, t);
            }
        }
        assert_eq!(r.n_opt, Some(best.0));
    }

    #[test]
    fn error_inverse_round_trip_and_floor() {
        let cfg = fig2a();
        let target = average_error_at(&cfg, 523.0).unwrap();
        let n = error_inverse(&cfg, target).unwrap();
        assert!((n - 523.0).abs() < 1e-4 * 523.0);
        let floor = 1.0 - (10.0f64 / 12.0).powi(2);
        assert!(matches!(error_inverse(&cfg, floor * 0.999), Err(Error::Infeasible(_))));
    }

    #[test]
    fn loose_constraints_are_inactive() {
        let cfg = fig2a();
        let cons = Constraints::new(0.999, 1_000_000).unwrap();
        assert_eq!(
            constrained_optimal_blocklength(&cfg, &cons).unwrap(),
            optimal_blocklength(&cfg).unwrap()
        );
        let r = optimal_blocklength(&cfg).unwrap();
        let tight = Constraints::new(0.999, r.n_opt.unwrap() / 2).unwrap();
        assert_eq!(
            constrained_optimal_blocklength(&cfg, &tight).unwrap().n_opt,
            Some(r.n_opt.unwrap() / 2)
        );
    }

    #[test]
    fn joint_singleton_equals_constrained() {
        let cfg = fig2a();
        let cons = Constraints::new(0.5, 400).unwrap();
        let (b, r) = joint_optimize_bits_blocklength(&cfg, Some(&cons), 200..=200).unwrap();
        assert_eq!(b, 200);
        assert_eq!(r, constrained_optimal_blocklength(&cfg, &cons).unwrap());
    }

    #[test]
    fn power_grid_shape() {
        let g = default_power_split_grid::<f64>();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[99], 1.0);
    }

    #[test]
    fn singleton_power_grid_is_mrt() {
        let cfg = SystemConfig::multi_antenna(200, 400, 1e-2, 10.0, 2.0, 2, 3, 0.5).unwrap();
        let quad = QuadratureConfig::multi_antenna_default();
        let (eta, est) = optimal_power_allocation(&cfg, &quad, &[1.0]).unwrap();
        assert_eq!(eta, 1.0);
        assert_eq!(
            est.bpcu,
            throughput_multi_antenna(&cfg.with_power_split(1.0), &quad)
                .unwrap()
                .bpcu
        );
        assert!(optimal_power_allocation(&fig2a(), &quad, &[1.0]).is_err());
    }
}
