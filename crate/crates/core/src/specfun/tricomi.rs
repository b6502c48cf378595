//! Tricomi's confluent hypergeometric function `U(a, b, z)` for real `a > 0`, `z > 0`.
//!
//! Evaluated from the integral representation
//! `Γ(a) U(a, b, z) = ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`,
//! which stays valid for integer `b` where the Kummer connection formula
//! degenerates. The integrand is normalized by its peak before quadrature
//! so large `a` or extreme `z` neither overflow nor underflow.

use super::gamma::ln_gamma;
use super::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::error::{domain, Result};
use crate::scalar::{lit, Scalar};

fn check<T: Scalar>(a: T, b: T, z: T) -> Result<()> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(domain("tricomi_u", format!("a = {a} must be positive")));
    }
    if !(z > T::zero()) || !z.is_finite() {
        return Err(domain("tricomi_u", format!("z = {z} must be positive")));
    }
    if !b.is_finite() {
        return Err(domain("tricomi_u", format!("b = {b} must be finite")));
    }
    Ok(())
}

/// `ln(Γ(a) U(a, b, z))`, i.e. the log of the defining integral.
pub fn ln_tricomi_integral<T: Scalar>(a: T, b: T, z: T, opts: &QuadOptions<T>) -> Result<T> {
    check(a, b, z)?;
    let c = b - a - T::one();
    let log_integrand = move |t: T| -z * t + (a - T::one()) * t.ln() + c * t.ln_1p();

    // coarse log-grid search for the peak; only needs to land near the maximum
    let spread = a.max(T::one()) / z;
    let lo = (spread * lit(1e-10)).ln();
    let hi = (spread * lit(1e4)).ln();
    let steps = 240;
    let (mut t_peak, mut log_peak) = (T::zero(), T::neg_infinity());
    for i in 0..=steps {
        let t = (lo + (hi - lo) * lit::<T>(i as f64 / steps as f64)).exp();
        let v = log_integrand(t);
        if v > log_peak {
            log_peak = v;
            t_peak = t;
        }
    }
    if !log_peak.is_finite() {
        // a < 1 with the peak at the origin; anchor at the smallest grid point
        t_peak = lo.exp();
        log_peak = log_integrand(t_peak);
    }

    let scaled = move |t: T| {
        if t <= T::zero() {
            return T::zero();
        }
        (log_integrand(t) - log_peak).exp()
    };

    let head = if a < T::one() {
        // u = t^a removes the t^{a-1} singularity at the origin
        // dt = (1/a) u^{1/a-1} du cancels t^{a-1}
        let inv_a = T::one() / a;
        let smooth = |u: T| {
            let t = u.powf(inv_a);
            inv_a * (-z * t + c * t.ln_1p() - log_peak).exp()
        };
        integrate(smooth, T::zero(), t_peak.powf(a), opts)?.value
    } else {
        integrate(scaled, T::zero(), t_peak, opts)?.value
    };
    let tail_scale = t_peak.max(T::one() / z);
    let tail = integrate_to_infinity(scaled, t_peak, tail_scale, opts)?.value;
    Ok(log_peak + (head + tail).ln())
}

/// `U(a, b, z)` with the default quadrature tolerance.
pub fn tricomi_u<T: Scalar>(a: T, b: T, z: T) -> Result<T> {
    tricomi_u_with(a, b, z, &QuadOptions::default())
}

/// `U(a, b, z)` with explicit quadrature tolerances.
pub fn tricomi_u_with<T: Scalar>(a: T, b: T, z: T, opts: &QuadOptions<T>) -> Result<T> {
    Ok((ln_tricomi_integral(a, b, z, opts)? - ln_gamma(a)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_integral_case() {
        // U(1, 1, 1) = e·E₁(1)
        let u = tricomi_u(1.0f64, 1.0, 1.0).unwrap();
        assert!((u - 0.596_347_362_323_194_1).abs() < 1e-10, "{u}");
    }

    #[test]
    fn reciprocal_case() {
        for &z in &[0.1f64, 2.0, 50.0, 1e6] {
            let u = tricomi_u(1.0f64, 2.0, z).unwrap();
            assert!((u * z - 1.0).abs() < 1e-9, "z = {z}: {u}");
        }
    }

    #[test]
    fn power_case() {
        // U(a, a+1, z) = z^{-a}
        for &(a, z) in &[(0.5f64, 3.0f64), (3.0, 0.7), (20.0, 40.0), (60.0, 1e5)] {
            let u = tricomi_u(a, a + 1.0, z).unwrap();
            assert!((u * z.powf(a) - 1.0).abs() < 1e-8, "a = {a}, z = {z}: {u}");
        }
    }

    #[test]
    fn rejects_bad_domain() {
        assert!(tricomi_u(0.0f64, 1.0, 1.0).is_err());
        assert!(tricomi_u(1.0f64, 1.0, 0.0).is_err());
        assert!(tricomi_u(1.0f64, f64::NAN, 1.0).is_err());
    }
}
