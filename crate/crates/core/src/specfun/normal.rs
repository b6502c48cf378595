//! Gaussian tail function `Q(x)` and its inverse.

use super::gamma::{gamma_p, gamma_q};
use crate::error::{domain, Result};
use crate::scalar::{lit, Scalar};

/// Complementary error function, via `erfc(x) = Q(1/2, x²)`.
pub fn erfc<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let half = lit::<T>(0.5);
    let x2 = x * x;
    if x2.is_infinite() {
        return if x > T::zero() { T::zero() } else { lit(2.0) };
    }
    // both calls are total for a = 1/2, x² ≥ 0
    if x >= T::zero() {
        gamma_q(half, x2).unwrap_or(T::zero())
    } else {
        T::one() + gamma_p(half, x2).unwrap_or(T::one())
    }
}

/// Gaussian tail probability `Q(x) = ∫ₓ^∞ φ(t) dt`.
pub fn gauss_q<T: Scalar>(x: T) -> T {
    lit::<T>(0.5) * erfc(x * T::FRAC_1_SQRT_2())
}

/// Standard normal density.
pub fn gauss_pdf<T: Scalar>(x: T) -> T {
    let inv_sqrt_2pi = lit::<T>(0.398_942_280_401_432_7);
    inv_sqrt_2pi * (-lit::<T>(0.5) * x * x).exp()
}

// rational approximation of the lower-tail normal quantile (P. J. Acklam)
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_690e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

fn horner<T: Scalar>(coeffs: &[f64], x: T) -> T {
    coeffs.iter().fold(T::zero(), |acc, &c| acc * x + lit(c))
}

/// Initial guess for `Φ⁻¹(p)`, accurate to about 1e-9 relative.
fn normal_quantile_guess<T: Scalar>(p: T) -> T {
    let p_low = lit::<T>(0.024_25);
    if p < p_low {
        let q = (-lit::<T>(2.0) * p.ln()).sqrt();
        horner(&C, q) / (horner(&D, q) * q + T::one())
    } else if p <= T::one() - p_low {
        let q = p - lit(0.5);
        let r = q * q;
        horner(&A, r) * q / (horner(&B, r) * r + T::one())
    } else {
        let q = (-lit::<T>(2.0) * (T::one() - p).ln()).sqrt();
        -horner(&C, q) / (horner(&D, q) * q + T::one())
    }
}

/// Inverse Gaussian tail: the `x` with `Q(x) = p`, for `p ∈ (0, 1)`.
///
/// Halley refinement of a rational initial guess, with bisection on
/// `[-40, 40]` as a fallback if refinement fails to settle.
pub fn gauss_q_inv<T: Scalar>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(domain("gauss_q_inv", format!("p = {p} must lie in (0, 1)")));
    }
    if p == lit(0.5) {
        return Ok(T::zero());
    }
    let tol = T::epsilon() * lit(8.0);
    let mut x = -normal_quantile_guess(p);
    for _ in 0..8 {
        let err = gauss_q(x) - p;
        let density = gauss_pdf(x);
        if density == T::zero() {
            break;
        }
        let u = err / density;
        let step = u / (T::one() - x * u * lit(0.5));
        x = x + step;
        if !x.is_finite() {
            break;
        }
        if step.abs() <= tol * x.abs().max(T::one()) {
            return Ok(x);
        }
    }
    if x.is_finite() && (gauss_q(x) - p).abs() <= tol * p {
        return Ok(x);
    }
    Ok(bisect_q_inv(p))
}

fn bisect_q_inv<T: Scalar>(p: T) -> T {
    let (mut lo, mut hi) = (lit::<T>(-40.0), lit::<T>(40.0));
    for _ in 0..400 {
        let mid = lit::<T>(0.5) * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        // Q is decreasing
        if gauss_q(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lit::<T>(0.5) * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_at_zero_is_half() {
        assert_eq!(gauss_q(0.0f64), 0.5);
        assert_eq!(gauss_q_inv(0.5f64).unwrap(), 0.0);
    }

    #[test]
    fn far_tail_vanishes() {
        assert!(gauss_q(40.0f64) < 1e-300);
        assert_eq!(gauss_q(f64::INFINITY), 0.0);
        assert_eq!(gauss_q(f64::NEG_INFINITY), 1.0);
    }

    #[test]
    fn one_percent_quantile() {
        let x = gauss_q_inv(1e-2f64).unwrap();
        assert!((x - 2.326_347_874_040_841).abs() < 1e-10);
        let y = gauss_q_inv(1.0 - 1e-2f64).unwrap();
        assert!((y + 2.326_347_874_040_841).abs() < 1e-10);
    }

    #[test]
    fn tiny_probabilities_round_trip() {
        for &p in &[1e-300f64, 1e-100, 1e-30, 1e-12, 1e-6] {
            let x = gauss_q_inv(p).unwrap();
            assert!((gauss_q(x) / p - 1.0).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        for &p in &[0.0f64, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(gauss_q_inv(p).is_err());
        }
    }

    #[test]
    fn single_precision() {
        let x = gauss_q_inv(1e-2f32).unwrap();
        assert!((x - 2.326_348).abs() < 1e-4);
    }
}
