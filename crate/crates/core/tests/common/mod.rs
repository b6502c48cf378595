//! Test-side reference implementations, written directly from the defining
//! formulas and kept independent of the library's evaluation paths.
#![allow(dead_code)]

use fblsec::specfun::gauss_q_inv;

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// Composite Simpson rule with `intervals` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// `Q⁻¹(δ)` by plain bisection on a Simpson-integrated Gaussian tail.
pub fn qinv_bisection(p: f64) -> f64 {
    let tail = |x: f64| {
        let upper = x.max(0.0) + 40.0;
        let head = simpson(|t| (-t * t / 2.0).exp(), x, upper, 20_000);
        head / (2.0 * std::f64::consts::PI).sqrt()
    };
    let (mut lo, mut hi) = (-10.0, 10.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Threshold scale `ϖ₁ = exp(Q⁻¹(δ)/√N + (B/N) ln 2)`.
pub fn threshold_scale(bits: f64, n: f64, qinv: f64) -> f64 {
    (qinv / n.sqrt() + bits / n * std::f64::consts::LN_2).exp()
}

/// Closed-form single-antenna throughput at continuous `N`.
pub fn closed_form_throughput(bits: f64, n: f64, qinv: f64, rho_a: f64, rho_e: f64, k_e: u32) -> f64 {
    let w1 = threshold_scale(bits, n, qinv);
    let w2 = w1 / rho_a + 1.0 / rho_e;
    bits / n * (rho_e * w2).powi(-(k_e as i32)) * (-(w1 - 1.0) / rho_a).exp()
}

/// Closed-form average error probability at continuous `N`.
pub fn closed_form_error(bits: f64, n: f64, qinv: f64, rho_a: f64, rho_e: f64, k_e: u32) -> f64 {
    1.0 - closed_form_throughput(bits, n, qinv, rho_a, rho_e, k_e) * n / bits
}

pub fn qinv(delta: f64) -> f64 {
    gauss_q_inv(delta).unwrap()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The interference factor `Aₙ(x)` of the eavesdropper SINR distribution.
pub fn interference_factor(x: f64, n: u32, k_a: u32, k_e: u32, tau: f64) -> f64 {
    if k_e + 1 >= k_a + n || tau == 0.0 {
        return 1.0;
    }
    let s: f64 = (0..=(k_e - n))
        .map(|m| binomial(k_a - 1, m) * (tau * x).powi(m as i32))
        .sum();
    s / (1.0 + tau * x).powi(k_a as i32 - 1)
}

/// Gamma(k, θ) CDF for integer shape by its finite sum.
pub fn gamma_cdf_integer(x: f64, k: u32, scale: f64) -> f64 {
    let v = x / scale;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..k {
        term *= v / i as f64;
        sum += term;
    }
    1.0 - (-v).exp() * sum
}
