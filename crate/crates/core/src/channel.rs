//! Rayleigh-fading channel draws and the resulting SNR/SINR pair, plus the
//! closed-form distribution of the eavesdropper's MMSE SINR.
//!
//! Single antenna: `γ_A = ρ_A|g|²`, `γ_E = ρ_E‖g_E‖²`.
//! Multiple antennas: the access point beams along the actuator channel
//! (MRT) with a fraction `η` of its power and spreads the rest as
//! artificial noise over an orthonormal basis of the complementary
//! subspace; the eavesdropper combines with an MMSE receiver.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::SystemConfig;
use crate::error::{domain, Error, Result};
use crate::scalar::{count, ln_pow, Scalar};
use crate::specfun::{ln_binomial, ln_factorial};

/// Actuator and eavesdropper SNR (or SINR) of one fading realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSample<T> {
    pub gamma_a: T,
    pub gamma_e: T,
}

/// One `CN(0, 1)` draw.
pub fn complex_normal<T, R>(rng: &mut R) -> Complex<T>
where
    T: Scalar,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    let re: T = StandardNormal.sample(rng);
    let im: T = StandardNormal.sample(rng);
    Complex::new(re, im) * T::FRAC_1_SQRT_2()
}

/// Draws `γ_A ~ Exp(mean ρ_A)` and `γ_E ~ Gamma(K_E, ρ_E)` through explicit
/// complex Gaussian channel coefficients.
pub fn sample_single_antenna<T, R>(cfg: &SystemConfig<T>, rng: &mut R) -> Result<ChannelSample<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    if cfg.antennas_ap != 1 {
        return Err(Error::Misuse(format!(
            "single-antenna sampler called with K_A = {}",
            cfg.antennas_ap
        )));
    }
    let g: Complex<T> = complex_normal(rng);
    let gamma_a = cfg.snr_actuator * g.norm_sqr();
    let mut energy = T::zero();
    for _ in 0..cfg.antennas_eve {
        energy = energy + complex_normal::<T, R>(rng).norm_sqr();
    }
    Ok(ChannelSample {
        gamma_a,
        gamma_e: cfg.snr_eve * energy,
    })
}

/// Raw channel matrices of one multi-antenna realization.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiAntennaDraw<T> {
    /// Actuator channel `g_A`, `K_A` entries.
    pub g_a: Vec<Complex<T>>,
    /// Eavesdropper channel `G_E`, row-major `K_E × K_A`.
    pub g_e: Vec<Complex<T>>,
}

impl<T: Scalar> MultiAntennaDraw<T> {
    pub fn draw<R>(cfg: &SystemConfig<T>, rng: &mut R) -> Self
    where
        R: Rng + ?Sized,
        StandardNormal: Distribution<T>,
    {
        let ka = cfg.antennas_ap as usize;
        let ke = cfg.antennas_eve as usize;
        let g_a = (0..ka).map(|_| complex_normal(rng)).collect();
        let g_e = (0..ke * ka).map(|_| complex_normal(rng)).collect();
        Self { g_a, g_e }
    }

    /// Unit beamformer `w` with `g_Aᵀw = ‖g_A‖`.
    pub fn beamformer(&self) -> Option<Vec<Complex<T>>> {
        let norm = self.g_a.iter().fold(T::zero(), |s, g| s + g.norm_sqr()).sqrt();
        if !(norm > T::zero()) {
            return None;
        }
        Some(self.g_a.iter().map(|g| g.conj() / norm).collect())
    }

    /// SINR pair for this draw; `None` for the measure-zero draw `g_A = 0`.
    pub fn sinr(&self, cfg: &SystemConfig<T>) -> Option<ChannelSample<T>> {
        let ka = cfg.antennas_ap as usize;
        let ke = cfg.antennas_eve as usize;
        let eta = cfg.power_split;
        let w = self.beamformer()?;
        let gain_a = self.g_a.iter().fold(T::zero(), |s, g| s + g.norm_sqr());
        let gamma_a = eta * cfg.snr_actuator * gain_a;

        let h: Vec<Complex<T>> = (0..ke).map(|r| dot(&self.g_e[r * ka..(r + 1) * ka], &w)).collect();
        if ka == 1 || eta == T::one() {
            let energy = h.iter().fold(T::zero(), |s, v| s + v.norm_sqr());
            return Some(ChannelSample {
                gamma_a,
                gamma_e: eta * cfg.snr_eve * energy,
            });
        }

        let basis = orthonormal_complement(&w);
        let z: Vec<Vec<Complex<T>>> = (0..ke)
            .map(|r| {
                let row = &self.g_e[r * ka..(r + 1) * ka];
                basis.iter().map(|u| dot(row, u)).collect()
            })
            .collect();
        let an_scale = (T::one() - eta) / count(ka as u64 - 1);
        let noise = cfg.snr_eve.recip();
        // R = c·Z Zᴴ + ρ_E⁻¹ I, Hermitian positive definite
        let mut r = vec![Complex::new(T::zero(), T::zero()); ke * ke];
        for i in 0..ke {
            for j in 0..=i {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (a, b) in z[i].iter().zip(&z[j]) {
                    acc = acc + *a * b.conj();
                }
                acc = acc * an_scale;
                if i == j {
                    acc = acc + Complex::new(noise, T::zero());
                }
                r[i * ke + j] = acc;
                r[j * ke + i] = acc.conj();
            }
        }
        let quad = hermitian_quadratic_inverse(&mut r, &h, ke)?;
        Some(ChannelSample {
            gamma_a,
            gamma_e: eta * quad,
        })
    }
}

fn dot<T: Scalar>(row: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    row.iter()
        .zip(v)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + *a * *b)
}

/// Orthonormal basis of the complement of the unit vector `w`, by
/// Gram–Schmidt over the coordinate axes least aligned with `w`.
pub fn orthonormal_complement<T: Scalar>(w: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
    let k = w.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        w[a].norm_sqr()
            .partial_cmp(&w[b].norm_sqr())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut basis: Vec<Vec<Complex<T>>> = vec![w.to_vec()];
    for &axis in order.iter().take(k.saturating_sub(1)) {
        let mut v = vec![Complex::new(T::zero(), T::zero()); k];
        v[axis] = Complex::new(T::one(), T::zero());
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let proj = b
                    .iter()
                    .zip(&v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (bi, vi)| {
                        acc + bi.conj() * *vi
                    });
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = *vi - *bi * proj;
                }
            }
        }
        let norm = v.iter().fold(T::zero(), |s, x| s + x.norm_sqr()).sqrt();
        for x in v.iter_mut() {
            *x = *x / norm;
        }
        basis.push(v);
    }
    basis.remove(0);
    basis
}

/// `hᴴ R⁻¹ h` via an in-place Cholesky factorization `R = L Lᴴ`.
fn hermitian_quadratic_inverse<T: Scalar>(r: &mut [Complex<T>], h: &[Complex<T>], n: usize) -> Option<T> {
    for j in 0..n {
        let mut diag = r[j * n + j].re;
        for k in 0..j {
            diag = diag - r[j * n + k].norm_sqr();
        }
        if !(diag > T::zero()) {
            return None;
        }
        let d = diag.sqrt();
        r[j * n + j] = Complex::new(d, T::zero());
        for i in (j + 1)..n {
            let mut acc = r[i * n + j];
            for k in 0..j {
                acc = acc - r[i * n + k] * r[j * n + k].conj();
            }
            r[i * n + j] = acc / d;
        }
    }
    // forward substitution L y = h; hᴴR⁻¹h = ‖y‖²
    let mut y = vec![Complex::new(T::zero(), T::zero()); n];
    for i in 0..n {
        let mut acc = h[i];
        for k in 0..i {
            acc = acc - r[i * n + k] * y[k];
        }
        y[i] = acc / r[i * n + i].re;
    }
    Some(y.iter().fold(T::zero(), |s, v| s + v.norm_sqr()))
}

/// Draws `γ_A = η ρ_A ‖g_A‖²` and the eavesdropper's MMSE SINR under
/// MRT plus artificial noise. `K_A = 1` (with `η = 1`) delegates to
/// [`sample_single_antenna`].
pub fn sample_multi_antenna<T, R>(cfg: &SystemConfig<T>, rng: &mut R) -> Result<ChannelSample<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    if cfg.antennas_ap == 1 {
        if cfg.power_split != T::one() {
            return Err(Error::Misuse("K_A = 1 requires η = 1".into()));
        }
        return sample_single_antenna(cfg, rng);
    }
    loop {
        if let Some(s) = MultiAntennaDraw::draw(cfg, rng).sinr(cfg) {
            return Ok(s);
        }
    }
}

/// Draws from whichever model matches `cfg`.
pub fn sample<T, R>(cfg: &SystemConfig<T>, rng: &mut R) -> Result<ChannelSample<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    if cfg.antennas_ap == 1 {
        sample_single_antenna(cfg, rng)
    } else {
        sample_multi_antenna(cfg, rng)
    }
}

/// `ln` of the `n`-th survival term
/// `e^{-v} Aₙ(x) v^{n-1} / (n-1)!`, `v = x/(ηρ_E)`.
pub(crate) fn ln_survival_term<T: Scalar>(x: T, n: u32, cfg: &SystemConfig<T>) -> T {
    let v = x / (cfg.power_split * cfg.snr_eve);
    let base = -v + ln_pow(v, count(n as u64 - 1)) - ln_factorial::<T>(n as u64 - 1);
    base + ln_interference_factor(x, n, cfg)
}

/// `ln Aₙ(x)`; zero whenever `K_E ≥ K_A - 1 + n` or there is no artificial noise.
pub(crate) fn ln_interference_factor<T: Scalar>(x: T, n: u32, cfg: &SystemConfig<T>) -> T {
    let (ka, ke) = (cfg.antennas_ap, cfg.antennas_eve);
    let tau = cfg.an_power_ratio();
    if ke + 1 >= ka + n || tau == T::zero() {
        return T::zero();
    }
    let tx = tau * x;
    let terms: Vec<T> = (0..=(ke - n))
        .map(|m| ln_binomial::<T>(ka as u64 - 1, m as u64) + ln_pow(tx, count(m as u64)))
        .collect();
    crate::scalar::log_sum_exp(&terms) - count::<T>(ka as u64 - 1) * tx.ln_1p()
}

/// `P{γ_E > x}` for the MMSE eavesdropper.
pub fn eavesdropper_sinr_survival<T: Scalar>(x: T, cfg: &SystemConfig<T>) -> Result<T> {
    if !(x >= T::zero()) {
        return Err(domain("eavesdropper_sinr_cdf", format!("x = {x} must be nonnegative")));
    }
    cfg.validate()?;
    Ok(survival_unchecked(x, cfg))
}

/// Survival function for an already validated `cfg` and `x ≥ 0`.
pub(crate) fn survival_unchecked<T: Scalar>(x: T, cfg: &SystemConfig<T>) -> T {
    let s = (1..=cfg.antennas_eve).fold(T::zero(), |acc, n| acc + ln_survival_term(x, n, cfg).exp());
    s.min(T::one()).max(T::zero())
}

/// CDF of the eavesdropper's MMSE SINR under MRT with artificial noise.
/// For `η = 1` this is the `Gamma(K_E, ρ_E)` CDF.
pub fn eavesdropper_sinr_cdf<T: Scalar>(x: T, cfg: &SystemConfig<T>) -> Result<T> {
    Ok(T::one() - eavesdropper_sinr_survival(x, cfg)?)
}

/// Density of `γ_A ~ Gamma(K_A, ηρ_A)` in log space.
pub(crate) fn ln_actuator_pdf<T: Scalar>(x: T, cfg: &SystemConfig<T>) -> T {
    let ka: T = count(cfg.antennas_ap as u64);
    let scale = cfg.power_split * cfg.snr_actuator;
    ln_pow(x, ka - T::one()) - x / scale - ka * scale.ln() - crate::specfun::ln_gamma(ka)
}
