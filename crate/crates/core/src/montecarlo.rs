//! Monte Carlo ground truth: channel draws pushed through the exact
//! conditional error probability.
//!
//! Trial `i` of a run with seed `s` draws from ChaCha8 seeded with
//! `seed_from_u64(s)` on stream `i`. Trials are grouped into fixed-size
//! blocks; each block is reduced to `(count, mean, M2)` and the blocks are
//! merged in index order, so the result does not depend on the number of
//! worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::channel::{self, ChannelSample};
use crate::config::SystemConfig;
use crate::error::{domain, Error, Result};
use crate::fbl::CodingParams;
use crate::scalar::{count, Scalar};

const BLOCK: u64 = 4096;

/// Trial count, seed and worker threads of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McOptions {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the available parallelism.
    pub workers: usize,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 0,
            workers: 0,
        }
    }
}

impl McOptions {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: 0,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult<T> {
    pub mean: T,
    /// Sample standard deviation over `√trials`.
    pub std_error: T,
    pub trials: u64,
    pub seed: u64,
}

/// Random source of trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy)]
struct Moments<T> {
    count: u64,
    mean: T,
    m2: T,
}

impl<T: Scalar> Moments<T> {
    fn empty() -> Self {
        Self {
            count: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }

    fn push(&mut self, x: T) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean = self.mean + delta / count(self.count);
        self.m2 = self.m2 + delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let total = self.count + other.count;
        let (na, nb, n): (T, T, T) = (count(self.count), count(other.count), count(total));
        let delta = other.mean - self.mean;
        Self {
            count: total,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))
}

fn block_ranges(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(BLOCK))
        .map(|b| (b * BLOCK, ((b + 1) * BLOCK).min(trials)))
        .collect()
}

/// Runs `f` on every trial's random source in parallel and returns the
/// per-trial outputs in trial order.
pub fn map_trials<U, F>(opts: &McOptions, f: F) -> Result<Vec<U>>
where
    U: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<U> + Sync,
{
    let pool = thread_pool(opts.workers)?;
    let blocks: Vec<Result<Vec<U>>> = pool.install(|| {
        block_ranges(opts.trials)
            .into_par_iter()
            .map(|(lo, hi)| (lo..hi).map(|i| f(&mut trial_rng(opts.seed, i))).collect())
            .collect()
    });
    let mut out = Vec::with_capacity(opts.trials as usize);
    for block in blocks {
        out.extend(block?);
    }
    Ok(out)
}

/// Mean and standard error of `f` over the trials of `opts`.
pub fn estimate_mean<T, F>(opts: &McOptions, f: F) -> Result<MonteCarloResult<T>>
where
    T: Scalar,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    if opts.trials == 0 {
        return Err(domain("monte carlo", "trial count must be at least 1"));
    }
    let pool = thread_pool(opts.workers)?;
    let blocks: Vec<Result<Moments<T>>> = pool.install(|| {
        block_ranges(opts.trials)
            .into_par_iter()
            .map(|(lo, hi)| {
                let mut m = Moments::empty();
                for i in lo..hi {
                    m.push(f(&mut trial_rng(opts.seed, i))?);
                }
                Ok(m)
            })
            .collect()
    });
    let mut total = Moments::empty();
    for block in blocks {
        total = total.merge(block?);
    }
    let n: T = count(total.count);
    let std_error = if total.count > 1 {
        (total.m2 / (n - T::one())).sqrt() / n.sqrt()
    } else {
        T::zero()
    };
    Ok(MonteCarloResult {
        mean: total.mean,
        std_error,
        trials: opts.trials,
        seed: opts.seed,
    })
}

/// Average decoding error probability over channel draws of the model
/// selected by `cfg`.
pub fn simulate_average_error<T>(cfg: &SystemConfig<T>, opts: &McOptions) -> Result<MonteCarloResult<T>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
{
    let params = CodingParams::from_config(cfg)?;
    estimate_mean(opts, |rng| {
        let s = channel::sample(cfg, rng)?;
        Ok(params.error_prob(s.gamma_a, s.gamma_e))
    })
}

/// `(B/N)(1 - ε̄)` from the same draws as [`simulate_average_error`].
pub fn simulate_average_throughput<T>(cfg: &SystemConfig<T>, opts: &McOptions) -> Result<MonteCarloResult<T>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
{
    let err = simulate_average_error(cfg, opts)?;
    let rate = cfg.rate();
    Ok(MonteCarloResult {
        mean: rate * (T::one() - err.mean),
        std_error: rate * err.std_error,
        ..err
    })
}

/// `P{γ_A > γ_E}`.
pub fn simulate_capacity_probability<T>(cfg: &SystemConfig<T>, opts: &McOptions) -> Result<MonteCarloResult<T>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
{
    cfg.validate()?;
    estimate_mean(opts, |rng| {
        let s = channel::sample(cfg, rng)?;
        Ok(if s.gamma_a > s.gamma_e { T::one() } else { T::zero() })
    })
}

/// The channel draws of every trial, in trial order.
pub fn sample_channels<T>(cfg: &SystemConfig<T>, opts: &McOptions) -> Result<Vec<ChannelSample<T>>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
{
    cfg.validate()?;
    map_trials(opts, |rng| channel::sample(cfg, rng))
}

/// Right-continuous empirical distribution function of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf<T> {
    sorted: Vec<T>,
}

impl<T: Scalar> EmpiricalCdf<T> {
    pub fn new(mut samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(domain("empirical_cdf", "sample is empty"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(domain("empirical_cdf", "sample contains NaN"));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).expect("NaN excluded"));
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[T] {
        &self.sorted
    }

    /// Fraction of samples `≤ x`.
    pub fn eval(&self, x: T) -> T {
        let k = self.sorted.partition_point(|&s| s <= x);
        count::<T>(k as u64) / count(self.sorted.len() as u64)
    }

    /// Kolmogorov–Smirnov distance `sup |F_n - F|` to a continuous CDF.
    pub fn ks_distance<F: Fn(T) -> T>(&self, cdf: F) -> T {
        let n: T = count(self.sorted.len() as u64);
        self.sorted.iter().enumerate().fold(T::zero(), |d, (i, &x)| {
            let f = cdf(x);
            let below = count::<T>(i as u64) / n;
            let above = count::<T>(i as u64 + 1) / n;
            d.max(above - f).max(f - below)
        })
    }
}

/// Empirical CDF of `samples`.
pub fn empirical_cdf<T: Scalar>(samples: Vec<T>) -> Result<EmpiricalCdf<T>> {
    EmpiricalCdf::new(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn moments_merge_matches_direct() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut whole = Moments::empty();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Moments::empty();
        let mut b = Moments::empty();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-9 * whole.m2);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let base = McOptions::new(10_000, 42);
        let run = |w| estimate_mean(&base.with_workers(w), |rng| Ok(rng.random::<f64>())).unwrap();
        let one = run(1);
        assert_eq!(one, run(3));
        assert_eq!(one, run(8));
        assert!((one.mean - 0.5).abs() < 4.0 * one.std_error);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(estimate_mean(&McOptions::new(0, 1), |_| Ok(1.0)).is_err());
    }

    #[test]
    fn empirical_cdf_steps() {
        let e = EmpiricalCdf::new(vec![2.0]).unwrap();
        assert_eq!(e.eval(1.999), 0.0);
        assert_eq!(e.eval(2.0), 1.0);
        let e = EmpiricalCdf::new(vec![3.0, 1.0, 2.0, 4.0]).unwrap();
        for (k, x) in [1.0, 2.0, 3.0, 4.0].into_iter().enumerate() {
            assert_eq!(e.eval(x), (k + 1) as f64 / 4.0);
        }
        assert!(EmpiricalCdf::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn throughput_is_affine_in_error() {
        let cfg = SystemConfig::single_antenna(200, 400, 1e-2, 10.0, 2.0, 2).unwrap();
        let opts = McOptions::new(5000, 7);
        let e = simulate_average_error(&cfg, &opts).unwrap();
        let t = simulate_average_throughput(&cfg, &opts).unwrap();
        assert_eq!(t.mean, 0.5 * (1.0 - e.mean));
        assert_eq!(t.std_error, 0.5 * e.std_error);
    }
}
