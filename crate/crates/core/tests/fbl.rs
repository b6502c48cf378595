mod common;

use common::{db, qinv, qinv_bisection, simpson};
use fblsec::fbl::*;
use fblsec::SystemConfig;
use proptest::prelude::*;

const LN2: f64 = std::f64::consts::LN_2;

fn fig2a(n: u64) -> SystemConfig<f64> {
    SystemConfig::single_antenna(200, n, 1e-2, db(10.0), db(3.0), 2).unwrap()
}

fn gaussian_tail(x: f64) -> f64 {
    simpson(|t| (-t * t / 2.0).exp(), x, x + 40.0, 200_000) / (2.0 * std::f64::consts::PI).sqrt()
}

#[test]
fn basic_values() {
    assert!((secrecy_capacity(3.0, 1.0) - 1.0f64).abs() < 1e-15);
    assert_eq!(secrecy_capacity(2.0, 2.0), 0.0);
    assert_eq!(secrecy_capacity(1.0, 3.0), 0.0);
    assert_eq!(channel_dispersion(0.0), 0.0);
    assert!((channel_dispersion(1.0) - 0.75f64).abs() < 1e-15);
    assert!((1.0 - channel_dispersion(1e6f64)) < 1e-11);
}

#[test]
fn secrecy_rate_term_by_term() {
    let (n, ga, ge) = (500.0, 9.0, 1.0);
    let q = qinv_bisection(1e-2);
    let va = 1.0 - 1.0 / (1.0f64 + ga).powi(2);
    let ve = 1.0 - 1.0 / (1.0f64 + ge).powi(2);
    let expected = (10.0f64 / 2.0).log2() - (va / n).sqrt() * q / LN2 - (ve / n).sqrt() * q / LN2;
    let got = secrecy_rate(500, 1e-2, 1e-2, ga, ge).unwrap();
    assert!((got - expected).abs() < 1e-9);
    let far = secrecy_rate(1_000_000_000, 1e-2, 1e-2, ga, ge).unwrap();
    assert!((far - secrecy_capacity(ga, ge)).abs() < 1e-3);
    assert_eq!(secrecy_rate(500, 1e-2, 1e-2, 1.0, 3.0).unwrap(), 0.0);
    assert!(secrecy_rate(500, 0.0, 1e-2, ga, ge).is_err());
    assert!(secrecy_rate(500, 1e-2, 1.0, ga, ge).is_err());
}

#[test]
fn error_probability_recomputed() {
    let cfg = fig2a(300);
    let (ga, ge, n) = (10.0f64, 2.0f64, 300.0f64);
    let q = qinv_bisection(1e-2);
    let va = 1.0 - (1.0 + ga).powi(-2);
    let ve = 1.0 - (1.0 + ge).powi(-2);
    let arg = (n / va).sqrt() * (((1.0 + ga) / (1.0 + ge)).ln() - (ve / n).sqrt() * q - 200.0 / n * LN2);
    let expected = gaussian_tail(arg);
    let got = decoding_error_prob(&cfg, ga, ge).unwrap();
    assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
    assert_eq!(decoding_error_prob(&cfg, 2.0, 2.0).unwrap(), 1.0);
    assert_eq!(decoding_error_prob(&cfg, 0.0, 0.0).unwrap(), 1.0);
    let strong = decoding_error_prob(&fig2a(400), 1e9, 1.0).unwrap();
    assert!(strong < 1e-10);
}

#[test]
fn linearization_recomputed() {
    let cfg = fig2a(300);
    let (ge, n) = (2.0f64, 300.0f64);
    let q = qinv_bisection(1e-2);
    let ve = 1.0 - (1.0 + ge).powi(-2);
    let x0 = ((ve / n).sqrt() * q + 200.0 / n * LN2).exp() * (1.0 + ge) - 1.0;
    let k = -(n / (2.0 * std::f64::consts::PI * x0 * (x0 + 2.0))).sqrt();
    let lp = linearize(&cfg, ge).unwrap();
    assert!((lp.x0 - x0).abs() < 1e-9 * x0);
    assert!((lp.slope - k).abs() < 1e-9 * k.abs());

    let zero = linearize(&fig2a(400), 0.0).unwrap();
    assert!((zero.x0 - (2f64.sqrt() - 1.0)).abs() < 1e-12);

    // δ → 1/2 and B → 0 put the threshold on γ_E itself
    let params = CodingParams::new(0.0, 400.0, 0.499_999_9).unwrap();
    let lp = params.linearize(3.0f64).unwrap();
    assert!((lp.x0 - 3.0).abs() < 1e-5 * 3.0);
}

#[test]
fn ramp_shape() {
    let lp = linearize(&fig2a(400), 2.0).unwrap();
    assert_eq!(ramp_error_prob(&lp, lp.x0), 0.5);
    assert_eq!(ramp_error_prob(&lp, lp.x0 + 0.5 / lp.slope), 1.0);
    assert_eq!(ramp_error_prob(&lp, lp.x0 - 0.5 / lp.slope), 0.0);
    assert_eq!(ramp_error_prob(&lp, lp.x0 - 1.0 / lp.slope), 0.0);
}

/// A tangent line to `Q` at 0 hits 0 at `√(π/2)`, where `Q ≈ 0.1055`; the
/// ramp's worst gap tends to that value from above as `N` grows.
#[test]
fn ramp_tracks_exact_error_near_threshold() {
    let limit = gaussian_tail((std::f64::consts::PI / 2.0).sqrt());
    for n in [100u64, 200, 400, 800, 1600, 100_000] {
        let cfg = fig2a(n);
        let params = CodingParams::from_config(&cfg).unwrap();
        for ge in [0.5, 2.0, 6.0] {
            let lp = params.linearize(ge).unwrap();
            assert!((params.error_prob(lp.x0, ge) - 0.5).abs() < 1e-12);
            let (lo, hi) = (lp.lower_edge().max(ge), lp.upper_edge());
            let gap = (0..=400)
                .map(|i| lo + (hi - lo) * i as f64 / 400.0)
                .map(|x| (lp.error_prob(x) - params.error_prob(x, ge)).abs())
                .fold(0.0, f64::max);
            assert!(gap < 0.125, "N={n} γ_E={ge} gap {gap}");
            if n == 100_000 {
                assert!((gap - limit).abs() < 5e-3, "N={n} γ_E={ge} gap {gap}");
            }
        }
    }
}

#[test]
fn penalties_differ_only_through_dispersion() {
    // ε = δ, γ_E = 0: the leakage penalty vanishes with V_E
    let (ga, n) = (4.0f64, 300u64);
    let rate = secrecy_rate(n, 1e-2, 1e-2, ga, 0.0).unwrap();
    let q = qinv(1e-2);
    let expected = (1.0 + ga).log2() - (channel_dispersion(ga) / n as f64).sqrt() * q / LN2;
    assert!((rate - expected).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn error_probability_monotone(
        n in 50u64..3000, bits in 10u64..600, ga in 0.0f64..100.0, ge in 0.0f64..20.0, bump in 1.01f64..2.0,
    ) {
        let cfg = SystemConfig::single_antenna(bits, n, 1e-2, 10.0, 2.0, 2).unwrap();
        let e = decoding_error_prob(&cfg, ga, ge).unwrap();
        prop_assert!((0.0..=1.0).contains(&e));
        let longer = decoding_error_prob(&cfg.clone().with_blocklength((n as f64 * bump) as u64), ga, ge).unwrap();
        prop_assert!(longer <= e + 1e-15);
        prop_assert!(decoding_error_prob(&cfg, ga * bump, ge).unwrap() <= e + 1e-15);
        prop_assert!(decoding_error_prob(&cfg.clone().with_bits((bits as f64 * bump) as u64 + 1), ga, ge).unwrap() >= e - 1e-15);
        prop_assert!(decoding_error_prob(&cfg, ga, ge * bump).unwrap() >= e - 1e-15);
    }

    #[test]
    fn rate_point_is_consistent(n in 1u64..5000, ga in 0.0f64..1e3, ge in 0.0f64..1e3, eps in 1e-6f64..0.5) {
        let rp = rate_point(n, eps, 1e-3, ga, ge).unwrap();
        prop_assert!(rp.rate >= 0.0 && rp.rate <= rp.secrecy_capacity + 1e-15);
        prop_assert!((rp.dispersion_a - (1.0 - (1.0 + ga).powi(-2))).abs() < 1e-12);
        prop_assert!((rp.dispersion_e - (1.0 - (1.0 + ge).powi(-2))).abs() < 1e-12);
    }

    #[test]
    fn ramp_is_a_probability(ge in 0.0f64..50.0, ga in 0.0f64..100.0, n in 10u64..4000) {
        let lp = linearize(&fig2a(n), ge).unwrap();
        prop_assert!(lp.x0 > 0.0 && lp.slope < 0.0);
        let p = ramp_error_prob(&lp, ga);
        prop_assert!((0.0..=1.0).contains(&p));
    }
}
