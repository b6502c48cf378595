mod common;

use common::{qinv_bisection, simpson};
use fblsec::specfun::*;
use proptest::prelude::*;

#[test]
fn gaussian_tail_matches_simpson() {
    let x = 2.326_347_874_0;
    let oracle = simpson(|t| (-t * t / 2.0).exp(), x, x + 40.0, 200_000) / (2.0 * std::f64::consts::PI).sqrt();
    assert!((gauss_q(x) - oracle).abs() < 1e-12);
    assert!((gauss_q(x) - 0.01).abs() < 1e-8);
    assert!(gauss_q(40.0) < 1e-300);
}

#[test]
fn quantile_matches_bisection() {
    let oracle = qinv_bisection(1e-2);
    assert!((gauss_q_inv(1e-2).unwrap() - oracle).abs() < 1e-9);
    assert!((gauss_q_inv(1e-2f64).unwrap() - 2.326_347_874_0).abs() < 1e-9);
    assert!((gauss_q_inv(1.0f64 - 1e-2).unwrap() + 2.326_347_874_0).abs() < 1e-9);
    assert_eq!(gauss_q_inv(0.5).unwrap(), 0.0);
    for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
        assert!(gauss_q_inv(p).is_err());
    }
}

#[test]
fn incomplete_gammas_match_simpson() {
    let upper = simpson(|t| t * t * (-t).exp(), 5.0, 80.0, 200_000);
    assert!((gamma_upper(3.0, 5.0).unwrap() - upper).abs() < 1e-10 * upper);
    let lower = simpson(|t| t.powi(3) * (-t).exp(), 0.0, 4.0, 20_000);
    assert!((gamma_lower(4.0, 4.0).unwrap() - lower).abs() < 1e-10 * lower);
    assert_eq!(gamma_upper(1.0, 0.0).unwrap(), 1.0);
    assert!((gamma_upper(1.0, 2.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
    assert_eq!(gamma_lower(2.0, 0.0).unwrap(), 0.0);
    assert!((gamma_lower(1.0, 1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    assert!(gamma_upper(0.0, 1.0).is_err());
    assert!(gamma_lower(1.0, -1.0).is_err());
}

#[test]
fn tricomi_matches_integral_representation() {
    // U(2, 0, 3) = ∫ e^{-3t} t (1+t)^{-3} dt
    let oracle = simpson(|t| (-3.0 * t).exp() * t / (1.0 + t).powi(3), 0.0, 40.0, 400_000);
    let got = tricomi_u(2.0, 0.0, 3.0).unwrap();
    assert!((got - oracle).abs() < 1e-8 * oracle);
    let e1 = simpson(|t| (-t).exp() / (1.0 + t), 0.0, 60.0, 400_000);
    assert!((tricomi_u(1.0, 1.0, 1.0).unwrap() - e1).abs() < 1e-8 * e1);
    assert!((tricomi_u(1.0f64, 2.0, 2.0).unwrap() - 0.5).abs() < 1e-10);
    assert!(tricomi_u(0.0, 1.0, 1.0).is_err());
    assert!(tricomi_u(1.0, 1.0, 0.0).is_err());
}

#[test]
fn chebyshev_node_sets() {
    let one = chebyshev_nodes::<f64>(1).unwrap();
    assert!(one.nodes()[0].abs() < 1e-16);
    let two = chebyshev_nodes::<f64>(2).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((two.nodes()[0] - h).abs() < 1e-15 && (two.nodes()[1] + h).abs() < 1e-15);
    let twenty = chebyshev_nodes::<f64>(20).unwrap();
    assert_eq!(twenty.len(), 20);
    for i in 0..20 {
        assert!((twenty.nodes()[i] + twenty.nodes()[19 - i]).abs() < 1e-15);
        assert!(twenty.nodes()[i].abs() < 1.0);
    }
    assert!(twenty.nodes().windows(2).all(|w| w[0] > w[1]));
    assert!(chebyshev_nodes::<f64>(0).is_err());
}

#[test]
fn chebyshev_rule_converges() {
    let f = |z: f64| z * (-z / 3.0).exp() + (z / 2.0).sin();
    let exact = integrate(f, 0.0, 10.0, &QuadOptions::default()).unwrap().value;
    let errors: Vec<f64> = [5, 10, 20, 40]
        .iter()
        .map(|&m| (chebyshev_nodes::<f64>(m).unwrap().integrate(f, 10.0) - exact).abs())
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(errors[3] < 1e-2 * exact.abs());
}

proptest! {
    #[test]
    fn gauss_q_is_symmetric(x in -30.0f64..30.0) {
        prop_assert!((gauss_q(x) + gauss_q(-x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantile_round_trips(log_p in -6.0f64..-0.302) {
        let p = 10f64.powf(log_p);
        prop_assert!((gauss_q(gauss_q_inv(p).unwrap()) - p).abs() < 1e-9 * p.max(1e-3));
    }

    #[test]
    fn quantile_is_decreasing(a in 1e-6f64..0.999, b in 1e-6f64..0.999) {
        prop_assume!(a < b);
        prop_assert!(gauss_q_inv(a).unwrap() > gauss_q_inv(b).unwrap());
    }

    #[test]
    fn incomplete_gammas_sum_to_gamma(k in 0.1f64..40.0, x in 0.0f64..80.0) {
        let total = gamma_lower(k, x).unwrap() + gamma_upper(k, x).unwrap();
        prop_assert!((total - gamma(k)).abs() <= 1e-10 * gamma(k));
    }

    #[test]
    fn tricomi_decreases_in_z(q in 0u32..6, shift in -4i32..4, z in 0.2f64..20.0) {
        let a = q as f64 + 1.0;
        let b = a + shift as f64;
        prop_assert!(tricomi_u(a, b, z * 1.1).unwrap() < tricomi_u(a, b, z).unwrap());
    }
}
