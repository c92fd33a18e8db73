//! Invariants of the special functions, channel model and analytic
//! expressions, checked on random inputs.

use std::f64::consts::{PI, TAU};

use borderline_core::analytic::{
    connection_probability, connection_probability_bpp, interference_integral_infinite,
    interference_integral_sector, interference_integral_sector_hypergeometric, laplace_argument,
    laplace_interference, mean_no_interference_factor, poisson_mixture, InterferenceArg,
    ScenarioConfig,
};
use borderline_core::channel::{path_gain, sinr, Attenuation, PathLossParams, RadioParams};
use borderline_core::geometry::{domain_area, sample_uniform, Domain, RngState, SectorDomain};
use borderline_core::specfun::{erfc, erfcx, hyp2f1_1b, integrate_finite, QuadratureSpec};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn scenario(
    r: f64,
    theta: f64,
    eta: f64,
    eps: f64,
    rho: f64,
    d: f64,
    radio: RadioParams,
) -> ScenarioConfig {
    ScenarioConfig::sector_apex(
        SectorDomain::new(r, theta).unwrap(),
        PathLossParams::new(eta, eps).unwrap(),
        radio,
        rho,
        d,
    )
    .unwrap()
}

fn h(r: f64, theta: f64, eta: f64, eps: f64, rho: f64, d: f64, q: f64) -> f64 {
    let radio = RadioParams::new(1.0, 1.0, 1.0, q).unwrap();
    connection_probability(&scenario(r, theta, eta, eps, rho, d, radio)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hyp2f1_increases_with_z(b in 0.01f64..=1.0, z in -1e6f64..-1e-6, f in 0.01f64..0.99) {
        let lo = hyp2f1_1b(b, z).unwrap();
        let hi = hyp2f1_1b(b, z * f).unwrap();
        prop_assert!(hi >= lo, "b={} z={} {} {}", b, z, lo, hi);
        prop_assert!(lo > 0.0 && hi <= 1.0);
    }

    #[test]
    fn erfcx_rescales_erfc(x in 0.0f64..5.0) {
        prop_assert!(rel(erfcx(x).unwrap() * (-x * x).exp(), erfc(x)) < 1e-12);
    }

    #[test]
    fn erfc_reflects(x in -6.0f64..6.0) {
        prop_assert!((erfc(-x) - (2.0 - erfc(x))).abs() < 1e-15);
    }

    #[test]
    fn quadrature_exact_on_polynomials(c in prop::collection::vec(-3.0f64..3.0, 1..32), a in -2.0f64..0.0, b in 0.0f64..2.0) {
        let p = |x: f64| c.iter().rev().fold(0.0, |acc, k| acc * x + k);
        let anti = |x: f64| c.iter().enumerate().rev().fold(0.0, |acc, (i, k)| acc * x + k / (i + 1) as f64) * x;
        let got = integrate_finite(p, a, b, &QuadratureSpec::default()).unwrap();
        let want = anti(b) - anti(a);
        let scale = c.iter().map(|k| k.abs()).sum::<f64>() * 2f64.powi(c.len() as i32) * (b - a);
        prop_assert!((got - want).abs() <= 1e-10 * scale.max(1.0), "{} vs {}", got, want);
    }

    #[test]
    fn sector_area_scaling(r in 0.1f64..20.0, theta in 0.01f64..=TAU, k in 0.1f64..5.0) {
        let a = domain_area(&SectorDomain::new(r, theta).unwrap().into());
        let ar = domain_area(&SectorDomain::new(k * r, theta).unwrap().into());
        prop_assert!(rel(ar, k * k * a) < 1e-13);
        let at = domain_area(&SectorDomain::new(r, theta * 0.5).unwrap().into());
        prop_assert!(rel(at, 0.5 * a) < 1e-13);
    }

    #[test]
    fn path_gain_strictly_decreasing(eta in 2.0f64..6.0, eps in 0.0f64..1.0, d in 1e-3f64..50.0, step in 1e-3f64..5.0) {
        let pl = PathLossParams::new(eta, eps).unwrap();
        prop_assert!(path_gain(d + step, &pl).unwrap() < path_gain(d, &pl).unwrap());
        prop_assert!(rel(pl.gain(d), path_gain(d, &pl).unwrap()) < 1e-14);
    }

    #[test]
    fn sinr_linear_and_decreasing(g in 1e-3f64..10.0, h in 1e-3f64..10.0, i in 0.0f64..100.0, k in 0.1f64..10.0, gamma in 0.01f64..=1.0) {
        let radio = RadioParams::new(2.0, 0.5, gamma, 1.0).unwrap();
        let base = sinr(g, h, i, &radio).unwrap();
        prop_assert!(rel(sinr(k * g, h, i, &radio).unwrap(), k * base) < 1e-14);
        prop_assert!(rel(sinr(g, k * h, i, &radio).unwrap(), k * base) < 1e-14);
        prop_assert!(sinr(g, h, i + 1.0, &radio).unwrap() < base);
    }

    #[test]
    fn interference_sum_is_order_free(mut gains in prop::collection::vec(1e-6f64..10.0, 1..200), seed in any::<u64>()) {
        let forward: f64 = gains.iter().sum();
        let n = gains.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            gains.swap(i, (s >> 33) as usize % (i + 1));
        }
        let shuffled: f64 = gains.iter().sum();
        prop_assert!(rel(shuffled, forward) < 1e-13);
    }

    #[test]
    fn closed_forms_match_hypergeometric(r in 0.5f64..10.0, ls in -3.0f64..3.0, eps in prop::sample::select(vec![0.0, 0.01, 1.0]), theta in 0.05f64..=TAU, eta in prop::sample::select(vec![2.0, 4.0])) {
        let sector = SectorDomain::new(r, theta).unwrap();
        let pl = PathLossParams::new(eta, eps).unwrap();
        let s = InterferenceArg::new(10f64.powf(ls)).unwrap();
        let a = interference_integral_sector(&sector, s, &pl).unwrap();
        let b = interference_integral_sector_hypergeometric(&sector, s, &pl).unwrap();
        prop_assert!(rel(b, a) < 1e-10);
    }

    #[test]
    fn infinite_wedge_bounds_sector(r in 0.5f64..50.0, ls in -3.0f64..3.0, eps in 0.0f64..1.0, theta in 0.05f64..=TAU, eta in 2.05f64..6.0) {
        let pl = PathLossParams::new(eta, eps).unwrap();
        let s = InterferenceArg::new(10f64.powf(ls)).unwrap();
        let finite = interference_integral_sector(&SectorDomain::new(r, theta).unwrap(), s, &pl).unwrap();
        let inf = interference_integral_infinite(theta, s, &pl).unwrap();
        prop_assert!(inf >= finite * (1.0 - 1e-12), "{} < {}", inf, finite);
    }

    #[test]
    fn connection_decreases_in_each_argument(
        r in 0.5f64..6.0, theta in 0.1f64..6.0, eta in 2.0f64..5.0, eps in 0.0f64..0.5,
        rho in 0.01f64..5.0, d in 0.05f64..2.0, q in 0.05f64..5.0, f in 1.05f64..1.5,
    ) {
        let base = h(r, theta, eta, eps, rho, d, q);
        prop_assert!((0.0..=1.0).contains(&base));
        if base > 1e-250 {
            prop_assert!(h(r, theta, eta, eps, rho, d * f, q) < base);
            prop_assert!(h(r, theta, eta, eps, rho, d, q * f) < base);
            prop_assert!(h(r, theta, eta, eps, rho * f, d, q) < base);
            prop_assert!(h(r, (theta * f).min(TAU), eta, eps, rho, d, q) <= base);
            prop_assert!(h(r * f, theta, eta, eps, rho, d, q) < base);
        }
    }

    // Not universal: from about η = 4 up, a small buffer raises H near d = 1,
    // because it also caps the interference from the closest nodes.
    #[test]
    fn buffer_lowers_connection_at_short_range(theta in 0.1f64..=TAU, eta in 2.0f64..=3.0, d in 0.05f64..=1.0) {
        prop_assert!(h(3.0, theta, eta, 0.01, 12.0, d, 1.0) < h(3.0, theta, eta, 0.0, 12.0, d, 1.0));
    }

    #[test]
    fn binomial_field_probability_in_unit_interval(theta in 0.1f64..=TAU, eta in 2.0f64..5.0, eps in 0.0f64..1.0, d in 0.01f64..3.0, n in 1u64..2000) {
        let cfg = scenario(3.0, theta, eta, eps, 1.0, d, RadioParams::default());
        let p = connection_probability_bpp(&cfg, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn poisson_average_of_binomial_fields(theta in 0.1f64..=TAU, eta in 2.0f64..5.0, eps in 0.0f64..1.0, d in 0.05f64..3.0, rho in 0.01f64..15.0) {
        let cfg = scenario(3.0, theta, eta, eps, rho, d, RadioParams::default());
        let mean = rho * cfg.domain().area();
        let a = mean_no_interference_factor(&cfg).unwrap();
        let mix = poisson_mixture(mean, a, (10.0 * mean).ceil().max(50.0) as u64).unwrap();
        let laplace = laplace_interference(laplace_argument(&cfg), &cfg).unwrap();
        prop_assert!((mix - (-mean * (1.0 - a)).exp()).abs() < 1e-8);
        prop_assert!((mix - laplace).abs() < 1e-8);
    }

    #[test]
    fn identical_state_reproduces_points(seed in any::<u64>(), stream in any::<u64>(), index in 0u64..(1 << 32)) {
        let state = RngState::new(seed, stream);
        let dom: Domain = SectorDomain::new(3.0, PI).unwrap().into();
        let (mut a, mut b) = (state.trial_rng(index), state.trial_rng(index));
        for _ in 0..8 {
            prop_assert_eq!(sample_uniform(&dom, &mut a), sample_uniform(&dom, &mut b));
        }
    }
}
