//! Special functions and integrals against independent quadrature oracles.
//!
//! The oracle is composite Gauss–Legendre with nodes computed here by Newton
//! iteration, sharing nothing with the library's Gauss–Kronrod code.

use std::f64::consts::{E, PI, TAU};

use borderline_core::analytic::{
    ergodic_rate, interference_integral_sector, interference_integral_sector_hypergeometric,
    InterferenceArg, ScenarioConfig,
};
use borderline_core::channel::{PathLossParams, RadioParams};
use borderline_core::geometry::SectorDomain;
use borderline_core::specfun::{erfc, erfcx, hyp2f1_1b, integrate_semiinfinite, QuadratureSpec};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite 20-point Gauss–Legendre over `panels` equal panels of [a, b].
fn composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let part: f64 = rule.iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum();
        total += 0.5 * h * part;
    }
    total
}

/// `b ∫₀¹ t^{b−1} / (1 − z t) dt` after `t = e^{−v/b}`:
/// `∫₀^∞ e^{−v} / (1 − z e^{−v/b}) dv`.
fn euler_oracle(b: f64, z: f64) -> f64 {
    let upper = 60.0 + b * (1.0 - z).ln();
    let panels = (upper / (0.25 * b).min(0.5)).ceil() as usize;
    composite(
        |v| (-v).exp() / (1.0 - z * (-v / b).exp()),
        0.0,
        upper,
        panels,
    )
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn legendre_rule_is_exact_on_polynomials() {
    let rule = gauss_legendre(20);
    let sum: f64 = rule.iter().map(|&(_, w)| w).sum();
    assert!((sum - 2.0).abs() < 1e-14);
    let x38: f64 = rule.iter().map(|&(x, w)| w * x.powi(38)).sum();
    assert!(rel(x38, 2.0 / 39.0) < 1e-13);
}

#[test]
fn hyp2f1_matches_euler_integral_on_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let b = 0.05 + 0.95 * i as f64 / 19.0;
        for j in 0..20 {
            // z from 0 down to −10⁶, log-spaced after the first point.
            let z = if j == 0 {
                0.0
            } else {
                -(10f64.powf(-3.0 + 9.0 * (j - 1) as f64 / 18.0))
            };
            let got = hyp2f1_1b(b, z).unwrap();
            let want = euler_oracle(b, z);
            let e = rel(got, want);
            worst = worst.max(e);
            assert!(e < 1e-10, "b={b} z={z}: {got} vs {want}");
            assert!(got > 0.0 && got <= 1.0);
        }
    }
    assert!(worst < 1e-10);
}

#[test]
fn hyp2f1_spot_values() {
    assert_eq!(hyp2f1_1b(0.8, 0.0).unwrap(), 1.0);
    assert!(rel(hyp2f1_1b(1.0, -1.0).unwrap(), 2f64.ln()) < 1e-14);
    assert!(rel(hyp2f1_1b(0.5, -9.0).unwrap(), 3f64.atan() / 3.0) < 1e-13);
    assert!(rel(hyp2f1_1b(0.8, -50.0).unwrap(), euler_oracle(0.8, -50.0)) < 1e-10);
}

/// `(2/√π) ∫ₓ^∞ e^{−t²} dt`, truncated where the integrand underflows.
fn erfc_oracle(x: f64) -> f64 {
    composite(|t| (-t * t).exp(), x, x + 12.0, 240) * 2.0 / PI.sqrt()
}

#[test]
fn erfc_matches_quadrature() {
    for x in [0.0, 0.1, 0.5, 1.0, 2.0, 3.5, 5.0, 10.0, 20.0, 25.0] {
        let want = erfc_oracle(x);
        assert!(rel(erfc(x), want) < 1e-12, "x={x}: {} vs {want}", erfc(x));
        assert!(rel(erfc(-x), 2.0 - want) < 1e-12);
    }
    assert!(rel(erfc(1.0), 0.157_299_207_050_285_13) < 1e-14);
}

#[test]
fn erfcx_matches_scaled_quadrature() {
    // e^{x²} ∫ₓ^∞ e^{−t²} dt = ∫₀^∞ e^{−u(2x+u)} du, with no overflow.
    for x in [0.0, 0.3, 1.0, 4.0, 12.0, 30.0, 100.0] {
        let want = composite(|u| (-u * (2.0 * x + u)).exp(), 0.0, 12.0, 2400) * 2.0 / PI.sqrt();
        assert!(rel(erfcx(x).unwrap(), want) < 1e-12, "x={x}");
    }
    assert!(rel(erfcx(1.0).unwrap(), E * erfc_oracle(1.0)) < 1e-12);
    assert!(rel(erfcx(100.0).unwrap(), 1.0 / (100.0 * PI.sqrt())) < 1e-4);
}

/// `e·E₁(1) = e ∫₁^∞ e^{−u}/u du`.
fn e_e1_oracle() -> f64 {
    E * composite(|u| (-u).exp() / u, 1.0, 60.0, 2000)
}

#[test]
fn doubly_exponential_integral_is_e_e1() {
    let want = e_e1_oracle();
    assert!(rel(want, 0.596_347_362_323_194_1) < 1e-13);
    let got =
        integrate_semiinfinite(|x| (-(x.exp_m1())).exp(), &QuadratureSpec::default()).unwrap();
    assert!(rel(got, want) < 1e-9);
}

#[test]
fn noise_limited_rate_is_e_e1() {
    let radio = RadioParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
    let cfg = ScenarioConfig::sector_apex(
        SectorDomain::new(3.0, TAU).unwrap(),
        PathLossParams::new(2.0, 0.0).unwrap(),
        radio,
        12.0,
        1.0,
    )
    .unwrap();
    let tight = QuadratureSpec::new(1e-13, 1e-13, 2000).unwrap();
    assert!(rel(ergodic_rate(&cfg, &tight).unwrap(), e_e1_oracle()) < 1e-10);
}

/// `θ ∫₀^R s t / (ε + s + t^η) dt` by the Gauss–Legendre oracle.
fn sector_oracle(theta: f64, r: f64, s: f64, eps: f64, eta: f64) -> f64 {
    theta * composite(|t| s * t / (eps + s + t.powf(eta)), 0.0, r, 400)
}

#[test]
fn sector_integral_matches_radial_quadrature() {
    for (theta, r, s, eps, eta) in [
        (TAU, 3.0, 1.0, 0.0, 2.0),
        (TAU, 3.0, 1.0, 0.0, 4.0),
        (PI / 2.0, 3.0, 8.01, 0.01, 3.0),
        (PI, 7.5, 0.02, 1.0, 2.5),
        (1.0, 0.5, 300.0, 0.0, 5.0),
    ] {
        let sector = SectorDomain::new(r, theta).unwrap();
        let pl = PathLossParams::new(eta, eps).unwrap();
        let arg = InterferenceArg::new(s).unwrap();
        let want = sector_oracle(theta, r, s, eps, eta);
        assert!(
            rel(
                interference_integral_sector(&sector, arg, &pl).unwrap(),
                want
            ) < 1e-10
        );
        assert!(
            rel(
                interference_integral_sector_hypergeometric(&sector, arg, &pl).unwrap(),
                want
            ) < 1e-10
        );
    }
    // The frozen constants used across the unit tests.
    assert!(rel(sector_oracle(TAU, 3.0, 1.0, 0.0, 2.0), PI * 10f64.ln()) < 1e-12);
    assert!(rel(sector_oracle(TAU, 3.0, 1.0, 0.0, 4.0), PI * 9f64.atan()) < 1e-12);
}
