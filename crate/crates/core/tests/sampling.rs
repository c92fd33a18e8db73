//! Statistical checks on the samplers and the single-trial kernels.

use std::f64::consts::{E, PI, TAU};

use borderline_core::analytic::ScenarioConfig;
use borderline_core::channel::{sample_fading, PathLossParams, RadioParams};
use borderline_core::geometry::{
    place_at_distance, sample_poisson_count, sample_uniform, Domain, Point2, RectDomain, RngState,
    SectorDomain,
};
use borderline_core::montecarlo::{
    connection_trial, success_count_trial, CountMode, Estimate, SimConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn within(values: &[f64], target: f64) -> bool {
    let e = Estimate::from_samples(values, 0);
    (e.mean - target).abs() <= 3.0 * e.std_error
}

#[test]
fn sector_mean_radius() {
    let dom: Domain = SectorDomain::new(3.0, TAU).unwrap().into();
    let mut r = rng(1);
    let radii: Vec<f64> = (0..1_000_000)
        .map(|_| sample_uniform(&dom, &mut r).norm())
        .collect();
    assert!(within(&radii, 2.0));
}

#[test]
fn sector_samples_stay_inside() {
    let sector = SectorDomain::new(3.0, PI).unwrap();
    let dom: Domain = sector.into();
    let mut r = rng(2);
    for _ in 0..100_000 {
        let p = sample_uniform(&dom, &mut r);
        assert!(p.norm() <= 3.0 + 1e-12);
        assert!(p.y.atan2(p.x) >= -1e-12 && p.y.atan2(p.x) <= PI + 1e-12);
    }
}

#[test]
fn sector_chi_square_uniformity() {
    // Bins of equal probability: four bands of r² and four of angle.
    let (radius, angle) = (3.0, 1.7);
    let dom: Domain = SectorDomain::new(radius, angle).unwrap().into();
    let mut r = rng(3);
    let n = 100_000;
    let mut counts = [0u32; 16];
    for _ in 0..n {
        let p = sample_uniform(&dom, &mut r);
        let a = ((p.norm().powi(2) / (radius * radius)) * 4.0).min(3.999) as usize;
        let b = ((p.y.atan2(p.x).max(0.0) / angle) * 4.0).min(3.999) as usize;
        counts[a * 4 + b] += 1;
    }
    let expected = n as f64 / 16.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 0.999 quantile of chi-square with 15 degrees of freedom.
    assert!(chi2 < 37.697, "chi2 = {chi2}");
}

#[test]
fn rectangle_left_half_fraction() {
    let dom: Domain = RectDomain::new(10.0, 10.0).unwrap().into();
    let mut r = rng(4);
    let left: Vec<f64> = (0..1_000_000)
        .map(|_| {
            if sample_uniform(&dom, &mut r).x < 5.0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    assert!(within(&left, 0.5));
}

#[test]
fn poisson_counts() {
    let mut r = rng(5);
    assert!((0..1000).all(|_| sample_poisson_count(0.0, &mut r).unwrap() == 0));
    let mean = 12.0 * 9.0 * PI;
    let big: Vec<f64> = (0..1_000_000)
        .map(|_| sample_poisson_count(mean, &mut r).unwrap() as f64)
        .collect();
    assert!(within(&big, mean));
    let small: Vec<f64> = (0..1_000_000)
        .map(|_| sample_poisson_count(50.0, &mut r).unwrap() as f64)
        .collect();
    let var = Estimate::variance_from_samples(&small, 0);
    let m = Estimate::from_samples(&small, 0).mean;
    assert!(
        (var.mean - m).abs() <= 3.0 * var.std_error,
        "{} vs {m}",
        var.mean
    );
}

#[test]
fn fading_is_unit_exponential() {
    let mut r = rng(6);
    let h: Vec<f64> = (0..1_000_000).map(|_| sample_fading(&mut r)).collect();
    assert!(h.iter().all(|&x| x > 0.0));
    assert!(within(&h, 1.0));
    let tail: Vec<f64> = h.iter().map(|&x| if x > 1.0 { 1.0 } else { 0.0 }).collect();
    assert!(within(&tail, (-1.0f64).exp()));
}

#[test]
fn placement_keeps_the_transmitter_inside() {
    let dom: Domain = RectDomain::new(10.0, 10.0).unwrap().into();
    let mut r = rng(7);
    for receiver in [
        Point2::new(0.0, 0.0),
        Point2::new(0.625, 9.375),
        Point2::new(5.0, 5.0),
    ] {
        for _ in 0..1000 {
            let t = place_at_distance(&dom, receiver, 0.75, &mut r);
            assert!(dom.contains(t));
            assert!((borderline_core::geometry::distance(t, receiver) - 0.75).abs() < 1e-12);
        }
    }
}

#[test]
fn noise_only_connection_is_bernoulli_e_inverse() {
    let cfg = ScenarioConfig::sector_apex(
        SectorDomain::new(3.0, TAU).unwrap(),
        PathLossParams::new(2.0, 0.0).unwrap(),
        RadioParams::default(),
        0.0,
        1.0,
    )
    .unwrap();
    let sim = SimConfig::new(1_000_000, 11).unwrap();
    let state = sim.rng_state();
    let v: Vec<f64> = (0..sim.trials)
        .map(|i| connection_trial(&cfg, &sim, &mut state.trial_rng(i)).unwrap())
        .collect();
    assert!(within(&v, 1.0 / E));
}

#[test]
fn zero_threshold_density_counts_everyone() {
    let radio = RadioParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
    let cfg = ScenarioConfig::sector_apex(
        SectorDomain::new(3.0, PI).unwrap(),
        PathLossParams::new(4.0, 0.0).unwrap(),
        radio,
        5.0,
        0.0,
    )
    .unwrap();
    let sim = SimConfig::new(100, 3)
        .unwrap()
        .with_count_mode(CountMode::Fixed);
    let mut scratch = Vec::new();
    let expected = (5.0 * 4.5 * PI).floor();
    for i in 0..100 {
        let got = success_count_trial(
            &cfg,
            &sim,
            &mut RngState::new(3, 0).trial_rng(i),
            &mut scratch,
        )
        .unwrap();
        assert_eq!(got, expected);
    }
}

#[test]
fn standard_error_shrinks_as_root_n() {
    let cfg = ScenarioConfig::sector_apex(
        SectorDomain::new(3.0, TAU).unwrap(),
        PathLossParams::new(3.0, 0.0).unwrap(),
        RadioParams::default(),
        1.0,
        0.5,
    )
    .unwrap();
    let run = |n: u64| {
        let sim = SimConfig::new(n, 21).unwrap();
        let state = sim.rng_state();
        let v: Vec<f64> = (0..n)
            .map(|i| connection_trial(&cfg, &sim, &mut state.trial_rng(i)).unwrap())
            .collect();
        Estimate::from_samples(&v, 21).std_error
    };
    let ratio = run(10_000) / run(40_000);
    assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
}
