//! Single-trial simulation kernels and sample summaries.
//!
//! A trial draws a fresh interferer field and fresh Rayleigh fading on every
//! link, then evaluates the SINR of a desired transmitter at the link
//! distance. The desired transmitter is an extra node, not one of the field.
//! Drivers that run many trials, in parallel or not, live in the `borderline`
//! crate; everything here is deterministic given the generator.

use alloc::vec::Vec;

use rand::Rng;

use crate::analytic::ScenarioConfig;
use crate::channel::{sample_fading, Attenuation};
use crate::geometry::{place_at_distance, sample_poisson_count, sample_uniform, RngState};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// How many transmitters a trial places in the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountMode {
    /// `⌊ρ_T V⌋` transmitters every trial.
    #[default]
    Fixed,
    /// `Poisson(ρ_T V)` transmitters.
    Poisson,
}

/// Trial count, seeding and scheduling for a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Separates independent estimates that share a seed.
    pub stream: u64,
    pub count_mode: CountMode,
    pub parallel: bool,
    /// Replaces the fixed-mode interferer count `⌊ρ_T V⌋ − 1`.
    pub fixed_interferers: Option<u64>,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        let sim = Self {
            trials,
            seed,
            stream: 0,
            count_mode: CountMode::Fixed,
            parallel: true,
            fixed_interferers: None,
        };
        sim.validate()?;
        Ok(sim)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        if self.trials > RngState::MAX_TRIALS {
            return Err(Error::param("trials", "at most 2^32 trials per estimate"));
        }
        Ok(())
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn with_count_mode(mut self, mode: CountMode) -> Self {
        self.count_mode = mode;
        self
    }

    pub fn rng_state(&self) -> RngState {
        RngState::new(self.seed, self.stream)
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Estimate {
    /// Sample mean and `s/√n`. Values are summed in slice order.
    pub fn from_samples(values: &[f64], seed: u64) -> Self {
        let n = values.len();
        let mean = mean(values);
        let std_error = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_error,
            trials: n as u64,
            seed,
        }
    }

    /// Unbiased sample variance with a delete-one jackknife standard error.
    pub fn variance_from_samples(values: &[f64], seed: u64) -> Self {
        let n = values.len();
        let m = mean(values);
        let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
        let sum_sq: f64 = sq.iter().sum();
        let variance = if n > 1 { sum_sq / (n - 1) as f64 } else { 0.0 };
        let std_error = if n > 2 {
            let mean_sq = sum_sq / n as f64;
            let spread: f64 = sq.iter().map(|e2| (e2 - mean_sq) * (e2 - mean_sq)).sum();
            jackknife_variance_se(n as f64, spread)
        } else {
            0.0
        };
        Self {
            mean: variance,
            std_error,
            trials: n as u64,
            seed,
        }
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    ///
    /// A zero standard error demands exact agreement up to rounding.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        let slack = k * self.std_error + 1e-12 * value.abs().max(1e-300);
        (self.mean - value).abs() <= slack
    }
}

/// Streaming central moments up to fourth order.
///
/// Merging is exact in real arithmetic; in floating point the result depends
/// on merge order, so drivers fix the order to stay reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn push(&mut self, x: f64) {
        self.merge(&Self {
            n: 1,
            mean: x,
            ..Self::default()
        });
    }

    pub fn merge(&mut self, other: &Self) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let d = other.mean - self.mean;
        let d_n = d / n;
        let d2 = d * d;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + d2 * d_n * na * nb * (na - nb) / n
            + 3.0 * d_n * (na * other.m2 - nb * self.m2);
        let m4 = self.m4
            + other.m4
            + d2 * d_n * d_n * na * nb * (na * na - na * nb + nb * nb) / n
            + 6.0 * d_n * d_n * (na * na * other.m2 + nb * nb * self.m2)
            + 4.0 * d_n * (na * other.m3 - nb * self.m3);
        self.n += other.n;
        self.mean += d_n * nb;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
    }

    /// Sample mean with standard error `s/√n`.
    pub fn mean_estimate(&self, seed: u64) -> Estimate {
        let n = self.n as f64;
        let std_error = if self.n > 1 {
            (self.m2.max(0.0) / (n - 1.0)).sqrt() / n.sqrt()
        } else {
            0.0
        };
        Estimate {
            mean: self.mean,
            std_error,
            trials: self.n,
            seed,
        }
    }

    /// Unbiased variance with its delete-one jackknife standard error.
    pub fn variance_estimate(&self, seed: u64) -> Estimate {
        let n = self.n as f64;
        let variance = if self.n > 1 { self.m2 / (n - 1.0) } else { 0.0 };
        let std_error = if self.n > 2 {
            let spread = (self.m4 - self.m2 * self.m2 / n).max(0.0);
            jackknife_variance_se(n, spread)
        } else {
            0.0
        };
        Estimate {
            mean: variance,
            std_error,
            trials: self.n,
            seed,
        }
    }
}

/// Leave-one-out variances are affine in the squared deviations `e_i²`, so
/// their spread reduces to `spread = Σ(e_i² − mean(e²))²`.
fn jackknife_variance_se(n: f64, spread: f64) -> f64 {
    let k = n / ((n - 1.0) * (n - 2.0));
    ((n - 1.0) / n * k * k * spread).sqrt()
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Number of transmitters a trial places in the region.
pub fn transmitter_count<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    mode: CountMode,
    rng: &mut R,
) -> Result<u64> {
    let mean = cfg.rho_t() * cfg.domain().area();
    match mode {
        CountMode::Fixed => Ok(mean.floor() as u64),
        CountMode::Poisson => sample_poisson_count(mean, rng),
    }
}

/// Number of interferers around the desired link in one trial: `⌊ρ_T V⌋ − 1`
/// (or the override) in fixed mode, `Poisson(ρ_T V)` otherwise.
pub fn interferer_count<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    sim: &SimConfig,
    rng: &mut R,
) -> Result<u64> {
    match (sim.count_mode, sim.fixed_interferers) {
        (CountMode::Fixed, Some(n)) => Ok(n),
        (CountMode::Fixed, None) => {
            Ok(transmitter_count(cfg, CountMode::Fixed, rng)?.saturating_sub(1))
        }
        (CountMode::Poisson, _) => transmitter_count(cfg, CountMode::Poisson, rng),
    }
}

/// Squared distance from the receiver to a uniform node in the region.
///
/// Seen from a sector apex only the radius matters, and `r² = R²u` exactly,
/// so the angle is not drawn.
#[inline]
fn sample_distance_sq<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    apex_r2: Option<f64>,
    rng: &mut R,
) -> f64 {
    match apex_r2 {
        Some(r2) => r2 * rng.random::<f64>(),
        None => {
            let p = sample_uniform(cfg.domain(), rng);
            let r = cfg.receiver();
            let (dx, dy) = (p.x - r.x, p.y - r.y);
            dx * dx + dy * dy
        }
    }
}

fn apex_radius_sq(cfg: &ScenarioConfig) -> Option<f64> {
    cfg.apex_sector().map(|s| s.radius() * s.radius())
}

/// Aggregate faded path gain `Σ h_k g(|t_k − r|)` of `count` uniform nodes.
/// Multiply by the transmit power for received interference.
pub fn field_gain<A, R>(cfg: &ScenarioConfig, atten: &A, count: u64, rng: &mut R) -> f64
where
    A: Attenuation + ?Sized,
    R: Rng + ?Sized,
{
    let apex = apex_radius_sq(cfg);
    let mut total = 0.0;
    for _ in 0..count {
        let d2 = sample_distance_sq(cfg, apex, rng);
        total += sample_fading(rng) * atten.gain_sq(d2);
    }
    total
}

/// One SINR realisation of the desired link.
///
/// Zero noise with no effective interference yields `+∞`.
pub fn sinr_trial<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    sim: &SimConfig,
    rng: &mut R,
) -> Result<f64> {
    let radio = cfg.radio();
    let pl = cfg.pathloss();
    if !cfg.domain().is_sector_apex(cfg.receiver()) {
        // Only the distance enters the SINR; the draw keeps the desired
        // transmitter inside the region.
        let _ = place_at_distance(cfg.domain(), cfg.receiver(), cfg.link_distance(), rng);
    }
    let desired = sample_fading(rng) * pl.gain(cfg.link_distance());
    let count = interferer_count(cfg, sim, rng)?;
    let field = field_gain(cfg, pl, count, rng);
    let denom = radio.noise() + radio.gamma() * radio.power() * field;
    Ok(radio.power() * desired / denom)
}

/// 1 if the trial's SINR reaches the threshold, else 0.
pub fn connection_trial<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    sim: &SimConfig,
    rng: &mut R,
) -> Result<f64> {
    let sinr = sinr_trial(cfg, sim, rng)?;
    Ok(if sinr >= cfg.radio().threshold() {
        1.0
    } else {
        0.0
    })
}

/// `ln(1 + SINR)` for one trial.
pub fn rate_trial<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    sim: &SimConfig,
    rng: &mut R,
) -> Result<f64> {
    Ok(sinr_trial(cfg, sim, rng)?.ln_1p())
}

/// Number of transmitters in one field realisation whose SINR at the
/// receiver reaches the threshold, each treating all others as interference.
///
/// `scratch` is reused between calls to avoid reallocating.
pub fn success_count_trial<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    sim: &SimConfig,
    rng: &mut R,
    scratch: &mut Vec<f64>,
) -> Result<f64> {
    let count = transmitter_count(cfg, sim.count_mode, rng)?;
    let pl = cfg.pathloss();
    let radio = cfg.radio();
    let apex = apex_radius_sq(cfg);
    scratch.clear();
    for _ in 0..count {
        let d2 = sample_distance_sq(cfg, apex, rng);
        scratch.push(sample_fading(rng) * pl.gain_sq(d2));
    }
    let total: f64 = scratch.iter().sum();
    let q = radio.threshold();
    let successes = scratch
        .iter()
        .filter(|&&own| {
            let others = (total - own).max(0.0);
            let denom = radio.noise() + radio.gamma() * radio.power() * others;
            radio.power() * own >= q * denom
        })
        .count();
    Ok(successes as f64)
}
