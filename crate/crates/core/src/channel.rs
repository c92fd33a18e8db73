//! Path loss, Rayleigh fading and SINR.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Distance attenuation as a function of squared distance.
///
/// Implementors must be positive and non-increasing in distance.
pub trait Attenuation {
    fn gain_sq(&self, dist_sq: f64) -> f64;

    fn gain(&self, dist: f64) -> f64 {
        self.gain_sq(dist * dist)
    }
}

/// Non-singular power-law path loss `g(d) = 1 / (ε + d^η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    eta: f64,
    epsilon: f64,
}

impl PathLossParams {
    /// Exponents below 2 are rejected: infinite-network interference diverges
    /// there, and nothing in the model needs them.
    pub fn new(eta: f64, epsilon: f64) -> Result<Self> {
        if !(eta >= 2.0 && eta.is_finite()) {
            return Err(Error::param(
                "eta",
                "path-loss exponent must be finite and >= 2",
            ));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::param("epsilon", "must be finite and >= 0"));
        }
        Ok(Self { eta, epsilon })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `ε + d^η`, the reciprocal of the gain. Finite for every finite `d`.
    pub fn inverse_gain(&self, d: f64) -> f64 {
        self.epsilon + pow_eta(d.abs(), self.eta)
    }
}

impl Attenuation for PathLossParams {
    #[inline]
    fn gain_sq(&self, dist_sq: f64) -> f64 {
        let d_eta = if self.eta == 2.0 {
            dist_sq
        } else if self.eta == 3.0 {
            dist_sq * dist_sq.sqrt()
        } else if self.eta == 4.0 {
            dist_sq * dist_sq
        } else {
            dist_sq.powf(0.5 * self.eta)
        };
        1.0 / (self.epsilon + d_eta)
    }
}

#[inline]
fn pow_eta(d: f64, eta: f64) -> f64 {
    if eta == 2.0 {
        d * d
    } else if eta == 4.0 {
        let d2 = d * d;
        d2 * d2
    } else {
        d.powf(eta)
    }
}

/// Path gain `1 / (ε + d^η)`.
pub fn path_gain(d: f64, pl: &PathLossParams) -> Result<f64> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::domain(
            "path_gain",
            "distance must be finite and >= 0",
        ));
    }
    if d == 0.0 && pl.epsilon == 0.0 {
        return Err(Error::Singularity);
    }
    Ok(1.0 / pl.inverse_gain(d))
}

/// Transmit power, noise, interference weight and SINR target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    power: f64,
    noise: f64,
    gamma: f64,
    threshold: f64,
}

impl RadioParams {
    pub fn new(power: f64, noise: f64, gamma: f64, threshold: f64) -> Result<Self> {
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::param("power", "must be positive and finite"));
        }
        if !(noise >= 0.0 && noise.is_finite()) {
            return Err(Error::param("noise", "must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::param("gamma", "must lie in [0, 1]"));
        }
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return Err(Error::param("q", "SINR threshold must be finite and >= 0"));
        }
        Ok(Self {
            power,
            noise,
            gamma,
            threshold,
        })
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Same radio with a different SINR target.
    pub fn with_threshold(&self, threshold: f64) -> Result<Self> {
        Self::new(self.power, self.noise, self.gamma, threshold)
    }
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            power: 1.0,
            noise: 1.0,
            gamma: 1.0,
            threshold: 1.0,
        }
    }
}

/// Rayleigh power fading: an Exp(1) draw, strictly positive.
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let h: f64 = Exp1.sample(rng);
    h.max(f64::MIN_POSITIVE)
}

/// `𝒫·h·g / (𝒩 + γ·ℐ)`.
pub fn sinr(signal_gain: f64, fading: f64, interference: f64, radio: &RadioParams) -> Result<f64> {
    if !(interference >= 0.0) {
        return Err(Error::domain("sinr", "interference must be >= 0"));
    }
    let denom = radio.noise + radio.gamma * interference;
    if denom == 0.0 {
        return Err(Error::DegenerateSinr);
    }
    Ok(radio.power * fading * signal_gain / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RngState;

    #[test]
    fn gains() {
        let pl = PathLossParams::new(2.0, 0.0).unwrap();
        assert_eq!(path_gain(1.0, &pl).unwrap(), 1.0);
        let pl = PathLossParams::new(4.0, 0.01).unwrap();
        assert!((path_gain(0.0, &pl).unwrap() - 100.0).abs() < 1e-12);
        let pl = PathLossParams::new(2.5, 0.0).unwrap();
        assert!((path_gain(2.0, &pl).unwrap() - 2f64.powf(-2.5)).abs() < 1e-15);
    }

    #[test]
    fn singular_at_zero_without_buffer() {
        let pl = PathLossParams::new(3.0, 0.0).unwrap();
        assert_eq!(path_gain(0.0, &pl), Err(Error::Singularity));
        assert!(path_gain(-1.0, &pl).is_err());
    }

    #[test]
    fn rejects_small_exponent() {
        assert!(PathLossParams::new(1.9, 0.0).is_err());
        assert!(PathLossParams::new(3.0, -0.1).is_err());
        assert!(PathLossParams::new(2.0, 0.0).is_ok());
    }

    #[test]
    fn attenuation_trait_matches_path_gain() {
        for eta in [2.0, 2.5, 3.0, 4.0, 5.5] {
            let pl = PathLossParams::new(eta, 0.01).unwrap();
            for d in [0.1, 0.9, 2.0, 7.0] {
                let a = pl.gain(d);
                let b = path_gain(d, &pl).unwrap();
                assert!(((a - b) / b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sinr_cases() {
        let r = RadioParams::default();
        assert_eq!(sinr(1.0, 1.0, 0.0, &r).unwrap(), 1.0);
        let snr_only = RadioParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(sinr(0.3, 2.0, 50.0, &snr_only).unwrap(), 0.6);
        let sir = RadioParams::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let sir2 = RadioParams::new(2.0, 0.0, 1.0, 1.0).unwrap();
        // Interference scales with power too, so 𝒫 cancels.
        let a = sinr(0.5, 1.2, 3.0 * 1.0, &sir).unwrap();
        let b = sinr(0.5, 1.2, 3.0 * 2.0, &sir2).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert_eq!(sinr(1.0, 1.0, 0.0, &sir), Err(Error::DegenerateSinr));
    }

    #[test]
    fn radio_validation() {
        assert!(RadioParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(RadioParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(RadioParams::new(1.0, 1.0, 1.5, 1.0).is_err());
        assert!(RadioParams::new(1.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn fading_draws_are_positive() {
        let mut rng = RngState::new(11, 0).trial_rng(0);
        for _ in 0..100_000 {
            assert!(sample_fading(&mut rng) > 0.0);
        }
    }
}
