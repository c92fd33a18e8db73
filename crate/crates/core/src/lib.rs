//! Interference, outage and rate analysis for receivers inside finite
//! Poisson ad hoc network deployments.
//!
//! A receiver's angular visibility of the deployment region controls how much
//! shot-noise interference reaches it: receivers sitting at edges and corners
//! see less of the network and are less likely to be in outage. This crate
//! provides the closed-form and quadrature-based machinery to quantify that,
//! together with the trial-level simulation kernels used to validate it.
//!
//! The crate is `no_std` (with `alloc`). Parallel Monte Carlo drivers, file
//! formats and the command-line front end live in the `borderline` crate.
//!
//! Modules:
//!
//! - [`specfun`]: ₂F₁(1, b; b+1; z), `erfc`, `erfcx` and adaptive Gauss–Kronrod
//!   quadrature.
//! - [`geometry`]: sector and rectangle deployment regions, uniform and
//!   Poisson sampling, reproducible RNG streams.
//! - [`channel`]: path loss, Rayleigh fading and SINR.
//! - [`analytic`]: connection probability, ergodic rate and its moments,
//!   spatial density of successful transmissions.
//! - [`montecarlo`]: single-trial simulation kernels and estimators.

#![no_std]
// `!(x > 0.0)` style guards also reject NaN; tabulated coefficients keep
// their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod channel;
mod error;
pub mod geometry;
pub mod montecarlo;
pub mod specfun;

pub use error::{Error, Result};
