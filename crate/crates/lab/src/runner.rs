//! Parallel Monte Carlo drivers.
//!
//! Trials are cut into fixed-size chunks. Each chunk accumulates its moments
//! in trial order and the chunks are merged in chunk order, so the result is
//! bit-identical for any thread count, including the sequential path.

use borderline_core::analytic::ScenarioConfig;
use borderline_core::channel::{PathLossParams, RadioParams};
use borderline_core::geometry::{Domain, Point2, RectDomain};
use borderline_core::montecarlo::{
    connection_trial, rate_trial, success_count_trial, Estimate, Moments, SimConfig,
};
use borderline_core::Error;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{LabError, Result};

const CHUNK: u64 = 4096;

fn run<F>(sim: &SimConfig, trial: F) -> Result<Moments>
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<f64>) -> borderline_core::Result<f64> + Sync,
{
    sim.validate()?;
    let state = sim.rng_state();
    let chunks = sim.trials.div_ceil(CHUNK);
    let chunk = |c: u64| -> borderline_core::Result<Moments> {
        let mut m = Moments::new();
        let mut scratch = Vec::new();
        for i in c * CHUNK..((c + 1) * CHUNK).min(sim.trials) {
            m.push(trial(&mut state.trial_rng(i), &mut scratch)?);
        }
        Ok(m)
    };
    let parts: Vec<Moments> = if sim.parallel {
        (0..chunks)
            .into_par_iter()
            .map(chunk)
            .collect::<borderline_core::Result<_>>()?
    } else {
        (0..chunks)
            .map(chunk)
            .collect::<borderline_core::Result<_>>()?
    };
    Ok(parts.iter().fold(Moments::new(), |mut acc, p| {
        acc.merge(p);
        acc
    }))
}

/// Fraction of trials whose SINR reaches the threshold.
pub fn estimate_connection(cfg: &ScenarioConfig, sim: &SimConfig) -> Result<Estimate> {
    Ok(run(sim, |rng, _| connection_trial(cfg, sim, rng))?.mean_estimate(sim.seed))
}

/// Mean and variance of `ln(1 + SINR)`.
pub fn estimate_rate(cfg: &ScenarioConfig, sim: &SimConfig) -> Result<(Estimate, Estimate)> {
    let m = run(sim, |rng, _| rate_trial(cfg, sim, rng))?;
    Ok((m.mean_estimate(sim.seed), m.variance_estimate(sim.seed)))
}

/// Mean number of transmitters decodable at a sector apex per realisation.
pub fn estimate_success_density(cfg: &ScenarioConfig, sim: &SimConfig) -> Result<Estimate> {
    if cfg.apex_sector().is_none() {
        return Err(Error::Unsupported(
            "success density needs a sector with the receiver at its apex",
        )
        .into());
    }
    Ok(run(sim, |rng, scratch| {
        success_count_trial(cfg, sim, rng, scratch)
    })?
    .mean_estimate(sim.seed))
}

/// Outage estimates over a grid of receiver positions.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapResult {
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `y` outer.
    pub receivers: Vec<Point2>,
    pub cells: Vec<Estimate>,
}

impl HeatmapResult {
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn cell(&self, ix: usize, iy: usize) -> &Estimate {
        &self.cells[self.index(ix, iy)]
    }

    pub fn receiver(&self, ix: usize, iy: usize) -> Point2 {
        self.receivers[self.index(ix, iy)]
    }
}

/// Scenario shared by every heatmap cell; only the receiver moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapSpec {
    pub domain: RectDomain,
    pub link_distance: f64,
    pub radio: RadioParams,
    pub pathloss: PathLossParams,
    pub rho_t: f64,
    pub nx: usize,
    pub ny: usize,
}

/// Outage `1 − H` with the receiver at each cell centre. Cell `k` (row-major)
/// draws from stream `sim.stream + k`.
pub fn outage_heatmap(spec: &HeatmapSpec, sim: &SimConfig) -> Result<HeatmapResult> {
    let HeatmapSpec {
        domain,
        link_distance,
        nx,
        ny,
        ..
    } = *spec;
    if nx < 2 || ny < 2 {
        return Err(LabError::config("heatmap grid must be at least 2x2"));
    }
    if link_distance.is_nan() || link_distance >= domain.width().min(domain.height()) {
        return Err(LabError::config(
            "link distance must be shorter than both sides of the region",
        ));
    }
    let (dx, dy) = (domain.width() / nx as f64, domain.height() / ny as f64);
    let receivers: Vec<Point2> = (0..ny)
        .flat_map(|iy| {
            (0..nx).map(move |ix| Point2::new((ix as f64 + 0.5) * dx, (iy as f64 + 0.5) * dy))
        })
        .collect();
    let cell = |(k, &receiver): (usize, &Point2)| -> Result<Estimate> {
        let cfg = ScenarioConfig::new(
            Domain::Rect(domain),
            receiver,
            spec.pathloss,
            spec.radio,
            spec.rho_t,
            link_distance,
        )?;
        let sim = sim.with_stream(sim.stream.wrapping_add(k as u64));
        let h = estimate_connection(&cfg, &sim)?;
        Ok(Estimate {
            mean: 1.0 - h.mean,
            ..h
        })
    };
    let cells = if sim.parallel {
        receivers
            .par_iter()
            .enumerate()
            .map(cell)
            .collect::<Result<Vec<_>>>()?
    } else {
        receivers
            .iter()
            .enumerate()
            .map(cell)
            .collect::<Result<Vec<_>>>()?
    };
    Ok(HeatmapResult {
        nx,
        ny,
        receivers,
        cells,
    })
}
