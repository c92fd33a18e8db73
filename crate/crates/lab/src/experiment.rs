//! Parameter sweeps producing the long-format result tables.
//!
//! Every Monte Carlo point runs on its own RNG stream derived from its
//! position in the sweep, so points are independent and a table is a pure
//! function of its parameters and seed.

use borderline_core::analytic::{
    connection_probability, connection_probability_infinite, ergodic_rate, rate_variance,
    success_density, success_density_closed, ScenarioConfig,
};
use borderline_core::geometry::{RectDomain, SectorDomain};
use borderline_core::montecarlo::SimConfig;
use borderline_core::specfun::QuadratureSpec;
use rayon::prelude::*;

use crate::config::Params;
use crate::error::Result;
use crate::output::Table;
use crate::runner::{
    estimate_connection, estimate_rate, estimate_success_density, outage_heatmap, HeatmapResult,
    HeatmapSpec,
};

pub const CONNECTION_COLUMNS: [&str; 6] = [
    "theta",
    "d_ij",
    "analytic_H",
    "mc_mean",
    "mc_stderr",
    "benchmark_H_infinite",
];
pub const RATE_COLUMNS: [&str; 8] = [
    "theta",
    "d_ij",
    "analytic_rate",
    "analytic_variance",
    "mc_rate",
    "mc_rate_stderr",
    "mc_variance",
    "mc_variance_stderr",
];
pub const DENSITY_COLUMNS: [&str; 7] = [
    "epsilon",
    "theta",
    "rho_t",
    "analytic_mu",
    "closed_form_mu",
    "mc_mean",
    "mc_stderr",
];
pub const HEATMAP_COLUMNS: [&str; 4] = ["x", "y", "outage_mean", "outage_stderr"];

/// Stream id for point `point` of curve `curve`.
fn stream(sim: &SimConfig, curve: usize, point: usize) -> SimConfig {
    sim.with_stream(
        sim.stream
            .wrapping_add(((curve as u64) << 32) | point as u64),
    )
}

fn sector_cfg(p: &Params, theta: f64, epsilon: f64, rho_t: f64, d: f64) -> Result<ScenarioConfig> {
    Ok(ScenarioConfig::sector_apex(
        SectorDomain::new(p.radius, theta)?,
        p.pathloss(epsilon)?,
        p.radio()?,
        rho_t,
        d,
    )?)
}

/// `(curve index, curve value, point index, point value)` for every point.
fn points(curves: &[f64], xs: &[f64]) -> Vec<(usize, f64, usize, f64)> {
    curves
        .iter()
        .enumerate()
        .flat_map(|(c, &cv)| xs.iter().enumerate().map(move |(i, &x)| (c, cv, i, x)))
        .collect()
}

/// Connection probability against link distance, one curve per angle.
pub fn connection(p: &Params) -> Result<Table> {
    p.validate()?;
    let sim = p.sim()?;
    let eps = p.epsilon[0];
    let rows = points(&p.theta, &p.sweep())
        .into_par_iter()
        .map(|(c, theta, i, d)| -> Result<Vec<f64>> {
            let cfg = sector_cfg(p, theta, eps, p.rho_t, d)?;
            let mc = estimate_connection(&cfg, &stream(&sim, c, i))?;
            Ok(vec![
                theta,
                d,
                connection_probability(&cfg)?,
                mc.mean,
                mc.std_error,
                connection_probability_infinite(&cfg)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(&CONNECTION_COLUMNS, rows))
}

/// Ergodic rate and its variance against link distance.
pub fn rate(p: &Params) -> Result<Table> {
    p.validate()?;
    let sim = p.sim()?;
    let spec = QuadratureSpec::default();
    let eps = p.epsilon[0];
    let rows = points(&p.theta, &p.sweep())
        .into_par_iter()
        .map(|(c, theta, i, d)| -> Result<Vec<f64>> {
            let cfg = sector_cfg(p, theta, eps, p.rho_t, d)?;
            let (mean, var) = estimate_rate(&cfg, &stream(&sim, c, i))?;
            Ok(vec![
                theta,
                d,
                ergodic_rate(&cfg, &spec)?,
                rate_variance(&cfg, &spec)?,
                mean.mean,
                mean.std_error,
                var.mean,
                var.std_error,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(&RATE_COLUMNS, rows))
}

/// Whether the unbounded closed form applies: `η = 4`, `ε = 0`, and noise
/// and threshold both positive.
pub fn closed_form_applies(p: &Params, epsilon: f64) -> bool {
    p.eta == 4.0 && epsilon == 0.0 && p.noise > 0.0 && p.q > 0.0
}

/// Density of successful transmissions against intensity, one curve per
/// `(ε, θ)` pair.
pub fn density(p: &Params) -> Result<Table> {
    p.validate()?;
    let sim = p.sim()?;
    let spec = QuadratureSpec::default();
    let radio = p.radio()?;
    let curves: Vec<(f64, f64)> = p
        .epsilon
        .iter()
        .flat_map(|&e| p.theta.iter().map(move |&t| (e, t)))
        .collect();
    let rhos = p.sweep();
    let jobs: Vec<(usize, (f64, f64), usize, f64)> = curves
        .iter()
        .enumerate()
        .flat_map(|(c, &ct)| rhos.iter().enumerate().map(move |(i, &r)| (c, ct, i, r)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(c, (eps, theta), i, rho)| -> Result<Vec<Option<f64>>> {
            // The link distance does not enter the density.
            let cfg = sector_cfg(p, theta, eps, rho, 0.0)?;
            let closed = if closed_form_applies(p, eps) {
                Some(success_density_closed(theta, rho, &radio)?)
            } else {
                None
            };
            let mc = estimate_success_density(&cfg, &stream(&sim, c, i))?;
            Ok(vec![
                Some(eps),
                Some(theta),
                Some(rho),
                Some(success_density(&cfg, &spec)?),
                closed,
                Some(mc.mean),
                Some(mc.std_error),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&DENSITY_COLUMNS);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn heatmap_spec(p: &Params) -> Result<HeatmapSpec> {
    Ok(HeatmapSpec {
        domain: RectDomain::new(p.width, p.height)?,
        link_distance: p.link_distance,
        radio: p.radio()?,
        pathloss: p.pathloss(p.epsilon[0])?,
        rho_t: p.rho_t,
        nx: p.nx,
        ny: p.ny,
    })
}

/// Outage over a grid of receiver positions in a rectangle.
pub fn heatmap(p: &Params) -> Result<(Table, HeatmapResult)> {
    p.validate()?;
    let result = outage_heatmap(&heatmap_spec(p)?, &p.sim()?)?;
    let mut t = Table::new(&HEATMAP_COLUMNS);
    for (r, e) in result.receivers.iter().zip(&result.cells) {
        t.push_values(&[r.x, r.y, e.mean, e.std_error]);
    }
    Ok((t, result))
}

fn table(header: &[&str], rows: Vec<Vec<f64>>) -> Table {
    let mut t = Table::new(header);
    rows.iter().for_each(|r| t.push_values(r));
    t
}
