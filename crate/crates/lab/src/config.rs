//! Resolved experiment parameters.
//!
//! Values come from per-command defaults, then a JSON file, then command-line
//! flags, later sources winning. Run metadata is written with the same keys,
//! so a metadata file can be passed back as a config to repeat a run.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;

use borderline_core::channel::{PathLossParams, RadioParams};
use borderline_core::geometry::{RectDomain, SectorDomain};
use borderline_core::montecarlo::{CountMode, SimConfig};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Connection,
    Rate,
    Density,
    Heatmap,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Connection => "connection",
            Command::Rate => "rate",
            Command::Density => "density",
            Command::Heatmap => "heatmap",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fixed,
    Poisson,
}

impl From<Mode> for CountMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Fixed => CountMode::Fixed,
            Mode::Poisson => CountMode::Poisson,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Optional settings from one source. Unknown keys are ignored so that run
/// metadata, which carries extra bookkeeping, loads as a config.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub stream: Option<u64>,
    pub trials: Option<u64>,
    pub count_mode: Option<Mode>,
    pub fixed_interferers: Option<u64>,
    pub eta: Option<f64>,
    pub epsilon: Option<Vec<f64>>,
    pub rho_t: Option<f64>,
    pub radius: Option<f64>,
    pub theta: Option<Vec<f64>>,
    pub q: Option<f64>,
    pub gamma: Option<f64>,
    pub power: Option<f64>,
    pub noise: Option<f64>,
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub points: Option<usize>,
    pub spacing: Option<Spacing>,
    pub width: Option<f64>,
    pub height: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub link_distance: Option<f64>,
}

impl Overrides {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| LabError::config(format!("{}: {e}", path.display())))
    }
}

/// Every parameter of a run after all sources are merged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    pub command: Command,
    pub seed: u64,
    /// Base RNG stream; distinct streams under one seed are independent.
    pub stream: u64,
    pub trials: u64,
    pub count_mode: Mode,
    pub fixed_interferers: Option<u64>,
    pub eta: f64,
    pub epsilon: Vec<f64>,
    pub rho_t: f64,
    pub radius: f64,
    pub theta: Vec<f64>,
    pub q: f64,
    pub gamma: f64,
    pub power: f64,
    pub noise: f64,
    /// Sweep over link distance (connection, rate) or intensity (density).
    pub sweep_min: f64,
    pub sweep_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    pub link_distance: f64,
}

impl Params {
    /// Built-in defaults; the seed is a placeholder until resolved.
    pub fn defaults(command: Command) -> Self {
        let mut p = Self {
            command,
            seed: 0,
            stream: 0,
            trials: 100_000,
            count_mode: Mode::Fixed,
            fixed_interferers: None,
            eta: 2.5,
            epsilon: vec![0.0],
            rho_t: 12.0,
            radius: 3.0,
            theta: vec![FRAC_PI_2, PI, TAU],
            q: 1.0,
            gamma: 1.0,
            power: 1.0,
            noise: 1.0,
            sweep_min: 0.05,
            sweep_max: 3.0,
            points: 30,
            spacing: Spacing::Linear,
            width: 10.0,
            height: 10.0,
            nx: 8,
            ny: 8,
            link_distance: 0.75,
        };
        match command {
            Command::Connection => {}
            Command::Rate => {
                p.eta = 3.0;
                p.epsilon = vec![0.01];
            }
            Command::Density => {
                p.eta = 4.0;
                p.epsilon = vec![0.0, 0.01];
                p.sweep_min = 1.0;
                p.sweep_max = 30.0;
            }
            Command::Heatmap => {
                p.eta = 3.0;
                p.rho_t = 0.5;
                p.trials = 10_000;
            }
            Command::Validate => {
                p.count_mode = Mode::Poisson;
            }
        }
        p
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = &o.$field {
                    self.$field = v.clone();
                }
            )*};
        }
        take!(
            seed,
            stream,
            trials,
            count_mode,
            eta,
            epsilon,
            rho_t,
            radius,
            theta,
            q,
            gamma,
            power,
            noise,
            sweep_min,
            sweep_max,
            points,
            spacing,
            width,
            height,
            nx,
            ny,
            link_distance
        );
        if o.fixed_interferers.is_some() {
            self.fixed_interferers = o.fixed_interferers;
        }
    }

    /// Checks every physical parameter before any computation starts.
    pub fn validate(&self) -> Result<()> {
        self.radio()?;
        for &eps in &self.epsilon {
            PathLossParams::new(self.eta, eps)?;
        }
        if self.epsilon.is_empty() {
            return Err(LabError::config("at least one epsilon is required"));
        }
        if self.command != Command::Density && self.epsilon.len() != 1 {
            return Err(LabError::config(format!(
                "{} takes exactly one epsilon",
                self.command.name()
            )));
        }
        if self.theta.is_empty() {
            return Err(LabError::config("at least one theta is required"));
        }
        for &t in &self.theta {
            SectorDomain::new(self.radius, t)?;
        }
        self.sim()?;
        if !(self.rho_t >= 0.0 && self.rho_t.is_finite()) {
            return Err(LabError::config("rho_t must be finite and >= 0"));
        }
        match self.command {
            Command::Connection | Command::Rate | Command::Density => self.check_sweep()?,
            Command::Heatmap => {
                RectDomain::new(self.width, self.height)?;
                if self.nx < 2 || self.ny < 2 {
                    return Err(LabError::config("heatmap grid must be at least 2x2"));
                }
                if !(self.link_distance >= 0.0 && self.link_distance < self.width.min(self.height))
                {
                    return Err(LabError::config(
                        "link_distance must lie in [0, min(width, height))",
                    ));
                }
            }
            Command::Validate => {}
        }
        Ok(())
    }

    fn check_sweep(&self) -> Result<()> {
        let (lo, hi) = (self.sweep_min, self.sweep_max);
        if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo >= 0.0) {
            return Err(LabError::config(
                "sweep bounds must satisfy 0 <= sweep_min <= sweep_max",
            ));
        }
        if self.points == 0 {
            return Err(LabError::config("points must be at least 1"));
        }
        if self.spacing == Spacing::Log && lo <= 0.0 {
            return Err(LabError::config("log spacing needs sweep_min > 0"));
        }
        if self.command == Command::Density && lo <= 0.0 {
            return Err(LabError::config(
                "density sweep must start above zero intensity",
            ));
        }
        Ok(())
    }

    pub fn radio(&self) -> Result<RadioParams> {
        Ok(RadioParams::new(
            self.power, self.noise, self.gamma, self.q,
        )?)
    }

    pub fn pathloss(&self, epsilon: f64) -> Result<PathLossParams> {
        Ok(PathLossParams::new(self.eta, epsilon)?)
    }

    pub fn sim(&self) -> Result<SimConfig> {
        let mut sim = SimConfig::new(self.trials, self.seed)?
            .with_stream(self.stream)
            .with_count_mode(self.count_mode.into());
        sim.fixed_interferers = self.fixed_interferers;
        Ok(sim)
    }

    pub fn sweep(&self) -> Vec<f64> {
        grid(self.sweep_min, self.sweep_max, self.points, self.spacing)
    }
}

/// `n` points from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    let mut v: Vec<f64> = match spacing {
        Spacing::Linear => (0..n).map(|i| lo + (hi - lo) * step(i)).collect(),
        Spacing::Log => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * step(i)).exp()).collect()
        }
    };
    v[n - 1] = hi;
    v
}

/// Parses an angle such as `1.57`, `pi`, `2pi`, `pi/2`, `3*pi/4` or `0.5pi`.
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let t: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("cannot parse angle `{text}`");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let factor = num.strip_suffix("pi").ok_or_else(bad)?;
    let factor = factor.strip_suffix('*').unwrap_or(factor);
    let k = if factor.is_empty() {
        1.0
    } else {
        factor.parse::<f64>().map_err(|_| bad())?
    };
    Ok(k * PI / den)
}
