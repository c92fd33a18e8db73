//! Analytic-versus-simulation and closed-form-versus-quadrature checks.
//!
//! Each criterion yields an [`Outcome`] made of individual checks. A check is
//! either deterministic, which must pass, or statistical (a 3σ agreement
//! test), of which at least 99% must pass; at 3σ about 0.27% fail by chance.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use borderline_core::analytic::{
    interference_integral_numeric, interference_integral_sector_hypergeometric,
    interference_integral_sector_routed, laplace_argument, laplace_interference,
    mean_no_interference_factor, optimal_density, poisson_mixture, success_density,
    success_density_closed, ClosedFormRouting, InterferenceArg, ScenarioConfig,
};
use borderline_core::channel::{PathLossParams, RadioParams};
use borderline_core::geometry::{Point2, SectorDomain};
use borderline_core::specfun::QuadratureSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{grid, Command, Params, Spacing};
use crate::error::{LabError, Result};
use crate::experiment;
use crate::output::Table;

/// Share of statistical checks that must pass within each criterion.
pub const STATISTICAL_PASS_RATE: f64 = 0.99;
/// Agreement bound, in standard errors.
pub const SIGMAS: f64 = 3.0;
/// Two-sided normal tail beyond [`SIGMAS`].
const MISS_PROBABILITY: f64 = 0.0027;
/// Chance of failing a correct model through misses alone.
const FALSE_ALARM: f64 = 1e-3;

/// Misses tolerated among `n` statistical checks.
///
/// The larger of the 1% share and the count that independent checks of a
/// correct model exceed with probability below [`FALSE_ALARM`].
pub fn allowed_misses(n: usize) -> usize {
    let p = MISS_PROBABILITY;
    let mut pmf = (1.0 - p).powi(n as i32);
    let mut cdf = pmf;
    let mut k = 0;
    while 1.0 - cdf > FALSE_ALARM && k < n {
        pmf *= (n - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
        cdf += pmf;
        k += 1;
    }
    k.max(((1.0 - STATISTICAL_PASS_RATE) * n as f64).floor() as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub statistical: bool,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn exact(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            statistical: false,
            passed,
            detail: detail.into(),
        }
    }

    fn sigma(name: impl Into<String>, estimate: f64, sigma: f64, reference: f64) -> Self {
        let z = if sigma > 0.0 {
            (estimate - reference) / sigma
        } else {
            0.0
        };
        let passed = (estimate - reference).abs() <= SIGMAS * sigma + 1e-12 * reference.abs();
        Self {
            name: name.into(),
            statistical: true,
            passed,
            detail: format!("mc {estimate:.6e} vs {reference:.6e} (z = {z:+.2})"),
        }
    }
}

/// The result of one criterion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
    /// CSV encodings of the simulated tables, for determinism comparisons.
    pub tables: Vec<(String, Vec<u8>)>,
    /// An error that stopped the criterion early.
    pub error: Option<String>,
}

impl Outcome {
    fn new(id: u8, title: &'static str) -> Self {
        Self {
            id,
            title,
            checks: Vec::new(),
            elapsed: Duration::ZERO,
            tables: Vec::new(),
            error: None,
        }
    }

    fn counts(&self, statistical: bool) -> (usize, usize) {
        let sel = self.checks.iter().filter(|c| c.statistical == statistical);
        let total = sel.clone().count();
        (sel.filter(|c| c.passed).count(), total)
    }

    pub fn passed(&self) -> bool {
        let (det_ok, det) = self.counts(false);
        let (stat_ok, stat) = self.counts(true);
        self.error.is_none()
            && !self.checks.is_empty()
            && det_ok == det
            && stat - stat_ok <= allowed_misses(stat)
    }

    /// One line: verdict, criterion, check tallies and runtime.
    pub fn summary(&self) -> String {
        let (det_ok, det) = self.counts(false);
        let (stat_ok, stat) = self.counts(true);
        let mut s = format!(
            "[{}] {:>2}. {} ({:.2} s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64()
        );
        if det > 0 {
            let _ = write!(s, "; exact {det_ok}/{det}");
        }
        if stat > 0 {
            let _ = write!(s, "; within {SIGMAS}σ {stat_ok}/{stat}");
        }
        if let Some(e) = &self.error {
            let _ = write!(s, "; error: {e}");
        }
        s
    }

    /// Failing checks, one per line.
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn timed(id: u8, title: &'static str, body: impl FnOnce(&mut Outcome) -> Result<()>) -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new(id, title);
    if let Err(e) = body(&mut out) {
        out.error = Some(e.to_string());
    }
    out.elapsed = start.elapsed();
    out
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// Settings shared by every criterion.
#[derive(Debug, Clone)]
pub struct Suite {
    /// Seed, trial count, count mode, radius, intensity and radio settings
    /// are taken from here; exponents and grids are fixed per criterion.
    pub base: Params,
    pub heatmap_trials: u64,
    pub routing: ClosedFormRouting,
}

impl Suite {
    pub fn new(seed: u64) -> Self {
        let mut base = Params::defaults(Command::Validate);
        base.seed = seed;
        Self {
            base,
            heatmap_trials: 10_000,
            routing: ClosedFormRouting::Standard,
        }
    }

    /// Fewer trials for a fast smoke run.
    pub fn quick(mut self) -> Self {
        self.base.trials = self.base.trials.min(10_000);
        self.heatmap_trials = self.heatmap_trials.min(2_000);
        self
    }

    fn rng(&self, id: u8) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base.seed);
        rng.set_stream(u64::from(id));
        rng
    }

    fn params(&self, command: Command, stream: u64) -> Params {
        let b = &self.base;
        let mut p = Params::defaults(command);
        p.seed = b.seed;
        p.stream = stream;
        p.trials = b.trials;
        p.count_mode = b.count_mode;
        p.fixed_interferers = b.fixed_interferers;
        p.radius = b.radius;
        p.rho_t = b.rho_t;
        p.theta = vec![FRAC_PI_2, PI, TAU];
        p.q = b.q;
        p.gamma = b.gamma;
        p.power = b.power;
        p.noise = b.noise;
        p
    }

    /// Runs every criterion in order.
    pub fn run_all(&self) -> Vec<Outcome> {
        let mut out = vec![
            self.closed_form_consistency(),
            self.quadrature_oracle(),
            self.connection_agreement(),
            self.benchmark_gap(),
            self.rate_agreement(),
            self.density_agreement(),
            self.border_heatmap(),
            self.poisson_mixture_identity(),
            self.optimal_density_grid(),
        ];
        let det = self.determinism(&out, &default_pool_sizes());
        out.push(det);
        out
    }

    /// Criterion 1: Generic ₂F₁ against the η = 2 and η = 4 closed forms.
    pub fn closed_form_consistency(&self) -> Outcome {
        timed(1, "closed forms match generic 2F1 (eta = 2, 4)", |out| {
            let radii = grid(0.5, 10.0, 10, Spacing::Linear);
            let args = grid(1e-3, 1e3, 10, Spacing::Log);
            let mut worst = (0.0f64, String::new());
            let mut failures = 0usize;
            let mut total = 0usize;
            for eta in [2.0, 4.0] {
                for &eps in &[0.0, 0.01, 1.0] {
                    let pl = PathLossParams::new(eta, eps)?;
                    for &theta in &[FRAC_PI_2, PI, TAU] {
                        for &r in &radii {
                            let sector = SectorDomain::new(r, theta)?;
                            for &s in &args {
                                let s = InterferenceArg::new(s)?;
                                let closed = interference_integral_sector_routed(
                                    &sector,
                                    s,
                                    &pl,
                                    self.routing,
                                )?;
                                let generic =
                                    interference_integral_sector_hypergeometric(&sector, s, &pl)?;
                                let e = rel_err(generic, closed);
                                total += 1;
                                if e > 1e-10 {
                                    failures += 1;
                                }
                                if e > worst.0 {
                                    worst = (
                                        e,
                                        format!(
                                            "eta={eta} eps={eps} theta={theta:.4} R={r} s={:.3e}",
                                            s.value()
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            out.checks.push(Check::exact(
                format!("{total} grid points within 1e-10 relative"),
                failures == 0,
                format!("{failures} failures; worst {:.2e} at {}", worst.0, worst.1),
            ));
            Ok(())
        })
    }

    /// Criterion 2: Polar quadrature over a sector against the closed form.
    pub fn quadrature_oracle(&self) -> Outcome {
        timed(2, "2D quadrature matches the sector integral", |out| {
            let mut rng = self.rng(2);
            let spec = QuadratureSpec::new(1e-12, 1e-13, 4000)?;
            for k in 0..20 {
                let r = rng.random_range(0.5..10.0);
                let theta = rng.random_range(0.1..=TAU);
                let eta = rng.random_range(2.0..6.0);
                let eps = [0.0, 0.01, 1.0][rng.random_range(0..3)];
                let s = 10f64.powf(rng.random_range(-3.0..3.0));
                let sector = SectorDomain::new(r, theta)?;
                let pl = PathLossParams::new(eta, eps)?;
                let arg = InterferenceArg::new(s)?;
                let exact = interference_integral_sector_routed(&sector, arg, &pl, self.routing)?;
                let numeric =
                    interference_integral_numeric(&sector.into(), Point2::ORIGIN, arg, &pl, &spec)?;
                let diff = (numeric - exact).abs();
                out.checks.push(Check::exact(
                    format!("set {k}: R={r:.3} theta={theta:.3} eta={eta:.3} eps={eps} s={s:.3e}"),
                    diff <= 1e-8,
                    format!("|numeric - closed| = {diff:.2e}"),
                ));
            }
            Ok(())
        })
    }

    /// Tables for criterion 3: one per `(η, ε)` panel.
    pub fn connection_tables(&self) -> Result<Vec<(String, Table)>> {
        let mut tables = Vec::new();
        for (k, (eta, eps)) in [(2.5, 0.0), (2.5, 0.01), (3.0, 0.0), (3.0, 0.01)]
            .into_iter()
            .enumerate()
        {
            let mut p = self.params(Command::Connection, (k as u64) << 40);
            p.eta = eta;
            p.epsilon = vec![eps];
            p.sweep_min = 0.1;
            p.sweep_max = 3.0;
            p.points = 10;
            tables.push((
                format!("connection_eta{eta}_eps{eps}"),
                experiment::connection(&p)?,
            ));
        }
        Ok(tables)
    }

    /// Criterion 3: Simulated connection probability within 3σ of the analytic value.
    ///
    /// Each estimate is a Bernoulli mean, so its standard error is zero when
    /// no trial connects. The bound uses the larger of the sample standard
    /// error and the binomial one at the analytic value.
    pub fn connection_agreement(&self) -> Outcome {
        timed(3, "connection probability: simulation vs analysis", |out| {
            for (name, t) in self.connection_tables()? {
                let (theta, d, h, mc, se) = (
                    t.values("theta")?,
                    t.values("d_ij")?,
                    t.values("analytic_H")?,
                    t.values("mc_mean")?,
                    t.values("mc_stderr")?,
                );
                let n = self.base.trials as f64;
                for i in 0..t.rows.len() {
                    let null = (h[i] * (1.0 - h[i]) / n).sqrt();
                    out.checks.push(Check::sigma(
                        format!(
                            "{name} theta={theta:.4} d={d:.4}",
                            theta = theta[i],
                            d = d[i]
                        ),
                        mc[i],
                        se[i].max(null),
                        h[i],
                    ));
                }
                out.tables.push((name, t.to_csv()?));
            }
            Ok(())
        })
    }

    /// Criterion 4: The unbounded-network benchmark underestimates connection.
    pub fn benchmark_gap(&self) -> Outcome {
        timed(4, "unbounded benchmark underestimates connection", |out| {
            let mut p = self.params(Command::Connection, 0);
            p.eta = 2.5;
            p.epsilon = vec![0.0];
            let radio = p.radio()?;
            let pl = p.pathloss(0.0)?;
            let sector = SectorDomain::new(p.radius, TAU)?;
            let mut best = (0.0f64, 0.0);
            let mut below = true;
            for d in grid(0.1, 3.0, 30, Spacing::Linear) {
                let cfg = ScenarioConfig::sector_apex(sector, pl, radio, p.rho_t, d)?;
                let h = borderline_core::analytic::connection_probability(&cfg)?;
                let hb = borderline_core::analytic::connection_probability_infinite(&cfg)?;
                below &= hb <= h;
                let ratio = h / hb;
                if ratio > best.0 {
                    best = (ratio, d);
                }
            }
            out.checks.push(Check::exact(
                "benchmark never exceeds the finite-region value",
                below,
                "",
            ));
            out.checks.push(Check::exact(
                "max analytic / benchmark ratio >= 5",
                best.0 >= 5.0,
                format!("max ratio {:.3e} at d = {:.3}", best.0, best.1),
            ));
            Ok(())
        })
    }

    pub fn rate_table(&self) -> Result<Table> {
        let mut p = self.params(Command::Rate, 5 << 40);
        p.eta = 3.0;
        p.epsilon = vec![0.01];
        p.sweep_min = 0.1;
        p.sweep_max = 3.0;
        p.points = 10;
        experiment::rate(&p)
    }

    /// Criterion 5: Rate mean and variance within 3σ; the variance is larger at a
    /// right-angle corner than in the open plane.
    pub fn rate_agreement(&self) -> Outcome {
        timed(
            5,
            "ergodic rate and variance: simulation vs analysis",
            |out| {
                let t = self.rate_table()?;
                let theta = t.values("theta")?;
                let d = t.values("d_ij")?;
                let (ar, av) = (t.values("analytic_rate")?, t.values("analytic_variance")?);
                let (mr, mrs) = (t.values("mc_rate")?, t.values("mc_rate_stderr")?);
                let (mv, mvs) = (t.values("mc_variance")?, t.values("mc_variance_stderr")?);
                for i in 0..t.rows.len() {
                    let at = format!("theta={:.4} d={:.4}", theta[i], d[i]);
                    out.checks
                        .push(Check::sigma(format!("rate {at}"), mr[i], mrs[i], ar[i]));
                    out.checks
                        .push(Check::sigma(format!("variance {at}"), mv[i], mvs[i], av[i]));
                }
                for i in 0..t.rows.len() {
                    if theta[i] != FRAC_PI_2 {
                        continue;
                    }
                    if let Some(j) = (0..t.rows.len()).find(|&j| theta[j] == TAU && d[j] == d[i]) {
                        out.checks.push(Check::exact(
                            format!("variance(pi/2) > variance(2pi) at d={:.4}", d[i]),
                            av[i] > av[j],
                            format!("{:.6e} vs {:.6e}", av[i], av[j]),
                        ));
                    }
                }
                out.tables.push(("rate".into(), t.to_csv()?));
                Ok(())
            },
        )
    }

    pub fn density_table(&self) -> Result<Table> {
        let mut p = self.params(Command::Density, 6 << 40);
        p.eta = 4.0;
        p.epsilon = vec![0.0, 0.01];
        p.sweep_min = 3.75;
        p.sweep_max = 30.0;
        p.points = 8;
        experiment::density(&p)
    }

    /// Criterion 6: Closed-form density limits, unimodality with a buffer, and
    /// simulation agreement.
    pub fn density_agreement(&self) -> Outcome {
        timed(6, "density of successful transmissions", |out| {
            let b = &self.base;
            let unit = RadioParams::new(b.power, b.noise, 1.0, 1.0)?;
            let limit = 2.0 / PI;
            for theta in [FRAC_PI_2, PI, TAU] {
                let rhos = grid(1e-3, 1e6, 400, Spacing::Log);
                let mu: Vec<f64> = rhos
                    .iter()
                    .map(|&r| success_density_closed(theta, r, &unit))
                    .collect::<Result<_, _>>()?;
                let monotone = mu.windows(2).all(|w| w[1] >= w[0]);
                out.checks.push(Check::exact(
                    format!("closed form non-decreasing in rho, theta={theta:.4}"),
                    monotone,
                    "",
                ));
                let top = success_density_closed(theta, 1e6, &unit)?;
                out.checks.push(Check::exact(
                    format!("closed form at rho=1e6 within 1e-4 of 2/pi, theta={theta:.4}"),
                    (top - limit).abs() <= 1e-4,
                    format!("{top:.8} vs {limit:.8}"),
                ));
            }

            let spec = QuadratureSpec::default();
            let radio = self.base.radio()?;
            let pl = PathLossParams::new(4.0, 0.01)?;
            for theta in [FRAC_PI_2, PI, TAU] {
                let sector = SectorDomain::new(self.base.radius, theta)?;
                let rhos = grid(0.1, 30.0, 300, Spacing::Linear);
                let mu: Vec<f64> = rhos
                    .iter()
                    .map(|&r| {
                        success_density(
                            &ScenarioConfig::sector_apex(sector, pl, radio, r, 0.0)?,
                            &spec,
                        )
                    })
                    .collect::<Result<_, _>>()?;
                let peak = interior_peaks(&mu);
                out.checks.push(Check::exact(
                    format!("eps=0.01 density has one interior maximum, theta={theta:.4}"),
                    peak.len() == 1,
                    match peak.first() {
                        Some(&i) => format!("{} peak(s), first at rho={:.3}", peak.len(), rhos[i]),
                        None => "no interior maximum".into(),
                    },
                ));
            }

            let t = self.density_table()?;
            let (eps, theta, rho) = (t.values("epsilon")?, t.values("theta")?, t.values("rho_t")?);
            let (mu, mc, se) = (
                t.values("analytic_mu")?,
                t.values("mc_mean")?,
                t.values("mc_stderr")?,
            );
            // Rare successes make the count nearly Poisson, so `sqrt(μ/n)`
            // stands in for the standard error when no trial succeeds.
            let n = self.base.trials as f64;
            for i in 0..t.rows.len() {
                out.checks.push(Check::sigma(
                    format!("eps={} theta={:.4} rho={:.3}", eps[i], theta[i], rho[i]),
                    mc[i],
                    if se[i] > 0.0 {
                        se[i]
                    } else {
                        (mu[i] / n).sqrt()
                    },
                    mu[i],
                ));
            }
            out.tables.push(("density".into(), t.to_csv()?));
            Ok(())
        })
    }

    pub fn heatmap_params(&self) -> Params {
        let b = &self.base;
        let mut p = Params::defaults(Command::Heatmap);
        p.seed = b.seed;
        p.stream = 7 << 40;
        p.trials = self.heatmap_trials;
        p.count_mode = b.count_mode;
        p.q = b.q;
        p.gamma = b.gamma;
        p.power = b.power;
        p.noise = b.noise;
        p
    }

    /// Criterion 7: Corner receivers of a square see less outage than central ones.
    pub fn border_heatmap(&self) -> Outcome {
        timed(7, "square region: corners beat the centre", |out| {
            let p = self.heatmap_params();
            let (t, h) = experiment::heatmap(&p)?;
            let (nx, ny) = (h.nx, h.ny);
            let corners = [(0, 0), (nx - 1, 0), (0, ny - 1), (nx - 1, ny - 1)];
            let (cx, cy) = (nx / 2, ny / 2);
            let centre = [(cx - 1, cy - 1), (cx, cy - 1), (cx - 1, cy), (cx, cy)];
            let pool = |cells: &[(usize, usize)]| {
                let n = cells.len() as f64;
                let mean = cells.iter().map(|&(i, j)| h.cell(i, j).mean).sum::<f64>() / n;
                let var = cells
                    .iter()
                    .map(|&(i, j)| h.cell(i, j).std_error.powi(2))
                    .sum::<f64>()
                    / (n * n);
                (mean, var)
            };
            let ((mc, vc), (mm, vm)) = (pool(&corners), pool(&centre));
            let se = (vc + vm).sqrt();
            out.checks.push(Check::exact(
                "corner outage below centre outage by > 5 combined standard errors",
                mm - mc > 5.0 * se,
                format!(
                    "corner {mc:.5}, centre {mm:.5}, gap {:.1} se",
                    (mm - mc) / se
                ),
            ));
            for a in 0..corners.len() {
                for b in a + 1..corners.len() {
                    let (ea, eb) = (
                        h.cell(corners[a].0, corners[a].1),
                        h.cell(corners[b].0, corners[b].1),
                    );
                    let s = (ea.std_error.powi(2) + eb.std_error.powi(2)).sqrt();
                    out.checks.push(Check::sigma(
                        format!("corner {a} vs corner {b}"),
                        ea.mean,
                        s,
                        eb.mean,
                    ));
                }
            }
            out.tables.push(("heatmap".into(), t.to_csv()?));
            Ok(())
        })
    }

    /// Criterion 8: Averaging the binomial result over a Poisson count recovers the
    /// Poisson one.
    pub fn poisson_mixture_identity(&self) -> Outcome {
        timed(8, "Poisson mixture of binomial fields", |out| {
            let mut rng = self.rng(8);
            for k in 0..10 {
                let cfg = random_scenario(&mut rng)?;
                let v = cfg.domain().area();
                let mean = cfg.rho_t() * v;
                let a = mean_no_interference_factor(&cfg)?;
                let terms = (10.0 * mean).ceil().max(50.0) as u64;
                let mixture = poisson_mixture(mean, a, terms)?;
                let direct = (-mean * (1.0 - a)).exp();
                let laplace = laplace_interference(laplace_argument(&cfg), &cfg)?;
                let e = (mixture - direct).abs().max((laplace - direct).abs());
                out.checks.push(Check::exact(
                    format!("scenario {k}: rho V = {mean:.3}, A = {a:.6}"),
                    e <= 1e-8,
                    format!("max deviation {e:.2e}"),
                ));
            }
            Ok(())
        })
    }

    /// Criterion 9: `ρ e^{−ρI}` peaks at the grid point nearest `1/I`.
    pub fn optimal_density_grid(&self) -> Outcome {
        timed(9, "optimal intensity 1/I_R", |out| {
            let mut rng = self.rng(9);
            for k in 0..10 {
                let cfg = random_scenario(&mut rng)?;
                let sector = cfg
                    .apex_sector()
                    .ok_or_else(|| LabError::config("apex scenario expected"))?;
                let s = laplace_argument(&cfg);
                let i = borderline_core::analytic::interference_integral_sector(
                    &sector,
                    s,
                    cfg.pathloss(),
                )?;
                let rho_max = optimal_density(&sector, s, cfg.pathloss())?;
                let rhos: Vec<f64> = (1..=1000).map(|j| j as f64 * 5.0 / i / 1000.0).collect();
                let value = |r: f64| r * (-r * i).exp();
                let argmax = (0..rhos.len())
                    .max_by(|&a, &b| value(rhos[a]).total_cmp(&value(rhos[b])))
                    .unwrap_or(0);
                let nearest = (0..rhos.len())
                    .min_by(|&a, &b| {
                        (rhos[a] - rho_max)
                            .abs()
                            .total_cmp(&(rhos[b] - rho_max).abs())
                    })
                    .unwrap_or(0);
                out.checks.push(Check::exact(
                    format!("scenario {k}: rho_max = {rho_max:.6e}"),
                    argmax == nearest,
                    format!("grid argmax {argmax}, nearest {nearest}"),
                ));
            }
            Ok(())
        })
    }

    /// Re-encodes every simulated table of `outcomes` under thread pools of
    /// the given sizes.
    pub fn rerun_tables(&self, ids: &[u8]) -> Result<Vec<(String, Vec<u8>)>> {
        let mut v = Vec::new();
        for &id in ids {
            match id {
                3 => {
                    for (name, t) in self.connection_tables()? {
                        v.push((name, t.to_csv()?));
                    }
                }
                5 => v.push(("rate".into(), self.rate_table()?.to_csv()?)),
                6 => v.push(("density".into(), self.density_table()?.to_csv()?)),
                7 => v.push((
                    "heatmap".into(),
                    experiment::heatmap(&self.heatmap_params())?.0.to_csv()?,
                )),
                _ => {}
            }
        }
        Ok(v)
    }

    /// Criterion 10: Simulated tables are byte-identical across thread counts.
    pub fn determinism(&self, outcomes: &[Outcome], pools: &[usize]) -> Outcome {
        timed(10, "byte-identical output across thread counts", |out| {
            let ids: Vec<u8> = outcomes
                .iter()
                .filter(|o| !o.tables.is_empty())
                .map(|o| o.id)
                .collect();
            let reference: Vec<&(String, Vec<u8>)> =
                outcomes.iter().flat_map(|o| &o.tables).collect();
            if reference.is_empty() {
                return Err(LabError::Validation(
                    "no simulated tables to compare".into(),
                ));
            }
            let current = rayon::current_num_threads();
            for &n in pools {
                if n == current {
                    out.checks.push(Check::exact(
                        format!("{n} thread(s)"),
                        true,
                        "reference run",
                    ));
                    continue;
                }
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| LabError::config(e.to_string()))?;
                let again = pool.install(|| self.rerun_tables(&ids))?;
                let same = again.len() == reference.len()
                    && again
                        .iter()
                        .zip(&reference)
                        .all(|(a, b)| a.0 == b.0 && a.1 == b.1);
                out.checks.push(Check::exact(
                    format!("{n} thread(s)"),
                    same,
                    format!("{} tables compared", reference.len()),
                ));
            }
            Ok(())
        })
    }
}

/// Distinct pool sizes among 1, 4 and the machine's parallelism.
pub fn default_pool_sizes() -> Vec<usize> {
    let max = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut v = vec![1, 4, max];
    v.sort_unstable();
    v.dedup();
    v
}

/// Indices of strict interior local maxima, ignoring flat steps.
pub fn interior_peaks(values: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    let mut rising = false;
    let mut last_change = 0;
    for i in 1..values.len() {
        let d = values[i] - values[i - 1];
        if d > 0.0 {
            rising = true;
            last_change = i;
        } else if d < 0.0 {
            if rising {
                peaks.push(last_change);
            }
            rising = false;
        }
    }
    peaks
}

/// A random apex scenario with moderate parameters.
fn random_scenario(rng: &mut ChaCha8Rng) -> Result<ScenarioConfig> {
    let sector = SectorDomain::new(rng.random_range(0.5..10.0), rng.random_range(0.1..=TAU))?;
    let pl = PathLossParams::new(
        rng.random_range(2.0..5.0),
        [0.0, 0.01, 1.0][rng.random_range(0..3)],
    )?;
    let radio = RadioParams::new(
        1.0,
        1.0,
        rng.random_range(0.1..=1.0),
        10f64.powf(rng.random_range(-1.0..1.0)),
    )?;
    Ok(ScenarioConfig::sector_apex(
        sector,
        pl,
        radio,
        rng.random_range(0.1..20.0),
        rng.random_range(0.1..3.0),
    )?)
}

/// Counts in `outcomes` as `(passed, total)` criteria.
pub fn tally(outcomes: &[Outcome]) -> (usize, usize) {
    (
        outcomes.iter().filter(|o| o.passed()).count(),
        outcomes.len(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miss_allowance() {
        assert_eq!(allowed_misses(0), 0);
        assert_eq!(allowed_misses(1), 1);
        assert_eq!(allowed_misses(60), 2);
        assert_eq!(allowed_misses(120), 3);
        assert_eq!(allowed_misses(2000), 20);
    }

    #[test]
    fn peaks() {
        assert_eq!(interior_peaks(&[1.0, 2.0, 3.0, 2.0, 1.0]), vec![2]);
        assert_eq!(interior_peaks(&[1.0, 2.0, 2.0, 1.0]), vec![1]);
        assert!(interior_peaks(&[1.0, 2.0, 3.0]).is_empty());
        assert_eq!(interior_peaks(&[1.0, 3.0, 2.0, 4.0, 0.0]).len(), 2);
    }

    #[test]
    fn outcome_rules() {
        let mut o = Outcome::new(1, "t");
        assert!(!o.passed());
        o.checks.push(Check::exact("a", true, ""));
        for i in 0..100 {
            o.checks.push(Check::sigma(
                format!("{i}"),
                0.0,
                1.0,
                if i == 0 { 5.0 } else { 0.0 },
            ));
        }
        assert!(o.passed());
        // 100 statistical checks tolerate three misses.
        for k in 0..2 {
            o.checks.push(Check::sigma(format!("x{k}"), 0.0, 1.0, 5.0));
        }
        assert!(o.passed());
        o.checks.push(Check::sigma("x", 0.0, 1.0, 5.0));
        assert!(!o.passed());
        assert!(o.summary().starts_with("[FAIL]"));
    }
}
