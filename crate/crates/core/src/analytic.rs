//! Connection probability, ergodic rate and spatial density of successful
//! transmissions for a receiver inside a finite Poisson network.
//!
//! Interferers form a Poisson point process of intensity `ρ_T` restricted to
//! the deployment region, with Rayleigh fading on every link. Conditioning on
//! the interference and averaging over the process gives
//!
//! ```text
//! H = exp(-q𝒩/(𝒫 g(d))) · exp(-ρ_T · I),   I = ∫_V s·g(|t - r|) / (1 + s·g(|t - r|)) dt
//! ```
//!
//! with `s = qγ/g(d)`. For a sector of radius `R` and angle `θ` with the
//! receiver at its apex,
//!
//! ```text
//! I_R(η) = θR²s / (2(ε + s)) · ₂F₁(1, 2/η; 2/η + 1; -R^η/(ε + s)),
//! ```
//!
//! which reduces to logarithmic and arctangent forms at η = 2 and η = 4.
//! Everywhere else the integral is evaluated numerically in polar
//! coordinates around the receiver.

use core::f64::consts::PI;

use crate::channel::{PathLossParams, RadioParams};
use crate::geometry::{Domain, Point2, SectorDomain};
use crate::specfun::{
    erfcx, hyp2f1_1b, try_integrate_finite, try_integrate_semiinfinite, QuadratureSpec,
};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Exponents this close to 2 or 4 use the elementary closed forms.
const ETA_SNAP: f64 = 1e-12;

/// A full analytic scenario: region, receiver, channel and link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    domain: Domain,
    receiver: Point2,
    pathloss: PathLossParams,
    radio: RadioParams,
    rho_t: f64,
    link_distance: f64,
}

impl ScenarioConfig {
    pub fn new(
        domain: Domain,
        receiver: Point2,
        pathloss: PathLossParams,
        radio: RadioParams,
        rho_t: f64,
        link_distance: f64,
    ) -> Result<Self> {
        if !domain.contains(receiver) {
            return Err(Error::param("receiver", "must lie inside the domain"));
        }
        check_rho(rho_t)?;
        check_distance(link_distance)?;
        Ok(Self {
            domain,
            receiver,
            pathloss,
            radio,
            rho_t,
            link_distance,
        })
    }

    /// Receiver at the apex of a sector.
    pub fn sector_apex(
        sector: SectorDomain,
        pathloss: PathLossParams,
        radio: RadioParams,
        rho_t: f64,
        link_distance: f64,
    ) -> Result<Self> {
        Self::new(
            sector.into(),
            Point2::ORIGIN,
            pathloss,
            radio,
            rho_t,
            link_distance,
        )
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn receiver(&self) -> Point2 {
        self.receiver
    }

    pub fn pathloss(&self) -> &PathLossParams {
        &self.pathloss
    }

    pub fn radio(&self) -> &RadioParams {
        &self.radio
    }

    pub fn rho_t(&self) -> f64 {
        self.rho_t
    }

    pub fn link_distance(&self) -> f64 {
        self.link_distance
    }

    pub fn with_link_distance(mut self, d: f64) -> Result<Self> {
        check_distance(d)?;
        self.link_distance = d;
        Ok(self)
    }

    pub fn with_rho_t(mut self, rho_t: f64) -> Result<Self> {
        check_rho(rho_t)?;
        self.rho_t = rho_t;
        Ok(self)
    }

    pub fn with_radio(mut self, radio: RadioParams) -> Self {
        self.radio = radio;
        self
    }

    pub fn with_pathloss(mut self, pathloss: PathLossParams) -> Self {
        self.pathloss = pathloss;
        self
    }

    pub fn with_receiver(mut self, receiver: Point2) -> Result<Self> {
        if !self.domain.contains(receiver) {
            return Err(Error::param("receiver", "must lie inside the domain"));
        }
        self.receiver = receiver;
        Ok(self)
    }

    /// The sector, when the receiver sits at its apex.
    pub fn apex_sector(&self) -> Option<SectorDomain> {
        match self.domain {
            Domain::Sector(s) if self.domain.is_sector_apex(self.receiver) => Some(s),
            _ => None,
        }
    }

    fn inverse_link_gain(&self) -> f64 {
        self.pathloss.inverse_gain(self.link_distance)
    }
}

fn check_rho(rho_t: f64) -> Result<()> {
    if rho_t >= 0.0 && rho_t.is_finite() {
        Ok(())
    } else {
        Err(Error::param(
            "rho_t",
            "transmitter intensity must be finite and >= 0",
        ))
    }
}

fn check_distance(d: f64) -> Result<()> {
    if d >= 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::param("link_distance", "must be finite and >= 0"))
    }
}

/// Laplace-transform argument `s = qγ/g(d) = qγ(ε + d^η)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InterferenceArg(f64);

impl InterferenceArg {
    pub fn new(s: f64) -> Result<Self> {
        if s >= 0.0 && s.is_finite() {
            Ok(Self(s))
        } else {
            Err(Error::param(
                "s",
                "Laplace argument must be finite and >= 0",
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn laplace_argument(cfg: &ScenarioConfig) -> InterferenceArg {
    InterferenceArg(threshold_argument(cfg, cfg.radio.threshold()))
}

fn threshold_argument(cfg: &ScenarioConfig, threshold: f64) -> f64 {
    threshold * cfg.radio.gamma() * cfg.inverse_link_gain()
}

/// How exponents are matched to the elementary closed forms.
///
/// `Swapped` deliberately pairs each exponent with the other form; it exists
/// only so validation runs can prove they detect a routing fault.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosedFormRouting {
    #[default]
    Standard,
    Swapped,
}

/// Interference integral `I_R(η)` over a sector, receiver at the apex.
pub fn interference_integral_sector(
    sector: &SectorDomain,
    s: InterferenceArg,
    pl: &PathLossParams,
) -> Result<f64> {
    interference_integral_sector_routed(sector, s, pl, ClosedFormRouting::Standard)
}

#[doc(hidden)]
pub fn interference_integral_sector_routed(
    sector: &SectorDomain,
    s: InterferenceArg,
    pl: &PathLossParams,
    routing: ClosedFormRouting,
) -> Result<f64> {
    let s = s.value();
    if s == 0.0 {
        return Ok(0.0);
    }
    let (theta, radius) = (sector.angle(), sector.radius());
    let c = pl.epsilon() + s;
    let eta = pl.eta();
    let (log_form, atan_form) = match routing {
        ClosedFormRouting::Standard => ((eta - 2.0).abs() < ETA_SNAP, (eta - 4.0).abs() < ETA_SNAP),
        ClosedFormRouting::Swapped => ((eta - 4.0).abs() < ETA_SNAP, (eta - 2.0).abs() < ETA_SNAP),
    };
    if log_form {
        Ok(0.5 * theta * s * (radius * radius / c).ln_1p())
    } else if atan_form {
        let root = c.sqrt();
        Ok(0.5 * theta * s / root * (radius * radius / root).atan())
    } else {
        hypergeometric_sector(theta, radius, s, c, eta)
    }
}

/// `I_R(η)` through ₂F₁ for every exponent, bypassing the closed forms.
pub fn interference_integral_sector_hypergeometric(
    sector: &SectorDomain,
    s: InterferenceArg,
    pl: &PathLossParams,
) -> Result<f64> {
    let s = s.value();
    if s == 0.0 {
        return Ok(0.0);
    }
    let c = pl.epsilon() + s;
    hypergeometric_sector(sector.angle(), sector.radius(), s, c, pl.eta())
}

fn hypergeometric_sector(theta: f64, radius: f64, s: f64, c: f64, eta: f64) -> Result<f64> {
    let z = -radius.powf(eta) / c;
    let f = hyp2f1_1b(2.0 / eta, z)?;
    Ok(theta * radius * radius * s / (2.0 * c) * f)
}

/// Interference integral over an infinite wedge of angle `theta`.
///
/// Diverges for η ≤ 2; an upper bound on the finite-sector integral.
pub fn interference_integral_infinite(
    theta: f64,
    s: InterferenceArg,
    pl: &PathLossParams,
) -> Result<f64> {
    let eta = pl.eta();
    if eta <= 2.0 {
        return Err(Error::Divergence { eta });
    }
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::param("theta", "must be positive and finite"));
    }
    let s = s.value();
    if s == 0.0 {
        return Ok(0.0);
    }
    let c = pl.epsilon() + s;
    Ok(theta * PI * s * c.powf(2.0 / eta - 1.0) / (eta * (2.0 * PI / eta).sin()))
}

/// The interference integral for any receiver and region, by nested
/// adaptive quadrature in polar coordinates around the receiver.
///
/// The region is fanned into angular pieces at its corners; within each
/// piece the radial reach is smooth, and the radial integral of
/// `s·t / (ε + s + t^η)` is done numerically.
pub fn interference_integral_numeric(
    domain: &Domain,
    receiver: Point2,
    s: InterferenceArg,
    pl: &PathLossParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let pieces = domain.polar_pieces(receiver)?;
    let s = s.value();
    if s == 0.0 {
        return Ok(0.0);
    }
    let c = pl.epsilon() + s;
    let eta = pl.eta();
    let inner_spec = QuadratureSpec {
        abs_tol: 0.1 * spec.abs_tol,
        ..*spec
    };
    let radial = |reach: f64| -> Result<f64> {
        try_integrate_finite(|t| Ok(s * t / (c + t.powf(eta))), 0.0, reach, &inner_spec)
    };
    let mut total = 0.0;
    for (start, end) in pieces {
        total += try_integrate_finite(
            |phi| radial(domain.exit_distance(receiver, phi)),
            start,
            end,
            spec,
        )?;
    }
    Ok(total)
}

/// Interference integral for a scenario: closed form for an apex receiver in
/// a sector, numeric otherwise.
pub fn interference_integral(
    cfg: &ScenarioConfig,
    s: InterferenceArg,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match cfg.apex_sector() {
        Some(sector) => interference_integral_sector(&sector, s, &cfg.pathloss),
        None => interference_integral_numeric(&cfg.domain, cfg.receiver, s, &cfg.pathloss, spec),
    }
}

/// Laplace transform of the normalised interference, `exp(-ρ_T · I(s))`.
pub fn laplace_interference(s: InterferenceArg, cfg: &ScenarioConfig) -> Result<f64> {
    if s.value() == 0.0 || cfg.rho_t == 0.0 {
        return Ok(1.0);
    }
    let i = interference_integral(cfg, s, &QuadratureSpec::default())?;
    Ok((-cfg.rho_t * i).exp())
}

fn noise_factor(cfg: &ScenarioConfig, threshold: f64) -> f64 {
    let r = &cfg.radio;
    (-threshold * r.noise() * cfg.inverse_link_gain() / r.power()).exp()
}

/// Connection probability `H = P[SINR ≥ q]`.
pub fn connection_probability(cfg: &ScenarioConfig) -> Result<f64> {
    connection_probability_with(cfg, &QuadratureSpec::default())
}

/// [`connection_probability`] with explicit quadrature tolerances for the
/// numeric path.
pub fn connection_probability_with(cfg: &ScenarioConfig, spec: &QuadratureSpec) -> Result<f64> {
    ccdf_at(cfg, cfg.radio.threshold(), spec)
}

/// `P[SINR ≥ threshold]` for the scenario.
fn ccdf_at(cfg: &ScenarioConfig, threshold: f64, spec: &QuadratureSpec) -> Result<f64> {
    let noise = noise_factor(cfg, threshold);
    if noise == 0.0 || cfg.rho_t == 0.0 {
        return Ok(noise);
    }
    let s = InterferenceArg(threshold_argument(cfg, threshold));
    if s.value() == 0.0 {
        return Ok(noise);
    }
    let i = interference_integral(cfg, s, spec)?;
    Ok(noise * (-cfg.rho_t * i).exp())
}

/// Connection probability with the infinite-wedge integral in place of the
/// finite one; a lower bound on [`connection_probability`].
///
/// Requires a sector with the receiver at its apex. For η ≤ 2 the
/// interference diverges and the result is 0.
pub fn connection_probability_infinite(cfg: &ScenarioConfig) -> Result<f64> {
    let sector = cfg.apex_sector().ok_or(Error::Unsupported(
        "the infinite-network benchmark needs a sector apex receiver",
    ))?;
    let noise = noise_factor(cfg, cfg.radio.threshold());
    let s = laplace_argument(cfg);
    if s.value() == 0.0 || cfg.rho_t == 0.0 {
        return Ok(noise);
    }
    match interference_integral_infinite(sector.angle(), s, &cfg.pathloss) {
        Ok(i) => Ok(noise * (-cfg.rho_t * i).exp()),
        Err(Error::Divergence { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Connection probability with exactly `n − 1` interferers placed uniformly
/// in the region (binomial point process).
pub fn connection_probability_bpp(cfg: &ScenarioConfig, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let noise = noise_factor(cfg, cfg.radio.threshold());
    let a = mean_no_interference_factor(cfg)?;
    Ok(noise * a.powf((n - 1) as f64))
}

/// `(1/V) ∫_V 1/(1 + s·g) dt = 1 − I/V`, the per-interferer average of the
/// conditional success factor.
pub fn mean_no_interference_factor(cfg: &ScenarioConfig) -> Result<f64> {
    let s = laplace_argument(cfg);
    let i = interference_integral(cfg, s, &QuadratureSpec::default())?;
    Ok((1.0 - i / cfg.domain.area()).clamp(0.0, 1.0))
}

/// `Σ_{N=0}^{terms} Poisson(N; mean) · a^N`.
pub fn poisson_mixture(mean: f64, a: f64, terms: u64) -> Result<f64> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(Error::param("mean", "must be finite and >= 0"));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::param("a", "must lie in [0, 1]"));
    }
    let mut sum = (-mean).exp();
    if mean == 0.0 || a == 0.0 {
        return Ok(sum);
    }
    let (ln_mean, ln_a) = (mean.ln(), a.ln());
    let mut ln_fact = 0.0;
    for n in 1..=terms {
        let nf = n as f64;
        ln_fact += nf.ln();
        sum += (nf * (ln_mean + ln_a) - mean - ln_fact).exp();
    }
    Ok(sum)
}

fn check_rate_scenario(cfg: &ScenarioConfig) -> Result<()> {
    if cfg.inverse_link_gain() == 0.0 {
        return Err(Error::Singularity);
    }
    let r = &cfg.radio;
    if r.noise() == 0.0 && (r.gamma() == 0.0 || cfg.rho_t == 0.0) {
        return Err(Error::DegenerateSinr);
    }
    Ok(())
}

/// Mean achievable rate `E[ln(1 + SINR)]` in nats/Hz.
pub fn ergodic_rate(cfg: &ScenarioConfig, spec: &QuadratureSpec) -> Result<f64> {
    check_rate_scenario(cfg)?;
    try_integrate_semiinfinite(|x| ccdf_at(cfg, x.exp_m1(), spec), spec)
}

/// `α`-th moment of the rate, `α ∫ x^{α−1} P[ln(1 + SINR) > x] dx`.
pub fn rate_moment(alpha: f64, cfg: &ScenarioConfig, spec: &QuadratureSpec) -> Result<f64> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::param(
            "alpha",
            "moment order must be finite and >= 1",
        ));
    }
    check_rate_scenario(cfg)?;
    let m = try_integrate_semiinfinite(
        |x| {
            let w = if alpha == 1.0 {
                1.0
            } else {
                x.powf(alpha - 1.0)
            };
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * ccdf_at(cfg, x.exp_m1(), spec)?)
        },
        spec,
    )?;
    Ok(alpha * m)
}

/// Rate variance `τ⁽²⁾ − τ²`.
pub fn rate_variance(cfg: &ScenarioConfig, spec: &QuadratureSpec) -> Result<f64> {
    let mean = ergodic_rate(cfg, spec)?;
    Ok(rate_moment(2.0, cfg, spec)? - mean * mean)
}

/// Expected number of concurrent transmissions decodable at the receiver,
/// `μ = θρ_T ∫₀^R exp(-q𝒩/(𝒫 g(t))) · exp(-ρ_T I_R(η; s(t))) t dt`.
///
/// Requires a sector with the receiver at its apex; the link distance of the
/// scenario is not used.
pub fn success_density(cfg: &ScenarioConfig, spec: &QuadratureSpec) -> Result<f64> {
    let sector = cfg.apex_sector().ok_or(Error::Unsupported(
        "success density needs a sector apex receiver",
    ))?;
    let rho = cfg.rho_t;
    if rho == 0.0 {
        return Ok(0.0);
    }
    let r = cfg.radio;
    let pl = cfg.pathloss;
    let integral = try_integrate_finite(
        |t| {
            let inv_gain = pl.inverse_gain(t);
            let noise = (-r.threshold() * r.noise() * inv_gain / r.power()).exp();
            if noise == 0.0 {
                return Ok(0.0);
            }
            let s = InterferenceArg(r.threshold() * r.gamma() * inv_gain);
            let i = interference_integral_sector(&sector, s, &pl)?;
            Ok(noise * (-rho * i).exp() * t)
        },
        0.0,
        sector.radius(),
        spec,
    )?;
    Ok(sector.angle() * rho * integral)
}

/// Success density for an unbounded wedge with η = 4 and ε = 0:
/// `θρ √(π𝒫/(16q𝒩)) · exp(b²) · erfc(b)`, `b = θπρ√(qγ𝒫) / (8√(q𝒩))`.
///
/// Evaluated as `θρ √(π𝒫/(16q𝒩)) · erfcx(b)`, which stays finite where the
/// two factors over- and underflow separately. Increases monotonically in
/// `ρ_T` towards [`success_density_limit`].
pub fn success_density_closed(theta: f64, rho_t: f64, radio: &RadioParams) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::param("theta", "must be positive and finite"));
    }
    check_rho(rho_t)?;
    let (p, n, g, q) = (
        radio.power(),
        radio.noise(),
        radio.gamma(),
        radio.threshold(),
    );
    if n == 0.0 {
        return Err(Error::domain(
            "success_density_closed",
            "noise must be positive",
        ));
    }
    if q == 0.0 {
        return Err(Error::domain(
            "success_density_closed",
            "threshold must be positive",
        ));
    }
    let prefactor = theta * rho_t * (PI * p / (16.0 * q * n)).sqrt();
    let b = theta * PI * rho_t * (q * g * p).sqrt() / (8.0 * (q * n).sqrt());
    Ok(prefactor * erfcx(b)?)
}

/// High-density limit `2/(π√(γq))` of [`success_density_closed`]; infinite
/// when γ = 0 or q = 0, where the density grows without bound.
pub fn success_density_limit(radio: &RadioParams) -> f64 {
    let gq = radio.gamma() * radio.threshold();
    if gq == 0.0 {
        f64::INFINITY
    } else {
        2.0 / (PI * gq.sqrt())
    }
}

/// Intensity `1/I_R(η)` maximising `ρ·exp(−ρ·I_R(η))` at a fixed link.
pub fn optimal_density(
    sector: &SectorDomain,
    s: InterferenceArg,
    pl: &PathLossParams,
) -> Result<f64> {
    let i = interference_integral_sector(sector, s, pl)?;
    if i == 0.0 {
        return Err(Error::DivisionByZero(
            "interference integral is zero (s = 0)",
        ));
    }
    Ok(1.0 / i)
}
