//! Deployment regions, node placement and reproducible random streams.
//!
//! Sectors have their apex at the origin and span polar angles `[0, θ]`.
//! Rectangles span `[0, width] × [0, height]`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// A position in the plane, in units of distance.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Euclidean distance between two points.
pub fn distance(a: Point2, b: Point2) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Circular sector of radius `R` and opening angle `θ` with apex at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorDomain {
    radius: f64,
    angle: f64,
}

impl SectorDomain {
    pub fn new(radius: f64, angle: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::param("radius", "must be positive and finite"));
        }
        if !(angle > 0.0 && angle <= TAU * (1.0 + 1e-12)) {
            return Err(Error::param("theta", "must lie in (0, 2π]"));
        }
        Ok(Self {
            radius,
            angle: angle.min(TAU),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn area(&self) -> f64 {
        0.5 * self.angle * self.radius * self.radius
    }

    fn is_apex(&self, p: Point2) -> bool {
        p.norm() <= 1e-12 * self.radius
    }
}

/// Axis-aligned rectangle `[0, width] × [0, height]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectDomain {
    width: f64,
    height: f64,
}

impl RectDomain {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::param("width", "must be positive and finite"));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::param("height", "must be positive and finite"));
        }
        Ok(Self { width, height })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * self.width, 0.5 * self.height)
    }
}

/// A finite deployment region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Sector(SectorDomain),
    Rect(RectDomain),
}

impl From<SectorDomain> for Domain {
    fn from(s: SectorDomain) -> Self {
        Domain::Sector(s)
    }
}

impl From<RectDomain> for Domain {
    fn from(r: RectDomain) -> Self {
        Domain::Rect(r)
    }
}

/// Area of a deployment region.
pub fn domain_area(domain: &Domain) -> f64 {
    domain.area()
}

impl Domain {
    pub fn area(&self) -> f64 {
        match self {
            Domain::Sector(s) => s.area(),
            Domain::Rect(r) => r.area(),
        }
    }

    /// Membership test, inclusive of the boundary up to a relative tolerance.
    pub fn contains(&self, p: Point2) -> bool {
        if !p.is_finite() {
            return false;
        }
        match self {
            Domain::Rect(r) => {
                let tol = 1e-12 * r.width.max(r.height);
                p.x >= -tol && p.y >= -tol && p.x <= r.width + tol && p.y <= r.height + tol
            }
            Domain::Sector(s) => {
                let tol = 1e-12 * s.radius;
                let rho = p.norm();
                if rho <= tol {
                    return true;
                }
                if rho > s.radius + tol {
                    return false;
                }
                let mut phi = p.y.atan2(p.x);
                if phi < 0.0 {
                    phi += TAU;
                }
                // The ray at angle 0 may come back as ~2π from atan2.
                phi <= s.angle + 1e-12 || TAU - phi <= 1e-12
            }
        }
    }

    /// True for a sector whose apex coincides with `p`.
    pub fn is_sector_apex(&self, p: Point2) -> bool {
        matches!(self, Domain::Sector(s) if s.is_apex(p))
    }

    /// Angular pieces `[φ₀, φ₁]` around `receiver` within which the distance
    /// to the boundary varies smoothly with direction.
    ///
    /// Together the pieces cover every direction that reaches into the domain.
    pub fn polar_pieces(&self, receiver: Point2) -> Result<Vec<(f64, f64)>> {
        if !self.contains(receiver) {
            return Err(Error::param("receiver", "must lie inside the domain"));
        }
        match self {
            Domain::Sector(s) if s.is_apex(receiver) => Ok(alloc::vec![(0.0, s.angle)]),
            Domain::Sector(s) if s.angle > PI + 1e-12 => Err(Error::Unsupported(
                "off-apex receivers in non-convex sectors (θ > π)",
            )),
            Domain::Sector(s) => {
                let (sn, cs) = s.angle.sin_cos();
                let corners = [
                    Point2::ORIGIN,
                    Point2::new(s.radius, 0.0),
                    Point2::new(s.radius * cs, s.radius * sn),
                ];
                Ok(fan_pieces(receiver, &corners))
            }
            Domain::Rect(r) => {
                let corners = [
                    Point2::ORIGIN,
                    Point2::new(r.width, 0.0),
                    Point2::new(r.width, r.height),
                    Point2::new(0.0, r.height),
                ];
                Ok(fan_pieces(receiver, &corners))
            }
        }
    }

    /// Distance from `receiver` to the boundary along direction `phi`.
    ///
    /// Valid for receivers accepted by [`Domain::polar_pieces`]; directions
    /// pointing straight out of the domain give zero.
    pub fn exit_distance(&self, receiver: Point2, phi: f64) -> f64 {
        let (uy, ux) = phi.sin_cos();
        match self {
            Domain::Sector(s) if s.is_apex(receiver) => s.radius,
            Domain::Sector(s) => {
                let (sn, cs) = s.angle.sin_cos();
                let lower = half_plane_exit(receiver, ux, uy, (0.0, -1.0), 0.0);
                let upper = half_plane_exit(receiver, ux, uy, (-sn, cs), 0.0);
                let along = receiver.x * ux + receiver.y * uy;
                let inside =
                    s.radius * s.radius - receiver.x * receiver.x - receiver.y * receiver.y;
                let disk = -along + (along * along + inside.max(0.0)).sqrt();
                lower.min(upper).min(disk).max(0.0)
            }
            Domain::Rect(r) => {
                let tx = if ux > 0.0 {
                    (r.width - receiver.x) / ux
                } else if ux < 0.0 {
                    -receiver.x / ux
                } else {
                    f64::INFINITY
                };
                let ty = if uy > 0.0 {
                    (r.height - receiver.y) / uy
                } else if uy < 0.0 {
                    -receiver.y / uy
                } else {
                    f64::INFINITY
                };
                tx.min(ty).max(0.0)
            }
        }
    }
}

fn half_plane_exit(p: Point2, ux: f64, uy: f64, normal: (f64, f64), offset: f64) -> f64 {
    let rate = normal.0 * ux + normal.1 * uy;
    if rate > 0.0 {
        (offset - normal.0 * p.x - normal.1 * p.y) / rate
    } else {
        f64::INFINITY
    }
}

fn fan_pieces(receiver: Point2, corners: &[Point2]) -> Vec<(f64, f64)> {
    let mut angles: Vec<f64> = corners
        .iter()
        .filter(|c| distance(**c, receiver) > 1e-14)
        .map(|c| {
            let a = (c.y - receiver.y).atan2(c.x - receiver.x);
            if a < 0.0 {
                a + TAU
            } else {
                a
            }
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let n = angles.len();
    (0..n)
        .map(|i| {
            let start = angles[i];
            let end = if i + 1 < n {
                angles[i + 1]
            } else {
                angles[0] + TAU
            };
            (start, end)
        })
        .filter(|(a, b)| b - a > 1e-15)
        .collect()
}

/// A point drawn uniformly from the domain.
///
/// Sectors use `r = R√u` with a uniform polar angle; rectangles use two
/// independent uniforms.
pub fn sample_uniform<R: Rng + ?Sized>(domain: &Domain, rng: &mut R) -> Point2 {
    match domain {
        Domain::Sector(s) => {
            let r = s.radius * rng.random::<f64>().sqrt();
            let phi = s.angle * rng.random::<f64>();
            let (sn, cs) = phi.sin_cos();
            Point2::new(r * cs, r * sn)
        }
        Domain::Rect(r) => Point2::new(
            r.width * rng.random::<f64>(),
            r.height * rng.random::<f64>(),
        ),
    }
}

/// A Poisson-distributed count with the given mean.
pub fn sample_poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(Error::param("mean", "must be finite and >= 0"));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let dist =
        Poisson::new(mean).map_err(|_| Error::param("mean", "too large for Poisson sampling"))?;
    Ok(dist.sample(rng) as u64)
}

/// Places a transmitter at exactly `link_distance` from `receiver` in a
/// uniformly random direction, redrawing directions that leave the domain.
///
/// After 1024 rejected directions, falls back to the direction with the
/// longest reach to the boundary.
pub fn place_at_distance<R: Rng + ?Sized>(
    domain: &Domain,
    receiver: Point2,
    link_distance: f64,
    rng: &mut R,
) -> Point2 {
    for _ in 0..1024 {
        let phi = TAU * rng.random::<f64>();
        let (sn, cs) = phi.sin_cos();
        let p = Point2::new(
            receiver.x + link_distance * cs,
            receiver.y + link_distance * sn,
        );
        if domain.contains(p) {
            return p;
        }
    }
    let best = (0..256)
        .map(|i| TAU * i as f64 / 256.0)
        .max_by(|a, b| {
            domain
                .exit_distance(receiver, *a)
                .total_cmp(&domain.exit_distance(receiver, *b))
        })
        .unwrap_or(0.0);
    let (sn, cs) = best.sin_cos();
    Point2::new(
        receiver.x + link_distance * cs,
        receiver.y + link_distance * sn,
    )
}

/// Seed and stream identifying a reproducible family of random sequences.
///
/// Each trial index selects a disjoint block of a ChaCha8 keystream, so trial
/// `i` draws the same numbers no matter which thread runs it or in what order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
}

impl RngState {
    /// Largest number of independent trials one state can address.
    pub const MAX_TRIALS: u64 = 1 << 32;

    pub const fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// The generator for trial `index`; `index` must be below [`Self::MAX_TRIALS`].
    pub fn trial_rng(&self, index: u64) -> ChaCha8Rng {
        assert!(index < Self::MAX_TRIALS, "trial index out of range");
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(u128::from(index) << 36);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use core::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn areas() {
        let disk = Domain::from(SectorDomain::new(3.0, TAU).unwrap());
        assert!((domain_area(&disk) - 9.0 * PI).abs() < 1e-12);
        let quarter = Domain::from(SectorDomain::new(3.0, FRAC_PI_2).unwrap());
        assert!((quarter.area() - 9.0 * PI / 4.0).abs() < 1e-12);
        assert_eq!(
            Domain::from(RectDomain::new(10.0, 10.0).unwrap()).area(),
            100.0
        );
    }

    #[test]
    fn area_scaling() {
        let a = SectorDomain::new(1.5, 1.0).unwrap().area();
        assert!((SectorDomain::new(3.0, 1.0).unwrap().area() - 4.0 * a).abs() < 1e-12);
        assert!((SectorDomain::new(1.5, 2.0).unwrap().area() - 2.0 * a).abs() < 1e-12);
    }

    #[test]
    fn invalid_domains() {
        assert!(SectorDomain::new(0.0, 1.0).is_err());
        assert!(SectorDomain::new(1.0, 0.0).is_err());
        assert!(SectorDomain::new(1.0, 7.0).is_err());
        assert!(RectDomain::new(-1.0, 1.0).is_err());
        assert!(RectDomain::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(distance(Point2::new(0.0, 0.0), Point2::new(3.0, 4.0)), 5.0);
        let p = Point2::new(1.7, -2.0);
        assert_eq!(distance(p, p), 0.0);
        assert!((distance(Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)) - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn sector_draws_stay_inside() {
        let dom = Domain::from(SectorDomain::new(3.0, PI).unwrap());
        let mut rng = RngState::new(7, 0).trial_rng(0);
        for _ in 0..10_000 {
            let p = sample_uniform(&dom, &mut rng);
            assert!(p.norm() <= 3.0);
            assert!(p.y >= 0.0);
            assert!(dom.contains(p));
        }
    }

    #[test]
    fn identical_state_reproduces_draws() {
        let dom = Domain::from(SectorDomain::new(3.0, TAU).unwrap());
        let st = RngState::new(99, 3);
        let draw = |i| {
            let mut rng = st.trial_rng(i);
            (0..50)
                .map(|_| sample_uniform(&dom, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
        let other = RngState::new(99, 4);
        let mut rng = other.trial_rng(5);
        assert_ne!(sample_uniform(&dom, &mut rng), draw(5)[0]);
    }

    #[test]
    fn poisson_zero_mean() {
        let mut rng = RngState::new(1, 1).trial_rng(0);
        for _ in 0..100 {
            assert_eq!(sample_poisson_count(0.0, &mut rng).unwrap(), 0);
        }
        assert!(sample_poisson_count(-1.0, &mut rng).is_err());
    }

    #[test]
    fn membership() {
        let half = Domain::from(SectorDomain::new(3.0, PI).unwrap());
        assert!(half.contains(Point2::new(-2.0, 0.0)));
        assert!(half.contains(Point2::new(0.0, 2.9)));
        assert!(!half.contains(Point2::new(0.0, -0.5)));
        assert!(!half.contains(Point2::new(0.0, 3.5)));
        let quarter = Domain::from(SectorDomain::new(3.0, FRAC_PI_2).unwrap());
        assert!(!quarter.contains(Point2::new(-0.1, 1.0)));
        assert!(quarter.contains(Point2::new(1.0, 0.0)));
        let sq = Domain::from(RectDomain::new(10.0, 10.0).unwrap());
        assert!(sq.contains(Point2::new(10.0, 0.0)));
        assert!(!sq.contains(Point2::new(10.1, 0.0)));
    }

    #[test]
    fn exit_distance_in_square() {
        let sq = Domain::from(RectDomain::new(10.0, 10.0).unwrap());
        let c = Point2::new(5.0, 5.0);
        assert!((sq.exit_distance(c, 0.0) - 5.0).abs() < 1e-12);
        assert!((sq.exit_distance(c, PI / 4.0) - 5.0 * SQRT_2).abs() < 1e-12);
        assert_eq!(sq.exit_distance(Point2::ORIGIN, PI), 0.0);
        let pieces = sq.polar_pieces(c).unwrap();
        assert_eq!(pieces.len(), 4);
        let total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
        assert!((total - TAU).abs() < 1e-12);
    }

    #[test]
    fn exit_distance_in_sector_off_apex() {
        let half = Domain::from(SectorDomain::new(3.0, PI).unwrap());
        let p = Point2::new(0.0, 1.0);
        assert!((half.exit_distance(p, PI / 2.0) - 2.0).abs() < 1e-12);
        assert!((half.exit_distance(p, -PI / 2.0) - 1.0).abs() < 1e-12);
        assert!((half.exit_distance(p, 0.0) - 8.0f64.sqrt()).abs() < 1e-12);
        let full = Domain::from(SectorDomain::new(3.0, TAU).unwrap());
        assert!(full.polar_pieces(Point2::new(1.0, 1.0)).is_err());
        assert_eq!(
            full.polar_pieces(Point2::ORIGIN).unwrap(),
            alloc::vec![(0.0, TAU)]
        );
    }

    #[test]
    fn placement_keeps_distance_and_membership() {
        let sq = Domain::from(RectDomain::new(10.0, 10.0).unwrap());
        let mut rng = RngState::new(3, 0).trial_rng(0);
        for corner in [
            Point2::new(0.1, 0.1),
            Point2::new(9.9, 0.1),
            Point2::new(5.0, 5.0),
        ] {
            for _ in 0..200 {
                let p = place_at_distance(&sq, corner, 1.0, &mut rng);
                assert!((distance(p, corner) - 1.0).abs() < 1e-12);
                assert!(sq.contains(p));
            }
        }
    }
}
