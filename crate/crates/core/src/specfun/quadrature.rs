//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerances and work limit for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::param("abs_tol", "must be positive and finite"));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::param("rel_tol", "must be positive and finite"));
        }
        if max_subdivisions == 0 {
            return Err(Error::param("max_subdivisions", "must be at least 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    fn check(&self) -> Result<()> {
        Self::new(self.abs_tol, self.rel_tol, self.max_subdivisions).map(|_| ())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

// Kronrod abscissae; odd indices are the 10-point Gauss abscissae.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_175_557_035,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for (j, &wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += wg * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;

    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::domain(
            "quadrature",
            "integrand is not finite on the interval",
        ));
    }
    Ok(Segment { a, b, value, error })
}

/// Adaptive quadrature of a fallible integrand over `[a, b]`.
///
/// The first error raised by the integrand aborts the integration.
pub fn try_integrate_finite<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.check()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate_finite", "bounds must be finite"));
    }
    if a > b {
        return Err(Error::domain("integrate_finite", "requires a <= b"));
    }
    if a == b {
        return Ok(0.0);
    }

    let first = kronrod21(&mut f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::with_capacity(64);
    heap.push(first);

    loop {
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            // Re-sum from the segments to shed accumulated update roundoff.
            return Ok(heap.iter().map(|s| s.value).sum());
        }
        if heap.len() >= spec.max_subdivisions {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = kronrod21(&mut f, worst.a, mid)?;
        let right = kronrod21(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    Err(Error::NonConvergence {
        subdivisions: heap.len(),
        estimate: total,
        error: total_err,
    })
}

/// Adaptive quadrature of `f` over `[a, b]`.
pub fn integrate_finite<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_finite(|x| Ok(f(x)), a, b, spec)
}

/// Integral over `[0, ∞)` of a fallible, eventually decaying integrand.
///
/// The range is mapped onto `[0, 1)` with `x = -ln(1 - u)`. When the
/// integrand drops below `abs_tol * 1e-3` at some `x_c` and the mapped
/// integrand `f(x)·eˣ` is non-increasing beyond it, the range is truncated at
/// `x_c`; the discarded tail is then bounded by `f(x_c)`.
pub fn try_integrate_semiinfinite<F>(mut f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.check()?;
    let cutoff = find_cutoff(&mut f, spec.abs_tol * 1e-3)?;
    let upper = match cutoff {
        Some(x) => -(-x).exp_m1(),
        None => 1.0,
    };
    try_integrate_finite(
        |u| {
            let one_minus = 1.0 - u;
            let x = -(-u).ln_1p();
            let fx = f(x)?;
            if fx == 0.0 {
                Ok(0.0)
            } else {
                Ok(fx / one_minus)
            }
        },
        0.0,
        upper,
        spec,
    )
}

/// Integral of `f` over `[0, ∞)`; see [`try_integrate_semiinfinite`].
pub fn integrate_semiinfinite<F>(mut f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semiinfinite(|x| Ok(f(x)), spec)
}

fn find_cutoff<F>(f: &mut F, floor: f64) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x = 1.0;
    while x <= 1024.0 {
        let fx = f(x)?;
        if fx.abs() <= floor {
            let mapped = |f: &mut F, t: f64| -> Result<f64> { Ok(f(t)?.abs() * t.exp()) };
            let h0 = fx.abs() * x.exp();
            let h1 = mapped(f, 1.5 * x)?;
            let h2 = mapped(f, 2.0 * x)?;
            if h1 <= h0 && h2 <= h1 {
                return Ok(Some(x));
            }
        }
        x *= 2.0;
    }
    Ok(None)
}
