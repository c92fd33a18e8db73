//! The Gauss hypergeometric family ₂F₁(1, b; b+1; z) for z ≤ 0.
//!
//! For z ≤ 0 the Pfaff transformation gives
//! ₂F₁(1, b; b+1; z) = (1 − z)⁻¹ · ₂F₁(1, 1; b+1; w),  w = z/(z − 1) ∈ [0, 1),
//! whose Gauss series has positive terms. When w is so close to 1 that the
//! series would need too many terms, the Euler integral
//! ∫₀¹ du / (1 − z·u^{1/b}) is integrated adaptively instead.

use super::quadrature::{integrate_finite, QuadratureSpec};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

const MAX_SERIES_TERMS: f64 = 1.0e4;

// ln(1e17): terms of size w^n fall below 1e-17 after this many e-folds.
const SERIES_EFOLDS: f64 = 39.14;

/// ₂F₁(1, b; b+1; z) for `0 < b ≤ 1` and `z ≤ 0`.
///
/// The result lies in (0, 1] and is increasing in `z`.
pub fn hyp2f1_1b(b: f64, z: f64) -> Result<f64> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::domain("hyp2f1_1b", "b must lie in (0, 1]"));
    }
    if !(z <= 0.0) || !z.is_finite() {
        return Err(Error::domain("hyp2f1_1b", "z must be finite and <= 0"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }

    let v = 1.0 / (1.0 - z); // 1 - w
    let w = z / (z - 1.0);
    let needed = SERIES_EFOLDS / -(-v).ln_1p();
    if needed <= MAX_SERIES_TERMS {
        Ok(v * pfaff_series(b, w))
    } else {
        euler_integral(b, -z)
    }
}

/// Σₙ n!/(b+1)ₙ · wⁿ, i.e. ₂F₁(1, 1; b+1; w).
fn pfaff_series(b: f64, w: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut n = 0.0;
    loop {
        term *= (n + 1.0) / (n + 1.0 + b) * w;
        sum += term;
        if term <= 1e-17 * sum {
            return sum;
        }
        n += 1.0;
    }
}

/// ∫₀¹ du / (1 + x·u^{1/b}), split where x·u^{1/b} = 1.
fn euler_integral(b: f64, x: f64) -> Result<f64> {
    let p = 1.0 / b;
    let knee = (-b * x.ln()).exp().min(1.0);
    let spec = QuadratureSpec {
        abs_tol: 1e-17 * knee,
        rel_tol: 1e-13,
        max_subdivisions: 2000,
    };
    let integrand = |u: f64| 1.0 / (1.0 + x * u.powf(p));
    let head = integrate_finite(integrand, 0.0, knee, &spec)?;
    let tail = integrate_finite(integrand, knee, 1.0, &spec)?;
    Ok(head + tail)
}
