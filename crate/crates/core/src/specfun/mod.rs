//! Special functions and quadrature.
//!
//! Everything here is a pure function of its inputs.

mod erf;
mod hyp2f1;
mod quadrature;

pub use erf::{erfc, erfcx};
pub use hyp2f1::hyp2f1_1b;
pub use quadrature::{
    integrate_finite, integrate_semiinfinite, try_integrate_finite, try_integrate_semiinfinite,
    QuadratureSpec,
};
