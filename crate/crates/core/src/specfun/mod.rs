//! Special functions and quadrature rules used by every closed-form
//! outage and intercept expression.

#![allow(clippy::excessive_precision)]

mod bessel;
mod expint;
mod gamma;
pub mod quadrature;

pub use bessel::bessel_k0;
pub use expint::{a_exp_ei, e1, e1_scaled};
pub use gamma::{gamma, ln_gamma, upper_gamma};
pub use quadrature::{chebyshev_nodes, gauss_laguerre, laguerre_rule, LaguerreNode, OrderCheck, QuadratureSpec};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
