//! Exponential integral E1 and its overflow-safe scaled form.

use crate::error::{check_positive, Result};
use crate::specfun::EULER_GAMMA;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 10_000;

/// `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
///
/// `Ei(-x) = -E1(x)`, which is the form that appears in the outage and
/// intercept expressions.
pub fn e1(x: f64) -> Result<f64> {
    check_positive("e1", x)?;
    if x < 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(e1_scaled_cf(x) * (-x).exp())
    }
}

/// `e^x · E1(x)`, evaluated without ever forming `e^x` for `x >= 1`.
///
/// Every `A·e^A·Ei(-A)` product is computed as `-A · e1_scaled(A)`.
pub fn e1_scaled(x: f64) -> Result<f64> {
    check_positive("e1_scaled", x)?;
    if x < 1.0 {
        Ok(x.exp() * e1_series(x))
    } else {
        Ok(e1_scaled_cf(x))
    }
}

/// `A·e^A·Ei(-A)`, the recurring `G` term. Lies in `(-1, 0)` for `A > 0`.
pub fn a_exp_ei(a: f64) -> Result<f64> {
    Ok(-a * e1_scaled(a)?)
}

// E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k·k!)
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= -x / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() < EPS * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// Modified Lentz evaluation of e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))
fn e1_scaled_cf(x: f64) -> f64 {
    let mut b = x + 1.0;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
