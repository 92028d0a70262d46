//! Modified Bessel function of the second kind, order zero.

use std::f64::consts::PI;

use crate::error::{check_positive, Result};
use crate::specfun::EULER_GAMMA;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
const SERIES_LIMIT: f64 = 2.0;

/// `K₀(x)` for `x > 0`. Underflows to exactly zero for `x ≳ 745`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    check_positive("bessel_k0", x)?;
    if x <= SERIES_LIMIT {
        Ok(k0_series(x))
    } else {
        Ok(k0_steed(x))
    }
}

// K0(x) = -(ln(x/2) + γ) I0(x) + Σ_{k≥1} (x²/4)^k / (k!)² · H_k
fn k0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < EPS * tail && term < EPS * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

// Steed's continued fraction (CF2) specialised to order zero.
fn k0_steed(x: f64) -> f64 {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() / s
}
