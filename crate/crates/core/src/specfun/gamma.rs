//! Complete and upper incomplete gamma functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(s)` for `s > 0`.
pub fn ln_gamma(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain {
            function: "ln_gamma",
            arg: s,
            expected: "s > 0",
        });
    }
    Ok(ln_gamma_unchecked(s))
}

/// `Γ(s)` for `s > 0`.
pub fn gamma(s: f64) -> Result<f64> {
    Ok(ln_gamma(s)?.exp())
}

fn ln_gamma_unchecked(s: f64) -> f64 {
    if s < 0.5 {
        // reflection
        return (PI / (PI * s).sin()).ln() - ln_gamma_unchecked(1.0 - s);
    }
    let z = s - 1.0;
    let mut acc = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Upper incomplete gamma `Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt` for `s > 0`, `x >= 0`.
pub fn upper_gamma(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain {
            function: "upper_gamma",
            arg: s,
            expected: "s > 0",
        });
    }
    if !(x >= 0.0) {
        return Err(Error::Domain {
            function: "upper_gamma",
            arg: x,
            expected: "x >= 0",
        });
    }
    if x == 0.0 {
        return gamma(s);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let log_prefactor = -x + s * x.ln();
    if x < s + 1.0 {
        let lower = lower_series(s, x)? * log_prefactor.exp();
        Ok(gamma(s)? - lower)
    } else {
        Ok(upper_fraction(s, x)? * log_prefactor.exp())
    }
}

// γ(s,x)·e^x·x^{-s} = Σ x^n / (s(s+1)...(s+n))
fn lower_series(s: f64, x: f64) -> Result<f64> {
    let mut ap = s;
    let mut del = 1.0 / s;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        routine: "upper_gamma series",
        index: MAX_ITER,
    })
}

// Lentz evaluation of Γ(s,x)·e^x·x^{-s}
fn upper_fraction(s: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        let an = -fi * (fi - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::Convergence {
        routine: "upper_gamma continued fraction",
        index: MAX_ITER,
    })
}
