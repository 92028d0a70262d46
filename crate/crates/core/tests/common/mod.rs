//! Reference computations that share no code with the library.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use ambc_pls_core::model::Scenario;

const MAX_LEVELS: usize = 12;

/// Tanh-sinh quadrature over `[a, b]`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let term = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        // distance to the nearer end, computed without cancellation
        let gap = half / (u.abs().exp() * u.cosh());
        let x = if t < 0.0 { a + gap } else { b - gap };
        if !(x > a && x < b) {
            return 0.0;
        }
        f(x) * half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2)
    };
    trapezoid_levels(term, 3.5, 3.5, tol)
}

/// Exp-sinh quadrature over `[a, ∞)`.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    let term = |t: f64| {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let v = f(a + e) * FRAC_PI_2 * t.cosh() * e;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    trapezoid_levels(term, 4.5, 3.5, tol)
}

// Trapezoid sums of `g` over `[-t_lo, t_hi]`, halving the step until two levels agree.
fn trapezoid_levels<G: Fn(f64) -> f64>(g: G, t_lo: f64, t_hi: f64, tol: f64) -> f64 {
    let mut h = 0.5;
    let in_range = |t: f64| t >= -t_lo && t <= t_hi;
    let mut sum = 0.0;
    let mut k = -((t_lo / h) as i64);
    while in_range(k as f64 * h) {
        sum += g(k as f64 * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..MAX_LEVELS {
        h *= 0.5;
        let mut k = -((t_lo / h) as i64);
        if k % 2 == 0 {
            k += 1;
        }
        while in_range(k as f64 * h) {
            sum += g(k as f64 * h);
            k += 2;
        }
        let est = sum * h;
        if (est - prev).abs() <= tol * est.abs().max(1e-300) {
            return est;
        }
        prev = est;
    }
    prev
}

/// `Σ (-1)^k k! / x^k`, stopped at the smallest term.
pub fn x_ex_e1_asymptotic(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term: f64 = 1.0;
    for k in 1..200 {
        let next = -term * k as f64 / x;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
    }
    sum
}

/// `-γ - ln x + Σ (-1)^{k+1} x^k / (k k!)`.
pub fn e1_series(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut fact = 1.0;
    for k in 1..60 {
        power *= x;
        fact *= k as f64;
        let term = power / (k as f64 * fact);
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    -EULER - x.ln() + sum
}

/// Probability that one Eve at radius `r` decodes the device signal,
/// by nested integration over the two exponential gains with the third
/// gain's tail in closed form.
pub fn q_v_brute(s: &Scenario, x: f64, r: f64) -> f64 {
    let p = &s.params;
    let g = &s.geometry;
    let lam_v = r.powf(-g.alpha);
    let lam_sb = g.d_sb.powf(-g.alpha);
    let margin = p.beta * p.beta * (p.theta - (1.0 - p.theta) * x) * p.gamma;
    // unit-mean gains u (Eve's direct link) and v (the BS-to-device link)
    let inner = |v: f64| {
        let h_sb = lam_sb * v;
        let given_u = |u: f64| {
            let need = x * ((1.0 - p.theta) * p.gamma * lam_v * u + 1.0) / (h_sb * margin);
            (-u - need / lam_v).exp()
        };
        (-v).exp() * exp_sinh(given_u, 0.0, 1e-10)
    };
    exp_sinh(inner, 0.0, 1e-9)
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
