//! Closed-form intercept probabilities against the strongest eavesdropper
//! of a Poisson field outside the exclusion disc.

use std::f64::consts::PI;

use crate::error::{Error, Result, ValidationErrors};
use crate::model::{reaches, Scenario, Triple};
use crate::specfun::quadrature::{integrate, integrate_to_infinity};
use crate::specfun::{bessel_k0, chebyshev_nodes, e1_scaled, gamma, laguerre_rule, upper_gamma, OrderCheck};

pub const ORDER_WARN: f64 = 1e-5;

// Bounds on round-off before a tail probability is clamped to [0, 1].
const Q_SLACK: f64 = 1e-9;

const NEGLIGIBLE_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserIntercept {
    pub a: f64,
    /// `A e^A Ei(-A)`, always in `(-1, 0)`.
    pub g: f64,
    pub m: f64,
}

/// Threshold-dependent constants for the device signal. Radius-dependent
/// terms are available through the methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdIntercept {
    pub threshold: f64,
    pub delta: f64,
    pub a_e2: f64,
    pub g_e2: f64,
    alpha: f64,
    theta: f64,
    gamma: f64,
    lambda_sb: f64,
}

impl BdIntercept {
    fn new(s: &Scenario, x: f64) -> Result<Self> {
        let p = &s.params;
        let delta = p.beta * p.beta * (p.theta - (1.0 - p.theta) * x);
        if reaches(x, p.theta / (1.0 - p.theta)) || !(delta > 0.0) {
            return Err(Error::DegenerateBranch(
                "device threshold at or above the eavesdropper SINR ceiling theta/(1-theta)",
            ));
        }
        let lambda_sb = s.path_loss().sb;
        let a_e2 = x * (1.0 - p.theta) / (lambda_sb * delta);
        Ok(BdIntercept {
            threshold: x,
            delta,
            a_e2,
            g_e2: -a_e2 * e1_scaled(a_e2)?,
            alpha: s.geometry.alpha,
            theta: p.theta,
            gamma: p.gamma,
            lambda_sb,
        })
    }

    /// `b(r) = x r^α / (γ δ λ_SB)`, the noise-driven part of the tail.
    pub fn noise_term(&self, r: f64) -> f64 {
        self.threshold * r.powf(self.alpha) / (self.gamma * self.delta * self.lambda_sb)
    }

    pub fn b_e2(&self, r: f64) -> f64 {
        r.powf(self.alpha) / ((1.0 - self.theta) * self.gamma)
    }

    pub fn a_e3(&self, r: f64, n: usize) -> f64 {
        PI * self.noise_term(r) / n as f64
    }

    pub fn b_e3(&self, r: f64, t: f64) -> f64 {
        0.5 * (t - 1.0) * self.b_e2(r)
    }

    pub fn c_e3(&self, r: f64, t: f64) -> f64 {
        2.0 * (0.5 * (t + 1.0) * self.noise_term(r)).sqrt()
    }
}

/// Intercept parameters; `None` marks a signal no eavesdropper can ever decode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableTwo {
    pub far: Option<UserIntercept>,
    pub near: Option<UserIntercept>,
    pub bd: Option<BdIntercept>,
}

fn ensure_valid(s: &Scenario) -> Result<()> {
    let v = s.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(ValidationErrors(v)))
    }
}

fn user(margin: f64, x: f64, s: &Scenario) -> Result<UserIntercept> {
    let p = &s.params;
    let a = margin / (s.path_loss().sb * x * p.beta * p.beta);
    Ok(UserIntercept {
        a,
        g: -a * e1_scaled(a)?,
        m: x / (margin * p.gamma),
    })
}

pub fn table2(s: &Scenario) -> Result<TableTwo> {
    ensure_valid(s)?;
    let p = &s.params;
    let t = &s.thresholds;

    let far = if !reaches(t.g_e_sf, p.theta * p.a_f / (p.theta * p.a_n + 1.0 - p.theta)) {
        let margin = p.theta * p.a_f - p.theta * p.a_n * t.g_e_sf - (1.0 - p.theta) * t.g_e_sf;
        Some(user(margin, t.g_e_sf, s)?)
    } else {
        None
    };
    let near = if !reaches(t.g_e_sn, p.theta * p.a_n / (1.0 - p.theta)) {
        let margin = p.theta * p.a_n - (1.0 - p.theta) * t.g_e_sn;
        Some(user(margin, t.g_e_sn, s)?)
    } else {
        None
    };
    let bd = if !reaches(t.g_e_sc, p.theta / (1.0 - p.theta)) {
        BdIntercept::new(s, t.g_e_sc).ok()
    } else {
        None
    };
    Ok(TableTwo { far, near, bd })
}

/// `∫_{r_p}^∞ e^{-M r^α} r dr = Γ(2/α, M r_p^α) / (α M^{2/α})`.
pub fn annulus_integral(m: f64, r_p: f64, alpha: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::Domain {
            function: "annulus_integral",
            arg: m,
            expected: "M > 0",
        });
    }
    if !(alpha >= 2.0) {
        return Err(Error::Domain {
            function: "annulus_integral",
            arg: alpha,
            expected: "alpha >= 2",
        });
    }
    let s = 2.0 / alpha;
    Ok(upper_gamma(s, m * r_p.powf(alpha))? / (alpha * m.powf(s)))
}

// 1 - exp(exponent) with the exponent checked to be non-positive.
fn from_exponent(exponent: f64) -> f64 {
    debug_assert!(exponent <= 0.0, "PGFL exponent {exponent} must be non-positive");
    let p = -exponent.min(0.0).exp_m1();
    if p > 0.0 {
        p.min(1.0)
    } else {
        0.0
    }
}

fn user_ip(u: Option<UserIntercept>, s: &Scenario) -> Result<f64> {
    let Some(u) = u else { return Ok(0.0) };
    if s.eves.lambda_e == 0.0 {
        return Ok(0.0);
    }
    let g = &s.geometry;
    let exponent = s.eves.lambda_e * u.g * 2.0 * PI * annulus_integral(u.m, g.r_p, g.alpha)?;
    Ok(from_exponent(exponent))
}

pub fn ip_f(s: &Scenario) -> Result<f64> {
    user_ip(table2(s)?.far, s)
}

pub fn ip_n(s: &Scenario) -> Result<f64> {
    user_ip(table2(s)?.near, s)
}

/// `Pr(γ_V^{s_C} > x)` for one Eve at distance `r` from the base station.
///
/// Evaluated as `∫_0^∞ exp(-t - b/t) · t/(t + A_e2) dt`, which has no
/// cancellation at large `r`.
pub fn q_v(x: f64, r: f64, s: &Scenario) -> Result<f64> {
    ensure_valid(s)?;
    let bd = BdIntercept::new(s, x)?;
    q_v_stable(&bd, r)
}

fn q_v_stable(bd: &BdIntercept, r: f64) -> Result<f64> {
    let b = bd.noise_term(r);
    let a = bd.a_e2;
    let root = b.sqrt();
    // bounded by 2√b K1(2√b) ~ √π b^{1/4} e^{-2√b}, far below f64 resolution
    if 2.0 * root > NEGLIGIBLE_EXPONENT {
        return Ok(0.0);
    }
    // exp(-2√b) is the peak value of exp(-t - b/t); factor it out
    let f = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        (-(t + b / t - 2.0 * root)).exp() * t / (t + a)
    };
    let split = root.max(1.0);
    let head = integrate(f, 0.0, split, 1e-15, 1e-12);
    let tail = integrate_to_infinity(f, split, 1e-15, 1e-12);
    if !head.converged || !tail.converged {
        return Err(Error::Convergence {
            routine: "q_v",
            index: 0,
        });
    }
    let q = (head.value + tail.value) * (-2.0 * root).exp();
    if !(-Q_SLACK..=1.0 + Q_SLACK).contains(&q) {
        return Err(Error::Convergence {
            routine: "q_v range",
            index: 0,
        });
    }
    Ok(q.clamp(0.0, 1.0))
}

/// The split `I_VF - I_VL` form with an `n`-node Chebyshev rule.
///
/// Needs `e^{B_e2}`, so it loses all precision once `r^α / ((1-θ)γ)` grows
/// beyond a few units. Kept as a cross-check of [`q_v`] at small radii.
pub fn q_v_split(x: f64, r: f64, s: &Scenario, n: usize) -> Result<f64> {
    ensure_valid(s)?;
    let bd = BdIntercept::new(s, x)?;
    let mut sum = 0.0;
    for t in chebyshev_nodes(n) {
        sum += (1.0 - t * t).sqrt() * (-(-bd.b_e3(r, t)).exp_m1()) * bessel_k0(bd.c_e3(r, t))?;
    }
    Ok(1.0 + bd.g_e2 * bd.b_e2(r).exp() - bd.a_e3(r, n) * sum)
}

/// Laguerre scale for the radial integral, matched to the `exp(-2√b(r))` decay of `q_v`.
fn radial_scale(bd: &BdIntercept, r_p: f64) -> f64 {
    let alpha = bd.alpha;
    let c = bd.noise_term(1.0);
    let global = 0.5 * c.powf(-1.0 / alpha);
    let local = r_p / (alpha * bd.noise_term(r_p).sqrt());
    global.min(local)
}

/// `∫_{r_p}^∞ q_v(r) r dr` by scaled Gauss-Laguerre with `order` nodes.
fn radial_integral(bd: &BdIntercept, r_p: f64, order: usize) -> Result<f64> {
    let scale = radial_scale(bd, r_p);
    let mut acc = 0.0;
    for node in laguerre_rule(order)?.iter() {
        let r = r_p + scale * node.root;
        acc += node.scaled_weight * q_v_stable(bd, r)? * r;
    }
    Ok(scale * acc)
}

fn ip_c_with_order(s: &Scenario, order: usize) -> Result<f64> {
    let Some(bd) = table2(s)?.bd else {
        return Ok(0.0);
    };
    if s.eves.lambda_e == 0.0 {
        return Ok(0.0);
    }
    let integral = radial_integral(&bd, s.geometry.r_p, order)?;
    Ok(from_exponent(-2.0 * PI * s.eves.lambda_e * integral))
}

pub fn ip_c(s: &Scenario) -> Result<f64> {
    ip_c_with_order(s, s.quadrature.laguerre_order)
}

/// `ip_c` at the configured Laguerre order and at twice that order.
pub fn ip_c_checked(s: &Scenario) -> Result<OrderCheck> {
    let n = s.quadrature.laguerre_order;
    let check = OrderCheck {
        value: ip_c_with_order(s, n)?,
        doubled: ip_c_with_order(s, 2 * n)?,
    };
    if check.delta() > ORDER_WARN {
        log::warn!(
            "intercept of the backscatter device moved by {:.3e} when the Laguerre order doubled from {n}",
            check.delta()
        );
    }
    Ok(check)
}

pub fn ip_all(s: &Scenario) -> Result<Triple<f64>> {
    Ok(Triple {
        far: ip_f(s)?,
        near: ip_n(s)?,
        bd: ip_c(s)?,
    })
}

/// `Γ(s) - Σ_n (-1)^n z^{s+n} / (n! (s+n))`, truncated once a term drops below 1e-12.
///
/// For `z > 1` the same lower-gamma sum is taken in its non-alternating
/// form `z^s e^{-z} Σ z^n / (s(s+1)…(s+n))`.
fn upper_gamma_series(s: f64, z: f64) -> Result<f64> {
    const TERM_TOL: f64 = 1e-12;
    const MAX_TERMS: usize = 10_000;
    let lower = if z <= 1.0 {
        let mut sum = 0.0;
        let mut power = z.powf(s);
        let mut fact = 1.0;
        let mut n = 0;
        loop {
            let term = power / (fact * (s + n as f64));
            sum += if n % 2 == 0 { term } else { -term };
            if term.abs() < TERM_TOL {
                break sum;
            }
            n += 1;
            if n > MAX_TERMS {
                return Err(Error::Convergence {
                    routine: "upper_gamma_series",
                    index: n,
                });
            }
            power *= z;
            fact *= n as f64;
        }
    } else {
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut k = 0;
        while term > TERM_TOL * sum {
            k += 1;
            if k > MAX_TERMS {
                return Err(Error::Convergence {
                    routine: "upper_gamma_series",
                    index: k,
                });
            }
            term *= z / (s + k as f64);
            sum += term;
        }
        sum * (s * z.ln() - z).exp()
    };
    Ok((gamma(s)? - lower).max(0.0))
}

fn user_ip_asy(u: Option<UserIntercept>, s: &Scenario) -> Result<f64> {
    let Some(u) = u else { return Ok(0.0) };
    if s.eves.lambda_e == 0.0 {
        return Ok(0.0);
    }
    let g = &s.geometry;
    let shape = 2.0 / g.alpha;
    let kernel = upper_gamma_series(shape, u.m * g.r_p.powf(g.alpha))? / (g.alpha * u.m.powf(shape));
    Ok(from_exponent(s.eves.lambda_e * u.g * 2.0 * PI * kernel))
}

pub fn ip_f_asy(s: &Scenario) -> Result<f64> {
    user_ip_asy(table2(s)?.far, s)
}

pub fn ip_n_asy(s: &Scenario) -> Result<f64> {
    user_ip_asy(table2(s)?.near, s)
}

/// High-SNR device intercept built from first-order expansions of the
/// split form on the unit-scale Laguerre rule. Each node's tail
/// probability is clamped to `[0, 1]`.
pub fn ip_c_asy(s: &Scenario) -> Result<f64> {
    let Some(bd) = table2(s)?.bd else {
        return Ok(0.0);
    };
    if s.eves.lambda_e == 0.0 {
        return Ok(0.0);
    }
    let n = s.quadrature.chebyshev_order;
    let nodes = chebyshev_nodes(n);
    let r_p = s.geometry.r_p;
    let mut acc = 0.0;
    for node in laguerre_rule(s.quadrature.laguerre_order)?.iter() {
        let r = node.root + r_p;
        let mut inner = 0.0;
        for &t in &nodes {
            inner += (1.0 - t * t).sqrt() * (0.5 * bd.c_e3(r, t)).ln() * bd.b_e3(r, t);
        }
        let q = 1.0 + bd.g_e2 * (1.0 + bd.b_e2(r)) + bd.a_e3(r, n) * inner;
        acc += node.scaled_weight * q.clamp(0.0, 1.0) * r;
    }
    Ok(from_exponent(-2.0 * PI * s.eves.lambda_e * acc))
}

pub fn ip_all_asy(s: &Scenario) -> Result<Triple<f64>> {
    Ok(Triple {
        far: ip_f_asy(s)?,
        near: ip_n_asy(s)?,
        bd: ip_c_asy(s)?,
    })
}
