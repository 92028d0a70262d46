//! Closed-form outage probabilities, their high-SNR forms, floors and the
//! diversity order.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{reaches, Scenario, Triple};
use crate::specfun::{bessel_k0, chebyshev_nodes, e1_scaled, OrderCheck};

/// Relative change under doubled quadrature order above which a warning is logged.
pub const ORDER_WARN: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarOutage {
    pub a0: f64,
    pub b0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearOutage {
    pub a1: f64,
    pub b1: f64,
    pub gamma_cap: f64,
}

/// Per-node terms are `B2_i = b2_coef·(t_i+1)` and `C2_i = 2√(c2_coef·(t_i+1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdOutage {
    pub n: usize,
    pub a2: f64,
    pub a2_asy: f64,
    pub b2_coef: f64,
    pub c2_coef: f64,
}

impl BdOutage {
    pub fn b2(&self, t: f64) -> f64 {
        self.b2_coef * (t + 1.0)
    }

    pub fn c2(&self, t: f64) -> f64 {
        2.0 * (self.c2_coef * (t + 1.0)).sqrt()
    }
}

/// Outage parameters; `None` marks a signal whose outage is certain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOne {
    pub far: Option<FarOutage>,
    pub near: Option<NearOutage>,
    pub bd: Option<BdOutage>,
}

fn ensure_valid(s: &Scenario) -> Result<()> {
    let v = s.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(crate::error::ValidationErrors(v)))
    }
}

pub fn table1(s: &Scenario) -> Result<TableOne> {
    ensure_valid(s)?;
    Ok(table1_with_order(s, s.quadrature.chebyshev_order))
}

fn table1_with_order(s: &Scenario, n: usize) -> TableOne {
    let p = &s.params;
    let t = &s.thresholds;
    let pl = s.path_loss();
    let residual = p.theta + p.eta * (1.0 - p.theta);
    let beta2 = p.beta * p.beta;

    let far = (!reaches(t.g_f_sf, p.a_f / p.a_n)).then(|| {
        let margin = p.a_f - p.a_n * t.g_f_sf;
        FarOutage {
            a0: p.theta * margin * pl.sf / (beta2 * t.g_f_sf * residual * pl.sb * pl.bf),
            b0: t.g_f_sf / (p.theta * p.gamma * margin * pl.sf),
        }
    });

    let near = (!reaches(t.g_n_sf, p.a_f / p.a_n)).then(|| {
        let gamma_cap = (t.g_n_sf / (p.a_f - p.a_n * t.g_n_sf)).max(t.g_n_sn / p.a_n);
        NearOutage {
            a1: p.theta * pl.sn / (beta2 * gamma_cap * residual * pl.sb * pl.bn),
            b1: gamma_cap / (p.theta * p.gamma * pl.sn),
            gamma_cap,
        }
    });

    let sc_blocked = p.eta > 0.0 && reaches(t.g_n_sc, p.theta / (p.eta * (1.0 - p.theta)));
    let bd = near.filter(|_| !sc_blocked).map(|nr| {
        let headroom = p.theta - p.eta * (1.0 - p.theta) * t.g_n_sc;
        let a2_asy = PI * t.g_n_sc / (n as f64 * beta2 * headroom * pl.sb * pl.bn);
        BdOutage {
            n,
            a2: a2_asy * (-nr.b1).exp() / p.gamma,
            a2_asy,
            b2_coef: nr.gamma_cap * residual * t.g_n_sc / (2.0 * p.gamma * headroom * p.theta * pl.sn),
            c2_coef: t.g_n_sc / (2.0 * pl.sb * pl.bn * beta2 * p.gamma * headroom),
        }
    });

    TableOne { far, near, bd }
}

fn unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

// 1 + A e^{A-B} Ei(-A)
fn ei_term(a: f64, b: f64) -> Result<f64> {
    Ok(1.0 - a * e1_scaled(a)? * (-b).exp())
}

pub fn op_f(s: &Scenario) -> Result<f64> {
    match table1(s)?.far {
        None => Ok(1.0),
        Some(f) => Ok(unit(ei_term(f.a0, f.b0)?)),
    }
}

pub fn op_n(s: &Scenario) -> Result<f64> {
    match table1(s)?.near {
        None => Ok(1.0),
        Some(nr) => Ok(unit(ei_term(nr.a1, nr.b1)?)),
    }
}

pub fn op_c(s: &Scenario) -> Result<f64> {
    ensure_valid(s)?;
    op_c_with_order(s, s.quadrature.chebyshev_order)
}

fn op_c_with_order(s: &Scenario, n: usize) -> Result<f64> {
    let tab = table1_with_order(s, n);
    let (Some(nr), Some(bd)) = (tab.near, tab.bd) else {
        return Ok(1.0);
    };
    let mut sum = 0.0;
    for t in chebyshev_nodes(n) {
        sum += (1.0 - t * t).sqrt() * (-bd.b2(t)).exp() * bessel_k0(bd.c2(t))?;
    }
    Ok(unit(ei_term(nr.a1, nr.b1)? + bd.a2 * sum))
}

/// `op_c` at the configured Chebyshev order and at twice that order.
pub fn op_c_checked(s: &Scenario) -> Result<OrderCheck> {
    ensure_valid(s)?;
    let n = s.quadrature.chebyshev_order;
    let check = OrderCheck {
        value: op_c_with_order(s, n)?,
        doubled: op_c_with_order(s, 2 * n)?,
    };
    if check.delta() > ORDER_WARN {
        log::warn!(
            "outage of the backscatter device moved by {:.3e} when the Chebyshev order doubled from {n}",
            check.delta()
        );
    }
    Ok(check)
}

pub fn op_all(s: &Scenario) -> Result<Triple<f64>> {
    Ok(Triple {
        far: op_f(s)?,
        near: op_n(s)?,
        bd: op_c(s)?,
    })
}

// 1 + A e^A (1-B) Ei(-A)
fn ei_term_asy(a: f64, b: f64) -> Result<f64> {
    Ok(1.0 - a * e1_scaled(a)? * (1.0 - b))
}

/// High-SNR form of [`op_f`], clamped to `[0, 1]`.
pub fn op_f_asy(s: &Scenario) -> Result<f64> {
    match table1(s)?.far {
        None => Ok(1.0),
        Some(f) => Ok(unit(ei_term_asy(f.a0, f.b0)?)),
    }
}

pub fn op_n_asy(s: &Scenario) -> Result<f64> {
    match table1(s)?.near {
        None => Ok(1.0),
        Some(nr) => Ok(unit(ei_term_asy(nr.a1, nr.b1)?)),
    }
}

pub fn op_c_asy(s: &Scenario) -> Result<f64> {
    let tab = table1(s)?;
    let (Some(nr), Some(bd)) = (tab.near, tab.bd) else {
        return Ok(1.0);
    };
    let mut sum = 0.0;
    for t in chebyshev_nodes(bd.n) {
        sum += (1.0 - t * t).sqrt() * (1.0 - bd.b2(t)) * (0.5 * bd.c2(t)).ln();
    }
    let tail = bd.a2_asy * (1.0 - nr.b1) / s.params.gamma * sum;
    Ok(unit(ei_term_asy(nr.a1, nr.b1)? - tail))
}

pub fn op_all_asy(s: &Scenario) -> Result<Triple<f64>> {
    Ok(Triple {
        far: op_f_asy(s)?,
        near: op_n_asy(s)?,
        bd: op_c_asy(s)?,
    })
}

/// Outage floor of the far user as the SNR grows without bound.
pub fn op_floor_f(s: &Scenario) -> Result<f64> {
    match table1(s)?.far {
        None => Ok(1.0),
        Some(f) => ei_term(f.a0, 0.0),
    }
}

/// Common outage floor of the near user and the backscatter device.
pub fn op_floor_nc(s: &Scenario) -> Result<f64> {
    match table1(s)?.near {
        None => Ok(1.0),
        Some(nr) => ei_term(nr.a1, 0.0),
    }
}

/// Floors per signal. The device floor is 1 when its decoding is blocked outright.
pub fn op_floors(s: &Scenario) -> Result<Triple<f64>> {
    let tab = table1(s)?;
    let nc = op_floor_nc(s)?;
    Ok(Triple {
        far: op_floor_f(s)?,
        near: nc,
        bd: if tab.bd.is_some() { nc } else { 1.0 },
    })
}

/// Finite-difference estimate of `-d log p / d log γ` between two SNRs in dB.
pub fn diversity_order<F>(op: F, s: &Scenario, lo_db: f64, hi_db: f64) -> Result<f64>
where
    F: Fn(&Scenario) -> Result<f64>,
{
    if !(hi_db > lo_db) {
        return Err(Error::Domain {
            function: "diversity_order",
            arg: hi_db,
            expected: "hi_db > lo_db",
        });
    }
    let lo = op(&s.with_gamma_db(lo_db))?;
    let hi = op(&s.with_gamma_db(hi_db))?;
    for p in [lo, hi] {
        if p <= 0.0 || p >= 1.0 {
            return Err(Error::DegenerateBranch(
                "diversity order needs 0 < p < 1 at both endpoints",
            ));
        }
    }
    let decades = (hi_db - lo_db) / 10.0;
    Ok(-(hi.log10() - lo.log10()) / decades)
}
