//! Analytic-versus-simulation comparison.

use serde::Serialize;

use super::grid::Metric;
use crate::error::Result;
use crate::model::{Scenario, Triple};
use crate::montecarlo::{estimate_ip, estimate_op, EstimateWithCI, SimConfig};
use crate::{intercept, outage};

/// Allowed gap between an analytic value and its MC estimate:
/// `max(se_multiple * SE, relative * p_hat + absolute)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Allowance {
    pub se_multiple: f64,
    pub relative: f64,
    pub absolute: f64,
}

impl Allowance {
    pub fn width(&self, est: &EstimateWithCI) -> f64 {
        (self.se_multiple * est.wilson_se()).max(self.relative * est.p_hat + self.absolute)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceProfile {
    pub outage: Allowance,
    pub intercept: Allowance,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            outage: Allowance {
                se_multiple: 3.0,
                relative: 0.0,
                absolute: 1e-4,
            },
            intercept: Allowance {
                se_multiple: 3.0,
                relative: 0.02,
                absolute: 1e-4,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricVerdict {
    pub metric: Metric,
    pub analytic: f64,
    pub mc: EstimateWithCI,
    pub allowance: f64,
    /// `|analytic - mc| / allowance`; at most 1 when the metric passes.
    pub deviation: f64,
    pub pass: bool,
}

pub fn compare(metric: Metric, analytic: f64, mc: &EstimateWithCI, allowance: &Allowance) -> MetricVerdict {
    let width = allowance.width(mc);
    let gap = (analytic - mc.p_hat).abs();
    let deviation = if width > 0.0 {
        gap / width
    } else if gap == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    MetricVerdict {
        metric,
        analytic,
        mc: *mc,
        allowance: width,
        deviation,
        pass: deviation <= 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub verdicts: Vec<MetricVerdict>,
    pub worst: f64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &MetricVerdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }
}

/// Judges given analytic values against fresh MC estimates.
pub fn validate_values(
    s: &Scenario,
    op: &Triple<f64>,
    ip: &Triple<f64>,
    sim: &SimConfig,
    profile: &ToleranceProfile,
) -> Result<ValidationReport> {
    let s = s.validate()?;
    let op_mc = estimate_op(&s, sim)?;
    let ip_mc = estimate_ip(&s, sim)?;
    let mut verdicts = Vec::with_capacity(6);
    let ops = op.into_array().into_iter().zip(op_mc.into_array());
    for ((a, m), metric) in ops.zip(&Metric::PROBABILITIES[..3]) {
        verdicts.push(compare(*metric, a, &m, &profile.outage));
    }
    let ips = ip.into_array().into_iter().zip(ip_mc.into_array());
    for ((a, m), metric) in ips.zip(&Metric::PROBABILITIES[3..]) {
        verdicts.push(compare(*metric, a, &m, &profile.intercept));
    }
    let worst = verdicts.iter().map(|v| v.deviation).fold(0.0, f64::max);
    let passed = verdicts.iter().all(|v| v.pass);
    Ok(ValidationReport {
        verdicts,
        worst,
        passed,
    })
}

/// Runs all six analytic metrics and their MC counterparts at `s`.
pub fn validate_run(s: &Scenario, sim: &SimConfig, profile: &ToleranceProfile) -> Result<ValidationReport> {
    let op = outage::op_all(s)?;
    let ip = intercept::ip_all(s)?;
    validate_values(s, &op, &ip, sim, profile)
}
