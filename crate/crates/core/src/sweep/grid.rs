//! Parameter sweeps over one or two axes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Scenario, Triple};
use crate::montecarlo::{estimate_ip, estimate_op, EstimateWithCI, SimConfig};
use crate::{intercept, outage};

/// A scenario parameter a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    GammaDb,
    Beta,
    AN,
    Theta,
    RP,
    LambdaE,
    Eta,
}

impl Axis {
    pub const ALL: [Axis; 7] = [
        Axis::GammaDb,
        Axis::Beta,
        Axis::AN,
        Axis::Theta,
        Axis::RP,
        Axis::LambdaE,
        Axis::Eta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::GammaDb => "gamma_db",
            Axis::Beta => "beta",
            Axis::AN => "a_N",
            Axis::Theta => "theta",
            Axis::RP => "r_p",
            Axis::LambdaE => "lambda_e",
            Axis::Eta => "eta",
        }
    }

    /// `s` with this parameter set to `v`. Setting `a_N` also sets `a_F = 1 - a_N`.
    pub fn apply(self, s: Scenario, v: f64) -> Scenario {
        let mut s = s;
        match self {
            Axis::GammaDb => return s.with_gamma_db(v),
            Axis::AN => return s.with_a_n(v),
            Axis::Beta => s.params.beta = v,
            Axis::Theta => s.params.theta = v,
            Axis::RP => s.geometry.r_p = v,
            Axis::LambdaE => s.eves.lambda_e = v,
            Axis::Eta => s.params.eta = v,
        }
        s
    }

    pub fn read(self, s: &Scenario) -> f64 {
        match self {
            Axis::GammaDb => s.gamma_db(),
            Axis::AN => s.params.a_n,
            Axis::Beta => s.params.beta,
            Axis::Theta => s.params.theta,
            Axis::RP => s.geometry.r_p,
            Axis::LambdaE => s.eves.lambda_e,
            Axis::Eta => s.params.eta,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let names: Vec<_> = Axis::ALL.iter().map(|a| a.name()).collect();
            Error::Parse(format!("unknown axis `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    OpF,
    OpN,
    OpC,
    IpF,
    IpN,
    IpC,
    FloorF,
    FloorN,
    FloorC,
}

impl Metric {
    pub const PROBABILITIES: [Metric; 6] = [
        Metric::OpF,
        Metric::OpN,
        Metric::OpC,
        Metric::IpF,
        Metric::IpN,
        Metric::IpC,
    ];
    pub const FLOORS: [Metric; 3] = [Metric::FloorF, Metric::FloorN, Metric::FloorC];

    pub fn name(self) -> &'static str {
        match self {
            Metric::OpF => "op_f",
            Metric::OpN => "op_n",
            Metric::OpC => "op_c",
            Metric::IpF => "ip_f",
            Metric::IpN => "ip_n",
            Metric::IpC => "ip_c",
            Metric::FloorF => "op_floor_f",
            Metric::FloorN => "op_floor_n",
            Metric::FloorC => "op_floor_c",
        }
    }

    fn is_outage(self) -> bool {
        matches!(self, Metric::OpF | Metric::OpN | Metric::OpC)
    }

    fn is_intercept(self) -> bool {
        matches!(self, Metric::IpF | Metric::IpN | Metric::IpC)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Metric {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::PROBABILITIES
            .into_iter()
            .chain(Metric::FLOORS)
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown metric `{s}`")))
    }
}

/// What to compute at every sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSelection {
    pub metrics: Vec<Metric>,
    pub asymptotics: bool,
    pub mc: bool,
}

impl Default for MetricSelection {
    fn default() -> Self {
        MetricSelection {
            metrics: Metric::PROBABILITIES.to_vec(),
            asymptotics: true,
            mc: false,
        }
    }
}

impl FromStr for MetricSelection {
    type Err = Error;

    /// Comma-separated tokens: metric names, `op`, `ip`, `floors`,
    /// `asymptotics`, `mc`, or `all` (six probabilities with asymptotics).
    fn from_str(s: &str) -> Result<Self> {
        let mut sel = MetricSelection {
            metrics: Vec::new(),
            asymptotics: false,
            mc: false,
        };
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "all" => {
                    sel.metrics.extend(Metric::PROBABILITIES);
                    sel.asymptotics = true;
                }
                "op" => sel.metrics.extend(&Metric::PROBABILITIES[..3]),
                "ip" => sel.metrics.extend(&Metric::PROBABILITIES[3..]),
                "floors" => sel.metrics.extend(Metric::FLOORS),
                "asymptotics" => sel.asymptotics = true,
                "mc" => sel.mc = true,
                other => sel.metrics.push(other.parse()?),
            }
        }
        if sel.metrics.is_empty() {
            sel.metrics.extend(Metric::PROBABILITIES);
        }
        sel.metrics.sort();
        sel.metrics.dedup();
        Ok(sel)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub secondary: Option<(Axis, Vec<f64>)>,
    pub selection: MetricSelection,
}

impl SweepSpec {
    /// SNR from 0 to 40 dB in 5 dB steps.
    pub fn default_snr() -> Self {
        SweepSpec {
            axis: Axis::GammaDb,
            values: (0..=8).map(|k| 5.0 * k as f64).collect(),
            secondary: None,
            selection: MetricSelection::default(),
        }
    }

    fn check(&self) -> Result<()> {
        let empty = self.values.is_empty() || self.secondary.as_ref().is_some_and(|(_, v)| v.is_empty());
        if empty {
            return Err(Error::Parse("sweep axes need at least one value".into()));
        }
        if self.secondary.as_ref().is_some_and(|(a, _)| *a == self.axis) {
            return Err(Error::Parse("the two sweep axes must differ".into()));
        }
        Ok(())
    }
}

/// One metric at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario_id: String,
    pub axis: String,
    pub axis_value: f64,
    pub axis2: Option<String>,
    pub axis2_value: Option<f64>,
    pub metric: String,
    pub analytic: Option<f64>,
    pub asymptotic: Option<f64>,
    pub mc: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub trials: Option<u64>,
    /// Why this point produced no values; JSON output only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Where a scenario sits in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PointLabel {
    pub scenario_id: String,
    pub axis: Axis,
    pub axis_value: f64,
    pub axis2: Option<(Axis, f64)>,
}

impl PointLabel {
    /// A stand-alone scenario, labelled by its SNR.
    pub fn single(id: impl Into<String>, s: &Scenario) -> Self {
        PointLabel {
            scenario_id: id.into(),
            axis: Axis::GammaDb,
            axis_value: s.gamma_db(),
            axis2: None,
        }
    }
}

/// Which value columns to fill.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub analytic: bool,
    pub asymptotics: bool,
    pub mc: Option<SimConfig>,
}

fn pick(t: &Triple<f64>, m: Metric) -> f64 {
    match m {
        Metric::OpF | Metric::IpF | Metric::FloorF => t.far,
        Metric::OpN | Metric::IpN | Metric::FloorN => t.near,
        Metric::OpC | Metric::IpC | Metric::FloorC => t.bd,
    }
}

fn pick_est(t: &Triple<EstimateWithCI>, m: Metric) -> EstimateWithCI {
    match m {
        Metric::OpF | Metric::IpF | Metric::FloorF => t.far,
        Metric::OpN | Metric::IpN | Metric::FloorN => t.near,
        Metric::OpC | Metric::IpC | Metric::FloorC => t.bd,
    }
}

#[derive(Default)]
struct PointValues {
    op: Option<Triple<f64>>,
    op_asy: Option<Triple<f64>>,
    ip: Option<Triple<f64>>,
    ip_asy: Option<Triple<f64>>,
    floors: Option<Triple<f64>>,
    op_mc: Option<Triple<EstimateWithCI>>,
    ip_mc: Option<Triple<EstimateWithCI>>,
}

fn evaluate(s: &Scenario, metrics: &[Metric], eval: &Evaluation) -> Result<PointValues> {
    let s = s.validate()?;
    let any_op = metrics.iter().any(|m| m.is_outage());
    let any_ip = metrics.iter().any(|m| m.is_intercept());
    let any_floor = metrics.iter().any(|m| Metric::FLOORS.contains(m));
    let mut v = PointValues::default();
    if eval.analytic && any_op {
        v.op = Some(outage::op_all(&s)?);
        if eval.asymptotics {
            v.op_asy = Some(outage::op_all_asy(&s)?);
        }
    }
    if eval.analytic && any_ip {
        v.ip = Some(intercept::ip_all(&s)?);
        if eval.asymptotics {
            v.ip_asy = Some(intercept::ip_all_asy(&s)?);
        }
    }
    if eval.analytic && any_floor {
        v.floors = Some(outage::op_floors(&s)?);
    }
    if let Some(sim) = &eval.mc {
        if any_op {
            v.op_mc = Some(estimate_op(&s, sim)?);
        }
        if any_ip {
            v.ip_mc = Some(estimate_ip(&s, sim)?);
        }
    }
    Ok(v)
}

/// Rows for every selected metric at one scenario. Failures leave the value
/// columns empty and fill `error`.
pub fn scenario_rows(s: &Scenario, metrics: &[Metric], eval: &Evaluation, label: &PointLabel) -> Vec<ResultRow> {
    let values = evaluate(s, metrics, eval);
    if let Err(e) = &values {
        log::warn!("{}: {e}", label.scenario_id);
    }
    metrics
        .iter()
        .map(|&m| {
            let mut row = ResultRow {
                scenario_id: label.scenario_id.clone(),
                axis: label.axis.name().to_string(),
                axis_value: label.axis_value,
                axis2: label.axis2.map(|(a, _)| a.name().to_string()),
                axis2_value: label.axis2.map(|(_, v)| v),
                metric: m.name().to_string(),
                analytic: None,
                asymptotic: None,
                mc: None,
                ci_lo: None,
                ci_hi: None,
                trials: None,
                error: None,
            };
            let v = match &values {
                Ok(v) => v,
                Err(e) => {
                    row.error = Some(e.to_string());
                    return row;
                }
            };
            let (exact, asy, mc) = if m.is_outage() {
                (&v.op, &v.op_asy, &v.op_mc)
            } else if m.is_intercept() {
                (&v.ip, &v.ip_asy, &v.ip_mc)
            } else {
                (&v.floors, &None, &None)
            };
            row.analytic = exact.as_ref().map(|t| pick(t, m));
            row.asymptotic = asy.as_ref().map(|t| pick(t, m));
            if let Some(e) = mc.as_ref().map(|t| pick_est(t, m)) {
                row.mc = Some(e.p_hat);
                row.ci_lo = Some(e.ci_lo);
                row.ci_hi = Some(e.ci_hi);
                row.trials = Some(e.trials);
            }
            row
        })
        .collect()
}

/// Every (value × secondary value × metric) row, in that nesting order.
pub fn run_sweep(s: &Scenario, spec: &SweepSpec, sim: Option<&SimConfig>) -> Result<Vec<ResultRow>> {
    spec.check()?;
    let eval = Evaluation {
        analytic: true,
        asymptotics: spec.selection.asymptotics,
        mc: if spec.selection.mc { sim.copied() } else { None },
    };
    if spec.selection.mc && sim.is_none() {
        return Err(Error::Parse("Monte Carlo requested without a simulation config".into()));
    }
    let inner: Vec<Option<(Axis, f64)>> = match &spec.secondary {
        None => vec![None],
        Some((axis, values)) => values.iter().map(|&v| Some((*axis, v))).collect(),
    };
    let mut rows = Vec::new();
    let mut index = 0;
    for &v in &spec.values {
        for &second in &inner {
            let mut point = spec.axis.apply(*s, v);
            if let Some((axis, v2)) = second {
                point = axis.apply(point, v2);
            }
            let label = PointLabel {
                scenario_id: format!("p{index:04}"),
                axis: spec.axis,
                axis_value: v,
                axis2: second,
            };
            rows.extend(scenario_rows(&point, &spec.selection.metrics, &eval, &label));
            index += 1;
        }
    }
    Ok(rows)
}

/// Parses `a,b,c` or an inclusive range `start:stop:step`.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::Parse(format!("bad value list `{text}`: {what}"));
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| bad(&format!("`{t}` is not a number")))
    };
    if text.contains(':') {
        let parts: Vec<_> = text.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(bad("ranges are start:stop:step"));
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(step > 0.0) || !(stop >= start) {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|k| start + k as f64 * step).collect());
    }
    let values = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(num)
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(bad("empty"));
    }
    Ok(values)
}
