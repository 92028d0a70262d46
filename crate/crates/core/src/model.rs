//! Scenario types, parameter validation and large-scale fading.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationErrors, Violation};
use crate::specfun::QuadratureSpec;

/// Transmit-side parameters. Noise power is normalised to one, so `gamma = P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Transmit SNR, linear.
    pub gamma: f64,
    pub a_n: f64,
    pub a_f: f64,
    /// Power fraction carrying the superposed message; the rest is artificial noise.
    pub theta: f64,
    /// Residual fraction of backscattered artificial noise left after cancellation.
    pub eta: f64,
    /// Reflection efficiency of the backscatter device.
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub d_sn: f64,
    pub d_sf: f64,
    pub d_sb: f64,
    pub d_bn: f64,
    pub d_bf: f64,
    pub alpha: f64,
    /// Radius of the Eve-free disc around the base station.
    pub r_p: f64,
    /// Outer radius of the simulated Eve annulus.
    pub r_out: f64,
}

/// Linear SINR thresholds. `g_x_sy` is the threshold at receiver `x` for signal `s_y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub g_f_sf: f64,
    pub g_n_sf: f64,
    pub g_n_sn: f64,
    pub g_n_sc: f64,
    pub g_e_sf: f64,
    pub g_e_sn: f64,
    pub g_e_sc: f64,
}

/// How an eavesdropper's distance to the backscatter device is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlacementMode {
    /// `d_BV := d_SV`, the approximation behind the closed forms.
    #[default]
    Collapsed,
    /// `d_BV` from the cosine law with the device at its true offset.
    Exact,
}

impl fmt::Display for PlacementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlacementMode::Collapsed => "collapsed",
            PlacementMode::Exact => "exact",
        })
    }
}

impl FromStr for PlacementMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collapsed" => Ok(PlacementMode::Collapsed),
            "exact" => Ok(PlacementMode::Exact),
            other => Err(Error::Parse(format!(
                "unknown placement mode `{other}` (expected collapsed or exact)"
            ))),
        }
    }
}

/// Homogeneous Poisson field of eavesdroppers outside the exclusion disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveField {
    /// Eves per square metre.
    pub lambda_e: f64,
    pub placement: PlacementMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub params: SystemParams,
    pub geometry: Geometry,
    pub thresholds: Thresholds,
    pub eves: EveField,
    pub quadrature: QuadratureSpec,
}

/// One value per signal: far user, near user, backscatter device.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Triple<T> {
    pub far: T,
    pub near: T,
    pub bd: T,
}

impl<T> Triple<T> {
    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> Triple<U> {
        Triple {
            far: f(self.far),
            near: f(self.near),
            bd: f(self.bd),
        }
    }

    pub fn into_array(self) -> [T; 3] {
        [self.far, self.near, self.bd]
    }
}

pub const BASELINE_GAMMA_DB: f64 = 30.0;

/// Relative slack under which a threshold counts as equal to its ceiling.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// `threshold >= ceiling`, with rounding-level ties resolved as reached.
/// Branches that reach their ceiling are the degenerate ones.
pub fn reaches(threshold: f64, ceiling: f64) -> bool {
    threshold >= ceiling * (1.0 - TIE_TOLERANCE)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl Default for Scenario {
    fn default() -> Self {
        Self::baseline()
    }
}

impl Scenario {
    /// Reference configuration: two users, one backscatter device, sparse Eves.
    pub fn baseline() -> Self {
        Scenario {
            params: SystemParams {
                gamma: db_to_linear(BASELINE_GAMMA_DB),
                a_n: 0.2,
                a_f: 0.8,
                theta: 0.9,
                eta: 0.5,
                beta: 0.5,
            },
            geometry: Geometry {
                d_sn: 1.0,
                d_sf: 2.0,
                d_sb: 2.0,
                d_bn: 1.1,
                d_bf: 1.5,
                alpha: 2.0,
                r_p: 10.0,
                r_out: 1000.0,
            },
            thresholds: Thresholds {
                g_f_sf: 0.1,
                g_n_sf: 0.1,
                g_n_sn: 0.1,
                g_n_sc: 0.05,
                g_e_sf: 0.1,
                g_e_sn: 0.1,
                g_e_sc: 0.1,
            },
            eves: EveField {
                lambda_e: 1e-4,
                placement: PlacementMode::Collapsed,
            },
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn with_gamma_db(mut self, db: f64) -> Self {
        self.params.gamma = db_to_linear(db);
        self
    }

    pub fn gamma_db(&self) -> f64 {
        linear_to_db(self.params.gamma)
    }

    /// Sets `a_N` and keeps `a_N + a_F = 1`.
    pub fn with_a_n(mut self, a_n: f64) -> Self {
        self.params.a_n = a_n;
        self.params.a_f = 1.0 - a_n;
        self
    }

    pub fn path_loss(&self) -> PathLoss {
        PathLoss::new(&self.geometry)
    }

    /// Every broken invariant, in field order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |field: &'static str, message: String| out.push(Violation { field, message });

        let p = &self.params;
        if !(p.gamma > 0.0 && p.gamma.is_finite()) {
            push("gamma", format!("gamma > 0 required, got {}", p.gamma));
        }
        if !(p.a_n > 0.0) {
            push("a_N", format!("a_N > 0 required, got {}", p.a_n));
        }
        if !(p.a_f > p.a_n) {
            push(
                "a_F",
                format!("a_F > a_N required, got a_F = {} and a_N = {}", p.a_f, p.a_n),
            );
        }
        if !((p.a_n + p.a_f - 1.0).abs() <= 1e-9) {
            push("a_F", format!("a_N + a_F = 1 required, got {}", p.a_n + p.a_f));
        }
        if !(p.theta >= 0.5 && p.theta < 1.0) {
            push("theta", format!("0.5 <= theta < 1 required, got {}", p.theta));
        }
        if !((0.0..=1.0).contains(&p.eta)) {
            push("eta", format!("0 <= eta <= 1 required, got {}", p.eta));
        }
        if !(p.beta > 0.0 && p.beta <= 1.0) {
            push("beta", format!("0 < beta <= 1 required, got {}", p.beta));
        }

        let g = &self.geometry;
        for (field, d) in [
            ("d_SN", g.d_sn),
            ("d_SF", g.d_sf),
            ("d_SB", g.d_sb),
            ("d_BN", g.d_bn),
            ("d_BF", g.d_bf),
        ] {
            if !(d > 0.0 && d.is_finite()) {
                push(field, format!("{field} > 0 required, got {d}"));
            }
        }
        if !(g.alpha >= 2.0 && g.alpha.is_finite()) {
            push("alpha", format!("alpha >= 2 required, got {}", g.alpha));
        }
        if !(g.r_p > 0.0 && g.r_p.is_finite()) {
            push("r_p", format!("r_p > 0 required, got {}", g.r_p));
        }
        if !(g.r_out > g.r_p && g.r_out.is_finite()) {
            push(
                "R_out",
                format!("R_out > r_p required, got R_out = {} and r_p = {}", g.r_out, g.r_p),
            );
        }

        let t = &self.thresholds;
        for (field, v) in [
            ("g_F_sF", t.g_f_sf),
            ("g_N_sF", t.g_n_sf),
            ("g_N_sN", t.g_n_sn),
            ("g_N_sC", t.g_n_sc),
            ("g_E_sF", t.g_e_sf),
            ("g_E_sN", t.g_e_sn),
            ("g_E_sC", t.g_e_sc),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                push(field, format!("{field} > 0 required, got {v}"));
            }
        }

        if !(self.eves.lambda_e >= 0.0 && self.eves.lambda_e.is_finite()) {
            push(
                "lambda_e",
                format!("lambda_e >= 0 required, got {}", self.eves.lambda_e),
            );
        }
        if self.quadrature.chebyshev_order < 2 {
            push(
                "chebyshev_order",
                format!("chebyshev_order >= 2 required, got {}", self.quadrature.chebyshev_order),
            );
        }
        if self.quadrature.laguerre_order < 2 {
            push(
                "laguerre_order",
                format!("laguerre_order >= 2 required, got {}", self.quadrature.laguerre_order),
            );
        }
        out
    }

    /// Returns the scenario unchanged if every invariant holds.
    pub fn validate(self) -> Result<Self, ValidationErrors> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(ValidationErrors(v))
        }
    }

    /// Modelling assumptions that are violated but still computable.
    pub fn warnings(&self) -> Vec<String> {
        let g = &self.geometry;
        let mut out = Vec::new();
        if g.d_sb >= g.r_p {
            out.push(format!(
                "d_SB = {} is not small against r_p = {}; the d_BV = d_SV approximation degrades",
                g.d_sb, g.r_p
            ));
        }
        for (name, d) in [("d_SN", g.d_sn), ("d_SF", g.d_sf)] {
            if d >= g.r_p {
                out.push(format!("{name} = {d} places a user outside the Eve-free disc"));
            }
        }
        out
    }
}

/// Legitimate links with a distance-based fading constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    SN,
    SF,
    SB,
    BN,
    BF,
}

impl Link {
    pub const ALL: [Link; 5] = [Link::SN, Link::SF, Link::SB, Link::BN, Link::BF];

    pub fn distance(self, g: &Geometry) -> f64 {
        match self {
            Link::SN => g.d_sn,
            Link::SF => g.d_sf,
            Link::SB => g.d_sb,
            Link::BN => g.d_bn,
            Link::BF => g.d_bf,
        }
    }
}

impl FromStr for Link {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SN" => Ok(Link::SN),
            "SF" => Ok(Link::SF),
            "SB" => Ok(Link::SB),
            "BN" => Ok(Link::BN),
            "BF" => Ok(Link::BF),
            _ => Err(Error::Parse(format!("unknown link `{s}`"))),
        }
    }
}

/// `λ = d^{-α}` for one link.
pub fn lambda_of(geometry: &Geometry, link: Link) -> f64 {
    link.distance(geometry).powf(-geometry.alpha)
}

/// Large-scale fading constants of all five legitimate links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub sn: f64,
    pub sf: f64,
    pub sb: f64,
    pub bn: f64,
    pub bf: f64,
}

impl PathLoss {
    pub fn new(g: &Geometry) -> Self {
        PathLoss {
            sn: lambda_of(g, Link::SN),
            sf: lambda_of(g, Link::SF),
            sb: lambda_of(g, Link::SB),
            bn: lambda_of(g, Link::BN),
            bf: lambda_of(g, Link::BF),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_is_valid_without_warnings() {
        let s = Scenario::baseline();
        assert!(s.violations().is_empty());
        assert!(s.warnings().is_empty());
        assert!((s.params.gamma - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_power_split_is_reported() {
        let s = Scenario::baseline().with_a_n(0.6);
        let err = s.validate().unwrap_err();
        assert!(err
            .0
            .iter()
            .any(|v| v.field == "a_F" && v.message.contains("a_F > a_N")));
    }

    #[test]
    fn theta_below_half_is_reported() {
        let mut s = Scenario::baseline();
        s.params.theta = 0.3;
        let err = s.validate().unwrap_err();
        assert_eq!(err.fields().collect::<Vec<_>>(), ["theta"]);
        assert!(err.to_string().contains("0.5 <= theta < 1"));
    }

    #[test]
    fn every_violation_is_collected() {
        let mut s = Scenario::baseline();
        s.params.beta = 0.0;
        s.params.eta = 1.5;
        s.geometry.r_out = 5.0;
        s.thresholds.g_e_sc = -1.0;
        s.eves.lambda_e = f64::NAN;
        let fields: Vec<_> = s.violations().iter().map(|v| v.field).collect();
        assert_eq!(fields, ["eta", "beta", "R_out", "g_E_sC", "lambda_e"]);
    }

    #[test]
    fn validate_is_idempotent() {
        let s = Scenario::baseline();
        assert_eq!(s.validate().unwrap().validate().unwrap(), s);
    }

    #[test]
    fn far_backscatter_device_warns() {
        let mut s = Scenario::baseline();
        s.geometry.d_sb = 12.0;
        assert!(s.violations().is_empty());
        assert_eq!(s.warnings().len(), 1);
    }

    #[test]
    fn lambda_values() {
        let g = Scenario::baseline().geometry;
        assert_eq!(lambda_of(&g, Link::SB), 0.25);
        assert_eq!(lambda_of(&g, Link::SN), 1.0);
        assert!((lambda_of(&g, Link::BN) - 0.826_446_280_991_735_5).abs() < 1e-15);
        assert!("XY".parse::<Link>().is_err());
        assert_eq!("bf".parse::<Link>().unwrap(), Link::BF);
    }

    #[test]
    fn lambda_decreases_with_distance_and_exponent() {
        let mut g = Scenario::baseline().geometry;
        let base = lambda_of(&g, Link::SF);
        g.d_sf = 2.5;
        assert!(lambda_of(&g, Link::SF) < base);
        g.d_sf = 2.0;
        g.alpha = 3.0;
        assert!(lambda_of(&g, Link::SF) < base);
    }
}
