//! Flat JSON scenario documents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{db_to_linear, PlacementMode, Scenario};

/// Every key is optional; missing keys keep their baseline value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    #[serde(rename = "a_N", skip_serializing_if = "Option::is_none")]
    pub a_n: Option<f64>,
    #[serde(rename = "a_F", skip_serializing_if = "Option::is_none")]
    pub a_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_db: Option<f64>,
    #[serde(rename = "d_SN", skip_serializing_if = "Option::is_none")]
    pub d_sn: Option<f64>,
    #[serde(rename = "d_SF", skip_serializing_if = "Option::is_none")]
    pub d_sf: Option<f64>,
    #[serde(rename = "d_SB", skip_serializing_if = "Option::is_none")]
    pub d_sb: Option<f64>,
    #[serde(rename = "d_BN", skip_serializing_if = "Option::is_none")]
    pub d_bn: Option<f64>,
    #[serde(rename = "d_BF", skip_serializing_if = "Option::is_none")]
    pub d_bf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_p: Option<f64>,
    #[serde(rename = "R_out", skip_serializing_if = "Option::is_none")]
    pub r_out: Option<f64>,
    #[serde(rename = "g_F_sF", skip_serializing_if = "Option::is_none")]
    pub g_f_sf: Option<f64>,
    #[serde(rename = "g_N_sF", skip_serializing_if = "Option::is_none")]
    pub g_n_sf: Option<f64>,
    #[serde(rename = "g_N_sN", skip_serializing_if = "Option::is_none")]
    pub g_n_sn: Option<f64>,
    #[serde(rename = "g_N_sC", skip_serializing_if = "Option::is_none")]
    pub g_n_sc: Option<f64>,
    #[serde(rename = "g_E_sF", skip_serializing_if = "Option::is_none")]
    pub g_e_sf: Option<f64>,
    #[serde(rename = "g_E_sN", skip_serializing_if = "Option::is_none")]
    pub g_e_sn: Option<f64>,
    #[serde(rename = "g_E_sC", skip_serializing_if = "Option::is_none")]
    pub g_e_sc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub placement_mode: Option<PlacementMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chebyshev_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laguerre_order: Option<usize>,
}

impl ScenarioDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Overlays the document on the baseline. Does not validate.
    ///
    /// If only one of `a_N`, `a_F` is given the other becomes its complement.
    pub fn to_scenario(&self) -> Result<Scenario> {
        if self.gamma.is_some() && self.gamma_db.is_some() {
            return Err(Error::Parse("give either gamma or gamma_db, not both".into()));
        }
        let mut s = Scenario::baseline();
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        match (self.a_n, self.a_f) {
            (Some(n), Some(f)) => {
                s.params.a_n = n;
                s.params.a_f = f;
            }
            (Some(n), None) => s = s.with_a_n(n),
            (None, Some(f)) => s = s.with_a_n(1.0 - f),
            (None, None) => {}
        }
        set(&mut s.params.theta, self.theta);
        set(&mut s.params.eta, self.eta);
        set(&mut s.params.beta, self.beta);
        set(&mut s.params.gamma, self.gamma);
        set(&mut s.params.gamma, self.gamma_db.map(db_to_linear));
        set(&mut s.geometry.d_sn, self.d_sn);
        set(&mut s.geometry.d_sf, self.d_sf);
        set(&mut s.geometry.d_sb, self.d_sb);
        set(&mut s.geometry.d_bn, self.d_bn);
        set(&mut s.geometry.d_bf, self.d_bf);
        set(&mut s.geometry.alpha, self.alpha);
        set(&mut s.geometry.r_p, self.r_p);
        set(&mut s.geometry.r_out, self.r_out);
        set(&mut s.thresholds.g_f_sf, self.g_f_sf);
        set(&mut s.thresholds.g_n_sf, self.g_n_sf);
        set(&mut s.thresholds.g_n_sn, self.g_n_sn);
        set(&mut s.thresholds.g_n_sc, self.g_n_sc);
        set(&mut s.thresholds.g_e_sf, self.g_e_sf);
        set(&mut s.thresholds.g_e_sn, self.g_e_sn);
        set(&mut s.thresholds.g_e_sc, self.g_e_sc);
        set(&mut s.eves.lambda_e, self.lambda_e);
        if let Some(m) = self.placement_mode {
            s.eves.placement = m;
        }
        if let Some(n) = self.chebyshev_order {
            s.quadrature.chebyshev_order = n;
        }
        if let Some(n) = self.laguerre_order {
            s.quadrature.laguerre_order = n;
        }
        Ok(s)
    }

    /// Full document for `s`, with the SNR as linear `gamma`.
    pub fn from_scenario(s: &Scenario) -> Self {
        ScenarioDocument {
            a_n: Some(s.params.a_n),
            a_f: Some(s.params.a_f),
            theta: Some(s.params.theta),
            eta: Some(s.params.eta),
            beta: Some(s.params.beta),
            gamma: Some(s.params.gamma),
            gamma_db: None,
            d_sn: Some(s.geometry.d_sn),
            d_sf: Some(s.geometry.d_sf),
            d_sb: Some(s.geometry.d_sb),
            d_bn: Some(s.geometry.d_bn),
            d_bf: Some(s.geometry.d_bf),
            alpha: Some(s.geometry.alpha),
            r_p: Some(s.geometry.r_p),
            r_out: Some(s.geometry.r_out),
            g_f_sf: Some(s.thresholds.g_f_sf),
            g_n_sf: Some(s.thresholds.g_n_sf),
            g_n_sn: Some(s.thresholds.g_n_sn),
            g_n_sc: Some(s.thresholds.g_n_sc),
            g_e_sf: Some(s.thresholds.g_e_sf),
            g_e_sn: Some(s.thresholds.g_e_sn),
            g_e_sc: Some(s.thresholds.g_e_sc),
            lambda_e: Some(s.eves.lambda_e),
            placement_mode: Some(s.eves.placement),
            chebyshev_order: Some(s.quadrature.chebyshev_order),
            laguerre_order: Some(s.quadrature.laguerre_order),
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    Ok(ScenarioDocument::parse(text)?.to_scenario()?.validate()?)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_baseline() {
        assert_eq!(parse_scenario("{}").unwrap(), Scenario::baseline());
    }

    #[test]
    fn gamma_db_is_converted() {
        let s = parse_scenario(r#"{"gamma_db": 30}"#).unwrap();
        assert!((s.params.gamma - 1000.0).abs() < 1e-9);
        let s = parse_scenario(r#"{"gamma_db": 10}"#).unwrap();
        assert!((s.params.gamma - 10.0).abs() < 1e-12);
    }

    #[test]
    fn bad_theta_names_the_key() {
        let err = parse_scenario(r#"{"theta": 0.3}"#).unwrap_err();
        match err {
            Error::Validation(v) => assert_eq!(v.fields().collect::<Vec<_>>(), ["theta"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = parse_scenario(r#"{"thetta": 0.8}"#).unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("thetta")), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_scenario("{\n  \"theta\": 0.8,\n  oops\n}").unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("line 3")), "{err}");
    }

    #[test]
    fn one_power_coefficient_implies_the_other() {
        let s = parse_scenario(r#"{"a_N": 0.3}"#).unwrap();
        assert!((s.params.a_f - 0.7).abs() < 1e-15);
        assert!(parse_scenario(r#"{"a_N": 0.3, "a_F": 0.6}"#).is_err());
    }

    #[test]
    fn both_snr_keys_conflict() {
        assert!(matches!(
            parse_scenario(r#"{"gamma": 10, "gamma_db": 10}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn document_round_trip() {
        let mut s = Scenario::baseline().with_gamma_db(17.0);
        s.eves.placement = PlacementMode::Exact;
        s.quadrature.laguerre_order = 40;
        let text = serde_json::to_string(&ScenarioDocument::from_scenario(&s)).unwrap();
        assert!(text.contains("\"d_SB\"") && text.contains("\"placement_mode\":\"exact\""));
        assert_eq!(parse_scenario(&text).unwrap(), s);
    }
}
