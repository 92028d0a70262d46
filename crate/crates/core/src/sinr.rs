//! Instantaneous SINRs at the legitimate receivers and at a single Eve,
//! evaluated from squared small-scale gains.

use crate::model::{PathLoss, PlacementMode, SystemParams};

/// Squared small-scale gains `|g|²` of the five legitimate links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegitGains {
    pub sn: f64,
    pub sf: f64,
    pub sb: f64,
    pub bn: f64,
    pub bf: f64,
}

impl LegitGains {
    pub const UNIT: LegitGains = LegitGains {
        sn: 1.0,
        sf: 1.0,
        sb: 1.0,
        bn: 1.0,
        bf: 1.0,
    };
}

/// Position and squared gains of one eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveGains {
    pub d_sv: f64,
    pub d_bv: f64,
    pub g_sv: f64,
    pub g_bv: f64,
}

/// Channel powers `|h|² = d^{-α}|g|²` seen by one Eve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveChannel {
    pub h_sv: f64,
    pub h_bv: f64,
}

pub(crate) fn path_gain(d: f64, alpha: f64) -> f64 {
    if alpha == 2.0 {
        1.0 / (d * d)
    } else {
        d.powf(-alpha)
    }
}

impl EveGains {
    pub fn channel(&self, alpha: f64, placement: PlacementMode) -> EveChannel {
        let d_bv = match placement {
            PlacementMode::Collapsed => self.d_sv,
            PlacementMode::Exact => self.d_bv,
        };
        let lambda_sv = path_gain(self.d_sv, alpha);
        let lambda_bv = if d_bv == self.d_sv {
            lambda_sv
        } else {
            path_gain(d_bv, alpha)
        };
        EveChannel {
            h_sv: lambda_sv * self.g_sv,
            h_bv: lambda_bv * self.g_bv,
        }
    }
}

// |h_SB|²|h_BX|²β²
fn backscatter(p: &SystemParams, h_sb: f64, h_bx: f64) -> f64 {
    h_sb * h_bx * p.beta * p.beta
}

fn residual_an(p: &SystemParams) -> f64 {
    p.theta + p.eta * (1.0 - p.theta)
}

/// SINR of `s_F` at the near user, first SIC stage.
pub fn sinr_un_sf(p: &SystemParams, pl: &PathLoss, g: &LegitGains) -> f64 {
    let h_sn = pl.sn * g.sn;
    let bs = backscatter(p, pl.sb * g.sb, pl.bn * g.bn);
    let tg = p.theta * p.gamma;
    h_sn * tg * p.a_f / (h_sn * tg * p.a_n + bs * residual_an(p) * p.gamma + 1.0)
}

/// SINR of `s_N` at the near user after removing `s_F`.
pub fn sinr_un_sn(p: &SystemParams, pl: &PathLoss, g: &LegitGains) -> f64 {
    let h_sn = pl.sn * g.sn;
    let bs = backscatter(p, pl.sb * g.sb, pl.bn * g.bn);
    h_sn * p.theta * p.gamma * p.a_n / (bs * residual_an(p) * p.gamma + 1.0)
}

/// SINR of the backscatter symbol `s_C` at the near user, last SIC stage.
pub fn sinr_un_sc(p: &SystemParams, pl: &PathLoss, g: &LegitGains) -> f64 {
    let bs = backscatter(p, pl.sb * g.sb, pl.bn * g.bn);
    bs * p.theta * p.gamma / (bs * p.eta * (1.0 - p.theta) * p.gamma + 1.0)
}

/// SINR of `s_F` at the far user, which treats everything else as noise.
pub fn sinr_uf_sf(p: &SystemParams, pl: &PathLoss, g: &LegitGains) -> f64 {
    let h_sf = pl.sf * g.sf;
    let bs = backscatter(p, pl.sb * g.sb, pl.bf * g.bf);
    let tg = p.theta * p.gamma;
    h_sf * tg * p.a_f / (h_sf * tg * p.a_n + bs * residual_an(p) * p.gamma + 1.0)
}

/// Eve's SINR for `s_F`. `h_sb` is `|h_SB|²` for the backscatter path into this Eve.
pub fn sinr_eve_sf(p: &SystemParams, h_sb: f64, ch: &EveChannel) -> f64 {
    let tg = p.theta * p.gamma;
    let num = ch.h_sv * tg * p.a_f;
    num / (ch.h_sv * tg * p.a_n + ch.h_sv * (1.0 - p.theta) * p.gamma + backscatter(p, h_sb, ch.h_bv) * p.gamma + 1.0)
}

pub fn sinr_eve_sn(p: &SystemParams, h_sb: f64, ch: &EveChannel) -> f64 {
    let num = ch.h_sv * p.theta * p.gamma * p.a_n;
    num / (ch.h_sv * (1.0 - p.theta) * p.gamma + backscatter(p, h_sb, ch.h_bv) * p.gamma + 1.0)
}

pub fn sinr_eve_sc(p: &SystemParams, h_sb: f64, ch: &EveChannel) -> f64 {
    let bs = backscatter(p, h_sb, ch.h_bv);
    bs * p.theta * p.gamma / ((1.0 - p.theta) * p.gamma * (ch.h_sv + bs) + 1.0)
}
