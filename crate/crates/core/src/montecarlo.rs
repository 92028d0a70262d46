//! Brute-force estimates of every outage and intercept probability by
//! sampling Rayleigh gains and Poisson Eve fields.
//!
//! Trial `k` always draws from ChaCha8 stream `k` under a key derived from
//! the seed, so results do not depend on batching or thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationErrors, Violation};
use crate::model::{EveField, Geometry, PlacementMode, Scenario, Triple};
use crate::sinr::{
    path_gain, sinr_eve_sc, sinr_eve_sf, sinr_eve_sn, sinr_uf_sf, sinr_un_sc, sinr_un_sf, sinr_un_sn, EveGains,
    LegitGains,
};

/// z for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

const OUTAGE_STREAM_KEY: u64 = 0x6f75_7461_6765_0001;
const INTERCEPT_STREAM_KEY: u64 = 0x696e_7465_7263_0002;

/// Which S→B fading realisation enters each Eve's backscatter term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackscatterFading {
    /// An independent `|g_SB|²` per Eve, matching the independence the
    /// closed forms assume across Eves.
    #[default]
    PerEve,
    /// One `|g_SB|²` per trial, shared by every Eve.
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub placement: PlacementMode,
    pub batch_size: u64,
    pub backscatter: BackscatterFading,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            trials: 100_000,
            seed: 1,
            placement: PlacementMode::Collapsed,
            batch_size: 8_192,
            backscatter: BackscatterFading::PerEve,
        }
    }
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimConfig {
            trials,
            seed,
            ..Self::default()
        }
    }

    pub fn with_placement(mut self, placement: PlacementMode) -> Self {
        self.placement = placement;
        self
    }

    pub fn validate(&self) -> Result<(), ValidationErrors> {
        let mut v = Vec::new();
        if self.trials == 0 {
            v.push(Violation {
                field: "trials",
                message: "trials >= 1 required".into(),
            });
        }
        if self.batch_size == 0 {
            v.push(Violation {
                field: "batch_size",
                message: "batch_size >= 1 required".into(),
            });
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(ValidationErrors(v))
        }
    }
}

/// An event-frequency estimate with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: u64,
    pub successes: u64,
}

impl EstimateWithCI {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(successes, trials, Z95);
        EstimateWithCI {
            p_hat: successes as f64 / trials as f64,
            ci_lo,
            ci_hi,
            trials,
            successes,
        }
    }

    /// Wilson half-width at `z = 1`, used as the standard error.
    pub fn wilson_se(&self) -> f64 {
        let (lo, hi) = wilson_interval(self.successes, self.trials, 1.0);
        0.5 * (hi - lo)
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(
        trials >= 1 && successes <= trials,
        "need 0 <= successes <= trials, trials >= 1"
    );
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, p)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).clamp(p, 1.0)
    };
    (lo, hi)
}

fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

/// Five independent unit-mean exponential power gains.
pub fn sample_legit_gains<R: Rng + ?Sized>(rng: &mut R) -> LegitGains {
    LegitGains {
        sn: exp1(rng),
        sf: exp1(rng),
        sb: exp1(rng),
        bn: exp1(rng),
        bf: exp1(rng),
    }
}

/// One Poisson field of Eves on the annulus `r_p <= r <= R_out`.
pub fn sample_eve_field<R: Rng + ?Sized>(rng: &mut R, eves: &EveField, geometry: &Geometry) -> Vec<EveGains> {
    let mut out = Vec::new();
    sample_eve_field_into(rng, eves, geometry, &mut out);
    out
}

fn sample_eve_field_into<R: Rng + ?Sized>(rng: &mut R, eves: &EveField, geometry: &Geometry, out: &mut Vec<EveGains>) {
    out.clear();
    let r2_in = geometry.r_p * geometry.r_p;
    let span = geometry.r_out * geometry.r_out - r2_in;
    let mean = eves.lambda_e * PI * span;
    if !(mean > 0.0) {
        return;
    }
    let count = Poisson::new(mean).expect("positive finite mean").sample(rng) as usize;
    out.reserve(count);
    for _ in 0..count {
        let r = (r2_in + rng.random::<f64>() * span).sqrt();
        let phi = 2.0 * PI * rng.random::<f64>();
        let d_bv = match eves.placement {
            PlacementMode::Collapsed => r,
            PlacementMode::Exact => {
                let d = geometry.d_sb;
                (r * r + d * d - 2.0 * r * d * phi.cos()).sqrt()
            }
        };
        out.push(EveGains {
            d_sv: r,
            d_bv,
            g_sv: exp1(rng),
            g_bv: exp1(rng),
        });
    }
}

fn ensure_valid(s: &Scenario, sim: &SimConfig) -> Result<()> {
    let mut v = s.violations();
    if let Err(e) = sim.validate() {
        v.extend(e.0);
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(ValidationErrors(v)))
    }
}

fn base_rng(seed: u64, key: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ key)
}

// Sums per-trial event indicators over all trials, batch-parallel.
fn count_events<F>(sim: &SimConfig, key: u64, trial: F) -> [u64; 3]
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<EveGains>) -> [bool; 3] + Sync,
{
    let base = base_rng(sim.seed, key);
    let batch = sim.batch_size.min(sim.trials);
    let batches = sim.trials.div_ceil(batch);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut counts = [0u64; 3];
            let mut buf = Vec::new();
            let start = b * batch;
            let end = (start + batch).min(sim.trials);
            for k in start..end {
                let mut rng = base.clone();
                rng.set_stream(k);
                for (c, hit) in counts.iter_mut().zip(trial(&mut rng, &mut buf)) {
                    *c += hit as u64;
                }
            }
            counts
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
}

fn to_triple(counts: [u64; 3], trials: u64) -> Triple<EstimateWithCI> {
    Triple {
        far: EstimateWithCI::from_counts(counts[0], trials),
        near: EstimateWithCI::from_counts(counts[1], trials),
        bd: EstimateWithCI::from_counts(counts[2], trials),
    }
}

/// Outage frequencies of the far user, the near user and the device.
pub fn estimate_op(s: &Scenario, sim: &SimConfig) -> Result<Triple<EstimateWithCI>> {
    ensure_valid(s, sim)?;
    let p = s.params;
    let pl = s.path_loss();
    let t = s.thresholds;
    let counts = count_events(sim, OUTAGE_STREAM_KEY, |rng, _| {
        let g = sample_legit_gains(rng);
        let far_out = sinr_uf_sf(&p, &pl, &g) <= t.g_f_sf;
        let near_ok = sinr_un_sf(&p, &pl, &g) >= t.g_n_sf && sinr_un_sn(&p, &pl, &g) >= t.g_n_sn;
        let bd_ok = near_ok && sinr_un_sc(&p, &pl, &g) >= t.g_n_sc;
        [far_out, !near_ok, !bd_ok]
    });
    Ok(to_triple(counts, sim.trials))
}

/// Frequencies with which the strongest Eve beats each secrecy threshold.
pub fn estimate_ip(s: &Scenario, sim: &SimConfig) -> Result<Triple<EstimateWithCI>> {
    ensure_valid(s, sim)?;
    let p = s.params;
    let t = s.thresholds;
    let geometry = s.geometry;
    let lambda_sb = path_gain(geometry.d_sb, geometry.alpha);
    let field = EveField {
        placement: sim.placement,
        ..s.eves
    };
    let counts = count_events(sim, INTERCEPT_STREAM_KEY, |rng, buf| {
        let shared_sb = exp1(rng);
        sample_eve_field_into(rng, &field, &geometry, buf);
        let mut best = [0.0f64; 3];
        for eve in buf.iter() {
            let g_sb = match sim.backscatter {
                BackscatterFading::Shared => shared_sb,
                BackscatterFading::PerEve => exp1(rng),
            };
            let h_sb = lambda_sb * g_sb;
            let ch = eve.channel(geometry.alpha, sim.placement);
            best[0] = best[0].max(sinr_eve_sf(&p, h_sb, &ch));
            best[1] = best[1].max(sinr_eve_sn(&p, h_sb, &ch));
            best[2] = best[2].max(sinr_eve_sc(&p, h_sb, &ch));
        }
        [best[0] > t.g_e_sf, best[1] > t.g_e_sn, best[2] > t.g_e_sc]
    });
    Ok(to_triple(counts, sim.trials))
}
