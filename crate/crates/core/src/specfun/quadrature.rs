//! Quadrature rules: Gauss-Chebyshev nodes, Gauss-Laguerre roots and
//! weights, and an adaptive Gauss-Kronrod integrator for the few integrals
//! that have no fixed-rule form.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CHEBYSHEV_ORDER: usize = 100;
pub const DEFAULT_LAGUERRE_ORDER: usize = 30;

/// Orders of the two fixed quadrature rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Number of Gauss-Chebyshev nodes `t_i`.
    pub chebyshev_order: usize,
    /// Number of Gauss-Laguerre pairs `(l_i, w_i)`.
    pub laguerre_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            chebyshev_order: DEFAULT_CHEBYSHEV_ORDER,
            laguerre_order: DEFAULT_LAGUERRE_ORDER,
        }
    }
}

impl QuadratureSpec {
    /// Both orders doubled; used by the convergence checks.
    pub fn doubled(self) -> Self {
        Self {
            chebyshev_order: 2 * self.chebyshev_order,
            laguerre_order: 2 * self.laguerre_order,
        }
    }
}

/// A quadrature-based value together with the same value at doubled orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderCheck {
    pub value: f64,
    pub doubled: f64,
}

impl OrderCheck {
    pub fn delta(&self) -> f64 {
        (self.value - self.doubled).abs()
    }
}

/// `t_i = cos((2i-1)π / 2n)` for `i = 1..=n`, strictly decreasing.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    let denom = 2.0 * n as f64;
    (1..=n).map(|i| ((2 * i - 1) as f64 * PI / denom).cos()).collect()
}

/// One Gauss-Laguerre abscissa with its weight for `∫_0^∞ e^{-x} f(x) dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreNode {
    pub root: f64,
    pub weight: f64,
    /// `weight · e^{root}`, computed in log space so large orders do not overflow.
    pub scaled_weight: f64,
}

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;
const RESCALE_AT: f64 = 1e150;

/// Roots of `L_N` and the weights `w_i = l_i / ((N+1)² L_{N+1}(l_i)²)`.
pub fn gauss_laguerre(n: usize) -> Result<Vec<LaguerreNode>> {
    if n == 0 {
        return Err(Error::Domain {
            function: "gauss_laguerre",
            arg: 0.0,
            expected: "N >= 1",
        });
    }
    let nf = n as f64;
    let mut nodes: Vec<LaguerreNode> = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 1..=n {
        z = match i {
            1 => 3.0 / (1.0 + 2.4 * nf),
            2 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 2) as f64;
                let prev2 = nodes[i - 3].root;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - prev2)
            }
        };
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (ln, lnm1, _) = laguerre_pair(n, z);
            let deriv = nf * (ln - lnm1) / z;
            let step = ln / deriv;
            z -= step;
            if step.abs() <= NEWTON_TOL * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        let prev = nodes.last().map_or(0.0, |p| p.root);
        if !converged || !z.is_finite() || z <= prev {
            return Err(Error::Convergence {
                routine: "gauss_laguerre",
                index: i,
            });
        }
        let (ln, lnm1, log_scale) = laguerre_pair(n, z);
        let next = ((2.0 * nf + 1.0 - z) * ln - nf * lnm1) / (nf + 1.0);
        let ln_w = z.ln() - 2.0 * (nf + 1.0).ln() - 2.0 * (next.abs().ln() + log_scale);
        nodes.push(LaguerreNode {
            root: z,
            weight: ln_w.exp(),
            scaled_weight: (ln_w + z).exp(),
        });
    }
    Ok(nodes)
}

// (L_n(z), L_{n-1}(z)) sharing a common factor e^{-log_scale}.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    let mut log_scale = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
        if p1.abs() > RESCALE_AT {
            p1 /= RESCALE_AT;
            p2 /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
    }
    (p1, p2, log_scale)
}

type RuleCache = RwLock<HashMap<usize, Arc<[LaguerreNode]>>>;

/// Cached [`gauss_laguerre`]; safe for concurrent readers.
pub fn laguerre_rule(n: usize) -> Result<Arc<[LaguerreNode]>> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.read().expect("laguerre cache poisoned").get(&n) {
        return Ok(Arc::clone(rule));
    }
    let rule: Arc<[LaguerreNode]> = gauss_laguerre(n)?.into();
    cache
        .write()
        .expect("laguerre cache poisoned")
        .insert(n, Arc::clone(&rule));
    Ok(rule)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub converged: bool,
}

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for KRONROD_NODES[1], [3], [5], [7].
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 2_000;

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * KRONROD_WEIGHTS[7];
    let mut gauss = fc * GAUSS_WEIGHTS[3];
    for j in 0..7 {
        let dx = half * KRONROD_NODES[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += KRONROD_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive 7/15-point Gauss-Kronrod integration over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Integral {
    let first = gauss_kronrod_15(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::from([first]);
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= MAX_SEGMENTS {
            return Integral {
                value,
                abs_error: error,
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod_15(&f, worst.a, mid);
        let right = gauss_kronrod_15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // periodic full re-sum of the running total
    let value = heap.iter().map(|s| s.value).sum();
    let abs_error = heap.iter().map(|s| s.error).sum();
    Integral {
        value,
        abs_error,
        converged: true,
    }
}

/// `∫_a^∞ f(x) dx` via `x = a + t/(1-t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, abs_tol: f64, rel_tol: f64) -> Integral {
    integrate(
        |t| {
            let one_minus = 1.0 - t;
            let x = a + t / one_minus;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (one_minus * one_minus)
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}
