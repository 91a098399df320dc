//! Contraction-bound diagnostic `n L T^α / Γ(α+1)` for convergence of the
//! hybrid-function approximation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::gamma_fn;
use crate::system::FractionalSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `0 < value < 1`: convergence guaranteed.
    Guaranteed,
    /// `value >= 1`: the bound gives no guarantee.
    NotGuaranteed,
    /// `L = 0`: trivially constant right-hand side, bound does not apply.
    Degenerate,
    /// Order outside `(0, 1]`.
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionBound {
    pub value: f64,
    pub verdict: Verdict,
}

impl ContractionBound {
    pub fn guaranteed(&self) -> bool {
        self.verdict == Verdict::Guaranteed
    }
}

pub fn contraction_bound(
    n: usize,
    lipschitz: f64,
    alpha: f64,
    horizon: f64,
) -> Result<ContractionBound> {
    if n == 0 || !(lipschitz >= 0.0) || !(horizon > 0.0) || !(alpha > 0.0) {
        return Err(Error::Domain(format!(
            "contraction bound needs n >= 1, L >= 0, T > 0, alpha > 0 (got n = {n}, L = {lipschitz}, T = {horizon}, alpha = {alpha})"
        )));
    }
    let value = n as f64 * lipschitz * horizon.powf(alpha) / gamma_fn(alpha + 1.0)?;
    let verdict = if alpha > 1.0 {
        Verdict::NotApplicable
    } else if lipschitz == 0.0 {
        Verdict::Degenerate
    } else if value < 1.0 {
        Verdict::Guaranteed
    } else {
        Verdict::NotGuaranteed
    };
    Ok(ContractionBound { value, verdict })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LipschitzSource {
    Supplied,
    Heuristic,
}

/// Contraction diagnostic attached to a solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport {
    pub lipschitz: f64,
    pub lipschitz_source: LipschitzSource,
    /// Worst case over the distinct orders of the system.
    pub bound: ContractionBound,
    /// Order at which the worst case was attained.
    pub alpha: f64,
    pub mixed_orders: bool,
}

impl ContractionReport {
    pub fn new(system: &FractionalSystem, lipschitz: f64, source: LipschitzSource) -> Result<Self> {
        let mut best: Option<(f64, ContractionBound)> = None;
        for &a in system.orders() {
            let b = contraction_bound(system.n(), lipschitz, a, system.horizon())?;
            let worse = match &best {
                None => true,
                Some((_, cur)) => {
                    rank(b.verdict) > rank(cur.verdict)
                        || (rank(b.verdict) == rank(cur.verdict) && b.value > cur.value)
                }
            };
            if worse {
                best = Some((a, b));
            }
        }
        let (alpha, bound) = best.expect("system has at least one state");
        let first = system.orders()[0];
        Ok(Self {
            lipschitz,
            lipschitz_source: source,
            bound,
            alpha,
            mixed_orders: system.orders().iter().any(|&a| a != first),
        })
    }
}

fn rank(v: Verdict) -> u8 {
    match v {
        Verdict::Guaranteed => 0,
        Verdict::Degenerate => 1,
        Verdict::NotGuaranteed => 2,
        Verdict::NotApplicable => 3,
    }
}

/// Largest finite-difference partial derivative `|∂f_i/∂y_k|` over a
/// 5-point-per-axis lattice spanning the bounding box of `nodes`.
pub fn estimate_lipschitz(
    system: &FractionalSystem,
    nodes: &[Vec<f64>],
    rel_step: f64,
) -> Result<f64> {
    const PER_AXIS: usize = 5;
    let n = system.n();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for row in nodes {
        for k in 0..n {
            lo[k] = lo[k].min(row[k]);
            hi[k] = hi[k].max(row[k]);
        }
    }
    let horizon = system.horizon();
    let total = PER_AXIS.pow(n as u32);
    let mut y = vec![0.0; n];
    let mut probe = vec![0.0; n];
    let mut f0 = vec![0.0; n];
    let mut f1 = vec![0.0; n];
    let mut best: f64 = 0.0;
    for idx in 0..total {
        let mut rem = idx;
        for k in 0..n {
            let d = rem % PER_AXIS;
            rem /= PER_AXIS;
            y[k] = lo[k] + (hi[k] - lo[k]) * d as f64 / (PER_AXIS - 1) as f64;
        }
        let t = horizon * (idx % PER_AXIS) as f64 / (PER_AXIS - 1) as f64;
        if system.eval_rhs(t, &y, &mut f0).is_err() {
            continue;
        }
        for k in 0..n {
            probe.copy_from_slice(&y);
            probe[k] += rel_step * y[k].abs().max(1.0);
            let dy = probe[k] - y[k];
            if system.eval_rhs(t, &probe, &mut f1).is_err() {
                continue;
            }
            for i in 0..n {
                best = best.max(((f1[i] - f0[i]) / dy).abs());
            }
        }
    }
    Ok(best)
}
