//! Grid-refinement studies against a known solution.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::{solve_hf, SolveConfig, Steps};
use crate::system::FractionalSystem;

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    /// Max-over-nodes absolute error per state.
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// Observed order per state, averaged over consecutive pairs of rows;
    /// `None` when every error is zero (the method is exact on the problem).
    pub orders: Vec<Option<f64>>,
}

/// Solves at each step in `steps` and measures the error against `exact`.
///
/// The order between consecutive rows is `ln(e_a / e_b) / ln(h_a / h_b)`,
/// which is `log2(e(2h) / e(h))` for halved steps.
pub fn convergence_study(
    system: &FractionalSystem,
    exact: &dyn Fn(f64) -> Vec<f64>,
    steps: &[f64],
    base: &SolveConfig,
) -> Result<ConvergenceStudy> {
    if steps.is_empty() {
        return Err(Error::Input(
            "convergence study needs at least one step size".into(),
        ));
    }
    let n = system.n();
    let mut rows = Vec::with_capacity(steps.len());
    for &h in steps {
        let config = SolveConfig {
            steps: Steps::Width(h),
            ..base.clone()
        };
        let result = solve_hf(system, &config)?;
        let mut errors = vec![0.0f64; n];
        for (j, row) in result.nodes.iter().enumerate() {
            let want = exact(result.grid.node(j));
            for i in 0..n {
                errors[i] = errors[i].max((row[i] - want[i]).abs());
            }
        }
        rows.push(ConvergenceRow { h, errors });
    }

    let orders = (0..n)
        .map(|i| {
            let ratios: Vec<f64> = rows
                .windows(2)
                .filter(|w| w[0].errors[i] > 0.0 && w[1].errors[i] > 0.0)
                .map(|w| (w[0].errors[i] / w[1].errors[i]).ln() / (w[0].h / w[1].h).ln())
                .collect();
            if ratios.is_empty() {
                None
            } else {
                Some(ratios.iter().sum::<f64>() / ratios.len() as f64)
            }
        })
        .collect();
    Ok(ConvergenceStudy { rows, orders })
}
