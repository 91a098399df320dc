//! Independent reference solutions used to check the hybrid-function solver.

mod exact;
mod pece;
mod report;
mod rk4;

use serde::Serialize;

use crate::hf::Grid;

pub use exact::{exact_solution, ExactSolution};
pub use pece::pece_solve;
pub use report::{error_report, ErrorReport, StateErrors};
pub use rk4::rk4_solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rk4,
    Pece,
    Exact,
    /// The hybrid-function solver itself, for self-comparison.
    Hf,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub grid: Grid,
    /// `nodes[j][i] = y_i(t_j)`.
    pub nodes: Vec<Vec<f64>>,
    pub method: Method,
}

impl OracleResult {
    /// Tabulates a closed-form solution on `grid`.
    pub fn tabulate(grid: Grid, solution: &ExactSolution) -> Self {
        let nodes = grid.nodes().into_iter().map(|t| solution.eval(t)).collect();
        Self {
            grid,
            nodes,
            method: Method::Exact,
        }
    }
}
