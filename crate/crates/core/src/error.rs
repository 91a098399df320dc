use thiserror::Error;

use crate::expr::ExprError;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: wrong lengths, mismatched grids, invalid configuration.
    #[error("input error: {0}")]
    Input(String),

    /// A numeric argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Unknown model, parameter, or named solution.
    #[error("lookup error: {0}")]
    Lookup(String),

    /// The right-hand side produced a non-finite value or rejected its input.
    #[error("model error at t = {t}: {msg}")]
    Model { t: f64, msg: String },

    /// Newton (or the global sweep) failed to reach the residual tolerance.
    #[error("solver failed at node {node}: residual {residual:e} after {iterations} iterations")]
    Solver {
        node: usize,
        residual: f64,
        iterations: usize,
    },

    /// A reference method produced a non-finite value.
    #[error("oracle error: {0}")]
    Oracle(String),

    #[error(transparent)]
    Expr(#[from] ExprError),
}

pub type Result<T> = std::result::Result<T, Error>;
