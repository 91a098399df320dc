//! # hybridfrac
//!
//! Numerical solution of systems of Caputo fractional differential equations
//!
//! ```text
//! D^{α_i} y_i(t) = f_i(t, y_1(t), ..., y_n(t)),   i = 1..n
//! ```
//!
//! using hybrid orthogonal functions: sample-and-hold pulses combined with
//! right-handed triangular ramps. A function is represented by its node
//! samples and their first differences, and Riemann–Liouville integration of
//! any positive order becomes a product with four upper-triangular Toeplitz
//! operational matrices.
//!
//! ## Layout
//!
//! - [`hf`]: grids, hybrid-function series and their algebra
//! - [`opmat`]: first-order and generalized operational matrices, fractional integration
//! - [`solver`]: the marching / global coefficient solver and its diagnostics
//! - [`bound`]: the contraction-bound convergence diagnostic
//! - [`oracles`]: RK4, fractional Adams–Bashforth–Moulton, closed forms, error reports
//! - [`models`]: ready-made systems (test problems and epidemiological models)
//! - [`expr`]: arithmetic expressions for user-defined right-hand sides
//!
//! ## Example
//!
//! ```
//! use hybridfrac::models::get_model;
//! use hybridfrac::solver::{solve_hf, SolveConfig};
//!
//! let system = get_model("example-6.2", &Default::default(), Some(&[1.0, 1.0])).unwrap();
//! let result = solve_hf(&system, &SolveConfig::with_step(0.1)).unwrap();
//! let x1 = result.nodes.last().unwrap()[0];
//! assert!((x1 - 1f64.exp() * 1f64.sin()).abs() < 1.4e-3);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod convergence;
pub mod error;
pub mod expr;
pub mod gamma;
pub mod hf;
pub mod models;
pub mod newton;
pub mod opmat;
pub mod oracles;
pub mod solver;
pub mod system;

pub use error::{Error, Result};
pub use gamma::gamma_fn;
pub use hf::{Grid, HfSeries};
pub use opmat::{build_first_order, build_generalized, frac_integrate, OpMatrixSet, UpperToeplitz};
pub use solver::{solve_hf, Mode, SolveConfig, SolveResult};
pub use system::{FractionalSystem, Rhs};
