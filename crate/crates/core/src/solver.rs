//! Hybrid-function solver for Caputo systems.
//!
//! Each state is written `y_i = y_{i,0}(t) + z_i(t)` with `y_{i,0}` the Taylor
//! polynomial of its initial data, turning the system into Volterra equations
//! `z_i = J^{α_i} f_i(t, y)` with zero initial conditions. Expanding `z_i` and
//! `f_i` in hybrid functions and applying the generalized operational matrices
//! gives one coefficient equation per node.
//!
//! The sample-and-hold matrices have zero diagonals, so node `j` depends only on
//! the right-hand side at nodes `0..=j`. [`Mode::Marching`] exploits this and
//! solves an `n`-dimensional Newton problem per node; [`Mode::GlobalFixedPoint`]
//! iterates the full coefficient system and serves as a cross-check.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bound::{estimate_lipschitz, ContractionReport, LipschitzSource};
use crate::error::{Error, Result};
use crate::hf::{Grid, HfSeries};
use crate::newton::{self, weighted_norm, NewtonOptions};
use crate::opmat::{build_generalized, frac_integrate, OpMatrixSet};
use crate::system::{FractionalSystem, ShiftPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Marching,
    GlobalFixedPoint,
}

/// Grid resolution: either a subinterval count or a step width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Steps {
    Count(usize),
    Width(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub steps: Steps,
    /// Residual tolerance, absolute for states of magnitude up to one and
    /// relative above that.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub jacobian_step: f64,
    pub mode: Mode,
    /// Sweep limit for [`Mode::GlobalFixedPoint`].
    pub max_sweeps: usize,
    /// Lipschitz constant for the contraction diagnostic; estimated when `None`.
    pub lipschitz: Option<f64>,
}

impl SolveConfig {
    pub fn with_steps(m: usize) -> Self {
        Self {
            steps: Steps::Count(m),
            ..Self::default()
        }
    }

    pub fn with_step(h: f64) -> Self {
        Self {
            steps: Steps::Width(h),
            ..Self::default()
        }
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.newton_tol = tol;
        self
    }

    pub fn grid(&self, horizon: f64) -> Result<Grid> {
        match self.steps {
            Steps::Count(m) => Grid::with_steps(horizon, m),
            Steps::Width(h) => Grid::with_step(horizon, h),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.newton_tol > 0.0) {
            return Err(Error::Input(format!(
                "tolerance must be positive, got {}",
                self.newton_tol
            )));
        }
        if self.max_newton_iters == 0 {
            return Err(Error::Input(
                "at least one Newton iteration is required".into(),
            ));
        }
        if !(self.jacobian_step > 0.0) {
            return Err(Error::Input(format!(
                "Jacobian step must be positive, got {}",
                self.jacobian_step
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::Input("at least one sweep is required".into()));
        }
        if let Some(l) = self.lipschitz {
            if !(l >= 0.0) {
                return Err(Error::Input(format!(
                    "Lipschitz constant must be nonnegative, got {l}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            steps: Steps::Count(100),
            newton_tol: 1e-12,
            max_newton_iters: 50,
            jacobian_step: 1e-7,
            mode: Mode::Marching,
            max_sweeps: 2000,
            lipschitz: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub mode: Mode,
    /// Newton iterations per node (marching) or the sweep count at every node (global).
    pub iterations: Vec<usize>,
    pub max_residual: f64,
    pub contraction: ContractionReport,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub grid: Grid,
    /// `nodes[j][i] = y_i(t_j)`.
    pub nodes: Vec<Vec<f64>>,
    /// Hybrid-function expansions of the remainders `z_i = y_i - y_{i,0}`.
    pub series: Vec<HfSeries>,
    pub shift: Vec<ShiftPolynomial>,
    pub diagnostics: Diagnostics,
}

impl SolveResult {
    /// Approximate `y_i(t)` anywhere on `[0, T]`.
    pub fn eval(&self, state: usize, t: f64) -> Result<f64> {
        Ok(self.shift[state].eval(t) + self.series[state].eval(t)?)
    }

    /// Column of node values for one state.
    pub fn state(&self, i: usize) -> Vec<f64> {
        self.nodes.iter().map(|row| row[i]).collect()
    }
}

/// Operational matrices for each distinct order of the system.
struct OrderTable {
    mats: Vec<OpMatrixSet>,
    /// Index into `mats` per state.
    of_state: Vec<usize>,
}

impl OrderTable {
    fn new(orders: &[f64], grid: Grid) -> Result<Self> {
        let mut by_bits: BTreeMap<u64, usize> = BTreeMap::new();
        let mut mats = Vec::new();
        let mut of_state = Vec::with_capacity(orders.len());
        for &a in orders {
            let idx = match by_bits.get(&a.to_bits()) {
                Some(&i) => i,
                None => {
                    mats.push(build_generalized(a, grid)?);
                    by_bits.insert(a.to_bits(), mats.len() - 1);
                    mats.len() - 1
                }
            };
            of_state.push(idx);
        }
        Ok(Self { mats, of_state })
    }

    fn for_state(&self, i: usize) -> &OpMatrixSet {
        &self.mats[self.of_state[i]]
    }
}

/// Solves `system` on `[0, T]` with the hybrid-function method.
pub fn solve_hf(system: &FractionalSystem, config: &SolveConfig) -> Result<SolveResult> {
    config.validate()?;
    let grid = config.grid(system.horizon())?;
    let table = OrderTable::new(system.orders(), grid)?;
    let shift = system.initial_shift();

    let (nodes, iterations, max_residual) = match config.mode {
        Mode::Marching => march(system, config, grid, &table, &shift)?,
        Mode::GlobalFixedPoint => global(system, config, grid, &table, &shift)?,
    };

    let n = system.n();
    let series = (0..n)
        .map(|i| {
            let z: Vec<f64> = nodes
                .iter()
                .enumerate()
                .map(|(j, row)| row[i] - shift[i].eval(grid.node(j)))
                .collect();
            HfSeries::from_samples(&z, grid)
        })
        .collect::<Result<Vec<_>>>()?;

    let (lipschitz, source) = match config.lipschitz {
        Some(l) => (l, LipschitzSource::Supplied),
        None => (
            estimate_lipschitz(system, &nodes, config.jacobian_step)?,
            LipschitzSource::Heuristic,
        ),
    };
    let contraction = ContractionReport::new(system, lipschitz, source)?;

    Ok(SolveResult {
        grid,
        nodes,
        series,
        shift,
        diagnostics: Diagnostics {
            mode: config.mode,
            iterations,
            max_residual,
            contraction,
        },
    })
}

type Solved = (Vec<Vec<f64>>, Vec<usize>, f64);

fn initial_row(system: &FractionalSystem) -> Vec<f64> {
    system.init().iter().map(|d| d[0]).collect()
}

fn march(
    system: &FractionalSystem,
    config: &SolveConfig,
    grid: Grid,
    table: &OrderTable,
    shift: &[ShiftPolynomial],
) -> Result<Solved> {
    let n = system.n();
    let m = grid.m();
    let opts = NewtonOptions {
        tol: config.newton_tol,
        max_iters: config.max_newton_iters,
        jacobian_step: config.jacobian_step,
        max_halvings: 10,
    };

    let mut nodes = Vec::with_capacity(m + 1);
    // rhs[i][k] = f_i(t_k, y_k)
    let mut rhs: Vec<Vec<f64>> = vec![Vec::with_capacity(m + 1); n];
    let mut iterations = Vec::with_capacity(m + 1);
    let mut max_residual: f64 = 0.0;

    let y0 = initial_row(system);
    let mut f = vec![0.0; n];
    system.eval_rhs(0.0, &y0, &mut f)?;
    for i in 0..n {
        rhs[i].push(f[i]);
    }
    nodes.push(y0);
    iterations.push(0);

    let mut known = vec![0.0; n];
    let mut weight = vec![0.0; n];
    for j in 1..=m {
        let t = grid.node(j);
        for i in 0..n {
            let mats = table.for_state(i);
            known[i] = shift[i].eval(t) + mats.node_history(&rhs[i], j);
            weight[i] = mats.implicit_weight(j);
        }
        let guess: Vec<f64> = (0..n)
            .map(|i| known[i] + weight[i] * rhs[i][j - 1])
            .collect();
        let mut fy = vec![0.0; n];
        let out = newton::solve(
            |y, r| {
                system.eval_rhs(t, y, &mut fy)?;
                for i in 0..n {
                    r[i] = y[i] - known[i] - weight[i] * fy[i];
                }
                Ok(())
            },
            guess,
            &opts,
            j,
        )?;
        system.eval_rhs(t, &out.x, &mut f)?;
        for i in 0..n {
            rhs[i].push(f[i]);
        }
        max_residual = max_residual.max(out.residual);
        iterations.push(out.iterations);
        nodes.push(out.x);
    }
    Ok((nodes, iterations, max_residual))
}

fn global(
    system: &FractionalSystem,
    config: &SolveConfig,
    grid: Grid,
    table: &OrderTable,
    shift: &[ShiftPolynomial],
) -> Result<Solved> {
    let n = system.n();
    let m = grid.m();
    let shift_nodes: Vec<Vec<f64>> = (0..=m)
        .map(|j| shift.iter().map(|p| p.eval(grid.node(j))).collect())
        .collect();
    let mut nodes = shift_nodes.clone();
    nodes[0] = initial_row(system);

    let mut rhs = vec![vec![0.0; m + 1]; n];
    let mut f = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for sweep in 1..=config.max_sweeps {
        for (j, row) in nodes.iter().enumerate() {
            system.eval_rhs(grid.node(j), row, &mut f)?;
            for i in 0..n {
                rhs[i][j] = f[i];
            }
        }
        let mut next = shift_nodes.clone();
        for i in 0..n {
            let e = HfSeries::from_samples(&rhs[i], grid)?;
            let z = frac_integrate(&e, table.for_state(i))?;
            for (j, row) in next.iter_mut().enumerate().skip(1) {
                row[i] += z.node(j);
            }
        }
        next[0] = nodes[0].clone();
        residual = nodes
            .iter()
            .zip(&next)
            .map(|(old, new)| {
                let diff: Vec<f64> = old.iter().zip(new).map(|(a, b)| a - b).collect();
                weighted_norm(&diff, new)
            })
            .fold(0.0, f64::max);
        nodes = next;
        if !residual.is_finite() {
            break;
        }
        if residual <= config.newton_tol {
            return Ok((nodes, vec![sweep; m + 1], residual));
        }
    }
    Err(Error::Solver {
        node: m,
        residual,
        iterations: config.max_sweeps,
    })
}
