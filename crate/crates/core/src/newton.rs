//! Damped Newton iteration with a forward-difference Jacobian, sized for the
//! small per-node systems of the marching solver.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    /// Converged once the weighted max-norm of the residual is at most this.
    pub tol: f64,
    pub max_iters: usize,
    /// Relative finite-difference step.
    pub jacobian_step: f64,
    /// Step halvings attempted when a full step increases the residual.
    pub max_halvings: usize,
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Residual max-norm with each component weighted by `1 / max(1, |x_i|)`.
pub fn weighted_norm(r: &[f64], x: &[f64]) -> f64 {
    r.iter()
        .zip(x)
        .map(|(ri, xi)| ri.abs() / xi.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Solves `F(x) = 0` starting from `x0`. `node` is only used in error reports.
pub fn solve<F>(mut f: F, x0: Vec<f64>, opts: &NewtonOptions, node: usize) -> Result<NewtonOutcome>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    let n = x0.len();
    let mut x = x0;
    let mut fx = vec![0.0; n];
    f(&x, &mut fx)?;
    let mut norm = weighted_norm(&fx, &x);
    let mut trial = vec![0.0; n];
    let mut f_trial = vec![0.0; n];
    let mut probe = vec![0.0; n];
    let mut f_probe = vec![0.0; n];

    for iter in 0..opts.max_iters {
        if norm <= opts.tol {
            return Ok(NewtonOutcome {
                x,
                residual: norm,
                iterations: iter,
            });
        }

        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            probe.copy_from_slice(&x);
            let dx = opts.jacobian_step * x[k].abs().max(1.0);
            probe[k] += dx;
            let dx = probe[k] - x[k];
            f(&probe, &mut f_probe)?;
            for i in 0..n {
                jac[(i, k)] = (f_probe[i] - fx[i]) / dx;
            }
        }
        let rhs = DVector::from_iterator(n, fx.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs).ok_or(Error::Solver {
            node,
            residual: norm,
            iterations: iter,
        })?;

        let mut lambda = 1.0;
        let mut trial_norm = f64::INFINITY;
        for _ in 0..=opts.max_halvings {
            for i in 0..n {
                trial[i] = x[i] + lambda * step[i];
            }
            f(&trial, &mut f_trial)?;
            trial_norm = weighted_norm(&f_trial, &trial);
            if trial_norm < norm {
                break;
            }
            lambda *= 0.5;
        }
        if !trial_norm.is_finite() {
            return Err(Error::Solver {
                node,
                residual: norm,
                iterations: iter + 1,
            });
        }
        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut fx, &mut f_trial);
        norm = trial_norm;
    }

    if norm <= opts.tol {
        Ok(NewtonOutcome {
            x,
            residual: norm,
            iterations: opts.max_iters,
        })
    } else {
        Err(Error::Solver {
            node,
            residual: norm,
            iterations: opts.max_iters,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> NewtonOptions {
        NewtonOptions {
            tol: 1e-12,
            max_iters: 50,
            jacobian_step: 1e-7,
            max_halvings: 10,
        }
    }

    #[test]
    fn solves_nonlinear_pair() {
        // x^2 + y^2 = 4, x - y = 0
        let out = solve(
            |v, r| {
                r[0] = v[0] * v[0] + v[1] * v[1] - 4.0;
                r[1] = v[0] - v[1];
                Ok(())
            },
            vec![1.0, 0.5],
            &opts(),
            0,
        )
        .unwrap();
        let s = 2f64.sqrt();
        assert!((out.x[0] - s).abs() < 1e-12 && (out.x[1] - s).abs() < 1e-12);
        assert!(out.residual <= 1e-12);
    }

    #[test]
    fn already_converged_takes_no_iterations() {
        let out = solve(
            |v, r| {
                r[0] = v[0] - 3.0;
                Ok(())
            },
            vec![3.0],
            &opts(),
            0,
        )
        .unwrap();
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn reports_failure_with_node() {
        // no real root
        let err = solve(
            |v, r| {
                r[0] = v[0] * v[0] + 1.0;
                Ok(())
            },
            vec![0.3],
            &NewtonOptions {
                max_iters: 5,
                ..opts()
            },
            7,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Solver { node: 7, .. }));
    }
}
