use super::{Method, OracleResult};
use crate::error::{Error, Result};
use crate::hf::Grid;
use crate::system::FractionalSystem;

/// Classical four-stage Runge–Kutta on a uniform grid; every order must be 1.
pub fn rk4_solve(system: &FractionalSystem, grid: Grid) -> Result<OracleResult> {
    if let Some(a) = system.orders().iter().find(|&&a| a != 1.0) {
        return Err(Error::Input(format!(
            "RK4 needs every order equal to 1, found {a}"
        )));
    }
    let n = system.n();
    let h = grid.h();
    let mut y: Vec<f64> = system.init().iter().map(|d| d[0]).collect();
    let mut nodes = Vec::with_capacity(grid.m() + 1);
    nodes.push(y.clone());

    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    for j in 0..grid.m() {
        let t = grid.node(j);
        system.eval_rhs(t, &y, &mut k1)?;
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        system.eval_rhs(t + 0.5 * h, &tmp, &mut k2)?;
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        system.eval_rhs(t + 0.5 * h, &tmp, &mut k3)?;
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        system.eval_rhs(t + h, &tmp, &mut k4)?;
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Oracle(format!("RK4 diverged at step {}", j + 1)));
        }
        nodes.push(y.clone());
    }
    Ok(OracleResult {
        grid,
        nodes,
        method: Method::Rk4,
    })
}
