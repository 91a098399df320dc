//! Fractional Adams–Bashforth–Moulton predictor–corrector (Diethelm, Ford
//! and Freed, 2002).
//!
//! ```text
//! y_{k+1}^P = T(t_{k+1}) + 1/Γ(α) Σ_{j=0}^{k} b_{j,k+1} f_j
//! y_{k+1}   = T(t_{k+1}) + h^α/Γ(α+2) [ f(t_{k+1}, y_{k+1}^P) + Σ_{j=0}^{k} a_{j,k+1} f_j ]
//! ```
//!
//! with `T` the Taylor polynomial of the initial data.

use super::{Method, OracleResult};
use crate::error::{Error, Result};
use crate::gamma::gamma_fn;
use crate::hf::Grid;
use crate::system::FractionalSystem;

/// Predictor–corrector solution with `corrector_iters` corrector passes per step.
pub fn pece_solve(
    system: &FractionalSystem,
    grid: Grid,
    corrector_iters: usize,
) -> Result<OracleResult> {
    if corrector_iters == 0 || corrector_iters > 10 {
        return Err(Error::Input(format!(
            "corrector iterations must be between 1 and 10, got {corrector_iters}"
        )));
    }
    let n = system.n();
    let m = grid.m();
    let h = grid.h();
    let orders = system.orders();
    if let Some(a) = orders.iter().find(|&&a| a > 2.5) {
        return Err(Error::Input(format!(
            "order {a} exceeds the supported range (0, 2.5]"
        )));
    }

    let taylor = |i: usize, t: f64| -> f64 {
        let mut fact = 1.0;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for (k, d) in system.init()[i].iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
                pow *= t;
            }
            sum += d * pow / fact;
        }
        sum
    };

    let mut pred_scale = Vec::with_capacity(n);
    let mut corr_scale = Vec::with_capacity(n);
    for &a in orders {
        pred_scale.push(h.powf(a) / (a * gamma_fn(a)?));
        corr_scale.push(h.powf(a) / gamma_fn(a + 2.0)?);
    }

    let mut nodes: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut f_hist: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let y0: Vec<f64> = system.init().iter().map(|d| d[0]).collect();
    let mut f = vec![0.0; n];
    system.eval_rhs(0.0, &y0, &mut f)?;
    nodes.push(y0);
    f_hist.push(f.clone());

    let mut pred = vec![0.0; n];
    let mut corr_base = vec![0.0; n];
    let mut y = vec![0.0; n];
    for k in 0..m {
        let t_next = grid.node(k + 1);
        let kf = k as f64;
        for i in 0..n {
            let a = orders[i];
            let mut p = 0.0;
            let mut c = 0.0;
            for (j, fj) in f_hist.iter().enumerate() {
                let jf = j as f64;
                let b = (kf + 1.0 - jf).powf(a) - (kf - jf).powf(a);
                p += b * fj[i];
                let w = if j == 0 {
                    kf.powf(a + 1.0) - (kf - a) * (kf + 1.0).powf(a)
                } else {
                    (kf - jf + 2.0).powf(a + 1.0) + (kf - jf).powf(a + 1.0)
                        - 2.0 * (kf - jf + 1.0).powf(a + 1.0)
                };
                c += w * fj[i];
            }
            let base = taylor(i, t_next);
            pred[i] = base + pred_scale[i] * p;
            corr_base[i] = base + corr_scale[i] * c;
        }

        y.copy_from_slice(&pred);
        for _ in 0..corrector_iters {
            system.eval_rhs(t_next, &y, &mut f)?;
            for i in 0..n {
                y[i] = corr_base[i] + corr_scale[i] * f[i];
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Oracle(format!(
                "predictor-corrector diverged at step {}",
                k + 1
            )));
        }
        system.eval_rhs(t_next, &y, &mut f)?;
        nodes.push(y.clone());
        f_hist.push(f.clone());
    }
    Ok(OracleResult {
        grid,
        nodes,
        method: Method::Pece,
    })
}
