use crate::error::{Error, Result};
use crate::gamma::gamma_fn;

/// Closed-form reference solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactSolution {
    /// `J^α t = t^{1+α} / Γ(2+α)`.
    FracIntegralOfT { alpha: f64, scale: f64 },
    /// `(e^t sin t, e^t cos t)`, the unit-order solution of `x' = x + y, y' = -x + y`.
    Example62,
    /// `t²/2 + t³/6 + t⁴/24`, the sum of the first three repeated integrals of `t`.
    RepeatedIntegralsOfT,
}

impl ExactSolution {
    pub fn eval(&self, t: f64) -> Vec<f64> {
        match *self {
            ExactSolution::FracIntegralOfT { alpha, scale } => vec![t.powf(1.0 + alpha) * scale],
            ExactSolution::Example62 => {
                let e = t.exp();
                vec![e * t.sin(), e * t.cos()]
            }
            ExactSolution::RepeatedIntegralsOfT => {
                let t2 = t * t;
                vec![t2 / 2.0 + t2 * t / 6.0 + t2 * t2 / 24.0]
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ExactSolution::Example62 => 2,
            _ => 1,
        }
    }
}

/// Names: `frac-integral-of-t` (needs `alpha`), `example-6.2`, `repeated-integrals-of-t`.
pub fn exact_solution(name: &str, alpha: Option<f64>) -> Result<ExactSolution> {
    match name {
        "frac-integral-of-t" => {
            let alpha = alpha.ok_or_else(|| {
                Error::Input("frac-integral-of-t needs an integration order".into())
            })?;
            if !(alpha > 0.0) {
                return Err(Error::Domain(format!(
                    "order must be positive, got {alpha}"
                )));
            }
            Ok(ExactSolution::FracIntegralOfT {
                alpha,
                scale: 1.0 / gamma_fn(2.0 + alpha)?,
            })
        }
        "example-6.2" => Ok(ExactSolution::Example62),
        "repeated-integrals-of-t" => Ok(ExactSolution::RepeatedIntegralsOfT),
        other => Err(Error::Lookup(format!(
            "no closed-form solution named `{other}`"
        ))),
    }
}
