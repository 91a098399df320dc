//! Systems `D^{α_i} y_i = f_i(t, y_1, ..., y_n)` with Caputo derivatives.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{Compiled, Expr};

/// Vector-valued right-hand side `f(t, y)`.
pub trait Rhs: Send + Sync {
    /// Writes `f_i(t, y)` into `out[i]`.
    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) -> Result<()>;
}

/// Right-hand side backed by a closure.
pub struct FnRhs<F>(pub F);

impl<F> Rhs for FnRhs<F>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()> + Send + Sync,
{
    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        (self.0)(t, y, out)
    }
}

/// Right-hand side defined by one parsed expression per state.
///
/// Expressions may reference `t`, the states `y1..yN`, and the named
/// parameters given at construction.
pub struct ExprRhs {
    exprs: Vec<Compiled>,
    params: Vec<f64>,
    n: usize,
}

impl ExprRhs {
    pub fn new(exprs: &[Expr], params: &[(String, f64)]) -> Result<Self> {
        let n = exprs.len();
        let mut names: Vec<String> = vec!["t".into()];
        names.extend((1..=n).map(|i| format!("y{i}")));
        for (p, _) in params {
            if names.contains(p) {
                return Err(Error::Input(format!(
                    "parameter `{p}` shadows a built-in variable"
                )));
            }
            names.push(p.clone());
        }
        let exprs = exprs
            .iter()
            .map(|e| e.compile(&names))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self {
            exprs,
            params: params.iter().map(|(_, v)| *v).collect(),
            n,
        })
    }

    pub fn parse(sources: &[&str], params: &[(String, f64)]) -> Result<Self> {
        let exprs = sources
            .iter()
            .map(|s| crate::expr::parse(s))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(&exprs, params)
    }
}

impl Rhs for ExprRhs {
    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        let mut vars = Vec::with_capacity(1 + self.n + self.params.len());
        vars.push(t);
        vars.extend_from_slice(&y[..self.n]);
        vars.extend_from_slice(&self.params);
        for (o, e) in out.iter_mut().zip(&self.exprs) {
            *o = e.eval(&vars);
        }
        Ok(())
    }
}

/// A system of fractional differential equations with initial data.
#[derive(Clone)]
pub struct FractionalSystem {
    name: String,
    state_names: Vec<String>,
    orders: Vec<f64>,
    init: Vec<Vec<f64>>,
    horizon: f64,
    rhs: Arc<dyn Rhs>,
}

impl fmt::Debug for FractionalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FractionalSystem")
            .field("name", &self.name)
            .field("state_names", &self.state_names)
            .field("orders", &self.orders)
            .field("init", &self.init)
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

/// Number of initial values a Caputo derivative of order `alpha` requires.
pub fn init_count(alpha: f64) -> usize {
    alpha.ceil().max(1.0) as usize
}

impl FractionalSystem {
    /// `init[i]` holds `y_i(0), y_i'(0), ...` with exactly `ceil(orders[i])` entries.
    pub fn new(
        name: impl Into<String>,
        state_names: Vec<String>,
        orders: Vec<f64>,
        init: Vec<Vec<f64>>,
        horizon: f64,
        rhs: Arc<dyn Rhs>,
    ) -> Result<Self> {
        let n = orders.len();
        if n == 0 {
            return Err(Error::Input("system needs at least one state".into()));
        }
        if init.len() != n || state_names.len() != n {
            return Err(Error::Input(format!(
                "{n} orders but {} initial-data rows and {} state names",
                init.len(),
                state_names.len()
            )));
        }
        for (i, (&a, data)) in orders.iter().zip(&init).enumerate() {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::Input(format!(
                    "order of state {} must be positive, got {a}",
                    i + 1
                )));
            }
            if data.len() != init_count(a) {
                return Err(Error::Input(format!(
                    "state {} has order {a} and needs {} initial value(s), got {}",
                    i + 1,
                    init_count(a),
                    data.len()
                )));
            }
            if data.iter().any(|v| !v.is_finite()) {
                return Err(Error::Input(format!(
                    "state {} has non-finite initial data",
                    i + 1
                )));
            }
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Input(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        Ok(Self {
            name: name.into(),
            state_names,
            orders,
            init,
            horizon,
            rhs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn orders(&self) -> &[f64] {
        &self.orders
    }

    pub fn init(&self) -> &[Vec<f64>] {
        &self.init
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Copy of the system with a different horizon.
    pub fn with_horizon(&self, horizon: f64) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.state_names.clone(),
            self.orders.clone(),
            self.init.clone(),
            horizon,
            self.rhs.clone(),
        )
    }

    pub fn rhs(&self) -> &Arc<dyn Rhs> {
        &self.rhs
    }

    /// Evaluates the right-hand side and rejects non-finite results.
    pub fn eval_rhs(&self, t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        self.rhs.eval(t, y, out)?;
        if let Some(i) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::Model {
                t,
                msg: format!("right-hand side of state {} is {}", i + 1, out[i]),
            });
        }
        Ok(())
    }

    /// Taylor polynomials `y_{i,0}(t) = Σ_k y_i^{(k)}(0) t^k / k!`.
    pub fn initial_shift(&self) -> Vec<ShiftPolynomial> {
        self.init.iter().map(|d| ShiftPolynomial::new(d)).collect()
    }
}

/// Polynomial carrying a state's initial data, so that the remainder
/// `z = y - y_0` starts from zero together with its first `ceil(α) - 1`
/// derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftPolynomial {
    /// Monomial coefficients `y^{(k)}(0) / k!`.
    coeffs: Vec<f64>,
}

impl ShiftPolynomial {
    pub fn new(derivatives: &[f64]) -> Self {
        let mut fact = 1.0;
        let coeffs = derivatives
            .iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 0 {
                    fact *= k as f64;
                }
                d / fact
            })
            .collect();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}
