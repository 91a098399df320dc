//! Run configuration: a JSON file merged with command-line flags (flags win).
//!
//! ```json
//! {
//!   "model": "smoking",            // or "system": { "states": [...] }
//!   "params": { "beta": 2.5 },
//!   "orders": [1, 1, 1, 1, 1],
//!   "T": 1, "h": 0.002,            // or "m": 500
//!   "mode": "marching", "tol": 1e-12,
//!   "oracle": "rk4", "out": "run.csv"
//! }
//! ```
//!
//! An inline system lists states as `{ "name", "order", "init", "rhs" }`;
//! right-hand sides may use `t`, `y1..yN` and the keys of `params`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use hybridfrac::expr::parse;
use hybridfrac::models::get_model;
use hybridfrac::solver::Steps;
use hybridfrac::system::ExprRhs;
use hybridfrac::{FractionalSystem, Mode, SolveConfig};
use serde::Deserialize;

use crate::args::{GridArgs, ModeArg, OracleArg, RunArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    model: Option<String>,
    system: Option<InlineSystem>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    orders: Option<Vec<f64>>,
    #[serde(rename = "T")]
    horizon: Option<f64>,
    h: Option<f64>,
    m: Option<usize>,
    mode: Option<FileMode>,
    tol: Option<f64>,
    max_newton_iters: Option<usize>,
    lipschitz: Option<f64>,
    oracle: Option<FileOracle>,
    out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InlineSystem {
    name: Option<String>,
    states: Vec<StateSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateSpec {
    name: String,
    order: Option<f64>,
    init: Option<Vec<f64>>,
    rhs: String,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FileMode {
    Marching,
    Global,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FileOracle {
    Rk4,
    Pece,
    Exact,
    Hf,
}

/// A fully resolved run.
pub struct Run {
    pub system: FractionalSystem,
    pub solve: SolveConfig,
    pub oracle: Option<OracleArg>,
    pub out: Option<PathBuf>,
    /// Built-in model name, if the system came from the library.
    pub model: Option<String>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| config_err(format!("invalid config {}: {e}", path.display())))
}

fn parse_param(spec: &str) -> CliResult<(String, f64)> {
    let (k, v) = spec
        .split_once('=')
        .ok_or_else(|| config_err(format!("parameter `{spec}` is not of the form NAME=VALUE")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| config_err(format!("parameter `{k}` has a non-numeric value `{v}`")))?;
    Ok((k.trim().to_string(), v))
}

/// Applies `--alpha/--beta/--gamma`: `--alpha` alone sets every state,
/// otherwise the three flags address states 1, 2 and 3.
pub fn apply_order_flags(orders: &mut [f64], grid: &GridArgs) -> CliResult<()> {
    if grid.beta.is_none() && grid.gamma.is_none() {
        if let Some(a) = grid.alpha {
            orders.iter_mut().for_each(|o| *o = a);
        }
        return Ok(());
    }
    let n = orders.len();
    for (idx, (flag, value)) in [
        ("alpha", grid.alpha),
        ("beta", grid.beta),
        ("gamma", grid.gamma),
    ]
    .into_iter()
    .enumerate()
    {
        if let Some(v) = value {
            let slot = orders.get_mut(idx).ok_or_else(|| {
                config_err(format!(
                    "--{flag} sets the order of state {}, but the system has {}",
                    idx + 1,
                    n
                ))
            })?;
            *slot = v;
        }
    }
    Ok(())
}

/// Resolves grid resolution from `h`, `m` and the horizon.
pub fn resolve_steps(h: Option<f64>, m: Option<usize>, horizon: f64) -> CliResult<Steps> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(config_err(format!(
            "horizon T must be positive, got {horizon}"
        )));
    }
    if let Some(h) = h {
        if !(h > 0.0 && h.is_finite()) {
            return Err(config_err(format!(
                "step width h must be positive, got {h}"
            )));
        }
    }
    if m == Some(0) {
        return Err(config_err("step count m must be at least 1"));
    }
    match (h, m) {
        (Some(h), Some(m)) => {
            if (m as f64 * h - horizon).abs() > 1e-12 * horizon {
                Err(config_err(format!(
                    "h = {h} and m = {m} do not cover T = {horizon}"
                )))
            } else {
                Ok(Steps::Count(m))
            }
        }
        (Some(h), None) => Ok(Steps::Width(h)),
        (None, Some(m)) => Ok(Steps::Count(m)),
        (None, None) => Ok(Steps::Count(100)),
    }
}

fn inline_system(
    spec: &InlineSystem,
    params: &BTreeMap<String, f64>,
    grid: &GridArgs,
) -> CliResult<FractionalSystem> {
    if spec.states.is_empty() {
        return Err(config_err("inline system has no states"));
    }
    let n = spec.states.len();
    let mut allowed: Vec<String> = vec!["t".into()];
    allowed.extend((1..=n).map(|i| format!("y{i}")));
    allowed.extend(params.keys().cloned());

    let mut orders = Vec::with_capacity(n);
    let mut init = Vec::with_capacity(n);
    let mut exprs = Vec::with_capacity(n);
    for (i, s) in spec.states.iter().enumerate() {
        let order = s.order.ok_or_else(|| {
            config_err(format!(
                "state {} (`{}`) is missing its order",
                i + 1,
                s.name
            ))
        })?;
        orders.push(order);
        init.push(s.init.clone().ok_or_else(|| {
            config_err(format!(
                "state {} (`{}`) is missing its initial values",
                i + 1,
                s.name
            ))
        })?);
        let expr =
            parse(&s.rhs).map_err(|e| config_err(format!("rhs of state `{}`: {e}", s.name)))?;
        if let Some(v) = expr.variables().into_iter().find(|v| !allowed.contains(v)) {
            return Err(config_err(format!(
                "rhs of state `{}` uses unbound variable `{v}` (allowed: t, y1..y{n}, declared params)",
                s.name
            )));
        }
        exprs.push(expr);
    }
    apply_order_flags(&mut orders, grid)?;
    let params: Vec<(String, f64)> = params.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let rhs = Arc::new(ExprRhs::new(&exprs, &params)?);
    let names = spec.states.iter().map(|s| s.name.clone()).collect();
    let name = spec.name.clone().unwrap_or_else(|| "inline".into());
    Ok(FractionalSystem::new(name, names, orders, init, 1.0, rhs)?)
}

pub fn resolve(args: &RunArgs) -> CliResult<Run> {
    let file = match &args.config {
        Some(p) => load_file(p)?,
        None => FileConfig::default(),
    };

    let mut params = file.params.clone();
    for spec in &args.params {
        let (k, v) = parse_param(spec)?;
        params.insert(k, v);
    }

    let model = args.model.clone().or(file.model.clone());
    let system = match (&model, &file.system) {
        (Some(_), Some(_)) if args.model.is_none() => {
            return Err(config_err(
                "config names both a model and an inline system; give exactly one",
            ))
        }
        (Some(name), _) => {
            let probe = get_model(name, &BTreeMap::new(), None)?;
            let mut orders = file
                .orders
                .clone()
                .unwrap_or_else(|| probe.orders().to_vec());
            if orders.len() != probe.n() {
                return Err(config_err(format!(
                    "model `{name}` has {} states but {} orders were given",
                    probe.n(),
                    orders.len()
                )));
            }
            apply_order_flags(&mut orders, &args.grid)?;
            get_model(name, &params, Some(&orders))?
        }
        (None, Some(spec)) => {
            if file.orders.is_some() {
                return Err(config_err(
                    "`orders` applies to built-in models; give inline orders per state",
                ));
            }
            inline_system(spec, &params, &args.grid)?
        }
        (None, None) => {
            return Err(config_err(
                "no system given: use --model or a config with `model` or `system`",
            ))
        }
    };

    let horizon = args
        .grid
        .horizon
        .or(file.horizon)
        .unwrap_or(system.horizon());
    let steps = match (args.grid.h, args.grid.m) {
        (None, None) => resolve_steps(file.h, file.m, horizon)?,
        (h, m) => resolve_steps(h, m, horizon)?,
    };
    let system = system.with_horizon(horizon)?;

    let mode = match (args.mode, file.mode) {
        (Some(ModeArg::Global), _) | (None, Some(FileMode::Global)) => Mode::GlobalFixedPoint,
        _ => Mode::Marching,
    };
    let mut solve = SolveConfig {
        steps,
        mode,
        lipschitz: file.lipschitz,
        ..SolveConfig::default()
    };
    if let Some(tol) = args.tol.or(file.tol) {
        if !(tol > 0.0) {
            return Err(config_err(format!("tolerance must be positive, got {tol}")));
        }
        solve.newton_tol = tol;
    }
    if let Some(k) = file.max_newton_iters {
        solve.max_newton_iters = k;
    }

    let oracle = args.oracle.or(file.oracle.map(|o| match o {
        FileOracle::Rk4 => OracleArg::Rk4,
        FileOracle::Pece => OracleArg::Pece,
        FileOracle::Exact => OracleArg::Exact,
        FileOracle::Hf => OracleArg::Hf,
    }));

    Ok(Run {
        system,
        solve,
        oracle,
        out: args.out.clone().or(file.out),
        model,
    })
}
