use hybridfrac::models::registry;
use hybridfrac::oracles::{error_report, exact_solution, pece_solve, rk4_solve, OracleResult};
use hybridfrac::{build_generalized, frac_integrate, solve_hf, Grid, HfSeries, SolveResult};
use serde_json::json;

use crate::args::{IntegrateArgs, OracleArg, RunArgs};
use crate::config::{resolve, resolve_steps, Run};
use crate::csv::{emit, sidecar, Table};
use crate::error::{CliError, CliResult};

fn node_table(run: &Run, result: &SolveResult) -> Table {
    let mut header = vec!["t".to_string()];
    header.extend(run.system.state_names().iter().cloned());
    let mut table = Table::new(header);
    for (j, row) in result.nodes.iter().enumerate() {
        let mut cells = vec![result.grid.node(j)];
        cells.extend(row);
        table.push(cells);
    }
    table
}

fn diagnostics(run: &Run, result: &SolveResult) -> serde_json::Value {
    let d = &result.diagnostics;
    json!({
        "system": run.system.name(),
        "states": run.system.state_names(),
        "orders": run.system.orders(),
        "grid": { "m": result.grid.m(), "h": result.grid.h(), "T": result.grid.horizon() },
        "mode": d.mode,
        "newton_tol": run.solve.newton_tol,
        "max_residual": d.max_residual,
        "iterations": d.iterations,
        "contraction": d.contraction,
    })
}

fn write_json(run: &Run, value: &serde_json::Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("diagnostics serialize") + "\n";
    match &run.out {
        Some(p) => std::fs::write(sidecar(p), text)?,
        None => eprint!("{text}"),
    }
    Ok(())
}

pub fn solve(args: &RunArgs) -> CliResult<()> {
    let run = resolve(args)?;
    let result = solve_hf(&run.system, &run.solve)?;
    emit(run.out.as_deref(), &node_table(&run, &result).render())?;
    write_json(&run, &diagnostics(&run, &result))
}

fn integrand(spec: &str) -> CliResult<hybridfrac::expr::Compiled> {
    let text = match spec {
        "identity" => "t",
        "unit" => "1",
        other => other,
    };
    let expr =
        hybridfrac::expr::parse(text).map_err(|e| CliError::Config(format!("function: {e}")))?;
    expr.compile(&["t".to_string()])
        .map_err(|e| CliError::Config(format!("function may only use `t`: {e}")))
}

pub fn integrate(args: &IntegrateArgs) -> CliResult<()> {
    let alpha = args
        .grid
        .alpha
        .ok_or_else(|| CliError::Config("integrate needs --alpha".into()))?;
    if args.grid.beta.is_some() || args.grid.gamma.is_some() {
        return Err(CliError::Config(
            "integrate takes a single order (--alpha)".into(),
        ));
    }
    let horizon = args.grid.horizon.unwrap_or(1.0);
    let grid = match resolve_steps(args.grid.h, args.grid.m, horizon)? {
        hybridfrac::solver::Steps::Count(m) => Grid::with_steps(horizon, m)?,
        hybridfrac::solver::Steps::Width(h) => Grid::with_step(horizon, h)?,
    };
    let f = integrand(&args.function)?;
    let series = HfSeries::from_fn(grid, |t| f.eval(&[t]));
    if series.nodes().iter().any(|v| !v.is_finite()) {
        return Err(CliError::Solver(
            "function is not finite on the grid".into(),
        ));
    }
    let result = frac_integrate(&series, &build_generalized(alpha, grid)?)?;
    let mut table = Table::new(vec!["t".into(), "f".into(), "integral".into()]);
    for j in 0..=grid.m() {
        table.push(vec![grid.node(j), series.node(j), result.node(j)]);
    }
    emit(args.out.as_deref(), &table.render())
}

fn reference(run: &Run, oracle: OracleArg, grid: Grid) -> CliResult<OracleResult> {
    Ok(match oracle {
        OracleArg::Rk4 => rk4_solve(&run.system, grid)?,
        OracleArg::Pece => pece_solve(&run.system, grid, 1)?,
        OracleArg::Exact => {
            let unit = run.system.orders().iter().all(|&a| a == 1.0);
            if run.model.as_deref() != Some("example-6.2") || !unit {
                return Err(CliError::Config(
                    "the exact oracle is available only for example-6.2 at unit orders".into(),
                ));
            }
            OracleResult::tabulate(grid, &exact_solution("example-6.2", None)?)
        }
        OracleArg::Hf => {
            let again = solve_hf(&run.system, &run.solve)?;
            OracleResult {
                grid,
                nodes: again.nodes,
                method: hybridfrac::oracles::Method::Hf,
            }
        }
    })
}

pub fn compare(args: &RunArgs) -> CliResult<()> {
    let run = resolve(args)?;
    let oracle = run.oracle.ok_or_else(|| {
        CliError::Config("compare needs --oracle (rk4, pece, exact or hf)".into())
    })?;
    let result = solve_hf(&run.system, &run.solve)?;
    let reference = reference(&run, oracle, result.grid)?;
    let report = error_report(&result.nodes, &reference.nodes)?;

    let names = run.system.state_names();
    let mut header = vec!["t".to_string()];
    header.extend(names.iter().map(|s| format!("abs_err_{s}")));
    let mut table = Table::new(header);
    for j in 0..=result.grid.m() {
        let mut row = vec![result.grid.node(j)];
        row.extend(report.states.iter().map(|s| s.abs[j]));
        table.push(row);
    }
    emit(run.out.as_deref(), &table.render())?;

    let states: Vec<_> = names
        .iter()
        .zip(&report.states)
        .map(|(name, s)| {
            json!({
                "state": name,
                "inf_norm": s.inf_norm,
                "rel_inf_norm": s.rel_inf_norm,
                "pct_error_at_T": s.pct_final,
            })
        })
        .collect();
    let summary = json!({
        "system": run.system.name(),
        "oracle": format!("{oracle:?}").to_lowercase(),
        "orders": run.system.orders(),
        "grid": { "m": result.grid.m(), "h": result.grid.h(), "T": result.grid.horizon() },
        "states": states,
        "max_inf_norm": report.max_inf_norm(),
    });
    write_json(&run, &summary)
}

pub fn models() -> CliResult<()> {
    for entry in registry() {
        println!("{}", entry.name);
        println!("  {}", entry.description);
        println!("  notes: {}", entry.notes);
        let states: Vec<String> = entry
            .states
            .iter()
            .zip(entry.default_orders)
            .zip(entry.init)
            .map(|((s, a), init)| format!("{s} (order {a}, init {init:?})"))
            .collect();
        println!("  states: {}", states.join(", "));
        if !entry.params.is_empty() {
            let params: Vec<String> = entry
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            println!("  params: {}", params.join(", "));
        }
        let rhs = entry.rhs_expressions();
        for (i, f) in rhs.iter().enumerate() {
            println!("  f{} = {f}", i + 1);
        }
        println!();
    }
    Ok(())
}
