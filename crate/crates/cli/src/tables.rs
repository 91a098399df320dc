//! Self-checking reproduction of the reference tables.

use std::collections::BTreeMap;
use std::fs;

use hybridfrac::models::get_model;
use hybridfrac::oracles::{error_report, exact_solution, OracleResult};
use hybridfrac::{
    build_generalized, frac_integrate, gamma_fn, solve_hf, Grid, HfSeries, SolveConfig,
};

use crate::args::TablesArgs;
use crate::csv::Table;
use crate::error::{CliError, CliResult};

const ORDERS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

/// Published error norms for example 6.2: `(1/h, e1, e2)`.
const NORMS: [(u32, f64, f64); 6] = [
    (10, 1.387236644377e-3, 6.249545001395e-3),
    (200, 3.4112473681347e-6, 1.56501446189061e-5),
    (400, 8.52796493866492e-7, 3.91255203657792e-6),
    (600, 3.79027105701368e-7, 1.73891539367865e-6),
    (800, 2.13209310206963e-7, 9.78142158158946e-7),
    (1000, 1.36458599975242e-7, 6.26012130577891e-7),
];

fn six_digits(a: f64, b: f64) -> bool {
    let unit = 10f64.powi(b.abs().log10().floor() as i32 - 5);
    (a - b).abs() <= 0.5 * unit
}

fn table1(failures: &mut Vec<String>) -> CliResult<Table> {
    let grid = Grid::new(8, 0.125)?;
    let f = HfSeries::from_fn(grid, |t| t);
    let mut header = vec!["t".to_string()];
    let mut columns = Vec::new();
    for alpha in ORDERS {
        header.extend([
            format!("hf_J{alpha}"),
            format!("exact_J{alpha}"),
            format!("abs_err_J{alpha}"),
        ]);
        let hf = frac_integrate(&f, &build_generalized(alpha, grid)?)?;
        let scale = 1.0 / gamma_fn(alpha + 2.0)?;
        columns.push((alpha, hf, scale));
    }
    let mut table = Table::new(header);
    for (j, t) in grid.nodes().into_iter().enumerate() {
        let mut row = vec![t];
        for (alpha, hf, scale) in &columns {
            let exact = t.powf(alpha + 1.0) * scale;
            let err = (hf.node(j) - exact).abs();
            if err > 1e-12 {
                failures.push(format!(
                    "table1: t={t}, order {alpha}: |error| {err:e} > 1e-12"
                ));
            }
            row.extend([hf.node(j), exact, err]);
        }
        table.push(row);
    }
    Ok(table)
}

fn table3(failures: &mut Vec<String>) -> CliResult<Table> {
    let grid = Grid::new(8, 0.125)?;
    let f = HfSeries::from_fn(grid, |t| t);
    let mut sum = HfSeries::constant(grid, 0.0);
    for k in 1..=3 {
        sum = sum.add(&frac_integrate(&f, &build_generalized(k as f64, grid)?)?)?;
    }
    let exact = exact_solution("repeated-integrals-of-t", None)?;
    let mut table = Table::new(vec![
        "t".into(),
        "hf".into(),
        "exact".into(),
        "pct_error".into(),
    ]);
    for (j, t) in grid.nodes().into_iter().enumerate() {
        let want = exact.eval(t)[0];
        let pct = if want == 0.0 {
            0.0
        } else {
            100.0 * (sum.node(j) - want).abs() / want.abs()
        };
        table.push(vec![t, sum.node(j), want, pct]);
        if j == grid.m() && pct > 1e-10 {
            failures.push(format!("table3: t=1 % error {pct:e} > 1e-10"));
        }
    }
    Ok(table)
}

fn table4(failures: &mut Vec<String>) -> CliResult<Table> {
    let system = get_model("example-6.2", &BTreeMap::new(), Some(&[1.0, 1.0]))?;
    let exact = exact_solution("example-6.2", None)?;
    let mut table = Table::new(
        ["inv_h", "h", "e1", "e2", "reference_e1", "reference_e2"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    for (inv_h, r1, r2) in NORMS {
        let result = solve_hf(&system, &SolveConfig::with_steps(inv_h as usize))?;
        let reference = OracleResult::tabulate(result.grid, &exact);
        let report = error_report(&result.nodes, &reference.nodes)?;
        let (e1, e2) = (report.states[0].inf_norm, report.states[1].inf_norm);
        let ok = if inv_h == 10 {
            six_digits(e1, r1) && six_digits(e2, r2)
        } else {
            (e1 / r1 - 1.0).abs() <= 0.01 && (e2 / r2 - 1.0).abs() <= 0.01
        };
        if !ok {
            failures.push(format!(
                "table4: h=1/{inv_h}: ({e1:e}, {e2:e}) vs ({r1:e}, {r2:e})"
            ));
        }
        table.push(vec![inv_h as f64, 1.0 / inv_h as f64, e1, e2, r1, r2]);
    }
    Ok(table)
}

pub fn run(args: &TablesArgs) -> CliResult<()> {
    fs::create_dir_all(&args.out)?;
    let mut failures = Vec::new();
    let tables = [
        ("table1.csv", table1(&mut failures)?),
        ("table3.csv", table3(&mut failures)?),
        ("table4.csv", table4(&mut failures)?),
    ];
    for (name, table) in &tables {
        let path = args.out.join(name);
        fs::write(&path, table.render())?;
        println!("wrote {}", path.display());
    }
    if failures.is_empty() {
        println!("all table bounds hold");
        Ok(())
    } else {
        Err(CliError::Bounds(failures.join("\n")))
    }
}
