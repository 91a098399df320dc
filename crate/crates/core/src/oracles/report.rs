use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateErrors {
    /// `|a - b|` at every node.
    pub abs: Vec<f64>,
    pub inf_norm: f64,
    /// `inf_norm / max_j |b_j|` (0 when the reference is identically 0).
    pub rel_inf_norm: f64,
    /// `100 |a - b| / |b|` at the final node (0 when both are 0).
    pub pct_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub states: Vec<StateErrors>,
}

impl ErrorReport {
    pub fn max_inf_norm(&self) -> f64 {
        self.states.iter().map(|s| s.inf_norm).fold(0.0, f64::max)
    }
}

/// Per-state error of node matrix `a` against reference `b` (rows are nodes).
pub fn error_report(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<ErrorReport> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Input(format!(
            "node matrices have {} and {} rows",
            a.len(),
            b.len()
        )));
    }
    let n = b[0].len();
    if a.iter().chain(b).any(|row| row.len() != n) {
        return Err(Error::Input(
            "node matrices have inconsistent column counts".into(),
        ));
    }
    let states = (0..n)
        .map(|i| {
            let abs: Vec<f64> = a
                .iter()
                .zip(b)
                .map(|(ra, rb)| (ra[i] - rb[i]).abs())
                .collect();
            let inf_norm = abs.iter().copied().fold(0.0, f64::max);
            let scale = b.iter().map(|r| r[i].abs()).fold(0.0, f64::max);
            let rel_inf_norm = if scale > 0.0 {
                inf_norm / scale
            } else {
                inf_norm
            };
            let last = abs.len() - 1;
            let reference = b[last][i].abs();
            let pct_final = if abs[last] == 0.0 {
                0.0
            } else {
                100.0 * abs[last] / reference
            };
            StateErrors {
                abs,
                inf_norm,
                rel_inf_norm,
                pct_final,
            }
        })
        .collect();
    Ok(ErrorReport { states })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 0.0]];
        let r = error_report(&a, &a).unwrap();
        for s in &r.states {
            assert!(s.abs.iter().all(|&e| e == 0.0));
            assert_eq!(s.inf_norm, 0.0);
            assert_eq!(s.pct_final, 0.0);
        }
    }

    #[test]
    fn constant_offset() {
        let b = vec![vec![1.0], vec![2.0], vec![4.0]];
        let a: Vec<Vec<f64>> = b.iter().map(|r| vec![r[0] + 1e-3]).collect();
        let r = error_report(&a, &b).unwrap();
        assert!((r.states[0].inf_norm - 1e-3).abs() < 1e-15);
        assert!((r.states[0].pct_final - 0.025).abs() < 1e-12);
        assert!((r.states[0].rel_inf_norm - 2.5e-4).abs() < 1e-15);
    }

    #[test]
    fn shape_mismatch() {
        assert!(error_report(&[vec![1.0]], &[vec![1.0], vec![2.0]]).is_err());
        assert!(error_report(&[vec![1.0, 2.0]], &[vec![1.0]]).is_err());
    }
}
