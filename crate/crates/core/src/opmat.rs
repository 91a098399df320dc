//! One-shot operational matrices for (fractional) integration in the
//! hybrid-function domain.
//!
//! Each matrix is upper-triangular Toeplitz and is stored as its first row.
//! For a series with coefficients `(cS, cT)` the Riemann–Liouville integral
//! of order `alpha` has coefficients
//!
//! ```text
//! cS' = cS·Pss + cT·Pts
//! cT' = cS·Pst + cT·Ptt
//! ```
//!
//! The rows are built from exact node samples of `J^alpha S_i` and
//! `J^alpha T_i`, so the result is node-exact for any piecewise-linear input.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::gamma_pos;
use crate::hf::{Grid, HfSeries};

/// Past this index the coefficient sequences switch from direct power
/// differences to binomial series in `1/k`.
const DIRECT_LIMIT: usize = 32;

/// Upper-triangular Toeplitz matrix `M[i][j] = r[j - i]` for `j >= i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperToeplitz {
    first_row: Vec<f64>,
}

impl UpperToeplitz {
    pub fn new(first_row: Vec<f64>) -> Self {
        Self { first_row }
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if j >= i {
            self.first_row[j - i]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let m = self.dim();
        (0..m)
            .map(|i| (0..m).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Row vector times matrix: `out[j] = Σ_{i<=j} v[i] r[j-i]`.
    pub fn row_mul(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(
            v.len(),
            self.dim(),
            "row vector length must match matrix size"
        );
        let r = &self.first_row;
        (0..v.len())
            .map(|j| (0..=j).map(|i| v[i] * r[j - i]).sum())
            .collect()
    }

    fn scaled(scale: f64, lead: f64, tail: impl Iterator<Item = f64>, m: usize) -> Self {
        let mut row = Vec::with_capacity(m);
        row.push(scale * lead);
        row.extend(tail.take(m - 1).map(|c| scale * c));
        Self { first_row: row }
    }
}

/// The four operational matrices for integration of order `alpha` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpMatrixSet {
    alpha: f64,
    grid: Grid,
    /// `S -> S` block.
    pub pss: UpperToeplitz,
    /// `S -> T` block.
    pub pst: UpperToeplitz,
    /// `T -> S` block.
    pub pts: UpperToeplitz,
    /// `T -> T` block.
    pub ptt: UpperToeplitz,
}

impl OpMatrixSet {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Weight of the sample `e_j` in [`node_value`](Self::node_value) at node `j >= 1`.
    pub fn implicit_weight(&self, j: usize) -> f64 {
        let m = self.grid.m();
        debug_assert!(j >= 1 && j <= m);
        if j < m {
            self.pts.first_row[1]
        } else {
            self.pts.first_row[0] + self.ptt.first_row[0]
        }
    }

    /// Node `j` of the integral of the series with node samples `e_0..e_{j-1}`
    /// and `e_j = 0`.
    ///
    /// Nodes `1..m-1` come from the sample-and-hold coefficient equation, node
    /// `m` from the triangular one. Adding `implicit_weight(j) * e_j` yields the
    /// full node value.
    pub fn node_history(&self, prev: &[f64], j: usize) -> f64 {
        let m = self.grid.m();
        debug_assert!(j >= 1 && j <= m && prev.len() >= j);
        let e = |k: usize| if k < j { prev[k] } else { 0.0 };
        if j < m {
            let (ss, ts) = (&self.pss.first_row, &self.pts.first_row);
            (0..j)
                .map(|k| e(k) * ss[j - k] + (e(k + 1) - e(k)) * ts[j - k])
                .sum()
        } else {
            let (ss, st) = (&self.pss.first_row, &self.pst.first_row);
            let (ts, tt) = (&self.pts.first_row, &self.ptt.first_row);
            (0..m)
                .map(|k| {
                    let d = m - 1 - k;
                    e(k) * (ss[d] + st[d]) + (e(k + 1) - e(k)) * (ts[d] + tt[d])
                })
                .sum()
        }
    }

    /// Node `j` of the integral of the series with node samples `samples[0..=j]`.
    pub fn node_value(&self, samples: &[f64], j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        self.node_history(&samples[..j], j) + self.implicit_weight(j) * samples[j]
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "integration order must be positive, got {alpha}"
        )))
    }
}

/// Classical first-order integration matrices.
pub fn build_first_order(grid: Grid) -> OpMatrixSet {
    let m = grid.m();
    let h = grid.h();
    let ones = std::iter::repeat(1.0);
    let zeros = std::iter::repeat(0.0);
    OpMatrixSet {
        alpha: 1.0,
        grid,
        pss: UpperToeplitz::scaled(h, 0.0, ones.clone(), m),
        pst: UpperToeplitz::scaled(h, 1.0, zeros.clone(), m),
        pts: UpperToeplitz::scaled(h / 2.0, 0.0, ones, m),
        ptt: UpperToeplitz::scaled(h / 2.0, 1.0, zeros, m),
    }
}

/// Generalized one-shot matrices for the Riemann–Liouville integral of order `alpha`.
pub fn build_generalized(alpha: f64, grid: Grid) -> Result<OpMatrixSet> {
    check_alpha(alpha)?;
    let m = grid.m();
    let ha = grid.h().powf(alpha);
    let s1 = ha / gamma_pos(alpha + 1.0);
    let s2 = ha / gamma_pos(alpha + 2.0);
    let seq = Sequences::new(alpha);
    Ok(OpMatrixSet {
        alpha,
        grid,
        pss: UpperToeplitz::scaled(s1, 0.0, (1..).map(|k| seq.varsigma(k)), m),
        pst: UpperToeplitz::scaled(s1, 1.0, (1..).map(|k| seq.xi(k)), m),
        pts: UpperToeplitz::scaled(s2, 0.0, (1..).map(|k| seq.phi(k)), m),
        ptt: UpperToeplitz::scaled(s2, 1.0, (1..).map(|k| seq.psi(k)), m),
    })
}

/// Integral of order `mats.alpha()` of `series` in the hybrid-function domain.
pub fn frac_integrate(series: &HfSeries, mats: &OpMatrixSet) -> Result<HfSeries> {
    if !series.grid().matches(mats.grid()) {
        return Err(Error::Input(format!(
            "series grid (m = {}) does not match operational matrices (m = {})",
            series.grid().m(),
            mats.grid().m()
        )));
    }
    let (cs, ct) = (series.cs(), series.ct());
    let new_cs: Vec<f64> = add(&mats.pss.row_mul(cs), &mats.pts.row_mul(ct));
    let new_ct: Vec<f64> = add(&mats.pst.row_mul(cs), &mats.ptt.row_mul(ct));
    let m = new_cs.len();
    let last = new_cs[m - 1] + new_ct[m - 1];
    HfSeries::from_parts(*series.grid(), new_cs, new_ct, last)
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Coefficient sequences ς, ξ, φ, ψ for one order.
///
/// For `k <= DIRECT_LIMIT` they are evaluated straight from their power
/// definitions; beyond that as `k^a` times a binomial series in `x = 1/k`,
/// which avoids subtracting nearly equal powers.
#[derive(Debug, Clone, Copy)]
pub struct Sequences {
    alpha: f64,
}

impl Sequences {
    pub fn new(alpha: f64) -> Self {
        Self { alpha }
    }

    /// `ς_k = k^α − (k−1)^α`.
    pub fn varsigma(&self, k: usize) -> f64 {
        let a = self.alpha;
        let kf = k as f64;
        if k <= DIRECT_LIMIT {
            return kf.powf(a) - (kf - 1.0).powf(a);
        }
        // 1 − (1 − x)^α = −Σ_{j≥1} C(α, j) (−x)^j
        let x = 1.0 / kf;
        let s = series_sum(1, |j| -binom(a, j) * (-x).powi(j as i32));
        kf.powf(a) * s
    }

    /// `ξ_k = (k+1)^α − 2k^α + (k−1)^α`.
    pub fn xi(&self, k: usize) -> f64 {
        let a = self.alpha;
        let kf = k as f64;
        if k <= DIRECT_LIMIT {
            return (kf + 1.0).powf(a) - 2.0 * kf.powf(a) + (kf - 1.0).powf(a);
        }
        // (1 + x)^α + (1 − x)^α − 2 = 2 Σ_{j≥1} C(α, 2j) x^{2j}
        let x = 1.0 / kf;
        let s = series_sum(1, |j| 2.0 * binom(a, 2 * j) * x.powi(2 * j as i32));
        kf.powf(a) * s
    }

    /// `φ_k = k^{α+1} − (k−1)^α (k+α)`.
    pub fn phi(&self, k: usize) -> f64 {
        let a = self.alpha;
        let kf = k as f64;
        if k <= DIRECT_LIMIT {
            return kf.powf(a + 1.0) - (kf - 1.0).powf(a) * (kf + a);
        }
        // 1 − (1 − x)^α (1 + αx) = −Σ_{j≥2} b_j x^j
        let x = 1.0 / kf;
        let s = series_sum(2, |j| -self.b(j) * x.powi(j as i32));
        kf.powf(a + 1.0) * s
    }

    /// `ψ_k = (k+1)^{α+1} − (k+1+α)k^α − k^{α+1} + (k+α)(k−1)^α`.
    pub fn psi(&self, k: usize) -> f64 {
        let a = self.alpha;
        let kf = k as f64;
        if k <= DIRECT_LIMIT {
            return (kf + 1.0).powf(a + 1.0) - (kf + 1.0 + a) * kf.powf(a) - kf.powf(a + 1.0)
                + (kf + a) * (kf - 1.0).powf(a);
        }
        // (1+x)^{α+1} − (1 + (1+α)x) − 1 + (1+αx)(1−x)^α = Σ_{j≥2} (C(α+1, j) + b_j) x^j
        let x = 1.0 / kf;
        let s = series_sum(2, |j| (binom(a + 1.0, j) + self.b(j)) * x.powi(j as i32));
        kf.powf(a + 1.0) * s
    }

    /// Coefficient of `x^j` in `(1 − x)^α (1 + αx)`.
    fn b(&self, j: usize) -> f64 {
        let a = self.alpha;
        let sign = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        let aj = sign(j) * binom(a, j);
        let aj1 = if j >= 1 {
            sign(j - 1) * binom(a, j - 1)
        } else {
            0.0
        };
        aj + a * aj1
    }
}

/// Generalized binomial coefficient `C(a, j)`.
fn binom(a: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (a - i as f64) / (i as f64 + 1.0))
}

/// Sums `term(j)` from `start` until terms fall below double precision of the sum.
fn series_sum(start: usize, term: impl Fn(usize) -> f64) -> f64 {
    let mut sum = 0.0;
    for j in start..start + 64 {
        let t = term(j);
        sum += t;
        if t.abs() <= 1e-18 * sum.abs() && j > start + 1 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(m: usize, h: f64) -> Grid {
        Grid::new(m, h).unwrap()
    }

    #[test]
    fn first_order_rows() {
        let p = build_first_order(grid(3, 0.5));
        assert_eq!(p.pss.first_row(), &[0.0, 0.5, 0.5]);
        assert_eq!(p.pst.first_row(), &[0.5, 0.0, 0.0]);
        assert_eq!(p.pts.first_row(), &[0.0, 0.25, 0.25]);
        assert_eq!(p.ptt.first_row(), &[0.25, 0.0, 0.0]);
        assert_eq!(p.alpha(), 1.0);
    }

    #[test]
    fn dense_layout() {
        let t = UpperToeplitz::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(
            t.to_dense(),
            vec![
                vec![1.0, 2.0, 3.0],
                vec![0.0, 1.0, 2.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
        assert_eq!(t.row_mul(&[1.0, 1.0, 1.0]), vec![1.0, 3.0, 6.0]);
    }

    #[test]
    fn leading_sequence_terms() {
        for alpha in [0.3, 0.5, 1.0, 1.7, 2.4] {
            let s = Sequences::new(alpha);
            assert!((s.varsigma(1) - 1.0).abs() < 1e-15);
            assert!((s.phi(1) - 1.0).abs() < 1e-15);
        }
        let s = Sequences::new(0.5);
        assert!((s.varsigma(2) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((s.xi(1) - (2f64.sqrt() - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn order_one_second_differences_vanish() {
        let s = Sequences::new(1.0);
        for k in 1..200 {
            assert_eq!(s.xi(k), 0.0, "xi_{k}");
            assert_eq!(s.psi(k), 0.0, "psi_{k}");
        }
    }

    // Reference values computed with 40-digit arithmetic from the power definitions.
    #[test]
    fn series_branch_matches_high_precision() {
        let cases: &[(f64, usize, [f64; 4])] = &[
            (
                0.5,
                33,
                [
                    0.08770839704564846,
                    -0.0013191487383766537,
                    0.06594997776020924,
                    -0.0009968585819819908,
                ],
            ),
            (
                0.5,
                1000,
                [
                    0.015815343125576774,
                    -7.905696620951668e-06,
                    0.011862496297666511,
                    -5.93075478423164e-06,
                ],
            ),
            (
                0.5,
                5000,
                [
                    0.0070714214006158274,
                    -7.071067900253824e-07,
                    0.005303654452069761,
                    -5.3035660902395e-07,
                ],
            ),
            (
                2.4,
                777,
                [
                    26693.732411142562,
                    48.14017564583997,
                    45365.70889373785,
                    81.83127686390954,
                ],
            ),
        ];
        for &(alpha, k, want) in cases {
            let s = Sequences::new(alpha);
            let got = [s.varsigma(k), s.xi(k), s.phi(k), s.psi(k)];
            for (g, w) in got.iter().zip(want) {
                let rel = ((g - w) / w).abs();
                assert!(
                    rel < 1e-13,
                    "alpha {alpha}, k {k}: got {g}, want {w} (rel {rel:e})"
                );
            }
        }
    }

    #[test]
    fn branch_switch_is_continuous() {
        for alpha in [0.2, 0.6, 0.95, 1.3, 2.4] {
            let s = Sequences::new(alpha);
            let k = DIRECT_LIMIT + 1;
            let kf = k as f64;
            let direct_phi = kf.powf(alpha + 1.0) - (kf - 1.0).powf(alpha) * (kf + alpha);
            let rel = ((s.phi(k) - direct_phi) / direct_phi).abs();
            assert!(rel < 1e-10, "alpha {alpha}: rel {rel:e}");
        }
    }

    #[test]
    fn generalized_leading_entries() {
        let g = grid(8, 0.125);
        for alpha in [0.5, 1.5, 2.0] {
            let p = build_generalized(alpha, g).unwrap();
            let ha = 0.125f64.powf(alpha);
            assert_eq!(p.pss.first_row()[0], 0.0);
            assert_eq!(p.pts.first_row()[0], 0.0);
            let g1 = statrs::function::gamma::gamma(alpha + 1.0);
            let g2 = statrs::function::gamma::gamma(alpha + 2.0);
            assert!((p.pst.first_row()[0] - ha / g1).abs() < 1e-14 * ha / g1);
            assert!((p.ptt.first_row()[0] - ha / g2).abs() < 1e-14 * ha / g2);
        }
    }

    #[test]
    fn rejects_nonpositive_order() {
        assert!(matches!(
            build_generalized(0.0, grid(4, 0.25)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            build_generalized(-0.5, grid(4, 0.25)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn integrate_constant_is_node_exact() {
        let g = grid(8, 0.125);
        let p = build_generalized(0.5, g).unwrap();
        let out = frac_integrate(&HfSeries::constant(g, 1.0), &p).unwrap();
        let gam = statrs::function::gamma::gamma(1.5);
        for (j, v) in out.nodes().iter().enumerate() {
            let want = g.node(j).powf(0.5) / gam;
            assert!((v - want).abs() <= 1e-14, "node {j}: {v} vs {want}");
        }
    }

    #[test]
    fn integrate_grid_mismatch() {
        let p = build_generalized(0.5, grid(8, 0.125)).unwrap();
        let s = HfSeries::constant(grid(4, 0.25), 1.0);
        assert!(matches!(frac_integrate(&s, &p), Err(Error::Input(_))));
    }

    #[test]
    fn node_value_agrees_with_matrix_product() {
        let g = grid(12, 1.0 / 12.0);
        for alpha in [0.4, 1.0, 1.8] {
            let p = build_generalized(alpha, g).unwrap();
            let s = HfSeries::from_fn(g, |t| (3.0 * t).sin() + t * t);
            let full = frac_integrate(&s, &p).unwrap();
            let samples = s.nodes();
            for j in 0..=g.m() {
                let v = p.node_value(&samples, j);
                assert!((v - full.node(j)).abs() < 1e-15, "alpha {alpha}, node {j}");
            }
        }
    }
}
