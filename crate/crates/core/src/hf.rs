//! Hybrid-function representation of functions on a uniform grid.
//!
//! A function sampled at the nodes `t_i = i h`, `i = 0..=m`, is represented on
//! each subinterval `[ih, (i+1)h)` as `c_i S_i(t) + (c_{i+1} - c_i) T_i(t)`,
//! where `S_i` is the sample-and-hold pulse and `T_i` the right-handed ramp.
//! The pair of coefficient vectors `(cS, cT)` is the canonical form; the basis
//! functions themselves are never materialised.

use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform grid of `m` subintervals of width `h` covering `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    m: usize,
    h: f64,
    horizon: f64,
}

impl Grid {
    /// Grid with `m` steps of width `h`; the horizon is `m h`.
    pub fn new(m: usize, h: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Input("grid needs at least one subinterval".into()));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Input(format!(
                "step must be positive and finite, got {h}"
            )));
        }
        Ok(Self {
            m,
            h,
            horizon: m as f64 * h,
        })
    }

    /// Grid of `m` equal steps over `[0, horizon]`.
    pub fn with_steps(horizon: f64, m: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Input(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if m == 0 {
            return Err(Error::Input("grid needs at least one subinterval".into()));
        }
        Ok(Self {
            m,
            h: horizon / m as f64,
            horizon,
        })
    }

    /// Grid of step `h` over `[0, horizon]`; `horizon / h` must be an integer
    /// to within `1e-12` relative.
    pub fn with_step(horizon: f64, h: f64) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Input(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Input(format!(
                "step must be positive and finite, got {h}"
            )));
        }
        let m = (horizon / h).round();
        if m < 1.0 || (m * h - horizon).abs() > 1e-12 * horizon {
            return Err(Error::Input(format!(
                "step {h} does not divide horizon {horizon} into an integer number of subintervals"
            )));
        }
        Ok(Self {
            m: m as usize,
            h,
            horizon,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Time of node `j`.
    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    /// All node times `t_0..=t_m`.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.m).map(|j| self.node(j)).collect()
    }

    /// Same subdivision (identical `m`, `h` equal to 1e-14 relative).
    pub fn matches(&self, other: &Grid) -> bool {
        self.m == other.m && (self.h - other.h).abs() <= 1e-14 * self.h.max(other.h)
    }

    /// The first `j` subintervals of this grid.
    pub fn truncate(&self, j: usize) -> Result<Grid> {
        if j == 0 || j > self.m {
            return Err(Error::Input(format!(
                "cannot truncate a {}-step grid to {j} steps",
                self.m
            )));
        }
        Grid::new(j, self.h)
    }
}

/// A function expanded in sample-and-hold and triangular functions.
#[derive(Debug, Clone, PartialEq)]
pub struct HfSeries {
    grid: Grid,
    cs: Vec<f64>,
    ct: Vec<f64>,
    last: f64,
}

impl HfSeries {
    /// Expansion from the `m + 1` node samples `f(t_0), ..., f(t_m)`.
    pub fn from_samples(samples: &[f64], grid: Grid) -> Result<Self> {
        let m = grid.m();
        if samples.len() != m + 1 {
            return Err(Error::Input(format!(
                "expected {} samples for a {m}-step grid, got {}",
                m + 1,
                samples.len()
            )));
        }
        let cs = samples[..m].to_vec();
        let ct = samples.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            grid,
            cs,
            ct,
            last: samples[m],
        })
    }

    /// Expansion of `f` sampled at the grid nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let samples: Vec<f64> = grid.nodes().into_iter().map(f).collect();
        Self::from_samples(&samples, grid).expect("sample count matches grid")
    }

    /// Constant series.
    pub fn constant(grid: Grid, value: f64) -> Self {
        Self::from_fn(grid, |_| value)
    }

    /// Assemble from raw coefficient vectors.
    pub fn from_parts(grid: Grid, cs: Vec<f64>, ct: Vec<f64>, last: f64) -> Result<Self> {
        if cs.len() != grid.m() || ct.len() != grid.m() {
            return Err(Error::Input(format!(
                "coefficient vectors must have length {}, got {} and {}",
                grid.m(),
                cs.len(),
                ct.len()
            )));
        }
        Ok(Self { grid, cs, ct, last })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Sample-and-hold coefficients `c_0..c_{m-1}`.
    pub fn cs(&self) -> &[f64] {
        &self.cs
    }

    /// Triangular-function coefficients `c_{i+1} - c_i`.
    pub fn ct(&self) -> &[f64] {
        &self.ct
    }

    /// Value at the final node `t_m`.
    pub fn last_sample(&self) -> f64 {
        self.last
    }

    /// Value at node `j`, `0 <= j <= m`.
    pub fn node(&self, j: usize) -> f64 {
        if j < self.cs.len() {
            self.cs[j]
        } else {
            self.last
        }
    }

    /// Node values `c_0..=c_m`.
    pub fn nodes(&self) -> Vec<f64> {
        let mut v = self.cs.clone();
        v.push(self.last);
        v
    }

    /// Piecewise-linear evaluation on `[0, T]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let horizon = self.grid.horizon();
        let slack = 1e-12 * horizon;
        if !(t >= 0.0 && t <= horizon + slack) {
            return Err(Error::Domain(format!(
                "t = {t} lies outside [0, {horizon}]"
            )));
        }
        let h = self.grid.h();
        let x = t / h;
        let nearest = x.round();
        if (x - nearest).abs() <= 1e-9 {
            return Ok(self.node((nearest as usize).min(self.grid.m())));
        }
        let i = x.floor() as usize;
        if i >= self.grid.m() {
            return Ok(self.last);
        }
        let frac = (t - i as f64 * h) / h;
        Ok(self.cs[i] + self.ct[i] * frac)
    }

    fn check_grid(&self, other: &HfSeries) -> Result<()> {
        if self.grid.matches(&other.grid) {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "grid mismatch: (m = {}, h = {}) vs (m = {}, h = {})",
                self.grid.m(),
                self.grid.h(),
                other.grid.m(),
                other.grid.h()
            )))
        }
    }

    pub fn add(&self, other: &HfSeries) -> Result<HfSeries> {
        self.check_grid(other)?;
        Ok(HfSeries {
            grid: self.grid,
            cs: zip_with(&self.cs, &other.cs, |a, b| a + b),
            ct: zip_with(&self.ct, &other.ct, |a, b| a + b),
            last: self.last + other.last,
        })
    }

    pub fn scale(&self, k: f64) -> HfSeries {
        HfSeries {
            grid: self.grid,
            cs: self.cs.iter().map(|c| c * k).collect(),
            ct: self.ct.iter().map(|c| c * k).collect(),
            last: self.last * k,
        }
    }

    /// Product of two expansions.
    ///
    /// `cS = a.cS * b.cS` and `cT = a.cS * b.cT + a.cT * b.cS + a.cT * b.cT`
    /// (all elementwise), so node values of the product are the products of
    /// node values.
    pub fn multiply(&self, other: &HfSeries) -> Result<HfSeries> {
        self.check_grid(other)?;
        let cs = zip_with(&self.cs, &other.cs, |a, b| a * b);
        let ct = (0..self.cs.len())
            .map(|i| {
                let (as_, at) = (self.cs[i], self.ct[i]);
                let (bs, bt) = (other.cs[i], other.ct[i]);
                as_ * bt + at * bs + at * bt
            })
            .collect();
        Ok(HfSeries {
            grid: self.grid,
            cs,
            ct,
            last: self.last * other.last,
        })
    }

    /// `n`-th power: node values are raised to `n` and the triangular
    /// coefficients are the differences of the powered node values.
    pub fn power(&self, n: u32) -> HfSeries {
        let exp = n as i32;
        let powered: Vec<f64> = self.nodes().into_iter().map(|c| c.powi(exp)).collect();
        HfSeries::from_samples(&powered, self.grid).expect("node count preserved")
    }
}

fn zip_with(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// Closed-form inner products of the basis functions over `[0, T)`.
///
/// The pulses and ramps of different subintervals have disjoint supports, so
/// every off-diagonal entry vanishes.
#[derive(Debug, Clone, Copy)]
pub struct BasisGram {
    grid: Grid,
}

impl BasisGram {
    pub fn new(grid: Grid) -> Self {
        Self { grid }
    }

    /// `∫ S_i S_j dt`.
    pub fn ss(&self, i: usize, j: usize) -> f64 {
        if i == j && i < self.grid.m() {
            self.grid.h()
        } else {
            0.0
        }
    }

    /// `∫ T_i T_j dt`.
    pub fn tt(&self, i: usize, j: usize) -> f64 {
        if i == j && i < self.grid.m() {
            self.grid.h() / 3.0
        } else {
            0.0
        }
    }

    /// `∫ S_i T_j dt`.
    pub fn st(&self, i: usize, j: usize) -> f64 {
        if i == j && i < self.grid.m() {
            self.grid.h() / 2.0
        } else {
            0.0
        }
    }
}

/// Basis inner-product table for `grid`.
pub fn inner_products(grid: Grid) -> BasisGram {
    BasisGram::new(grid)
}
