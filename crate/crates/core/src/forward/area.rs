use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{derivative, Interpolant, RealGrid};

/// Sound speed and air density in cgs units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub c: f64,
    pub mu: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { c: 3.43e4, mu: 1.2e-3 }
    }
}

impl PhysicalConstants {
    pub fn new(c: f64, mu: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite() && mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidInput("c and mu must be positive".into()));
        }
        Ok(Self { c, mu })
    }

    /// `c·μ`, the characteristic impedance of a unit-area tube.
    pub fn c_mu(&self) -> f64 {
        self.c * self.mu
    }
}

/// Cross-sectional area on `[0, l]` with endpoint slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaFunction {
    grid: RealGrid,
    values: Vec<f64>,
    d_a0: f64,
    d_al: f64,
}

/// Area and slope at the two ends of the duct.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuctEnds {
    pub a0: f64,
    pub al: f64,
    pub dal: f64,
}

impl AreaFunction {
    /// Samples on a grid starting at 0; missing end slopes are estimated by
    /// second-order one-sided differences.
    pub fn new(grid: RealGrid, values: Vec<f64>, d_a0: Option<f64>, d_al: Option<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidInput("area values do not match the grid".into()));
        }
        if grid.first() != 0.0 {
            return Err(Error::InvalidGrid("area grid must start at x = 0".into()));
        }
        if grid.len() < 4 {
            return Err(Error::InvalidGrid("area grid needs at least four points".into()));
        }
        for (x, a) in grid.points().iter().zip(&values) {
            if !a.is_finite() {
                return Err(Error::InvalidInput(format!("area is not finite at x = {x}")));
            }
            if *a <= 0.0 {
                return Err(Error::NonpositiveArea { x: *x });
            }
        }
        let x = grid.points();
        let n = x.len();
        let d_a0 = d_a0.unwrap_or_else(|| one_sided(x[0], x[1], x[2], values[0], values[1], values[2]));
        let d_al = d_al.unwrap_or_else(|| {
            one_sided(x[n - 1], x[n - 2], x[n - 3], values[n - 1], values[n - 2], values[n - 3])
        });
        if !(d_a0.is_finite() && d_al.is_finite()) {
            return Err(Error::InvalidInput("endpoint slopes must be finite".into()));
        }
        Ok(Self { grid, values, d_a0, d_al })
    }

    /// Uniform samples of `a` on `[0, l]` with exact end slopes from `da`.
    pub fn from_fn(l: f64, n: usize, a: impl Fn(f64) -> f64, da: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = RealGrid::uniform(0.0, l, n)?;
        let values = grid.points().iter().map(|&x| a(x)).collect();
        Self::new(grid, values, Some(da(0.0)), Some(da(l)))
    }

    pub fn grid(&self) -> &RealGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn length(&self) -> f64 {
        self.grid.last()
    }

    pub fn d_a0(&self) -> f64 {
        self.d_a0
    }

    pub fn d_al(&self) -> f64 {
        self.d_al
    }

    pub fn ends(&self) -> DuctEnds {
        DuctEnds { a0: self.values[0], al: *self.values.last().unwrap(), dal: self.d_al }
    }

    /// `λ·A`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.values.iter().map(|a| lambda * a).collect(),
            Some(lambda * self.d_a0),
            Some(lambda * self.d_al),
        )
    }

    /// `A′` on the grid, with the stored end slopes at the ends.
    pub fn slope(&self) -> Vec<f64> {
        let mut d = derivative(&self.grid, &self.values);
        let n = d.len();
        d[0] = self.d_a0;
        d[n - 1] = self.d_al;
        d
    }

    pub fn interpolant(&self) -> Interpolant {
        Interpolant::new(&self.grid, &self.values)
    }
}

/// Slope at `x0` of the quadratic through three nodes.
fn one_sided(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    y0 * ((x0 - x1) + (x0 - x2)) / ((x0 - x1) * (x0 - x2))
        + y1 * (x0 - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (x0 - x1) / ((x2 - x0) * (x2 - x1))
}

/// Sampled `Q(x)` on `[0, l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub grid: RealGrid,
    pub values: Vec<f64>,
}

impl Potential {
    pub fn new(grid: RealGrid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidInput("potential values do not match the grid".into()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: RealGrid, q: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&x| q(x)).collect();
        Self::new(grid, values)
    }

    pub fn zero(l: f64, n: usize) -> Result<Self> {
        Self::from_fn(RealGrid::uniform(0.0, l, n)?, |_| 0.0)
    }

    pub fn length(&self) -> f64 {
        self.grid.last()
    }

    /// Trapezoid `∫|Q|`.
    pub fn l1_norm(&self) -> f64 {
        let x = self.grid.points();
        x.windows(2)
            .zip(self.values.windows(2))
            .map(|(xs, q)| 0.5 * (xs[1] - xs[0]) * (q[0].abs() + q[1].abs()))
            .sum()
    }

    pub fn interpolant(&self) -> Interpolant {
        Interpolant::new(&self.grid, &self.values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryParameter {
    pub cot_alpha: f64,
}

/// `Q = (√A)″/√A` and `cot α = −A′(0)/(2A(0))`.
pub fn area_to_potential(area: &AreaFunction) -> Result<(Potential, BoundaryParameter)> {
    let x = area.grid.points();
    let n = x.len();
    let s: Vec<f64> = area.values.iter().map(|a| a.sqrt()).collect();
    let ds0 = area.d_a0 / (2.0 * s[0]);
    let dsl = area.d_al / (2.0 * s[n - 1]);
    let mut q = vec![0.0; n];
    if let (Some(h), true) = (area.grid.spacing(), n >= 6) {
        let h2 = 12.0 * h * h;
        for i in 2..n - 2 {
            q[i] = (-s[i - 2] + 16.0 * s[i - 1] - 30.0 * s[i] + 16.0 * s[i + 1] - s[i + 2]) / h2;
        }
        // fourth-order one-sided stencils at the two nodes next to each end
        let edge0 = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
        let edge1 = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
        let dot = |w: &[f64; 6], at: &dyn Fn(usize) -> f64| (0..6).map(|j| w[j] * at(j)).sum::<f64>() / h2;
        q[0] = dot(&edge0, &|j| s[j]);
        q[1] = dot(&edge1, &|j| s[j]);
        q[n - 1] = dot(&edge0, &|j| s[n - 1 - j]);
        q[n - 2] = dot(&edge1, &|j| s[n - 1 - j]);
    } else if let Some(h) = area.grid.spacing() {
        let h2 = h * h;
        for i in 1..n - 1 {
            q[i] = (s[i - 1] - 2.0 * s[i] + s[i + 1]) / h2;
        }
        // second order with the known end slope
        q[0] = (8.0 * s[1] - s[2] - 7.0 * s[0] - 6.0 * h * ds0) / (2.0 * h2);
        q[n - 1] = (8.0 * s[n - 2] - s[n - 3] - 7.0 * s[n - 1] + 6.0 * h * dsl) / (2.0 * h2);
    } else {
        for i in 0..n {
            let c = i.clamp(1, n - 2);
            let (a, b, d) = (c - 1, c, c + 1);
            q[i] = 2.0
                * (s[a] / ((x[a] - x[b]) * (x[a] - x[d]))
                    + s[b] / ((x[b] - x[a]) * (x[b] - x[d]))
                    + s[d] / ((x[d] - x[a]) * (x[d] - x[b])));
        }
    }
    for (qi, si) in q.iter_mut().zip(&s) {
        *qi /= si;
    }
    let cot_alpha = -area.d_a0 / (2.0 * area.values[0]);
    Ok((Potential::new(area.grid.clone(), q)?, BoundaryParameter { cot_alpha }))
}
