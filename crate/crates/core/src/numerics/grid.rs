use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing sample locations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealGrid {
    points: Vec<f64>,
    spacing: Option<f64>,
}

impl RealGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid("need at least two points".into()));
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("points must be strictly increasing".into()));
        }
        let n = points.len();
        let h = (points[n - 1] - points[0]) / (n - 1) as f64;
        let scale = points[0].abs().max(points[n - 1].abs());
        let uniform = points
            .iter()
            .enumerate()
            .all(|(i, p)| (p - (points[0] + i as f64 * h)).abs() <= 1e-11 * scale.max(h));
        Ok(Self { points, spacing: uniform.then_some(h) })
    }

    /// `n` uniformly spaced points on `[a, b]`.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::InvalidGrid(format!("bad uniform grid [{a}, {b}] with {n} points")));
        }
        let h = (b - a) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| a + i as f64 * h).collect();
        points[n - 1] = b;
        Ok(Self { points, spacing: Some(h) })
    }

    /// Points `j*h` for `j = -n..=n` with `h = kmax/n`.
    pub fn symmetric(kmax: f64, n: usize) -> Result<Self> {
        if n < 1 || !(kmax > 0.0) {
            return Err(Error::InvalidGrid("symmetric grid needs n >= 1 and kmax > 0".into()));
        }
        let h = kmax / n as f64;
        let points = (0..=2 * n).map(|j| (j as f64 - n as f64) * h).collect();
        Ok(Self { points, spacing: Some(h) })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> Option<f64> {
        self.spacing
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Uniform, odd length and mirrored about zero.
    pub fn is_symmetric(&self) -> bool {
        let n = self.points.len();
        self.spacing.is_some()
            && n % 2 == 1
            && self.points[n / 2].abs() <= 1e-12 * self.last()
            && (self.points[0] + self.points[n - 1]).abs() <= 1e-12 * self.last()
    }

    /// Nonnegative half of a symmetric grid, starting at zero.
    pub fn half_start(&self) -> usize {
        self.points.len() / 2
    }
}

/// Real values on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSamples {
    pub grid: RealGrid,
    pub values: Vec<f64>,
}

impl RealSamples {
    pub fn new(grid: RealGrid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: RealGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Complex values on a grid with a free-text kind tag.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSamples {
    pub grid: RealGrid,
    pub values: Vec<Complex64>,
    pub kind: String,
}

impl ComplexSamples {
    pub fn new(grid: RealGrid, values: Vec<Complex64>, kind: impl Into<String>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values, kind: kind.into() })
    }

    pub fn from_fn(grid: RealGrid, kind: &str, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self::new(grid, values, kind)
    }

    pub fn re(&self) -> RealSamples {
        RealSamples { grid: self.grid.clone(), values: self.values.iter().map(|v| v.re).collect() }
    }

    pub fn im(&self) -> RealSamples {
        RealSamples { grid: self.grid.clone(), values: self.values.iter().map(|v| v.im).collect() }
    }

    pub fn norm(&self) -> RealSamples {
        RealSamples { grid: self.grid.clone(), values: self.values.iter().map(|v| v.norm()).collect() }
    }
}

/// Even or odd symmetry about k = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Largest deviation from the requested parity, relative to the largest value.
pub fn parity_defect(samples: &RealSamples, parity: Parity) -> Result<f64> {
    if !samples.grid.is_symmetric() {
        return Err(Error::InvalidGrid("expected a uniform grid symmetric about zero".into()));
    }
    let v = &samples.values;
    let n = v.len();
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let dev = (0..n).fold(0.0f64, |m, i| m.max((v[i] - sign * v[n - 1 - i]).abs()));
    Ok(dev / samples.max_abs().max(f64::MIN_POSITIVE))
}
