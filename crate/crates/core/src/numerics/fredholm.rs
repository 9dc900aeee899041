//! Second-kind Fredholm equations `u + r + ∫ K u = 0` by trapezoid Nyström.

use nalgebra::{DMatrix, DVector};

use super::grid::{RealGrid, RealSamples};
use crate::error::{Error, Result};

pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FredholmSolution {
    pub u: RealSamples,
    /// `‖u + r + Ku‖ / ‖r‖` on the nodes.
    pub relative_residual: f64,
}

pub fn trapezoid_weights(points: &[f64]) -> Vec<f64> {
    let n = points.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = points[i + 1] - points[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    w
}

/// Dense Nyström solve with a direct LU factorization.
pub fn fredholm_solve(
    kernel: impl Fn(f64, f64) -> f64,
    rhs: &RealSamples,
    domain: &RealGrid,
) -> Result<FredholmSolution> {
    if rhs.grid != *domain {
        return Err(Error::InvalidGrid("rhs must be sampled on the domain grid".into()));
    }
    let s = domain.points();
    let n = s.len();
    let w = trapezoid_weights(s);
    let k = DMatrix::from_fn(n, n, |i, j| kernel(s[i], s[j]));
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("kernel is not finite on the domain".into()));
    }
    let a = DMatrix::from_fn(n, n, |i, j| (if i == j { 1.0 } else { 0.0 }) + k[(i, j)] * w[j]);
    let r = DVector::from_column_slice(&rhs.values);
    let lu = a.clone().lu();
    let u = match lu.solve(&(-&r)) {
        Some(u) if u.iter().all(|v| v.is_finite()) => u,
        _ => return Err(Error::Singular { condition: condition_estimate(&a) }),
    };
    let res = &a * &u + &r;
    let scale = r.norm().max(f64::MIN_POSITIVE);
    let relative_residual = if r.norm() == 0.0 { res.norm() } else { res.norm() / scale };
    if relative_residual > RESIDUAL_TOLERANCE {
        return Err(Error::Residual { residual: relative_residual, tolerance: RESIDUAL_TOLERANCE });
    }
    Ok(FredholmSolution { u: RealSamples::new(domain.clone(), u.iter().copied().collect())?, relative_residual })
}

fn condition_estimate(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Inverse of a growing symmetric matrix `B`, kept current under diagonal
/// changes (Sherman–Morrison) and appended nodes (bordering).
#[derive(Debug, Clone)]
pub struct GrowingInverse {
    cap: usize,
    n: usize,
    inv: Vec<f64>,
}

impl GrowingInverse {
    pub fn with_capacity(cap: usize) -> Self {
        Self { cap, n: 0, inv: vec![0.0; cap * cap] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inv[i * self.cap + j]
    }

    /// `B_ii += delta`.
    pub fn update_diagonal(&mut self, i: usize, delta: f64) -> Result<()> {
        let n = self.n;
        let cap = self.cap;
        let col: Vec<f64> = (0..n).map(|r| self.inv[r * cap + i]).collect();
        let denom = 1.0 + delta * col[i];
        if denom.abs() < 1e-14 || !denom.is_finite() {
            return Err(Error::Singular { condition: f64::INFINITY });
        }
        let f = delta / denom;
        for r in 0..n {
            let cr = f * col[r];
            let row = &mut self.inv[r * cap..r * cap + n];
            for (x, c) in row.iter_mut().zip(&col) {
                *x -= cr * c;
            }
        }
        Ok(())
    }

    /// Append a node with coupling `b` to the existing nodes and diagonal `d`.
    pub fn append(&mut self, b: &[f64], d: f64) -> Result<()> {
        let n = self.n;
        if n + 1 > self.cap {
            return Err(Error::InvalidInput("growing inverse capacity exceeded".into()));
        }
        let cap = self.cap;
        let u = self.matvec(b);
        let sigma = d - b.iter().zip(&u).map(|(x, y)| x * y).sum::<f64>();
        if sigma.abs() < 1e-14 * d.abs().max(1.0) || !sigma.is_finite() {
            return Err(Error::Singular { condition: d.abs() / sigma.abs().max(f64::MIN_POSITIVE) });
        }
        for r in 0..n {
            let ur = u[r] / sigma;
            let row = &mut self.inv[r * cap..r * cap + n];
            for (x, uc) in row.iter_mut().zip(&u) {
                *x += ur * uc;
            }
            self.inv[r * cap + n] = -ur;
            self.inv[n * cap + r] = -ur;
        }
        self.inv[n * cap + n] = 1.0 / sigma;
        self.n = n + 1;
        Ok(())
    }

    /// `B⁻¹ v`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        let cap = self.cap;
        (0..n)
            .map(|r| self.inv[r * cap..r * cap + n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}
