//! High-k behaviour: limit estimation and closed-form rational tails.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::grid::RealSamples;
use crate::error::{Error, Result};

/// Asymptotic model fitted over the top quartile of the positive grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailModel {
    /// `a + b/k`
    ConstantPlusInverseK,
    /// `a + b/k^2 + c/k^4`, for quantities even in k.
    EvenInversePowers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    pub limit: f64,
    pub coefficients: Vec<f64>,
    /// RMS misfit over the window relative to `|limit|`.
    pub residual: f64,
    pub converged: bool,
}

pub const TAIL_RESIDUAL_THRESHOLD: f64 = 1e-3;

pub fn tail_limit(samples: &RealSamples, model: TailModel) -> Result<TailFit> {
    let pts = samples.grid.points();
    let pos: Vec<usize> = (0..pts.len()).filter(|&i| pts[i] > 0.0).collect();
    let m = pos.len() / 4;
    if m < 3 {
        return Err(Error::InvalidInput("tail window needs at least 3 positive points".into()));
    }
    let window = &pos[pos.len() - m..];
    let k0 = pts[window[0]];
    let powers: &[i32] = match model {
        TailModel::ConstantPlusInverseK => &[0, 1],
        TailModel::EvenInversePowers => &[0, 2, 4],
    };
    let a = DMatrix::from_fn(m, powers.len(), |r, c| (k0 / pts[window[r]]).powi(powers[c]));
    let b = DVector::from_iterator(m, window.iter().map(|&i| samples.values[i]));
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidInput(format!("tail fit failed: {e}")))?;
    let r = &a * &x - &b;
    let limit = x[0];
    let rms = (r.norm_squared() / m as f64).sqrt();
    let residual = rms / limit.abs().max(f64::MIN_POSITIVE);
    let coefficients = x.iter().zip(powers).map(|(c, &p)| c * k0.powi(p)).collect();
    Ok(TailFit { limit, coefficients, residual, converged: residual <= TAIL_RESIDUAL_THRESHOLD })
}

/// `even[0]/(t²+β²) + even[1]/(t²+β²)² + odd[0] t/(t²+β²) + odd[1] t/(t²+β²)²`.
///
/// Real on the real axis; its Schwarz extension and Fourier transform are
/// available in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalTail {
    pub beta: f64,
    pub even: [f64; 2],
    pub odd: [f64; 2],
}

impl RationalTail {
    pub fn zero() -> Self {
        Self { beta: 1.0, even: [0.0; 2], odd: [0.0; 2] }
    }

    /// Least-squares fit over `0.75·T ≤ |t| ≤ T` on a symmetric grid.
    pub fn fit(samples: &RealSamples, beta: f64) -> Self {
        let pts = samples.grid.points();
        let n = pts.len();
        let t_max = pts[n - 1];
        let idx: Vec<usize> = (n / 2 + 1..n).filter(|&i| pts[i] >= 0.75 * t_max).collect();
        if idx.len() < 4 {
            return Self::zero();
        }
        let b2 = beta * beta;
        let fit2 = |basis: &dyn Fn(f64) -> [f64; 2], target: &dyn Fn(usize) -> f64| -> [f64; 2] {
            let rows = idx.len();
            let scale = [basis(t_max)[0].abs(), basis(t_max)[1].abs()];
            let a = DMatrix::from_fn(rows, 2, |r, c| basis(pts[idx[r]])[c] / scale[c]);
            let y = DVector::from_iterator(rows, idx.iter().map(|&i| target(i)));
            if y.amax() == 0.0 {
                return [0.0; 2];
            }
            match a.svd(true, true).solve(&y, 1e-13) {
                Ok(x) => [x[0] / scale[0], x[1] / scale[1]],
                Err(_) => [0.0; 2],
            }
        };
        let v = &samples.values;
        let even = fit2(
            &|t| {
                let d = t * t + b2;
                [1.0 / d, 1.0 / (d * d)]
            },
            &|i| 0.5 * (v[i] + v[n - 1 - i]),
        );
        let odd = fit2(
            &|t| {
                let d = t * t + b2;
                [t / d, t / (d * d)]
            },
            &|i| 0.5 * (v[i] - v[n - 1 - i]),
        );
        Self { beta, even, odd }
    }

    pub fn value(&self, t: f64) -> f64 {
        let d = t * t + self.beta * self.beta;
        self.even[0] / d + self.even[1] / (d * d) + self.odd[0] * t / d + self.odd[1] * t / (d * d)
    }

    /// Boundary value of the function analytic in the upper half plane whose
    /// real part on the axis is `value`.
    pub fn schwarz(&self, k: Complex64) -> Complex64 {
        let b = self.beta;
        let i = Complex64::i();
        let p = k + i * b;
        let p2 = p * p;
        self.even[0] * i / (b * p)
            + self.even[1] * (-1.0 / (2.0 * b * b * p2) + i / (2.0 * b * b * b * p))
            + self.odd[0] / p
            + self.odd[1] * i / (2.0 * b * p2)
    }

    /// `(1/2π) ∫ value(k) e^{iky} dk`.
    pub fn fourier(&self, y: f64) -> Complex64 {
        let b = self.beta;
        let e = (-b * y.abs()).exp();
        let re = self.even[0] * e / (2.0 * b) + self.even[1] * (1.0 + b * y.abs()) * e / (4.0 * b * b * b);
        let sign = if y > 0.0 { 1.0 } else if y < 0.0 { -1.0 } else { 0.0 };
        let im = self.odd[0] * 0.5 * sign * e + self.odd[1] * y * e / (4.0 * b);
        Complex64::new(re, im)
    }

    /// `∫ value(k) dk` over the real line.
    pub fn integral(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.fourier(0.0).re
    }
}
