//! Oscillatory Fourier integrals over the real k-line.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{ComplexSamples, RealSamples};
use super::tail::RationalTail;
use crate::error::{Error, Result};

const BETA: f64 = 1.0;

/// `(1/2π) ∫ s(k) e^{iky} dk` at each `y`.
///
/// Trapezoid rule on the grid for the remainder after subtracting rational
/// tails from the real and imaginary parts; tails transformed exactly.
pub fn fourier_kernel(s: &ComplexSamples, ys: &[f64]) -> Result<Vec<Complex64>> {
    let grid = &s.grid;
    if !grid.is_symmetric() {
        return Err(Error::InvalidGrid("expected a uniform grid symmetric about zero".into()));
    }
    let h = grid.spacing().unwrap_or_default();
    let re = s.re();
    let im = s.im();
    let tr = RationalTail::fit(&re, BETA);
    let ti = RationalTail::fit(&im, BETA);
    let k = grid.points();
    let n = k.len();
    let c = n / 2;
    // Pair k and −k: r(k)e^{iky} + r(−k)e^{−iky} = (r₊ + r₋)cos + i(r₊ − r₋)sin.
    let rem: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(re.values[j] - tr.value(k[j]), im.values[j] - ti.value(k[j])))
        .collect();
    let sums: Vec<Complex64> = (0..=c).map(|m| rem[c + m] + rem[c - m]).collect();
    let diffs: Vec<Complex64> = (0..=c).map(|m| rem[c + m] - rem[c - m]).collect();
    let out = ys
        .par_iter()
        .map(|&y| {
            let mut acc = rem[c];
            for m in 1..=c {
                let w = if m == c { 0.5 } else { 1.0 };
                let (sn, cs) = (k[c + m] * y).sin_cos();
                acc += w * (sums[m] * cs + Complex64::i() * diffs[m] * sn);
            }
            let numeric = acc * (h / (2.0 * PI));
            numeric + tr.fourier(y) + Complex64::i() * ti.fourier(y)
        })
        .collect();
    Ok(out)
}

/// `(1/π) ∫ φ(k) cos(ky) dk` for an even real `φ`.
pub fn cosine_kernel(phi: &RealSamples, ys: &[f64]) -> Result<Vec<f64>> {
    let grid = &phi.grid;
    if !grid.is_symmetric() {
        return Err(Error::InvalidGrid("expected a uniform grid symmetric about zero".into()));
    }
    let h = grid.spacing().unwrap_or_default();
    let tail = RationalTail::fit(phi, BETA);
    let k = grid.points();
    let n = k.len();
    let c = n / 2;
    let even: Vec<f64> = (0..=c)
        .map(|m| {
            let a = phi.values[c + m] - tail.value(k[c + m]);
            let b = phi.values[c - m] - tail.value(k[c - m]);
            0.5 * (a + b)
        })
        .collect();
    let out = ys
        .par_iter()
        .map(|&y| {
            let mut acc = 0.5 * even[0];
            for m in 1..=c {
                let w = if m == c { 0.5 } else { 1.0 };
                acc += w * even[m] * (k[c + m] * y).cos();
            }
            2.0 * h * acc / PI + 2.0 * tail.fourier(y).re
        })
        .collect();
    Ok(out)
}
