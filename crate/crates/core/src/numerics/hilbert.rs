//! Principal-value Hilbert transform, Schwarz extension and outer functions.
//!
//! Inputs live on uniform grids symmetric about zero. A rational tail is fitted
//! near the ends and handled in closed form; the remainder is integrated
//! numerically over the grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{parity_defect, ComplexSamples, Parity, RealGrid, RealSamples};
use super::tail::RationalTail;
use crate::error::{Error, Result};

/// Relative size of the input at the grid ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailDiagnostic {
    pub end_ratio: f64,
    pub warning: bool,
}

pub const TAIL_TOLERANCE: f64 = 0.05;
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;
/// Ratio `mag(k_min)/mag(0)` above which a simple zero at the origin is assumed.
pub const EXCEPTIONAL_RATIO: f64 = 1e3;
const TAIL_BETA: f64 = 1.0;

fn check_grid(grid: &RealGrid) -> Result<f64> {
    if !grid.is_symmetric() || grid.len() < 9 {
        return Err(Error::InvalidGrid("expected a uniform grid symmetric about zero".into()));
    }
    Ok(grid.spacing().unwrap_or_default())
}

fn diagnose(s: &RealSamples) -> TailDiagnostic {
    let n = s.values.len();
    let max = s.max_abs();
    let end = s.values[0].abs().max(s.values[n - 1].abs());
    let end_ratio = if max > 0.0 { end / max } else { 0.0 };
    TailDiagnostic { end_ratio, warning: end_ratio > TAIL_TOLERANCE }
}

fn split_tail(g: &RealSamples) -> (RationalTail, Vec<f64>) {
    let tail = RationalTail::fit(g, TAIL_BETA);
    let r = g.grid.points().iter().zip(&g.values).map(|(&t, &v)| v - tail.value(t)).collect();
    (tail, r)
}

/// `(−1/π) CPV ∫ g(t)/(t−k) dt` at every grid node.
///
/// Cell rule with the singularity subtracted; the node derivative comes from
/// the band-limited interpolant.
pub fn cpv_hilbert(g: &RealSamples) -> Result<(RealSamples, TailDiagnostic)> {
    let h = check_grid(&g.grid)?;
    let diag = diagnose(g);
    let (tail, r) = split_tail(g);
    let t = g.grid.points();
    let n = t.len();
    let a = t[0] - 0.5 * h;
    let b = t[n - 1] + 0.5 * h;
    let out: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = r[i];
            let mut sum = 0.0;
            let mut deriv = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let m = i as f64 - j as f64;
                sum += (r[j] - ri) / (t[j] - t[i]);
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                deriv += r[j] * sign / m;
            }
            let cpv = h * sum + deriv + ri * ((b - t[i]) / (t[i] - a)).ln();
            -cpv / PI + tail.schwarz(Complex64::new(t[i], 0.0)).im
        })
        .collect();
    Ok((RealSamples::new(g.grid.clone(), out)?, diag))
}

/// Schwarz extension of an even real part.
pub fn schwarz_extend(re_part: &RealSamples) -> Result<(ComplexSamples, TailDiagnostic)> {
    schwarz_extend_parity(re_part, Parity::Even)
}

/// Schwarz extension for an input of either parity (odd inputs arise when the
/// known part is an imaginary part).
///
/// Odd-offset rule: nodes at odd distance from the target act as midpoints of
/// cells of width `2h`, so the singular node is never sampled.
pub fn schwarz_extend_parity(u: &RealSamples, parity: Parity) -> Result<(ComplexSamples, TailDiagnostic)> {
    let h = check_grid(&u.grid)?;
    let defect = parity_defect(u, parity)?;
    if defect > SYMMETRY_TOLERANCE {
        return Err(Error::Symmetry { max_deviation: defect });
    }
    let diag = diagnose(u);
    let (tail, r) = split_tail(u);
    let t = u.grid.points();
    let n = t.len();
    let values: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = r[i];
            let j_lo = if i % 2 == 1 { 0 } else { 1 };
            let j_hi = if (n - 1 - i) % 2 == 1 { n - 1 } else { n - 2 };
            let mut sum = 0.0;
            let mut j = j_lo;
            while j <= j_hi {
                if j != i {
                    sum += (r[j] - ri) / (t[j] - t[i]);
                }
                j += 2;
            }
            let a = (t[j_lo] - h).min(t[i] - 0.5 * h);
            let b = (t[j_hi] + h).max(t[i] + 0.5 * h);
            let cpv = 2.0 * h * sum + ri * ((b - t[i]) / (t[i] - a)).ln();
            let k = Complex64::new(t[i], 0.0);
            Complex64::new(u.values[i], -cpv / PI + tail.schwarz(k).im)
        })
        .collect();
    Ok((ComplexSamples::new(u.grid.clone(), values, "schwarz")?, diag))
}

/// Growth of the outer function at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Tends to 1.
    None,
    /// Behaves like `k`.
    LinearFactorK,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterReport {
    /// Simple zero detected at k = 0.
    pub zero_at_origin: bool,
    /// Extrapolated modulus at k = 0.
    pub modulus_at_origin: f64,
    pub tail: TailDiagnostic,
}

/// Quadratic extrapolation in `k²` to `k = 0` from the first three positive nodes.
pub(crate) fn extrapolate_even(v: &[f64], center: usize) -> f64 {
    1.5 * v[center + 1] - 0.6 * v[center + 2] + 0.1 * v[center + 3]
}

/// Behaviour of the outer function at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Decide from the magnitude near the origin.
    Auto,
    SimpleZero,
    NonZero,
}

/// Minimum-phase function with modulus `mag` on the real axis.
///
/// Factorizes `O = E·exp(S[log(mag/|E|)])` with an explicit outer reference
/// `E` that carries the growth at infinity and any simple zero at the origin.
pub fn outer_from_magnitude(
    mag: &RealSamples,
    normalization: Normalization,
) -> Result<(ComplexSamples, OuterReport)> {
    outer_from_magnitude_at_origin(mag, normalization, Origin::Auto)
}

/// As [`outer_from_magnitude`] with the behaviour at the origin prescribed.
pub fn outer_from_magnitude_at_origin(
    mag: &RealSamples,
    normalization: Normalization,
    origin: Origin,
) -> Result<(ComplexSamples, OuterReport)> {
    check_grid(&mag.grid)?;
    let defect = parity_defect(mag, Parity::Even)?;
    if defect > SYMMETRY_TOLERANCE {
        return Err(Error::Symmetry { max_deviation: defect });
    }
    let t = mag.grid.points();
    let n = t.len();
    let c = n / 2;
    for (i, (&ti, &m)) in t.iter().zip(&mag.values).enumerate() {
        if i != c && !(m > 0.0) {
            return Err(Error::NonpositiveMagnitude { k: ti });
        }
    }
    let sq: Vec<f64> = mag.values.iter().map(|m| m * m).collect();
    let m0_sq = extrapolate_even(&sq, c);
    let zero = match origin {
        Origin::Auto => m0_sq <= 0.0 || mag.values[c + 1] > EXCEPTIONAL_RATIO * m0_sq.sqrt(),
        Origin::SimpleZero => true,
        Origin::NonZero => false,
    };
    let modulus_at_origin = if zero {
        0.0
    } else if mag.values[c] > 0.0 {
        mag.values[c]
    } else if m0_sq > 0.0 {
        m0_sq.sqrt()
    } else {
        return Err(Error::NonpositiveMagnitude { k: 0.0 });
    };

    let i = Complex64::i();
    let reference: Box<dyn Fn(Complex64) -> Complex64 + Sync> = match (normalization, zero) {
        (Normalization::LinearFactorK, false) => {
            let tt = t[n - 1];
            let excess = sq[n - 1] - tt * tt;
            let b = if excess >= 0.01 { excess.sqrt() } else { 1.0 };
            Box::new(move |k| k + i * b)
        }
        (Normalization::LinearFactorK, true) => Box::new(|k| k),
        (Normalization::None, false) => Box::new(|_| Complex64::new(1.0, 0.0)),
        (Normalization::None, true) => Box::new(move |k| k / (k + i)),
    };

    let mut r: Vec<f64> = (0..n)
        .map(|j| {
            if j == c && zero {
                0.0
            } else {
                let m = if j == c { modulus_at_origin } else { mag.values[j] };
                m.ln() - reference(Complex64::new(t[j], 0.0)).norm().ln()
            }
        })
        .collect();
    if zero {
        r[c] = extrapolate_even(&r, c);
    }
    let rs = RealSamples::new(mag.grid.clone(), r)?;
    let (s, tail) = schwarz_extend(&rs)?;
    let values = t
        .iter()
        .zip(&s.values)
        .map(|(&tj, sj)| reference(Complex64::new(tj, 0.0)) * sj.exp())
        .collect();
    let out = ComplexSamples::new(mag.grid.clone(), values, "outer")?;
    Ok((out, OuterReport { zero_at_origin: zero, modulus_at_origin, tail }))
}
