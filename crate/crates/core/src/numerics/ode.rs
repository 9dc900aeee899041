use num_complex::Complex64;

use super::grid::RealGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// `y` and `y′` at every node of the span.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub y: Vec<Complex64>,
    pub dy: Vec<Complex64>,
}

/// Classical RK4 for `y″ = coeff(x)·y`, started from `(y, y′)` at the first
/// node (forward) or the last node (backward), with `substeps` equal steps per
/// grid interval.
pub fn ode_integrate_complex(
    coeff: impl Fn(f64) -> f64,
    start: (Complex64, Complex64),
    span: &RealGrid,
    direction: Direction,
    substeps: usize,
) -> Result<OdeSolution> {
    if substeps == 0 {
        return Err(Error::InvalidInput("substeps must be positive".into()));
    }
    let x = span.points();
    let n = x.len();
    let mut y = vec![Complex64::default(); n];
    let mut dy = vec![Complex64::default(); n];
    let order: Vec<usize> = match direction {
        Direction::Forward => (0..n).collect(),
        Direction::Backward => (0..n).rev().collect(),
    };
    let (mut u, mut v) = start;
    y[order[0]] = u;
    dy[order[0]] = v;
    for w in order.windows(2) {
        let (a, b) = (x[w[0]], x[w[1]]);
        let h = (b - a) / substeps as f64;
        if h.abs() < 1e-300 {
            return Err(Error::InvalidInput("step underflow".into()));
        }
        for s in 0..substeps {
            let x0 = a + s as f64 * h;
            (u, v) = rk4_step(&coeff, x0, h, u, v);
        }
        if !(u.re.is_finite() && u.im.is_finite()) {
            return Err(Error::InvalidInput(format!("integration diverged near x = {b}")));
        }
        y[w[1]] = u;
        dy[w[1]] = v;
    }
    Ok(OdeSolution { y, dy })
}

#[inline]
pub(crate) fn rk4_step(
    coeff: &impl Fn(f64) -> f64,
    x0: f64,
    h: f64,
    u: Complex64,
    v: Complex64,
) -> (Complex64, Complex64) {
    let c0 = coeff(x0);
    let cm = coeff(x0 + 0.5 * h);
    let c1 = coeff(x0 + h);
    rk4_step_tabulated(c0, cm, c1, h, u, v)
}

/// One RK4 step with the coefficient supplied at the start, midpoint and end.
#[inline]
pub(crate) fn rk4_step_tabulated(
    c0: f64,
    cm: f64,
    c1: f64,
    h: f64,
    u: Complex64,
    v: Complex64,
) -> (Complex64, Complex64) {
    let k1u = v;
    let k1v = c0 * u;
    let k2u = v + 0.5 * h * k1v;
    let k2v = cm * (u + 0.5 * h * k1u);
    let k3u = v + 0.5 * h * k2v;
    let k3v = cm * (u + 0.5 * h * k2u);
    let k4u = v + h * k3v;
    let k4v = c1 * (u + h * k3u);
    (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}
