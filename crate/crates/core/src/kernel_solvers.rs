//! Gel'fand–Levitan and Faddeev–Marchenko reconstructions of the potential.
//!
//! Each equation is discretized with the trapezoid rule on a uniform grid and
//! solved for every `x` with a bordered inverse that grows by one node (two for
//! the right equation) per step, so the whole sweep costs `O(N³)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{BoundaryParameter, JostField, Potential};
use crate::numerics::fredholm::RESIDUAL_TOLERANCE;
use crate::numerics::{cosine_kernel, derivative, fourier_kernel, ComplexSamples, GrowingInverse, Interpolant, RealGrid, RealSamples};
use crate::phase_retrieval::even_extend_magnitude;

pub const DEFAULT_X_POINTS: usize = 1001;
/// Largest admissible `|k²/|F_α|² − 1|` at the grid ends.
pub const KERNEL_TAIL_TOLERANCE: f64 = 0.05;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn x_grid(length: f64, n: usize) -> Result<RealGrid> {
    if !(length > 0.0) || n < 8 {
        return Err(Error::InvalidGrid("x-grid needs a positive length and at least 8 points".into()));
    }
    RealGrid::uniform(0.0, length, n)
}

/// `G_α(x,y) = ½[g(x+y) + g(|x−y|)]` with `g(s) = (1/π)∫(k²/|F_α|² − 1)cos ks dk`.
#[derive(Debug, Clone, PartialEq)]
pub struct GLKernel {
    pub xgrid: RealGrid,
    /// `g(m·h)` for `m = 0 … 2(N−1)`.
    pub g: Vec<f64>,
}

impl GLKernel {
    /// `G_α(x_i, x_j)`.
    pub fn sample(&self, i: usize, j: usize) -> f64 {
        0.5 * (self.g[i + j] + self.g[i.abs_diff(j)])
    }

    /// Closed-form kernel, for tests and diagnostics.
    pub fn from_fn(xgrid: RealGrid, g: impl Fn(f64) -> f64) -> Result<Self> {
        let h = xgrid.spacing().ok_or_else(|| Error::InvalidGrid("uniform x-grid required".into()))?;
        let n = xgrid.len();
        Ok(Self { xgrid, g: (0..2 * n - 1).map(|m| g(m as f64 * h)).collect() })
    }
}

/// Kernel from `|F_α|` on `[0, length]`.
pub fn glm_kernel(mag: &RealSamples, length: f64, x_points: usize) -> Result<GLKernel> {
    let mag = even_extend_magnitude(mag)?;
    let k = mag.grid.points();
    let c = k.len() / 2;
    let mut phi: Vec<f64> = k
        .iter()
        .zip(&mag.values)
        .map(|(&kj, &m)| if m > 0.0 { kj * kj / (m * m) - 1.0 } else { f64::NAN })
        .collect();
    if phi.iter().enumerate().any(|(j, v)| j != c && !v.is_finite()) {
        return Err(Error::NonpositiveMagnitude { k: 0.0 });
    }
    if !phi[c].is_finite() {
        phi[c] = 1.5 * phi[c + 1] - 0.6 * phi[c + 2] + 0.1 * phi[c + 3];
    }
    let end = phi[0].abs().max(phi[k.len() - 1].abs());
    if end > KERNEL_TAIL_TOLERANCE {
        return Err(Error::InvalidInput(format!(
            "k²/|F|² − 1 does not decay: {end:.3e} at the grid ends"
        )));
    }
    let phi = RealSamples::new(mag.grid.clone(), phi)?;
    let xgrid = x_grid(length, x_points)?;
    let h = xgrid.spacing().unwrap_or_default();
    let n = xgrid.len();
    let s: Vec<f64> = (0..2 * n - 1).map(|m| m as f64 * h).collect();
    let g = cosine_kernel(&phi, &s)?;
    Ok(GLKernel { xgrid, g })
}

/// `h_α(x, y)` on `0 ≤ y ≤ x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GLSolution {
    pub xgrid: RealGrid,
    /// `rows[n][j] = h_α(x_n, x_j)` for `j ≤ n`.
    pub rows: Vec<Vec<f64>>,
    /// `h_α(x, x⁻)`.
    pub diagonal: Vec<f64>,
    pub max_residual: f64,
}

fn relative_residual(res: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        res / rhs
    } else {
        res
    }
}

fn check_residual(r: f64) -> Result<()> {
    if r > RESIDUAL_TOLERANCE || !r.is_finite() {
        return Err(Error::Residual { residual: r, tolerance: RESIDUAL_TOLERANCE });
    }
    Ok(())
}

/// Residual of `(W⁻¹ + A)u = rhs` with `A` given entrywise on local indices.
fn system_residual(a: impl Fn(usize, usize) -> f64, winv: &[f64], u: &[f64], rhs: &[f64]) -> f64 {
    let n = u.len();
    let mut res2 = 0.0;
    for i in 0..n {
        let mut acc = winv[i] * u[i];
        for j in 0..n {
            acc += a(i, j) * u[j];
        }
        res2 += (acc - rhs[i]).powi(2);
    }
    let rhs2: f64 = rhs.iter().map(|v| v * v).sum();
    relative_residual(res2.sqrt(), rhs2.sqrt())
}

/// Potential, boundary parameter and kernel from the Gel'fand–Levitan equation.
pub fn glm_solve(kernel: &GLKernel) -> Result<(Potential, BoundaryParameter, GLSolution)> {
    let xg = &kernel.xgrid;
    let n = xg.len();
    let h = xg.spacing().ok_or_else(|| Error::InvalidGrid("uniform x-grid required".into()))?;
    let mut inv = GrowingInverse::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    let mut diagonal = Vec::with_capacity(n);
    let mut max_residual: f64 = 0.0;
    rows.push(vec![-kernel.sample(0, 0)]);
    diagonal.push(-kernel.sample(0, 0));
    let mut winv: Vec<f64> = Vec::with_capacity(n);
    for m in 1..n {
        if m == 1 {
            inv.append(&[], 2.0 / h + kernel.sample(0, 0))?;
            winv.push(2.0 / h);
        } else {
            inv.update_diagonal(m - 1, -1.0 / h)?;
            winv[m - 1] = 1.0 / h;
        }
        let b: Vec<f64> = (0..m).map(|j| kernel.sample(m, j)).collect();
        inv.append(&b, 2.0 / h + kernel.sample(m, m))?;
        winv.push(2.0 / h);
        let rhs: Vec<f64> = (0..=m).map(|j| -kernel.sample(m, j)).collect();
        let u = inv.matvec(&rhs);
        let res = system_residual(|i, j| kernel.sample(i, j), &winv, &u, &rhs);
        max_residual = max_residual.max(res);
        check_residual(res)?;
        let row: Vec<f64> = u.iter().zip(&winv).map(|(ui, wi)| ui * wi).collect();
        diagonal.push(row[m]);
        rows.push(row);
    }
    let dq = derivative(xg, &diagonal);
    let q = Potential::new(xg.clone(), dq.iter().map(|d| 2.0 * d).collect())?;
    let bp = BoundaryParameter { cot_alpha: -diagonal[0] };
    Ok((q, bp, GLSolution { xgrid: xg.clone(), rows, diagonal, max_residual }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Kernel of a Faddeev–Marchenko equation.
#[derive(Debug, Clone, PartialEq)]
pub struct MarchenkoSolution {
    pub side: Side,
    pub xgrid: RealGrid,
    /// `K(x, x⁺)` (left) or `B_r(x, 0⁺)` (right) on `xgrid`.
    pub trace: Vec<f64>,
    /// Left: `rows[n][m] = K(x_n, x_n + m·h)`; right: `rows[n][m] = B_r(x_n, m·h)`.
    pub rows: Vec<Vec<f64>>,
    /// Arguments and values of `R̂` (left) or `L̂` (right).
    pub fourier_args: Vec<f64>,
    pub fourier_values: Vec<f64>,
    /// Upper end of the truncated integration range (left only).
    pub cutoff: f64,
    pub max_residual: f64,
    /// Largest `|Q|` recovered beyond `x = l`, a measure of truncation leakage.
    pub leakage: f64,
}

fn real_fourier(s: &ComplexSamples, args: &[f64]) -> Result<Vec<f64>> {
    Ok(fourier_kernel(s, args)?.into_iter().map(|z| z.re).collect())
}

/// Smallest `y` after which `|R̂|` stays below `e^{−10}` of its peak.
fn decay_length(values: &[f64], h: f64) -> f64 {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let threshold = (-10.0f64).exp() * peak;
    let last = values.iter().rposition(|v| v.abs() > threshold).unwrap_or(0);
    (last + 1) as f64 * h
}

fn jost_from_rows(xgrid: &RealGrid, rows: &[Vec<f64>], h: f64, kgrid: &RealGrid) -> Result<JostField> {
    let x = xgrid.points();
    let mut f = Vec::with_capacity(kgrid.len());
    let mut df = Vec::with_capacity(kgrid.len());
    for &k in kgrid.points() {
        let fk: Vec<Complex64> = x
            .iter()
            .zip(rows)
            .map(|(&xn, row)| {
                let m = row.len();
                let mut acc = Complex64::default();
                for (j, &kv) in row.iter().enumerate() {
                    let w = if j == 0 || j + 1 == m { 0.5 } else { 1.0 };
                    acc += w * kv * (I * k * (xn + j as f64 * h)).exp();
                }
                (I * k * xn).exp() + h * acc
            })
            .collect();
        let re: Vec<f64> = fk.iter().map(|z| z.re).collect();
        let im: Vec<f64> = fk.iter().map(|z| z.im).collect();
        let (dre, dim) = (derivative(xgrid, &re), derivative(xgrid, &im));
        df.push(dre.iter().zip(&dim).map(|(a, b)| Complex64::new(*a, *b)).collect());
        f.push(fk);
    }
    Ok(JostField { kgrid: kgrid.clone(), xgrid: xgrid.clone(), f, df })
}

/// Potential and Jost solution from the right reflection coefficient via the
/// left Faddeev–Marchenko equation on `[0, length]`. The Jost solution is
/// evaluated at the wavenumbers of `jost_k`.
pub fn marchenko_left(
    r: &ComplexSamples,
    length: f64,
    x_points: usize,
    jost_k: &RealGrid,
) -> Result<(MarchenkoSolution, Potential, JostField)> {
    check_reflection(r)?;
    let xgrid = x_grid(length, x_points)?;
    let h = xgrid.spacing().unwrap_or_default();
    let nx = xgrid.len();
    let n_full = 2 * (nx - 1);
    let args: Vec<f64> = (0..=2 * n_full).map(|m| m as f64 * h).collect();
    let rhat = real_fourier(r, &args)?;
    let reach = decay_length(&rhat, h);
    let cutoff = (length + reach).min(2.0 * length);
    let mz = ((cutoff / h).round() as usize).max(nx - 1);
    let z = |m: usize| m as f64 * h;
    let kern = |i: usize, j: usize| rhat[i + j];
    let mut inv = GrowingInverse::with_capacity(mz + 1);
    // local index t ↔ node mz − t
    let node = |t: usize| mz - t;
    let mut winv: Vec<f64> = Vec::with_capacity(mz + 1);
    let mut trace_full = vec![0.0; mz + 1];
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); nx];
    let mut max_residual: f64 = 0.0;
    trace_full[mz] = -kern(mz, mz);
    if mz < nx {
        rows[mz] = vec![trace_full[mz]];
    }
    for n in (0..mz).rev() {
        if n == mz - 1 {
            inv.append(&[], 2.0 / h + kern(mz, mz))?;
            winv.push(2.0 / h);
        } else {
            let t = mz - (n + 1);
            inv.update_diagonal(t, -1.0 / h)?;
            winv[t] = 1.0 / h;
        }
        let b: Vec<f64> = (0..winv.len()).map(|t| kern(n, node(t))).collect();
        inv.append(&b, 2.0 / h + kern(n, n))?;
        winv.push(2.0 / h);
        let len = winv.len();
        let rhs: Vec<f64> = (0..len).map(|t| -rhat[n + node(t)]).collect();
        let u = inv.matvec(&rhs);
        let res = system_residual(|a, b| kern(node(a), node(b)), &winv, &u, &rhs);
        max_residual = max_residual.max(res);
        check_residual(res)?;
        let kx: Vec<f64> = u.iter().zip(&winv).map(|(ui, wi)| ui * wi).collect();
        trace_full[n] = kx[len - 1];
        if n < nx {
            rows[n] = kx.iter().rev().copied().collect();
        }
    }
    let full_grid = RealGrid::uniform(0.0, z(mz), mz + 1)?;
    let dk = derivative(&full_grid, &trace_full);
    let q_full: Vec<f64> = dk.iter().map(|d| -2.0 * d).collect();
    let leak_end = ((length + 2.0) / h).round() as usize;
    let leakage = q_full
        .iter()
        .enumerate()
        .filter(|(m, _)| *m > nx - 1 && *m <= leak_end.min(mz))
        .fold(0.0f64, |a, (_, v)| a.max(v.abs()));
    let q = Potential::new(xgrid.clone(), q_full[..nx].to_vec())?;
    let field = jost_from_rows(&xgrid, &rows, h, jost_k)?;
    let sol = MarchenkoSolution {
        side: Side::Left,
        xgrid,
        trace: trace_full[..nx].to_vec(),
        rows,
        fourier_args: args,
        fourier_values: rhat,
        cutoff: z(mz),
        max_residual,
        leakage,
    };
    Ok((sol, q, field))
}

fn check_reflection(s: &ComplexSamples) -> Result<()> {
    let grid = &s.grid;
    if !grid.is_symmetric() {
        return Err(Error::InvalidGrid("reflection coefficients need a symmetric grid".into()));
    }
    let n = grid.len();
    let scale = s.values.iter().fold(1e-300f64, |m, v| m.max(v.norm()));
    for j in 0..n {
        let d = (s.values[n - 1 - j] - s.values[j].conj()).norm();
        if d > 1e-8 * scale {
            return Err(Error::Symmetry { max_deviation: d });
        }
        let k = grid.points()[j];
        let m = s.values[j].norm();
        if k != 0.0 && m >= 1.0 {
            return Err(Error::Unitarity { k, modulus: m });
        }
    }
    Ok(())
}

struct RightTrace {
    trace: Vec<f64>,
    rows: Vec<Vec<f64>>,
    max_residual: f64,
}

/// Bordered solves of the right equation on `nx` nodes of spacing `h`, with
/// `lhat[m] = L̂(−m·stride·h)`.
fn right_trace(lhat: &[f64], stride: usize, h: f64, nx: usize) -> Result<RightTrace> {
    let lh = |s: i64| if s > 0 { 0.0 } else { lhat[(-s) as usize * stride] };
    let mut inv = GrowingInverse::with_capacity(2 * nx - 1);
    // local index → p index (p = pi·h)
    let mut p_of: Vec<i64> = Vec::with_capacity(2 * nx - 1);
    let mut winv: Vec<f64> = Vec::with_capacity(2 * nx - 1);
    let mut trace = vec![0.0; nx];
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); nx];
    let mut max_residual: f64 = 0.0;
    trace[0] = -lh(0);
    rows[0] = vec![trace[0]];
    for n in 1..nx {
        let ni = n as i64;
        if n == 1 {
            inv.append(&[], 1.0 / h + lh(0))?;
            p_of.push(0);
            winv.push(1.0 / h);
        } else {
            for t in [p_of.len() - 2, p_of.len() - 1] {
                inv.update_diagonal(t, -1.0 / h)?;
                winv[t] = 1.0 / h;
            }
        }
        for p in [-ni, ni] {
            let b: Vec<f64> = p_of.iter().map(|&q| lh(p + q)).collect();
            inv.append(&b, 2.0 / h + lh(2 * p))?;
            p_of.push(p);
            winv.push(2.0 / h);
        }
        let rhs: Vec<f64> = p_of.iter().map(|&p| -lh(p - ni)).collect();
        let u = inv.matvec(&rhs);
        let res = system_residual(|a, b| lh(p_of[a] + p_of[b]), &winv, &u, &rhs);
        max_residual = max_residual.max(res);
        check_residual(res)?;
        let mut row = vec![0.0; 2 * n + 1];
        for (t, &p) in p_of.iter().enumerate() {
            row[(p + ni) as usize] = u[t] * winv[t];
        }
        trace[n] = row[0];
        rows[n] = row;
    }
    Ok(RightTrace { trace, rows, max_residual })
}

/// Potential from the left reflection coefficient via the right
/// Faddeev–Marchenko equation on `[0, length]`.
///
/// With an odd number of nodes the trace is Richardson-extrapolated against a
/// solve on every other node, removing the leading `O(h²)` quadrature error.
pub fn marchenko_right(l: &ComplexSamples, length: f64, x_points: usize) -> Result<(MarchenkoSolution, Potential)> {
    check_reflection(l)?;
    let xgrid = x_grid(length, x_points)?;
    let h = xgrid.spacing().unwrap_or_default();
    let nx = xgrid.len();
    let span = 2 * (nx - 1);
    // L̂(−m·h) for m = 0 … 2(N−1); L̂ vanishes for positive arguments.
    let args: Vec<f64> = (0..=span).map(|m| -(m as f64) * h).collect();
    let lhat = real_fourier(l, &args)?;
    let fine = right_trace(&lhat, 1, h, nx)?;
    let mut trace = fine.trace;
    let mut max_residual = fine.max_residual;
    if nx % 2 == 1 && nx >= 9 {
        let nc = nx.div_ceil(2);
        let coarse = right_trace(&lhat, 2, 2.0 * h, nc)?;
        max_residual = max_residual.max(coarse.max_residual);
        let cgrid = RealGrid::uniform(0.0, length, nc)?;
        let corr: Vec<f64> = (0..nc).map(|i| (trace[2 * i] - coarse.trace[i]) / 3.0).collect();
        let ci = Interpolant::new(&cgrid, &corr);
        for (t, &x) in trace.iter_mut().zip(xgrid.points()) {
            *t += ci.eval(x);
        }
    }
    let dq = derivative(&xgrid, &trace);
    let q = Potential::new(xgrid.clone(), dq.iter().map(|d| 2.0 * d).collect())?;
    let sol = MarchenkoSolution {
        side: Side::Right,
        xgrid,
        trace,
        rows: fine.rows,
        fourier_args: args,
        fourier_values: lhat,
        cutoff: 2.0 * length,
        max_residual,
        leakage: 0.0,
    };
    Ok((sol, q))
}

/// Relative `L²` distance of two potentials over `[0, upto]`, sampled on the
/// grid of `a`.
pub fn relative_l2(a: &Potential, b: &Potential, upto: f64) -> f64 {
    let bi = b.interpolant();
    let (mut num, mut den) = (0.0, 0.0);
    for (&x, &v) in a.grid.points().iter().zip(&a.values) {
        if x <= upto + 1e-12 {
            let w = bi.eval(x);
            num += (v - w).powi(2);
            den += w * w;
        }
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}
