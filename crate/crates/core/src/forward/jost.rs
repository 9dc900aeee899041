use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::area::{BoundaryParameter, Potential};
use crate::error::{Error, Result};
use crate::numerics::ode::rk4_step_tabulated;
use crate::numerics::{ComplexSamples, Interpolant, RealGrid};

/// Largest `h·max(|k|, √Q)` allowed per RK4 step.
pub const STEP_PHASE: f64 = 0.01;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `f(k, 0)` and `f′(k, 0)` on a wavenumber grid.
#[derive(Debug, Clone, PartialEq)]
pub struct JostBoundary {
    pub kgrid: RealGrid,
    pub f0: Vec<Complex64>,
    pub df0: Vec<Complex64>,
}

/// `f(k, x)` and `f′(k, x)`, indexed `[k][x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JostField {
    pub kgrid: RealGrid,
    pub xgrid: RealGrid,
    pub f: Vec<Vec<Complex64>>,
    pub df: Vec<Vec<Complex64>>,
}

impl JostField {
    pub fn boundary(&self) -> JostBoundary {
        JostBoundary {
            kgrid: self.kgrid.clone(),
            f0: self.f.iter().map(|r| r[0]).collect(),
            df0: self.df.iter().map(|r| r[0]).collect(),
        }
    }

    /// Largest `|W − 2ik|/max(1, |k|)` over all nodes, with
    /// `W = f(−k,x)f′(k,x) − f′(−k,x)f(k,x)`.
    pub fn wronskian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (ik, &k) in self.kgrid.points().iter().enumerate() {
            for (f, df) in self.f[ik].iter().zip(&self.df[ik]) {
                let w = f.conj() * df - df.conj() * f;
                worst = worst.max((w - 2.0 * I * k).norm() / k.abs().max(1.0));
            }
        }
        worst
    }
}

/// `Q` tabulated at the RK4 stage points for a fixed number of substeps.
struct StageTable {
    m: usize,
    values: Vec<f64>,
}

impl StageTable {
    fn build(q: &Potential, interp: &Interpolant, m: usize) -> Self {
        let x = q.grid.points();
        let n = x.len();
        let per = 2 * m;
        let mut values = vec![0.0; (n - 1) * per + 1];
        for i in 0..n - 1 {
            let h = x[i + 1] - x[i];
            values[i * per] = q.values[i];
            for s in 1..per {
                values[i * per + s] = interp.eval(x[i] + s as f64 * h / per as f64);
            }
        }
        values[(n - 1) * per] = q.values[n - 1];
        Self { m, values }
    }
}

struct Integrator {
    x: Vec<f64>,
    q_scale: f64,
    h_max: f64,
    tables: BTreeMap<usize, StageTable>,
}

impl Integrator {
    fn new(q: &Potential, ks: &[f64]) -> Result<Self> {
        let x = q.grid.points().to_vec();
        if x[0] != 0.0 {
            return Err(Error::InvalidGrid("potential grid must start at x = 0".into()));
        }
        let h_max = x.windows(2).fold(0.0f64, |m, w| m.max(w[1] - w[0]));
        let q_scale = q.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).sqrt();
        let mut me = Self { x, q_scale, h_max, tables: BTreeMap::new() };
        let needed: Vec<usize> = {
            let mut v: Vec<usize> = ks.iter().map(|&k| me.substeps(k)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let interp = q.interpolant();
        let built: Vec<StageTable> = needed.par_iter().map(|&m| StageTable::build(q, &interp, m)).collect();
        for t in built {
            me.tables.insert(t.m, t);
        }
        Ok(me)
    }

    fn substeps(&self, k: f64) -> usize {
        let rate = k.abs().max(self.q_scale).max(1e-6);
        ((self.h_max * rate / STEP_PHASE).ceil() as usize).max(1)
    }

    /// Backward sweep from `x = l`; `store` receives `(node, f, f′)`.
    fn sweep(&self, k: f64, mut store: impl FnMut(usize, Complex64, Complex64)) -> Result<(Complex64, Complex64)> {
        let n = self.x.len();
        let l = self.x[n - 1];
        let e = (I * k * l).exp();
        let (mut u, mut v) = (e, I * k * e);
        store(n - 1, u, v);
        let m = self.substeps(k);
        let table = &self.tables[&m].values;
        let k2 = k * k;
        let per = 2 * m;
        for i in (0..n - 1).rev() {
            let h = -(self.x[i + 1] - self.x[i]) / m as f64;
            let mut p = (i + 1) * per;
            for _ in 0..m {
                let (c0, cm, c1) = (table[p] - k2, table[p - 1] - k2, table[p - 2] - k2);
                (u, v) = rk4_step_tabulated(c0, cm, c1, h, u, v);
                p -= 2;
            }
            if !(u.re.is_finite() && u.im.is_finite()) {
                return Err(Error::InvalidInput(format!("Jost integration diverged at k = {k}")));
            }
            store(i, u, v);
        }
        Ok((u, v))
    }
}

/// Indices whose values are computed directly; the rest mirror them by
/// conjugation (`f(−k, x) = f(k, x)*`).
fn plan(kgrid: &RealGrid) -> Vec<(usize, Option<usize>)> {
    let k = kgrid.points();
    let n = k.len();
    if kgrid.is_symmetric() {
        (0..n).map(|j| if k[j] < 0.0 { (j, Some(n - 1 - j)) } else { (j, None) }).collect()
    } else {
        (0..n).map(|j| (j, None)).collect()
    }
}

/// Boundary values of the Jost solution; cheaper than [`jost_solve`].
pub fn jost_boundary(q: &Potential, kgrid: &RealGrid) -> Result<JostBoundary> {
    let ks = kgrid.points();
    let integ = Integrator::new(q, &ks.iter().map(|k| k.abs()).collect::<Vec<_>>())?;
    let plan = plan(kgrid);
    let direct: Vec<Option<(Complex64, Complex64)>> = plan
        .par_iter()
        .map(|&(j, mirror)| match mirror {
            Some(_) => Ok(None),
            None => {
                let k = ks[j];
                let (f, df) = integ.sweep(k.abs(), |_, _, _| {})?;
                Ok(Some(if k < 0.0 { (f.conj(), df.conj()) } else { (f, df) }))
            }
        })
        .collect::<Result<_>>()?;
    let mut f0 = vec![Complex64::default(); ks.len()];
    let mut df0 = vec![Complex64::default(); ks.len()];
    for &(j, mirror) in &plan {
        let (f, df) = match mirror {
            Some(src) => {
                let (f, df) = direct[src].unwrap();
                (f.conj(), df.conj())
            }
            None => direct[j].unwrap(),
        };
        f0[j] = f;
        df0[j] = df;
    }
    Ok(JostBoundary { kgrid: kgrid.clone(), f0, df0 })
}

/// Jost solution on the potential's x-grid by backward RK4 from `x = l`.
pub fn jost_solve(q: &Potential, kgrid: &RealGrid) -> Result<JostField> {
    let ks = kgrid.points();
    let integ = Integrator::new(q, &ks.iter().map(|k| k.abs()).collect::<Vec<_>>())?;
    let nx = q.grid.len();
    let plan = plan(kgrid);
    let direct: Vec<Option<(Vec<Complex64>, Vec<Complex64>)>> = plan
        .par_iter()
        .map(|&(j, mirror)| {
            if mirror.is_some() {
                return Ok(None);
            }
            let k = ks[j];
            let mut f = vec![Complex64::default(); nx];
            let mut df = vec![Complex64::default(); nx];
            integ.sweep(k.abs(), |i, u, v| {
                f[i] = u;
                df[i] = v;
            })?;
            if k < 0.0 {
                f.iter_mut().chain(df.iter_mut()).for_each(|z| *z = z.conj());
            }
            Ok(Some((f, df)))
        })
        .collect::<Result<_>>()?;
    let mut f = vec![Vec::new(); ks.len()];
    let mut df = vec![Vec::new(); ks.len()];
    for &(j, mirror) in &plan {
        match mirror {
            Some(src) => {
                let (a, b) = direct[src].as_ref().unwrap();
                f[j] = a.iter().map(|z| z.conj()).collect();
                df[j] = b.iter().map(|z| z.conj()).collect();
            }
            None => {
                let (a, b) = direct[j].as_ref().unwrap();
                f[j] = a.clone();
                df[j] = b.clone();
            }
        }
    }
    Ok(JostField { kgrid: kgrid.clone(), xgrid: q.grid.clone(), f, df })
}

/// Samples of `F_α(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JostFunctionSamples {
    pub kgrid: RealGrid,
    pub values: Vec<Complex64>,
}

impl JostFunctionSamples {
    pub fn magnitude(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn to_complex_samples(&self) -> Result<ComplexSamples> {
        ComplexSamples::new(self.kgrid.clone(), self.values.clone(), "jost_function")
    }

    /// Zeros of `F_α` in the upper half plane, counted from the winding of
    /// `F_α(k)/(k + i)` along a symmetric grid. `None` when `F_α(0)` is too
    /// small for the count to be reliable.
    pub fn bound_state_count(&self) -> Option<i64> {
        if !self.kgrid.is_symmetric() {
            return None;
        }
        let k = self.kgrid.points();
        let c = k.len() / 2;
        if self.values[c].norm() < 1e-8 * self.values[c + 1].norm().max(1e-300) {
            return None;
        }
        let r: Vec<Complex64> = self.values.iter().zip(k).map(|(f, &k)| f / (k + I)).collect();
        let winding: f64 = r.windows(2).map(|w| (w[1] / w[0]).arg()).sum();
        Some((winding / (2.0 * std::f64::consts::PI)).round() as i64)
    }
}

/// `F_α(k) = −i[f′(k,0) + cot α·f(k,0)]`.
pub fn jost_function(b: &JostBoundary, bp: BoundaryParameter) -> Result<JostFunctionSamples> {
    let values: Vec<Complex64> = b.f0.iter().zip(&b.df0).map(|(f, df)| -I * (df + bp.cot_alpha * f)).collect();
    let ks = b.kgrid.points();
    for (v, &k) in values.iter().zip(ks) {
        if k != 0.0 && v.norm() <= 1e-10 * k.abs().max(1.0) {
            return Err(Error::BoundState { k });
        }
    }
    let samples = JostFunctionSamples { kgrid: b.kgrid.clone(), values };
    if let Some(count) = samples.bound_state_count() {
        if count > 0 {
            return Err(Error::BoundState { k: 0.0 });
        }
    }
    Ok(samples)
}

/// Full-line transmission and reflection coefficients of `Q` extended by zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringTriple {
    pub kgrid: RealGrid,
    pub t: Vec<Complex64>,
    pub l: Vec<Complex64>,
    pub r: Vec<Complex64>,
}

impl ScatteringTriple {
    /// Largest `||T|² + |L|² − 1|` on the grid.
    pub fn unitarity_defect(&self) -> f64 {
        self.t.iter().zip(&self.l).fold(0.0f64, |m, (t, l)| m.max((t.norm_sqr() + l.norm_sqr() - 1.0).abs()))
    }

    /// Reflectance at the glottis, `L(−k) = L(k)*`.
    pub fn reflectance(&self) -> Vec<Complex64> {
        self.l.iter().map(|l| l.conj()).collect()
    }
}

/// `T`, `L` and `R` from the boundary values. At `k = 0` a vanishing
/// denominator is resolved by even extrapolation from the positive nodes.
pub fn scattering_coefficients(b: &JostBoundary) -> Result<ScatteringTriple> {
    let ks = b.kgrid.points();
    let n = ks.len();
    let mut t = vec![Complex64::default(); n];
    let mut l = vec![Complex64::default(); n];
    let mut r = vec![Complex64::default(); n];
    let mut pending = None;
    for j in 0..n {
        let k = ks[j];
        let (f, df) = (b.f0[j], b.df0[j]);
        let den = I * k * f + df;
        if den.norm() <= 1e-12 * (k.abs() * f.norm() + df.norm()).max(1e-300) || den.norm() == 0.0 {
            if k == 0.0 {
                pending = Some(j);
                continue;
            }
            return Err(Error::ZeroDenominator { k });
        }
        t[j] = 2.0 * I * k / den;
        l[j] = (I * k * f - df) / den;
        r[j] = (-I * k * f.conj() - df.conj()) / den;
    }
    if let Some(c) = pending {
        if c + 3 >= n {
            return Err(Error::ZeroDenominator { k: 0.0 });
        }
        let even = |v: &[Complex64]| 1.5 * v[c + 1].re - 0.6 * v[c + 2].re + 0.1 * v[c + 3].re;
        t[c] = Complex64::new(even(&t), 0.0);
        l[c] = Complex64::new(even(&l), 0.0);
        r[c] = Complex64::new(even(&r), 0.0);
    }
    Ok(ScatteringTriple { kgrid: b.kgrid.clone(), t, l, r })
}
