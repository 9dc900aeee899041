//! Closed-form reference duct: a reflectionless-type potential on `[0, ∞)`
//! with rational scattering data, used as golden data throughout.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{
    observable, output_impedance, AreaFunction, BoundaryParameter, DuctEnds, JostBoundary, JostFunctionSamples,
    ObservableKind, PhysicalConstants, Potential, SpectralData,
};
use crate::numerics::RealGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub const LENGTH: f64 = 17.5;
pub const A0: f64 = 5.0;
/// Nominal glottal slope.
pub const NOMINAL_DA0: f64 = -0.52;
/// Nominal boundary parameter.
pub const NOMINAL_COT_ALPHA: f64 = -0.052;
/// Boundary parameter that reproduces the nominal lip constants.
pub const MODEL_COT_ALPHA: f64 = 1.3;
pub const NOMINAL_AL: f64 = 11.596;
pub const NOMINAL_DAL: f64 = 0.681;
pub const MIC_DISTANCE: f64 = 20.0;
pub const DEFAULT_X_POINTS: usize = 2001;

fn s5() -> f64 {
    5f64.sqrt()
}

fn cc() -> f64 {
    7.0 + 3.0 * s5()
}

/// Values of the closed forms at one `(k, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormValues {
    pub q: f64,
    pub g_l: Complex64,
    pub tau: Complex64,
    pub ell: Complex64,
    pub rho: Complex64,
}

/// The reference duct: potential, boundary parameter and end constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormModel {
    pub length: f64,
    pub consts: PhysicalConstants,
    pub a0: f64,
    pub cot_alpha: f64,
}

impl Default for ClosedFormModel {
    fn default() -> Self {
        Self { length: LENGTH, consts: PhysicalConstants::default(), a0: A0, cot_alpha: MODEL_COT_ALPHA }
    }
}

/// `Q(x) = 80c·e^{2√5x}/(c·e^{2√5x} − 2)²` with `c = 7 + 3√5`.
pub fn potential_value(x: f64) -> f64 {
    let e = cc() * (2.0 * s5() * x).exp();
    80.0 * e / ((e - 2.0) * (e - 2.0))
}

/// `g_l(0, x) = (c·e^{2√5x} + 2)/(c·e^{2√5x} − 2)` and its derivative.
fn zero_energy_left(x: f64) -> (f64, f64) {
    let e = cc() * (2.0 * s5() * x).exp();
    let u = (e + 2.0) / (e - 2.0);
    let du = -8.0 * s5() * e / ((e - 2.0) * (e - 2.0));
    (u, du)
}

/// `∫₀ˣ dz/g_l(0,z)²`.
fn inverse_square_integral(x: f64) -> f64 {
    let e = cc() * (2.0 * s5() * x).exp();
    x + 4.0 / s5() * (1.0 / (e + 2.0) - 1.0 / (cc() + 2.0))
}

fn near_pole(k: Complex64, poles: &[Complex64]) -> Result<()> {
    if poles.iter().any(|p| (k - p).norm() < 1e-12) {
        return Err(Error::InvalidInput(format!("k = {k} is at a pole of the closed forms")));
    }
    Ok(())
}

pub fn tau(k: Complex64) -> Complex64 {
    k * (k + I * s5()) / ((k + I) * (k + 2.0 * I))
}

pub fn ell(k: Complex64) -> Complex64 {
    2.0 / ((k + I) * (k + 2.0 * I))
}

pub fn rho(k: Complex64) -> Complex64 {
    -2.0 * (k + I * s5()) / ((k + I) * (k + 2.0 * I) * (k - I * s5()))
}

/// Left Jost solution of the full-line problem and its `x`-derivative.
pub fn g_left(k: Complex64, x: f64) -> (Complex64, Complex64) {
    if x >= 0.0 {
        let e = cc() * (2.0 * s5() * x).exp();
        let d = e - 2.0;
        let a = I * 4.0 * s5() / (k + I * s5());
        let ph = (I * k * x).exp();
        let g = ph * (1.0 + a / d);
        let dg = I * k * g + ph * a * (-2.0 * s5() * e) / (d * d);
        (g, dg)
    } else {
        let t = tau(k);
        let l = ell(k);
        let (p, m) = ((I * k * x).exp(), (-I * k * x).exp());
        ((p + l * m) / t, I * k * (p - l * m) / t)
    }
}

/// `Q`, `g_l`, `τ`, `ℓ` and `ρ` at a complex wavenumber.
pub fn eval_closed_forms(k: Complex64, x: f64) -> Result<ClosedFormValues> {
    near_pole(k, &[-I, -2.0 * I, I * s5(), -I * s5()])?;
    if x < 0.0 && tau(k).norm() < 1e-14 {
        return Err(Error::InvalidInput("g_l for x < 0 is singular at a zero of tau".into()));
    }
    Ok(ClosedFormValues { q: if x >= 0.0 { potential_value(x) } else { 0.0 }, g_l: g_left(k, x).0, tau: tau(k), ell: ell(k), rho: rho(k) })
}

impl ClosedFormModel {
    /// The nominal glottal constants; they yield the nominal `cot α` only up
    /// to sign.
    pub fn nominal_boundary_parameter() -> BoundaryParameter {
        BoundaryParameter { cot_alpha: -NOMINAL_DA0 / (2.0 * A0) }
    }

    pub fn boundary_parameter(&self) -> BoundaryParameter {
        BoundaryParameter { cot_alpha: self.cot_alpha }
    }

    pub fn with_cot_alpha(self, cot_alpha: f64) -> Self {
        Self { cot_alpha, ..self }
    }

    /// `f(k, x)` and `f′(k, x)` of the problem truncated at `l`, assembled
    /// from `g_l(±k, ·)`. Requires `k ≠ 0`.
    pub fn jost(&self, k: Complex64, x: f64) -> Result<(Complex64, Complex64)> {
        if k.norm() < 1e-12 {
            return Err(Error::InvalidInput("the assembly is singular at k = 0".into()));
        }
        near_pole(k, &[I * s5(), -I * s5()])?;
        let l = self.length;
        let (gp, dgp) = g_left(k, x);
        let (gm, dgm) = g_left(-k, x);
        let (gpl, dgpl) = g_left(k, l);
        let (gml, dgml) = g_left(-k, l);
        let pre = (I * k * l).exp() / (2.0 * I * k);
        let f = pre * (-gp * dgml + gm * dgpl + I * k * (gp * gml - gm * gpl));
        let df = pre * (-dgp * dgml + dgm * dgpl + I * k * (dgp * gml - dgm * gpl));
        Ok((f, df))
    }

    /// `f(k, 0)` and `f′(k, 0)` on the infinite half line (rational forms).
    pub fn jost_at_origin_rational(k: Complex64) -> (Complex64, Complex64) {
        let d = k + I * s5();
        ((k + 3.0 * I) / d, I * (k * k + 3.0 * I * k - 4.0) / d)
    }

    pub fn jost_function(&self, k: Complex64) -> Result<Complex64> {
        let (f, df) = self.jost(k, 0.0)?;
        Ok(-I * (df + self.cot_alpha * f))
    }

    /// `F_α` from the rational forms.
    pub fn jost_function_rational(&self, k: Complex64) -> Complex64 {
        let (f, df) = Self::jost_at_origin_rational(k);
        -I * (df + self.cot_alpha * f)
    }

    /// `η(x) = √(A(x)/A(0))` and `η′(x)`, exact.
    pub fn eta(&self, x: f64) -> (f64, f64) {
        let (u0, du0) = zero_energy_left(0.0);
        let a = 1.0 / u0;
        let b = u0 * (-self.cot_alpha - a * du0);
        let (u, du) = zero_energy_left(x);
        let int = inverse_square_integral(x);
        (a * u + b * u * int, a * du + b * (du * int + 1.0 / u))
    }

    pub fn area(&self, x: f64) -> f64 {
        let e = self.eta(x).0;
        self.a0 * e * e
    }

    pub fn area_slope(&self, x: f64) -> f64 {
        let (e, de) = self.eta(x);
        2.0 * self.a0 * e * de
    }

    /// Lip constants computed from the model.
    pub fn model_ends(&self) -> DuctEnds {
        DuctEnds { a0: self.a0, al: self.area(self.length), dal: self.area_slope(self.length) }
    }

    /// Nominal lip constants.
    pub fn nominal_ends(&self) -> DuctEnds {
        DuctEnds { a0: self.a0, al: NOMINAL_AL, dal: NOMINAL_DAL }
    }

    pub fn x_grid(&self, n: usize) -> Result<RealGrid> {
        RealGrid::uniform(0.0, self.length, n)
    }

    pub fn potential(&self, n: usize) -> Result<Potential> {
        Potential::from_fn(self.x_grid(n)?, potential_value)
    }

    pub fn area_function(&self, n: usize) -> Result<AreaFunction> {
        AreaFunction::from_fn(self.length, n, |x| self.area(x), |x| self.area_slope(x))
    }

    /// Boundary values and `F_α` on a real grid.
    pub fn spectral(&self, kgrid: &RealGrid) -> Result<(JostBoundary, JostFunctionSamples)> {
        let mut f0 = Vec::with_capacity(kgrid.len());
        let mut df0 = Vec::with_capacity(kgrid.len());
        for &k in kgrid.points() {
            let kc = Complex64::new(k, 0.0);
            // at k = 0 the truncation correction is below round-off
            let (f, df) = if k == 0.0 { Self::jost_at_origin_rational(kc) } else { self.jost(kc, 0.0)? };
            f0.push(f);
            df0.push(df);
        }
        let values = f0.iter().zip(&df0).map(|(f, df)| -I * (df + self.cot_alpha * f)).collect();
        Ok((
            JostBoundary { kgrid: kgrid.clone(), f0, df0 },
            JostFunctionSamples { kgrid: kgrid.clone(), values },
        ))
    }

    /// Fourier kernel `(1/2π)∫ρ(k)e^{iky}dk` of the right reflection coefficient.
    pub fn rho_hat(y: f64) -> f64 {
        let s = s5();
        if y > 0.0 {
            -4.0 * s * (-s * y).exp() / ((s + 1.0) * (s + 2.0))
        } else {
            // residues at −i and −2i
            let r1 = -2.0 * (-I + I * s) * y.exp() / ((I) * (-I - I * s));
            let r2 = -2.0 * (-2.0 * I + I * s) * (2.0 * y).exp() / ((-I) * (-2.0 * I - I * s));
            (-I * (r1 + r2)).re
        }
    }

    /// Fourier kernel `(1/2π)∫ℓ(k)e^{iky}dk`.
    pub fn ell_hat(y: f64) -> f64 {
        if y > 0.0 {
            0.0
        } else {
            2.0 * ((2.0 * y).exp() - y.exp())
        }
    }
}

/// Constants attached to every golden dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenMetadata {
    pub length: f64,
    pub a0: f64,
    pub a_l: f64,
    pub da_l: f64,
    pub nominal_cot_alpha: f64,
    pub cot_alpha: f64,
    pub mic_distance: f64,
}

/// Exact-model samples of one observable, using the nominal lip constants.
pub fn golden_dataset(kind: ObservableKind, kgrid: &RealGrid) -> Result<(SpectralData, GoldenMetadata)> {
    let model = ClosedFormModel::default();
    let ends = model.nominal_ends();
    let meta = GoldenMetadata {
        length: model.length,
        a0: ends.a0,
        a_l: ends.al,
        da_l: ends.dal,
        nominal_cot_alpha: NOMINAL_COT_ALPHA,
        cot_alpha: model.cot_alpha,
        mic_distance: MIC_DISTANCE,
    };
    if kind == ObservableKind::OutputImpedance {
        let z = kgrid.points().iter().map(|&k| output_impedance(k, ends, model.consts)).collect();
        let data = SpectralData::new(kind, kgrid.clone(), crate::forward::SpectralValues::Complex(z), None)?;
        return Ok((data, meta));
    }
    let (b, fs) = model.spectral(kgrid)?;
    let r = (kind == ObservableKind::MicPressureMag).then_some(MIC_DISTANCE);
    Ok((observable(kind, ends, &b, &fs, model.consts, r)?, meta))
}
