use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::area::{AreaFunction, DuctEnds, PhysicalConstants};
use super::jost::{JostBoundary, JostField, JostFunctionSamples};
use crate::error::{Error, Result};
use crate::numerics::{Interpolant, RealGrid};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    LipPressureMag,
    MicPressureMag,
    OutputImpedance,
    OutputImpedanceMag,
    InputImpedanceMag,
    TransferMag,
    GreenMag,
    ReflectanceRe,
    ReflectanceIm,
}

impl ObservableKind {
    pub const ALL: [ObservableKind; 9] = [
        ObservableKind::LipPressureMag,
        ObservableKind::MicPressureMag,
        ObservableKind::OutputImpedance,
        ObservableKind::OutputImpedanceMag,
        ObservableKind::InputImpedanceMag,
        ObservableKind::TransferMag,
        ObservableKind::GreenMag,
        ObservableKind::ReflectanceRe,
        ObservableKind::ReflectanceIm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::LipPressureMag => "lip_pressure_mag",
            Self::MicPressureMag => "mic_pressure_mag",
            Self::OutputImpedance => "output_impedance",
            Self::OutputImpedanceMag => "output_impedance_mag",
            Self::InputImpedanceMag => "input_impedance_mag",
            Self::TransferMag => "transfer_mag",
            Self::GreenMag => "green_mag",
            Self::ReflectanceRe => "reflectance_re",
            Self::ReflectanceIm => "reflectance_im",
        }
    }

    pub fn units(self) -> &'static str {
        match self {
            Self::LipPressureMag | Self::MicPressureMag => "dyn/cm^2",
            Self::OutputImpedance | Self::OutputImpedanceMag | Self::InputImpedanceMag => "dyn*s/cm^5",
            Self::GreenMag => "dyn*s/cm^4",
            Self::TransferMag | Self::ReflectanceRe | Self::ReflectanceIm => "1",
        }
    }

    pub fn is_complex(self) -> bool {
        self == Self::OutputImpedance
    }

    pub fn is_magnitude(self) -> bool {
        !matches!(self, Self::OutputImpedance | Self::ReflectanceRe | Self::ReflectanceIm)
    }
}

impl fmt::Display for ObservableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObservableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown observable kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralValues {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl SpectralValues {
    pub fn len(&self) -> usize {
        match self {
            Self::Real(v) => v.len(),
            Self::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One measured or synthesized observable on a wavenumber grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub kind: ObservableKind,
    pub kgrid: RealGrid,
    pub values: SpectralValues,
    /// Microphone distance in cm.
    pub r: Option<f64>,
}

impl SpectralData {
    pub fn new(kind: ObservableKind, kgrid: RealGrid, values: SpectralValues, r: Option<f64>) -> Result<Self> {
        if values.len() != kgrid.len() {
            return Err(Error::InvalidInput("values do not match the grid".into()));
        }
        match (&values, kind.is_complex()) {
            (SpectralValues::Complex(_), false) | (SpectralValues::Real(_), true) => {
                return Err(Error::InvalidInput(format!("wrong value type for {kind}")));
            }
            _ => {}
        }
        match &values {
            SpectralValues::Real(v) => {
                if let Some(index) = v.iter().position(|x| !x.is_finite()) {
                    return Err(Error::NonFinite { index });
                }
                if kind.is_magnitude() && v.iter().any(|x| *x < 0.0) {
                    return Err(Error::InvalidInput(format!("{kind} must be nonnegative")));
                }
            }
            SpectralValues::Complex(v) => {
                if let Some(index) = v.iter().position(|x| !(x.re.is_finite() && x.im.is_finite())) {
                    return Err(Error::NonFinite { index });
                }
            }
        }
        if (kind == ObservableKind::MicPressureMag) != r.is_some() {
            return Err(Error::InvalidInput("microphone distance is required exactly for mic_pressure_mag".into()));
        }
        if let Some(r) = r {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidInput("microphone distance must be positive".into()));
            }
        }
        Ok(Self { kind, kgrid, values, r })
    }

    pub fn units(&self) -> &'static str {
        self.kind.units()
    }

    pub fn real(&self) -> Option<&[f64]> {
        match &self.values {
            SpectralValues::Real(v) => Some(v),
            SpectralValues::Complex(_) => None,
        }
    }

    pub fn complex(&self) -> Option<&[Complex64]> {
        match &self.values {
            SpectralValues::Complex(v) => Some(v),
            SpectralValues::Real(_) => None,
        }
    }

    /// Real values, or moduli for complex data.
    pub fn magnitudes(&self) -> Vec<f64> {
        match &self.values {
            SpectralValues::Real(v) => v.iter().map(|x| x.abs()).collect(),
            SpectralValues::Complex(v) => v.iter().map(|x| x.norm()).collect(),
        }
    }
}

/// Default observable grid: `k = j·0.02`, `j = 1..=2000`.
pub fn default_observable_grid() -> RealGrid {
    RealGrid::uniform(0.02, 40.0, 2000).expect("static grid")
}

/// Pressure and volume velocity inside the duct.
#[derive(Debug, Clone, PartialEq)]
pub struct AcousticField {
    pub kgrid: RealGrid,
    pub xgrid: RealGrid,
    pub p: Vec<Vec<Complex64>>,
    pub v: Vec<Vec<Complex64>>,
}

/// Pressure `P(k,x)` and volume velocity `V(k,x)` driven by a unit glottal
/// volume velocity, using `f(−k,x) = f(k,x)*` and `F_α(−k) = −F_α(k)*` on
/// the real axis.
pub fn acoustic_field(
    area: &AreaFunction,
    field: &JostField,
    fs: &JostFunctionSamples,
    consts: PhysicalConstants,
) -> Result<AcousticField> {
    if field.kgrid != fs.kgrid {
        return Err(Error::InvalidGrid("Jost field and Jost function grids differ".into()));
    }
    let x = field.xgrid.points();
    let a_interp = area.interpolant();
    let a_slope = Interpolant::new(area.grid(), &area.slope());
    let (a0, l) = (area.values()[0], area.length());
    let nx = x.len();
    let areas: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| if i == 0 { a0 } else if i == nx - 1 { area.ends().al } else { a_interp.eval(xi.min(l)) })
        .collect();
    let slopes: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| if i == 0 { area.d_a0() } else if i == nx - 1 { area.d_al() } else { a_slope.eval(xi) })
        .collect();
    let cmu = consts.c_mu();
    let mut p = Vec::with_capacity(field.kgrid.len());
    let mut v = Vec::with_capacity(field.kgrid.len());
    for (j, &k) in field.kgrid.points().iter().enumerate() {
        let fm = -fs.values[j].conj();
        if fm.norm() < 1e-12 * k.abs().max(1.0) {
            return Err(Error::ZeroDenominator { k });
        }
        let row_p = (0..nx)
            .map(|i| -cmu * k * field.f[j][i].conj() / (areas[i].sqrt() * a0.sqrt() * fm))
            .collect();
        let row_v = (0..nx)
            .map(|i| {
                let bracket = field.df[j][i].conj() - slopes[i] / (2.0 * areas[i]) * field.f[j][i].conj();
                -I * areas[i].sqrt() / (a0.sqrt() * fm) * bracket
            })
            .collect();
        p.push(row_p);
        v.push(row_v);
    }
    Ok(AcousticField { kgrid: field.kgrid.clone(), xgrid: field.xgrid.clone(), p, v })
}

/// Complex pressure at a microphone a distance `r` beyond the lips.
pub fn mic_pressure(k: f64, f_minus: Complex64, ends: DuctEnds, consts: PhysicalConstants, r: f64, l: f64) -> Complex64 {
    let cmu = consts.c_mu();
    let phase = (-I * k * (r + l)).exp();
    let bracket = I * k + ends.dal / (2.0 * ends.al);
    -cmu * k * ends.al.sqrt() * phase / (4.0 * PI * r * ends.a0.sqrt() * f_minus) * bracket
}

/// Output impedance `Z(k, l)`.
pub fn output_impedance(k: f64, ends: DuctEnds, consts: PhysicalConstants) -> Complex64 {
    2.0 * I * consts.c_mu() * k / (2.0 * I * k * ends.al + ends.dal)
}

/// Synthesize one observable on the grid of `fs` (which must match `b`).
pub fn observable(
    kind: ObservableKind,
    ends: DuctEnds,
    b: &JostBoundary,
    fs: &JostFunctionSamples,
    consts: PhysicalConstants,
    r: Option<f64>,
) -> Result<SpectralData> {
    if b.kgrid != fs.kgrid {
        return Err(Error::InvalidGrid("boundary values and Jost function grids differ".into()));
    }
    if kind == ObservableKind::MicPressureMag && r.is_none() {
        return Err(Error::InvalidInput("mic_pressure_mag needs a microphone distance".into()));
    }
    let ks = fs.kgrid.points();
    let cmu = consts.c_mu();
    let DuctEnds { a0, al, dal } = ends;
    if !(a0 > 0.0 && al > 0.0) {
        return Err(Error::InvalidInput("end areas must be positive".into()));
    }
    let radiation = |k: f64| (k * k + dal * dal / (4.0 * al * al)).sqrt();
    let real = |g: &dyn Fn(usize, f64) -> f64| -> Vec<f64> { ks.iter().enumerate().map(|(j, &k)| g(j, k)).collect() };
    let fabs = |j: usize| fs.values[j].norm();
    let values = match kind {
        ObservableKind::LipPressureMag => {
            SpectralValues::Real(real(&|j, k| cmu * k.abs() / ((al * a0).sqrt() * fabs(j))))
        }
        ObservableKind::MicPressureMag => {
            let r = r.unwrap();
            SpectralValues::Real(real(&|j, k| {
                cmu * k.abs() / (4.0 * PI * r) * (al / a0).sqrt() * radiation(k) / fabs(j)
            }))
        }
        ObservableKind::OutputImpedance => {
            SpectralValues::Complex(ks.iter().map(|&k| output_impedance(k, ends, consts)).collect())
        }
        ObservableKind::OutputImpedanceMag => {
            SpectralValues::Real(real(&|_, k| 2.0 * cmu * k.abs() / (4.0 * k * k * al * al + dal * dal).sqrt()))
        }
        ObservableKind::InputImpedanceMag => {
            SpectralValues::Real(real(&|j, k| cmu * k.abs() * b.f0[j].norm() / (a0 * fabs(j))))
        }
        ObservableKind::TransferMag => SpectralValues::Real(real(&|j, k| (al / a0).sqrt() * radiation(k) / fabs(j))),
        ObservableKind::GreenMag => SpectralValues::Real(real(&|j, k| cmu * k.abs() / (a0.sqrt() * fabs(j)))),
        ObservableKind::ReflectanceRe | ObservableKind::ReflectanceIm => {
            let refl: Vec<Complex64> = (0..ks.len())
                .map(|j| {
                    let (k, f, df) = (ks[j], b.f0[j], b.df0[j]);
                    let den = I * k * f + df;
                    if den.norm() == 0.0 {
                        return Err(Error::ZeroDenominator { k });
                    }
                    Ok(((I * k * f - df) / den).conj())
                })
                .collect::<Result<_>>()?;
            if kind == ObservableKind::ReflectanceRe {
                SpectralValues::Real(refl.iter().map(|z| z.re).collect())
            } else {
                SpectralValues::Real(refl.iter().map(|z| z.im).collect())
            }
        }
    };
    let r = if kind == ObservableKind::MicPressureMag { r } else { None };
    SpectralData::new(kind, fs.kgrid.clone(), values, r)
}
