//! From magnitude-only measurements to the Jost function, boundary values and
//! scattering coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{
    scattering_coefficients, JostBoundary, JostFunctionSamples, ObservableKind, PhysicalConstants, ScatteringTriple,
    SpectralData,
};
use crate::numerics::{
    cosine_kernel, outer_from_magnitude_at_origin, schwarz_extend, schwarz_extend_parity, tail_limit, ComplexSamples,
    Normalization, Origin, Parity, RealGrid, RealSamples, TailDiagnostic, TailFit, TailModel,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `Λ_α(k) = −1 + k f(k,0)/F_α(k)` on a symmetric grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSamples {
    pub kgrid: RealGrid,
    pub values: Vec<Complex64>,
    /// Estimate of `lim k Λ_α(k)`.
    pub limit_k_lambda: Complex64,
}

/// `f(k,0)`, `f′(k,0)` and the boundary parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryValues {
    pub kgrid: RealGrid,
    pub f0: Vec<Complex64>,
    pub df0: Vec<Complex64>,
    pub cot_alpha: f64,
}

impl BoundaryValues {
    pub fn to_jost_boundary(&self) -> JostBoundary {
        JostBoundary { kgrid: self.kgrid.clone(), f0: self.f0.clone(), df0: self.df0.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub lambda: LambdaSamples,
    pub jost: JostFunctionSamples,
    pub boundary: BoundaryValues,
    pub scattering: ScatteringTriple,
    /// Largest relative deviation of `|F_α|` from the input on `[0.5, k_max/2]`.
    pub roundtrip_defect: f64,
    pub tail: TailDiagnostic,
}

fn check_even_grid(grid: &RealGrid) -> Result<(f64, bool)> {
    let h = grid
        .spacing()
        .ok_or_else(|| Error::InvalidGrid("spectral data must be uniformly sampled".into()))?;
    if grid.is_symmetric() {
        return Ok((h, true));
    }
    let first = grid.first();
    if (first - h).abs() <= 1e-9 * h || (first.abs() <= 1e-12 * h && grid.len() > 1) {
        Ok((h, false))
    } else {
        Err(Error::InvalidGrid(format!(
            "positive grids must be k_j = j·h (first node {first}, spacing {h})"
        )))
    }
}

fn positive_part(s: &RealSamples) -> (f64, Vec<f64>) {
    let pts = s.grid.points();
    let h = s.grid.spacing().unwrap_or_default();
    let v: Vec<f64> = pts.iter().zip(&s.values).filter(|(k, _)| **k > 0.5 * h).map(|(_, v)| *v).collect();
    (h, v)
}

fn mirrored(h: f64, pos: &[f64], center: f64, sign: f64) -> Result<RealSamples> {
    let n = pos.len();
    let grid = RealGrid::symmetric(h * n as f64, n)?;
    let mut values = Vec::with_capacity(2 * n + 1);
    values.extend(pos.iter().rev().map(|v| sign * v));
    values.push(center);
    values.extend_from_slice(pos);
    RealSamples::new(grid, values)
}

/// Even extension of samples on `k_j = j·h`, `j ≥ 1` (a node at zero is
/// ignored); the value at zero is extrapolated quadratically in `k²`.
pub fn even_extend(s: &RealSamples) -> Result<RealSamples> {
    if check_even_grid(&s.grid)?.1 {
        return Ok(s.clone());
    }
    let (h, pos) = positive_part(s);
    if pos.len() < 3 {
        return Err(Error::InvalidGrid("need at least three positive nodes".into()));
    }
    let center = 1.5 * pos[0] - 0.6 * pos[1] + 0.1 * pos[2];
    mirrored(h, &pos, center, 1.0)
}

/// Even extension of a positive magnitude; the origin value is extrapolated
/// from the squares and clamped at zero.
pub fn even_extend_magnitude(s: &RealSamples) -> Result<RealSamples> {
    if check_even_grid(&s.grid)?.1 {
        return Ok(s.clone());
    }
    let (h, pos) = positive_part(s);
    if pos.len() < 3 {
        return Err(Error::InvalidGrid("need at least three positive nodes".into()));
    }
    let sq = 1.5 * pos[0] * pos[0] - 0.6 * pos[1] * pos[1] + 0.1 * pos[2] * pos[2];
    mirrored(h, &pos, sq.max(0.0).sqrt(), 1.0)
}

/// Odd extension of samples on `k_j = j·h`; zero at the origin.
pub fn odd_extend(s: &RealSamples) -> Result<RealSamples> {
    if check_even_grid(&s.grid)?.1 {
        return Ok(s.clone());
    }
    let (h, pos) = positive_part(s);
    mirrored(h, &pos, 0.0, -1.0)
}

fn center_of(grid: &RealGrid) -> usize {
    grid.len() / 2
}

/// Boundary values from `F_α`, `Λ_α` and `cot α`.
fn boundary_from(jost: &[Complex64], lambda: &[Complex64], cot: f64, grid: &RealGrid) -> BoundaryValues {
    let k = grid.points();
    let c = center_of(grid);
    let mut f0: Vec<Complex64> = (0..k.len())
        .map(|j| if j == c { Complex64::default() } else { jost[j] * (1.0 + lambda[j]) / k[j] })
        .collect();
    let re0 = 1.5 * f0[c + 1].re - 0.6 * f0[c + 2].re + 0.1 * f0[c + 3].re;
    f0[c] = Complex64::new(re0, 0.0);
    let df0 = jost.iter().zip(&f0).map(|(fa, f)| I * fa - cot * f).collect();
    BoundaryValues { kgrid: grid.clone(), f0, df0, cot_alpha: cot }
}

/// Jost function, boundary values and scattering coefficients from `|F_α|`.
pub fn analytic_completion(mag: &RealSamples) -> Result<Completion> {
    let mag = even_extend_magnitude(mag)?;
    let grid = mag.grid.clone();
    let k = grid.points();
    let c = center_of(&grid);
    for (&kj, &m) in k.iter().zip(&mag.values) {
        if kj != 0.0 && !(m > 0.0) {
            return Err(Error::BoundState { k: kj });
        }
    }
    let re_lambda: Vec<f64> = k
        .iter()
        .zip(&mag.values)
        .enumerate()
        .map(|(j, (&kj, &m))| if j == c && m == 0.0 { 0.0 } else { -1.0 + kj * kj / (m * m) })
        .collect();
    let mut re_lambda = RealSamples::new(grid.clone(), re_lambda)?;
    if mag.values[c] == 0.0 {
        let v = &re_lambda.values;
        re_lambda.values[c] = 1.5 * v[c + 1] - 0.6 * v[c + 2] + 0.1 * v[c + 3];
    }
    let (lambda, tail) = schwarz_extend(&re_lambda)?;
    // lim k Im Λ equals (1/π)∫ Re Λ, evaluated with the closed-form tail.
    let cot = cosine_kernel(&re_lambda, &[0.0])?[0];
    let origin = if mag.values[c] == 0.0 { Origin::SimpleZero } else { Origin::NonZero };
    let (outer, _) = outer_from_magnitude_at_origin(&mag, Normalization::LinearFactorK, origin)?;
    let boundary = boundary_from(&outer.values, &lambda.values, cot, &grid);
    let scattering = scattering_coefficients(&boundary.to_jost_boundary())?;
    let kmax = grid.last();
    let roundtrip_defect = k
        .iter()
        .zip(outer.values.iter().zip(&mag.values))
        .filter(|(kj, _)| **kj >= 0.5 && **kj <= 0.5 * kmax)
        .map(|(_, (f, m))| (f.norm() / m - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Completion {
        lambda: LambdaSamples { kgrid: grid.clone(), values: lambda.values, limit_k_lambda: I * cot },
        jost: JostFunctionSamples { kgrid: grid, values: outer.values },
        boundary,
        scattering,
        roundtrip_defect,
        tail,
    })
}

/// Optional endpoint information accompanying magnitude data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideInfo {
    /// `A(l)` in cm².
    #[serde(default)]
    pub a_l: Option<f64>,
    /// `|A′(l)|` in cm.
    #[serde(default)]
    pub abs_da_l: Option<f64>,
    /// `|A′(l)|/A(l)` in 1/cm.
    #[serde(default)]
    pub ratio: Option<f64>,
}

impl SideInfo {
    pub fn endpoint_ratio(&self) -> Option<f64> {
        self.ratio.or(match (self.a_l, self.abs_da_l) {
            (Some(a), Some(d)) if a > 0.0 => Some(d.abs() / a),
            _ => None,
        })
    }
}

/// Which high-k limit fixed the scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleSource {
    MicrophonePressure,
    LipPressure,
    TransferFunction,
    GreenFunction,
    InputImpedance,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleInfo {
    pub source: ScaleSource,
    /// Raw high-k limit of the normalized data.
    pub limit: f64,
    pub tail_residual: f64,
    /// `A(0)` when the data fix it.
    pub a0: Option<f64>,
    /// `√(A(0)A(l))` from lip data.
    pub sqrt_a0_al: Option<f64>,
    /// `A(l)/A(0)` from transfer-type data.
    pub al_over_a0: Option<f64>,
}

impl ScaleInfo {
    fn from_fit(source: ScaleSource, fit: &TailFit) -> Self {
        Self {
            source,
            limit: fit.limit,
            tail_residual: fit.residual,
            a0: None,
            sqrt_a0_al: None,
            al_over_a0: None,
        }
    }
}

/// Parameter family left open by the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    None,
    OneParam { name: String, default_grid: Vec<f64> },
    TwoParam { names: [String; 2], default_grids: [Vec<f64>; 2] },
}

pub const PARAM_A_L: &str = "a_l";
pub const PARAM_ABS_DA_L: &str = "abs_da_l";
pub const PARAM_RATIO: &str = "ratio";
pub const PARAM_COT_ALPHA: &str = "cot_alpha";
pub const PARAM_A0: &str = "a0";

pub fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

pub fn lin_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

impl Family {
    pub fn endpoint_pair() -> Self {
        Family::TwoParam {
            names: [PARAM_A_L.into(), PARAM_ABS_DA_L.into()],
            default_grids: [log_spaced(0.5, 20.0, 15), lin_spaced(0.0, 2.0, 11)],
        }
    }

    pub fn endpoint_ratio() -> Self {
        Family::OneParam { name: PARAM_RATIO.into(), default_grid: lin_spaced(0.0, 2.0, 11) }
    }

    pub fn names(&self) -> Vec<&str> {
        match self {
            Family::None => vec![],
            Family::OneParam { name, .. } => vec![name.as_str()],
            Family::TwoParam { names, .. } => names.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MagnitudeOutcome {
    /// `|F_α|` on the symmetric grid and the recovered scale.
    Unique { mag: RealSamples, scale: ScaleInfo },
    /// The data leave `|F_α|` undetermined; the named parameters select it.
    NonUnique { family: Family, scale: ScaleInfo },
}

fn positive_samples(data: &SpectralData) -> Result<RealSamples> {
    let v = data
        .real()
        .ok_or_else(|| Error::InvalidInput(format!("{} data must be real", data.kind)))?;
    RealSamples::new(data.kgrid.clone(), v.to_vec())
}

/// `|𝐓(k,l)|` from transfer or microphone data.
fn transfer_equivalent(data: &SpectralData, consts: PhysicalConstants) -> Result<RealSamples> {
    let s = positive_samples(data)?;
    match data.kind {
        ObservableKind::TransferMag => Ok(s),
        ObservableKind::MicPressureMag => {
            let r = data.r.ok_or_else(|| Error::InvalidInput("microphone distance missing".into()))?;
            let vals = s
                .grid
                .points()
                .iter()
                .zip(&s.values)
                .map(|(&k, &p)| if k == 0.0 { 0.0 } else { 4.0 * PI * r / (consts.c * k.abs() * consts.mu) * p })
                .collect();
            RealSamples::new(s.grid.clone(), vals)
        }
        _ => Err(Error::InvalidInput(format!("{} is not transfer-type data", data.kind))),
    }
}

fn check_positive(s: &RealSamples) -> Result<()> {
    for (&k, &v) in s.grid.points().iter().zip(&s.values) {
        if k != 0.0 && !(v > 0.0 && v.is_finite()) {
            return Err(Error::NonpositiveMagnitude { k });
        }
    }
    Ok(())
}

fn limit_of(s: &RealSamples) -> Result<TailFit> {
    let fit = tail_limit(s, TailModel::EvenInversePowers)?;
    if !(fit.limit > 0.0) {
        return Err(Error::Inconsistent(format!("nonpositive high-k limit {}", fit.limit)));
    }
    Ok(fit)
}

/// `|F_α|` from transfer-type data for a given `|A′(l)|/A(l)`.
pub fn jost_magnitude_for_ratio(
    data: &SpectralData,
    ratio: f64,
    consts: PhysicalConstants,
) -> Result<(RealSamples, ScaleInfo)> {
    let t = transfer_equivalent(data, consts)?;
    check_positive(&t)?;
    let fit = limit_of(&t)?;
    let d = 0.5 * ratio;
    let vals = t
        .grid
        .points()
        .iter()
        .zip(&t.values)
        .map(|(&k, &v)| if k == 0.0 { 0.0 } else { fit.limit * (k * k + d * d).sqrt() / v })
        .collect();
    let source = if data.kind == ObservableKind::MicPressureMag {
        ScaleSource::MicrophonePressure
    } else {
        ScaleSource::TransferFunction
    };
    let mut scale = ScaleInfo::from_fit(source, &fit);
    scale.al_over_a0 = Some(fit.limit * fit.limit);
    let mag = even_extend_magnitude(&RealSamples::new(t.grid.clone(), vals)?)?;
    Ok((mag, scale))
}

/// `|F_α|` and the recoverable scale from one magnitude-only data set.
pub fn data_to_jost_magnitude(
    data: &SpectralData,
    side: SideInfo,
    consts: PhysicalConstants,
) -> Result<MagnitudeOutcome> {
    let cmu = consts.c_mu();
    match data.kind {
        ObservableKind::LipPressureMag | ObservableKind::GreenMag => {
            let s = positive_samples(data)?;
            check_positive(&s)?;
            let fit = limit_of(&s)?;
            let vals = s
                .grid
                .points()
                .iter()
                .zip(&s.values)
                .map(|(&k, &p)| if k == 0.0 { 0.0 } else { k.abs() * fit.limit / p })
                .collect();
            let mag = even_extend_magnitude(&RealSamples::new(s.grid.clone(), vals)?)?;
            let scale = if data.kind == ObservableKind::LipPressureMag {
                let mut sc = ScaleInfo::from_fit(ScaleSource::LipPressure, &fit);
                sc.sqrt_a0_al = Some(cmu / fit.limit);
                sc
            } else {
                let mut sc = ScaleInfo::from_fit(ScaleSource::GreenFunction, &fit);
                sc.a0 = Some((cmu / fit.limit).powi(2));
                sc
            };
            Ok(MagnitudeOutcome::Unique { mag, scale })
        }
        ObservableKind::TransferMag | ObservableKind::MicPressureMag => match side.endpoint_ratio() {
            Some(ratio) => {
                let (mag, mut scale) = jost_magnitude_for_ratio(data, ratio, consts)?;
                if let (Some(al), Some(q)) = (side.a_l, scale.al_over_a0) {
                    scale.a0 = Some(al / q);
                }
                Ok(MagnitudeOutcome::Unique { mag, scale })
            }
            None => {
                let t = transfer_equivalent(data, consts)?;
                check_positive(&t)?;
                let fit = limit_of(&t)?;
                let source = if data.kind == ObservableKind::MicPressureMag {
                    ScaleSource::MicrophonePressure
                } else {
                    ScaleSource::TransferFunction
                };
                let mut scale = ScaleInfo::from_fit(source, &fit);
                scale.al_over_a0 = Some(fit.limit * fit.limit);
                let family = if let Some(al) = side.a_l {
                    scale.a0 = Some(al / (fit.limit * fit.limit));
                    Family::endpoint_ratio()
                } else {
                    Family::endpoint_pair()
                };
                Ok(MagnitudeOutcome::NonUnique { family, scale })
            }
        },
        other => Err(Error::InvalidInput(format!("{other} is not handled by the magnitude route"))),
    }
}

/// Result of the input-impedance route.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceRetrieval {
    pub lambda: LambdaSamples,
    pub mag: RealSamples,
    pub a0: f64,
    pub tail_residual: f64,
}

/// `Λ_α`, `|F_α|` and `A(0)` from `|Z(k,0)|`.
pub fn ratio_from_input_impedance(data: &SpectralData, consts: PhysicalConstants) -> Result<ImpedanceRetrieval> {
    if data.kind != ObservableKind::InputImpedanceMag {
        return Err(Error::InvalidInput(format!("expected input_impedance_mag, got {}", data.kind)));
    }
    let s = positive_samples(data)?;
    check_positive(&s)?;
    let fit = limit_of(&s)?;
    let a0 = consts.c_mu() / fit.limit;
    let normalized = RealSamples::new(s.grid.clone(), s.values.iter().map(|v| v / fit.limit).collect())?;
    let mut m = even_extend_magnitude(&normalized)?;
    let c = center_of(&m.grid);
    // Generic ducts have F_α(0) ≠ 0, so k f(k,0)/F_α(k) vanishes at the origin.
    let generic = m.values[c] < 0.5 * m.values[c + 1];
    let origin = if generic {
        m.values[c] = 0.0;
        Origin::SimpleZero
    } else {
        Origin::NonZero
    };
    let (ratio, _) = outer_from_magnitude_at_origin(&m, Normalization::None, origin)?;
    let k = m.grid.points();
    let lambda: Vec<Complex64> = ratio.values.iter().map(|r| r - 1.0).collect();
    let mut mag = Vec::with_capacity(k.len());
    for (j, &kj) in k.iter().enumerate() {
        if j == c {
            mag.push(0.0);
            continue;
        }
        let re = ratio.values[j].re;
        if !(re > 0.0) {
            return Err(Error::Inconsistent(format!("Re(1 + Λ) is not positive at k = {kj}")));
        }
        mag.push(kj.abs() / re.sqrt());
    }
    let sq = |j: usize| mag[j] * mag[j];
    mag[c] = if generic { (1.5 * sq(c + 1) - 0.6 * sq(c + 2) + 0.1 * sq(c + 3)).max(0.0).sqrt() } else { 0.0 };
    let grid = m.grid.clone();
    let re_lambda = RealSamples::new(grid.clone(), lambda.iter().map(|z| z.re).collect())?;
    let cot = cosine_kernel(&re_lambda, &[0.0])?[0];
    Ok(ImpedanceRetrieval {
        lambda: LambdaSamples { kgrid: grid.clone(), values: lambda, limit_k_lambda: I * cot },
        mag: RealSamples::new(grid, mag)?,
        a0,
        tail_residual: fit.residual,
    })
}

/// Completion of `L` (and hence `T`, `R`) from the real or imaginary part of
/// the reflectance.
pub fn reflectance_completion(part: &SpectralData) -> Result<ScatteringTriple> {
    let s = positive_samples(part)?;
    let l: ComplexSamples = match part.kind {
        // The reflectance is L(−k) = L(k)*: same real part, opposite imaginary part.
        ObservableKind::ReflectanceRe => schwarz_extend(&even_extend(&s)?)?.0,
        ObservableKind::ReflectanceIm => {
            let neg = RealSamples::new(s.grid.clone(), s.values.iter().map(|v| -v).collect())?;
            let im = odd_extend(&neg)?;
            let (w, _) = schwarz_extend_parity(&im, Parity::Odd)?;
            let vals = w.values.iter().map(|z| I * z).collect();
            ComplexSamples::new(w.grid, vals, "schwarz")?
        }
        other => return Err(Error::InvalidInput(format!("expected reflectance data, got {other}"))),
    };
    let grid = l.grid.clone();
    let k = grid.points();
    let n = k.len();
    let c = center_of(&grid);
    let mut values = l.values;
    // Exact conjugate symmetry on mirrored nodes.
    for j in 0..c {
        values[j] = values[n - 1 - j].conj();
    }
    values[c].im = 0.0;
    for (j, &kj) in k.iter().enumerate() {
        let m = values[j].norm();
        if kj != 0.0 && m >= 1.0 {
            return Err(Error::Unitarity { k: kj, modulus: m });
        }
    }
    let t_mag: Vec<f64> = values.iter().map(|z| (1.0 - z.norm_sqr()).max(0.0).sqrt()).collect();
    let origin = if (1.0 - values[c].norm()).abs() < 1e-3 { Origin::SimpleZero } else { Origin::NonZero };
    let mut t_mag = RealSamples::new(grid.clone(), t_mag)?;
    if origin == Origin::SimpleZero {
        t_mag.values[c] = 0.0;
    }
    let (t, _) = outer_from_magnitude_at_origin(&t_mag, Normalization::None, origin)?;
    let mut t = t.values;
    for j in 0..c {
        t[j] = t[n - 1 - j].conj();
    }
    let mut r: Vec<Complex64> = (0..n)
        .map(|j| {
            let mj = n - 1 - j;
            if t[mj].norm() == 0.0 {
                Complex64::default()
            } else {
                -values[mj] * t[j] / t[mj]
            }
        })
        .collect();
    if t[c].norm() == 0.0 {
        r[c] = Complex64::new(1.5 * r[c + 1].re - 0.6 * r[c + 2].re + 0.1 * r[c + 3].re, 0.0);
    }
    Ok(ScatteringTriple { kgrid: grid, t, l: values, r })
}
