//! From `(Q, cot α)` to the relative and absolute area, endpoint constants
//! from the output impedance, and the scenario pipelines.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{
    jost_boundary, scattering_coefficients, synthesize, AreaFunction, BoundaryParameter, ObservableKind,
    PhysicalConstants, Potential, SpectralData,
};
use crate::kernel_solvers::{glm_kernel, glm_solve, marchenko_right, DEFAULT_X_POINTS};
use crate::numerics::{ode_integrate_complex, ComplexSamples, Direction, Interpolant, RealGrid, RealSamples};
use crate::phase_retrieval::{
    data_to_jost_magnitude, jost_magnitude_for_ratio, lin_spaced, log_spaced, ratio_from_input_impedance,
    reflectance_completion, Family, MagnitudeOutcome, ScaleInfo, ScaleSource, SideInfo, PARAM_A0, PARAM_ABS_DA_L,
    PARAM_A_L, PARAM_COT_ALPHA, PARAM_RATIO,
};

const ODE_SUBSTEPS: usize = 4;
/// Relative cut-off for declaring the exceptional case in the determinant path.
const EXCEPTIONAL_THRESHOLD: f64 = 1e-10;
/// Default sup-norm tolerance of the resynthesis certificate.
pub const CERTIFICATE_TOLERANCE: f64 = 0.02;
/// Relative tolerance when comparing side information with the reconstruction.
pub const SIDE_INFO_TOLERANCE: f64 = 0.03;

/// `η` with `A = A(0)η²`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeArea {
    pub xgrid: RealGrid,
    pub eta: Vec<f64>,
    pub d_eta: Vec<f64>,
    /// Independent evaluation through the solutions anchored at `x = l`.
    pub determinant: Vec<f64>,
    pub exceptional: bool,
    /// `max |η_ode − η_det| / η_ode`.
    pub path_agreement: f64,
}

impl RelativeArea {
    pub fn d_eta0(&self) -> f64 {
        self.d_eta[0]
    }

    pub fn at_end(&self) -> (f64, f64) {
        (*self.eta.last().unwrap(), *self.d_eta.last().unwrap())
    }

    /// `A = a0·η²` with exact end slopes.
    pub fn area(&self, a0: f64) -> Result<AreaFunction> {
        if !(a0 > 0.0 && a0.is_finite()) {
            return Err(Error::InvalidInput(format!("A(0) must be positive, got {a0}")));
        }
        let values = self.eta.iter().map(|e| a0 * e * e).collect();
        let (el, del) = self.at_end();
        AreaFunction::new(
            self.xgrid.clone(),
            values,
            Some(2.0 * a0 * self.eta[0] * self.d_eta[0]),
            Some(2.0 * a0 * el * del),
        )
    }
}

fn real_ode(q: &Interpolant, start: (f64, f64), span: &RealGrid, dir: Direction) -> Result<(Vec<f64>, Vec<f64>)> {
    let sol = ode_integrate_complex(
        |x| q.eval(x),
        (Complex64::new(start.0, 0.0), Complex64::new(start.1, 0.0)),
        span,
        dir,
        ODE_SUBSTEPS,
    )?;
    Ok((sol.y.iter().map(|z| z.re).collect(), sol.dy.iter().map(|z| z.re).collect()))
}

/// Solves `y″ = Qy`, `y(0) = 1`, `y′(0) = −cot α` and cross-checks the result
/// against the representation through the solutions fixed at `x = l`.
pub fn relative_area(q: &Potential, bp: BoundaryParameter) -> Result<RelativeArea> {
    let cot = bp.cot_alpha;
    if !cot.is_finite() {
        return Err(Error::InvalidInput("cot α must be finite".into()));
    }
    let grid = q.grid.clone();
    if grid.first() != 0.0 {
        return Err(Error::InvalidGrid("potential grid must start at x = 0".into()));
    }
    let l = grid.last();
    let interp = q.interpolant();
    let (eta, d_eta) = real_ode(&interp, (1.0, -cot), &grid, Direction::Forward)?;

    // f(0,x) with f(0,l) = 1, f′(0,l) = 0 and w with w(l) = l, w′(l) = 1.
    let (f, df) = real_ode(&interp, (1.0, 0.0), &grid, Direction::Backward)?;
    let (w, dw) = real_ode(&interp, (l, 1.0), &grid, Direction::Backward)?;
    let bf = df[0] + cot * f[0];
    let bw = dw[0] + cot * w[0];
    let scale = df[0].abs() + (cot * f[0]).abs() + f64::MIN_POSITIVE;
    let exceptional = bf.abs() <= EXCEPTIONAL_THRESHOLD * scale;
    let determinant: Vec<f64> = if exceptional {
        f.iter().map(|v| v / f[0]).collect()
    } else {
        // f w′ − w f′ is constant and equals 1 at x = l.
        let wr = f[0] * dw[0] - w[0] * df[0];
        f.iter().zip(&w).map(|(fv, wv)| (bw * fv - bf * wv) / wr).collect()
    };
    let path_agreement = eta
        .iter()
        .zip(&determinant)
        .map(|(a, b)| (a - b).abs() / a.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    for (&x, &e) in grid.points().iter().zip(&eta) {
        if !(e > 0.0) {
            return Err(Error::UnphysicalArea { x });
        }
    }
    Ok(RelativeArea { xgrid: grid, eta, d_eta, determinant, exceptional, path_agreement })
}

/// `A(l)`, `A′(l)` and, when known, `A(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointConstants {
    pub a_l: f64,
    /// Signed when `sign_known`, otherwise `|A′(l)|`.
    pub da_l: f64,
    pub sign_known: bool,
    pub a0: Option<f64>,
}

fn value_at(data: &SpectralData, k: f64) -> Result<Complex64> {
    let ks = data.kgrid.points();
    if k < data.kgrid.first() || k > data.kgrid.last() {
        return Err(Error::InvalidInput(format!("k = {k} lies outside the data grid")));
    }
    if let Some(j) = ks.iter().position(|&x| (x - k).abs() <= 1e-12 * (1.0 + k.abs())) {
        return Ok(match (data.real(), data.complex()) {
            (Some(r), _) => Complex64::new(r[j], 0.0),
            (_, Some(c)) => c[j],
            _ => unreachable!(),
        });
    }
    Ok(match (data.real(), data.complex()) {
        (Some(r), _) => Complex64::new(Interpolant::new(&data.kgrid, r).eval(k), 0.0),
        (_, Some(c)) => {
            let re: Vec<f64> = c.iter().map(|z| z.re).collect();
            let im: Vec<f64> = c.iter().map(|z| z.im).collect();
            Complex64::new(Interpolant::new(&data.kgrid, &re).eval(k), Interpolant::new(&data.kgrid, &im).eval(k))
        }
        _ => unreachable!(),
    })
}

/// Endpoint constants from `Z(k,l)` or `|Z(k,l)|` at two wavenumbers.
pub fn endpoint_constants(
    z: &SpectralData,
    k1: f64,
    k2: f64,
    consts: PhysicalConstants,
) -> Result<EndpointConstants> {
    if !(k1 > 0.0 && k2 > 0.0 && k1.is_finite() && k2.is_finite()) {
        return Err(Error::InvalidInput("k1 and k2 must be positive".into()));
    }
    if (k1 - k2).abs() <= 1e-12 * (k1 + k2) {
        return Err(Error::InvalidInput("k1 and k2 must differ".into()));
    }
    let cmu = consts.c_mu();
    let (z1, z2) = (value_at(z, k1)?, value_at(z, k2)?);
    let (a_l, da_l, sign_known) = match z.kind {
        ObservableKind::OutputImpedance => {
            if z1.norm() == 0.0 || z2.norm() == 0.0 {
                return Err(Error::ZeroDenominator { k: if z1.norm() == 0.0 { k1 } else { k2 } });
            }
            let i = Complex64::new(0.0, 1.0);
            let a = cmu / (k1 - k2) * (k1 / z1 - k2 / z2);
            let d = 2.0 * i * cmu * k1 * k2 / (k1 - k2) * (1.0 / z2 - 1.0 / z1);
            (a.re, d.re, true)
        }
        ObservableKind::OutputImpedanceMag => {
            let (m1, m2) = (z1.re * z1.re, z2.re * z2.re);
            if m1 == 0.0 || m2 == 0.0 {
                return Err(Error::ZeroDenominator { k: if m1 == 0.0 { k1 } else { k2 } });
            }
            let den = k1 * k1 - k2 * k2;
            let a2 = cmu * cmu / den * (k1 * k1 / m1 - k2 * k2 / m2);
            if !(a2 > 0.0) {
                return Err(Error::Inconsistent(format!("radicand for A(l) is {a2:.6e}")));
            }
            let d2 = 4.0 * cmu * cmu * k1 * k1 * k2 * k2 / den * (1.0 / m2 - 1.0 / m1);
            (a2.sqrt(), d2.max(0.0).sqrt(), false)
        }
        other => return Err(Error::InvalidInput(format!("endpoint constants need output impedance, got {other}"))),
    };
    if !(a_l > 0.0) {
        return Err(Error::Inconsistent(format!("recovered A(l) = {a_l:.6e} is not positive")));
    }
    Ok(EndpointConstants { a_l, da_l, sign_known, a0: None })
}

/// Which data set drives the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Microphone,
    LipPressure,
    Transfer,
    Green,
    InputImpedance,
    Reflectance,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Microphone,
        Scenario::LipPressure,
        Scenario::Transfer,
        Scenario::Green,
        Scenario::InputImpedance,
        Scenario::Reflectance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Microphone => "microphone",
            Scenario::LipPressure => "lip_pressure",
            Scenario::Transfer => "transfer",
            Scenario::Green => "green",
            Scenario::InputImpedance => "input_impedance",
            Scenario::Reflectance => "reflectance",
        }
    }

    pub fn accepts(self, kind: ObservableKind) -> bool {
        use ObservableKind as K;
        matches!(
            (self, kind),
            (Scenario::Microphone, K::MicPressureMag)
                | (Scenario::LipPressure, K::LipPressureMag)
                | (Scenario::Transfer, K::TransferMag)
                | (Scenario::Green, K::GreenMag)
                | (Scenario::InputImpedance, K::InputImpedanceMag)
                | (Scenario::Reflectance, K::ReflectanceRe | K::ReflectanceIm)
        )
    }

    /// The data kind a scenario reads by default.
    pub fn default_kind(self) -> ObservableKind {
        match self {
            Scenario::Microphone => ObservableKind::MicPressureMag,
            Scenario::LipPressure => ObservableKind::LipPressureMag,
            Scenario::Transfer => ObservableKind::TransferMag,
            Scenario::Green => ObservableKind::GreenMag,
            Scenario::InputImpedance => ObservableKind::InputImpedanceMag,
            Scenario::Reflectance => ObservableKind::ReflectanceRe,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scenario '{s}'")))
    }
}

/// Tube length, discretization and certificate tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructOptions {
    pub length: f64,
    pub x_points: usize,
    pub consts: PhysicalConstants,
    pub certificate_tolerance: f64,
}

impl ReconstructOptions {
    pub fn new(length: f64) -> Self {
        Self {
            length,
            x_points: DEFAULT_X_POINTS,
            consts: PhysicalConstants::default(),
            certificate_tolerance: CERTIFICATE_TOLERANCE,
        }
    }
}

/// Forward resynthesis of the input data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: ObservableKind,
    /// `max|synth − data| / max|data|` over the data grid.
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub scenario: Scenario,
    pub potential: Potential,
    /// `None` when `cot α` is a family parameter.
    pub cot_alpha: Option<f64>,
    pub eta: Option<RelativeArea>,
    pub area: Option<AreaFunction>,
    pub family: Family,
    /// The part of `family` that already determines `η`.
    pub eta_family: Family,
    pub scale: Option<ScaleInfo>,
    pub certificate: Option<Certificate>,
    pub data: SpectralData,
    pub side: SideInfo,
    pub options: ReconstructOptions,
}

/// One materialized family member.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub params: BTreeMap<String, f64>,
    pub potential: Potential,
    pub cot_alpha: f64,
    pub eta: RelativeArea,
    pub area: AreaFunction,
    pub certificate: Certificate,
}

fn sup_deviation(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

fn certify(area: &AreaFunction, data: &SpectralData, consts: PhysicalConstants, tol: f64) -> Result<Certificate> {
    let r = data.r.unwrap_or(0.0);
    let synth = synthesize(area, &[data.kind], &data.kgrid, consts, r)?.remove(0);
    let deviation = sup_deviation(&real_values(&synth), &real_values(data));
    Ok(Certificate { kind: data.kind, deviation, tolerance: tol, passed: deviation <= tol })
}

/// Reflectance depends on `Q` alone.
fn certify_reflectance(q: &Potential, data: &SpectralData, tol: f64) -> Result<Certificate> {
    let b = jost_boundary(q, &data.kgrid)?;
    let s = scattering_coefficients(&b)?;
    let refl = s.reflectance();
    let synth: Vec<f64> = match data.kind {
        ObservableKind::ReflectanceRe => refl.iter().map(|z| z.re).collect(),
        _ => refl.iter().map(|z| z.im).collect(),
    };
    let deviation = sup_deviation(&synth, &real_values(data));
    Ok(Certificate { kind: data.kind, deviation, tolerance: tol, passed: deviation <= tol })
}

fn real_values(data: &SpectralData) -> Vec<f64> {
    match data.real() {
        Some(v) => v.to_vec(),
        None => data.magnitudes(),
    }
}

fn glm_from_magnitude(mag: &RealSamples, opts: &ReconstructOptions) -> Result<(Potential, BoundaryParameter)> {
    let kernel = glm_kernel(mag, opts.length, opts.x_points)?;
    let (q, bp, _) = glm_solve(&kernel)?;
    Ok((q, bp))
}

fn check_options(opts: &ReconstructOptions) -> Result<()> {
    if !(opts.length > 0.0 && opts.length.is_finite()) {
        return Err(Error::InvalidInput("tube length must be positive".into()));
    }
    if opts.x_points < 4 {
        return Err(Error::InvalidInput("at least four x points are needed".into()));
    }
    if !(opts.certificate_tolerance > 0.0) {
        return Err(Error::InvalidInput("certificate tolerance must be positive".into()));
    }
    Ok(())
}

fn check_side(side: &SideInfo) -> Result<()> {
    for (name, v) in [("a_l", side.a_l), ("abs_da_l", side.abs_da_l), ("ratio", side.ratio)] {
        if let Some(v) = v {
            if !v.is_finite() || v < 0.0 || (name == "a_l" && v == 0.0) {
                return Err(Error::InvalidInput(format!("side information {name} = {v} is out of range")));
            }
        }
    }
    if let (Some(a), Some(d), Some(r)) = (side.a_l, side.abs_da_l, side.ratio) {
        if (d / a - r).abs() > SIDE_INFO_TOLERANCE * r.max(d / a).max(1e-12) {
            return Err(Error::Inconsistent("ratio disagrees with a_l and abs_da_l".into()));
        }
    }
    Ok(())
}

fn relative_mismatch(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Endpoint side information against the reconstructed `η`.
fn check_endpoint_consistency(eta: &RelativeArea, scale: &ScaleInfo, side: &SideInfo) -> Result<()> {
    let (el, del) = eta.at_end();
    if let Some(r) = side.endpoint_ratio() {
        let got = (2.0 * del / el).abs();
        if relative_mismatch(got, r) > SIDE_INFO_TOLERANCE && (got - r).abs() > 1e-3 {
            return Err(Error::Inconsistent(format!(
                "|A′(l)|/A(l) = {r} given, reconstruction gives {got:.6}"
            )));
        }
    }
    if let Some(q) = scale.al_over_a0 {
        if relative_mismatch(el * el, q) > SIDE_INFO_TOLERANCE {
            return Err(Error::Inconsistent(format!("A(l)/A(0) from the data is {q:.6}, η(l)² is {:.6}", el * el)));
        }
    }
    Ok(())
}

fn a0_from_scale(scale: &ScaleInfo, eta: &RelativeArea) -> Option<f64> {
    match scale.source {
        ScaleSource::LipPressure => scale.sqrt_a0_al.map(|s| s / eta.at_end().0),
        _ => scale.a0,
    }
}

fn scale_family() -> Family {
    Family::OneParam { name: PARAM_A0.into(), default_grid: log_spaced(0.5, 20.0, 15) }
}

fn reflectance_family() -> Family {
    Family::TwoParam {
        names: [PARAM_COT_ALPHA.into(), PARAM_A0.into()],
        default_grids: [lin_spaced(-2.0, 2.0, 9), log_spaced(0.5, 20.0, 15)],
    }
}

fn reflectance_eta_family() -> Family {
    Family::OneParam { name: PARAM_COT_ALPHA.into(), default_grid: lin_spaced(-2.0, 2.0, 9) }
}

/// Runs the pipeline of `scenario` on one data set.
pub fn reconstruct(
    scenario: Scenario,
    data: &SpectralData,
    side: SideInfo,
    opts: ReconstructOptions,
) -> Result<ReconstructionResult> {
    check_options(&opts)?;
    check_side(&side)?;
    if !scenario.accepts(data.kind) {
        return Err(Error::InvalidInput(format!("scenario {scenario} does not accept {} data", data.kind)));
    }
    let consts = opts.consts;
    let base = |potential, cot_alpha, eta, family, eta_family, scale| ReconstructionResult {
        scenario,
        potential,
        cot_alpha,
        eta,
        area: None,
        family,
        eta_family,
        scale,
        certificate: None,
        data: data.clone(),
        side,
        options: opts,
    };

    if scenario == Scenario::Reflectance {
        let triple = reflectance_completion(data)?;
        let l = ComplexSamples::new(triple.kgrid.clone(), triple.l.clone(), "l")?;
        let (_, q) = marchenko_right(&l, opts.length, opts.x_points)?;
        let mut res = base(q, None, None, reflectance_family(), reflectance_eta_family(), None);
        res.certificate = Some(certify_reflectance(&res.potential, data, opts.certificate_tolerance)?);
        return Ok(res);
    }

    let (mag, scale) = match scenario {
        Scenario::InputImpedance => {
            let ret = ratio_from_input_impedance(data, consts)?;
            let scale = ScaleInfo {
                source: ScaleSource::InputImpedance,
                limit: consts.c_mu() / ret.a0,
                tail_residual: ret.tail_residual,
                a0: Some(ret.a0),
                sqrt_a0_al: None,
                al_over_a0: None,
            };
            (ret.mag, scale)
        }
        _ => match data_to_jost_magnitude(data, side, consts)? {
            MagnitudeOutcome::Unique { mag, scale } => (mag, scale),
            MagnitudeOutcome::NonUnique { family, scale } => {
                // Neither Q nor η is fixed until the family parameters are chosen.
                let q = Potential::zero(opts.length, opts.x_points)?;
                let eta_family = family.clone();
                return Ok(base(q, None, None, family, eta_family, Some(scale)));
            }
        },
    };

    let (q, bp) = glm_from_magnitude(&mag, &opts)?;
    let eta = relative_area(&q, bp)?;
    if matches!(scenario, Scenario::Microphone | Scenario::Transfer) {
        check_endpoint_consistency(&eta, &scale, &side)?;
    }
    let a0 = a0_from_scale(&scale, &eta);
    let family = if a0.is_some() { Family::None } else { scale_family() };
    let mut res = base(q, Some(bp.cot_alpha), Some(eta), family, Family::None, Some(scale));
    if let Some(a0) = a0 {
        let area = res.eta.as_ref().unwrap().area(a0)?;
        let cert = certify(&area, data, consts, opts.certificate_tolerance)?;
        let side_given = side.a_l.is_some() || side.abs_da_l.is_some() || side.ratio.is_some();
        if !cert.passed && side_given {
            return Err(Error::Inconsistent(format!(
                "resynthesized {} deviates by {:.3e} (tolerance {:.3e})",
                data.kind, cert.deviation, cert.tolerance
            )));
        }
        res.area = Some(area);
        res.certificate = Some(cert);
    }
    Ok(res)
}

fn param(params: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    let v = *params
        .get(name)
        .ok_or_else(|| Error::InvalidInput(format!("family parameter {name} is missing")))?;
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("family parameter {name} is not finite")));
    }
    Ok(v)
}

fn positive_param(params: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    let v = param(params, name)?;
    if v <= 0.0 {
        return Err(Error::InvalidInput(format!("family parameter {name} = {v} must be positive")));
    }
    Ok(v)
}

/// Materializes and certifies the family member selected by `params`.
pub fn family_member(result: &ReconstructionResult, params: &BTreeMap<String, f64>) -> Result<FamilyMember> {
    let names = result.family.names();
    if names.is_empty() {
        return Err(Error::InvalidInput("the reconstruction is unique".into()));
    }
    if let Some(extra) = params.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(Error::InvalidInput(format!("unknown family parameter {extra}")));
    }
    let opts = result.options;
    let tol = opts.certificate_tolerance;
    let data = &result.data;
    let (potential, cot_alpha, eta, area, certificate) = if names.contains(&PARAM_COT_ALPHA) {
        let cot = param(params, PARAM_COT_ALPHA)?;
        let a0 = positive_param(params, PARAM_A0)?;
        let eta = relative_area(&result.potential, BoundaryParameter { cot_alpha: cot })?;
        let area = eta.area(a0)?;
        let cert = certify_reflectance(&result.potential, data, tol)?;
        (result.potential.clone(), cot, eta, area, cert)
    } else if names == [PARAM_A0] {
        let a0 = positive_param(params, PARAM_A0)?;
        let eta = result.eta.clone().ok_or_else(|| Error::InvalidInput("relative area missing".into()))?;
        let area = eta.area(a0)?;
        let cert = certify(&area, data, opts.consts, tol)?;
        (result.potential.clone(), result.cot_alpha.unwrap_or_default(), eta, area, cert)
    } else {
        let (a_l, ratio) = if names.contains(&PARAM_A_L) {
            let a_l = positive_param(params, PARAM_A_L)?;
            let d = param(params, PARAM_ABS_DA_L)?;
            if d < 0.0 {
                return Err(Error::InvalidInput("abs_da_l must be nonnegative".into()));
            }
            (a_l, d / a_l)
        } else {
            let r = param(params, PARAM_RATIO)?;
            if r < 0.0 {
                return Err(Error::InvalidInput("ratio must be nonnegative".into()));
            }
            let a_l = result.side.a_l.ok_or_else(|| Error::InvalidInput("A(l) side information missing".into()))?;
            (a_l, r)
        };
        let (mag, scale) = jost_magnitude_for_ratio(data, ratio, opts.consts)?;
        let (q, bp) = glm_from_magnitude(&mag, &opts)?;
        let eta = relative_area(&q, bp)?;
        let a0 = a_l / scale.al_over_a0.unwrap_or(1.0);
        let area = eta.area(a0)?;
        let cert = certify(&area, data, opts.consts, tol)?;
        (q, bp.cot_alpha, eta, area, cert)
    };
    Ok(FamilyMember { params: params.clone(), potential, cot_alpha, eta, area, certificate })
}

/// [`family_member`] over many parameter tuples, in parallel.
pub fn family_members(
    result: &ReconstructionResult,
    params: &[BTreeMap<String, f64>],
) -> Vec<Result<FamilyMember>> {
    params.par_iter().map(|p| family_member(result, p)).collect()
}

/// Parameter tuples on the default grids of a family.
pub fn default_parameter_grid(family: &Family) -> Vec<BTreeMap<String, f64>> {
    match family {
        Family::None => vec![],
        Family::OneParam { name, default_grid } => {
            default_grid.iter().map(|&v| BTreeMap::from([(name.clone(), v)])).collect()
        }
        Family::TwoParam { names, default_grids } => default_grids[0]
            .iter()
            .flat_map(|&a| {
                default_grids[1]
                    .iter()
                    .map(move |&b| BTreeMap::from([(names[0].clone(), a), (names[1].clone(), b)]))
            })
            .collect(),
    }
}
