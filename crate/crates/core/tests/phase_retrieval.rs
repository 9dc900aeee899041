use horn_inverse::forward::*;
use horn_inverse::numerics::{RealGrid, RealSamples};
use horn_inverse::phase_retrieval::*;
use horn_inverse::reference::{self, ClosedFormModel};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn sym() -> RealGrid {
    RealGrid::symmetric(40.0, 2000).unwrap()
}

struct Forward {
    model: ClosedFormModel,
    area: AreaFunction,
    jost: JostFunctionSamples,
    scattering: ScatteringTriple,
}

fn reference_forward() -> Forward {
    let model = ClosedFormModel::default();
    let area = model.area_function(reference::DEFAULT_X_POINTS).unwrap();
    let q = model.potential(reference::DEFAULT_X_POINTS).unwrap();
    let b = jost_boundary(&q, &sym()).unwrap();
    let jost = jost_function(&b, model.boundary_parameter()).unwrap();
    let scattering = scattering_coefficients(&b).unwrap();
    Forward { model, area, jost, scattering }
}

fn in_band(k: f64) -> bool {
    (0.5..=20.0).contains(&k)
}

#[test]
fn extension_helpers() {
    let g = RealGrid::uniform(0.1, 1.0, 10).unwrap();
    let s = RealSamples::from_fn(g, |k| 2.0 + k * k).unwrap();
    let e = even_extend(&s).unwrap();
    assert!(e.grid.is_symmetric());
    assert!((e.values[10] - 2.0).abs() < 1e-12);
    let o = odd_extend(&s).unwrap();
    assert_eq!(o.values[10], 0.0);
    assert_eq!(o.values[0], -o.values[20]);
    let bad = RealSamples::from_fn(RealGrid::uniform(0.3, 1.0, 10).unwrap(), |k| k).unwrap();
    assert!(even_extend(&bad).is_err());
}

#[test]
fn free_magnitude_is_trivial() {
    let g = sym();
    let mag = RealSamples::from_fn(g.clone(), f64::abs).unwrap();
    let c = analytic_completion(&mag).unwrap();
    assert!(c.boundary.cot_alpha.abs() < 1e-12);
    for (j, &k) in g.points().iter().enumerate() {
        assert!(c.lambda.values[j].norm() < 1e-12);
        assert!((c.jost.values[j] - k).norm() < 1e-10);
        assert!((c.boundary.f0[j] - 1.0).norm() < 1e-10);
        assert!((c.scattering.t[j] - 1.0).norm() < 1e-9, "k={k} {}", c.scattering.t[j]);
        assert!(c.scattering.l[j].norm() < 1e-9);
    }
}

#[test]
fn unit_linear_factor() {
    let g = sym();
    let mag = RealSamples::from_fn(g.clone(), |k| (k * k + 1.0).sqrt()).unwrap();
    let c = analytic_completion(&mag).unwrap();
    assert!((c.boundary.cot_alpha + 1.0).abs() < 1e-9, "{}", c.boundary.cot_alpha);
    assert!((c.lambda.limit_k_lambda + I).norm() < 1e-9);
    for (j, &k) in g.points().iter().enumerate() {
        let lam = -I / (k + I);
        assert!((c.lambda.values[j] - lam).norm() < 1e-6, "k={k}: {} vs {lam}", c.lambda.values[j]);
        assert!((c.jost.values[j] - (k + I)).norm() < 1e-10 * (1.0 + k.abs()));
        if k.abs() > 0.1 {
            assert!((c.boundary.f0[j] - 1.0).norm() < 1e-5);
            assert!((c.boundary.df0[j] - I * k).norm() < 1e-5 * (1.0 + k.abs()));
        }
    }
}

#[test]
fn linear_family_is_exact() {
    let g = sym();
    for cot in [-0.5, -1.0, -2.0] {
        let mag = RealSamples::from_fn(g.clone(), |k| (k * k + cot * cot).sqrt()).unwrap();
        let c = analytic_completion(&mag).unwrap();
        for (j, &k) in g.points().iter().enumerate() {
            assert!((c.jost.values[j] - (k - I * cot)).norm() <= 1e-10 * (1.0 + k.abs()));
        }
        assert!((c.boundary.cot_alpha - cot).abs() < 1e-6);
    }
}

#[test]
fn reference_completion_matches_forward() {
    let fw = reference_forward();
    let mag = RealSamples::new(sym(), fw.jost.magnitude()).unwrap();
    let c = analytic_completion(&mag).unwrap();
    assert!((c.boundary.cot_alpha - fw.model.cot_alpha).abs() < 1e-3, "cot = {}", c.boundary.cot_alpha);
    assert!(c.roundtrip_defect < 1e-2);
    let k = sym();
    let mut worst = [0.0f64; 4];
    for (j, &kj) in k.points().iter().enumerate() {
        if !in_band(kj) {
            continue;
        }
        let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm().max(1e-3);
        worst[0] = worst[0].max(rel(c.jost.values[j], fw.jost.values[j]));
        worst[1] = worst[1].max((c.scattering.t[j] - fw.scattering.t[j]).norm());
        worst[2] = worst[2].max((c.scattering.l[j] - fw.scattering.l[j]).norm());
        worst[3] = worst[3].max((c.scattering.r[j] - fw.scattering.r[j]).norm());
    }
    assert!(worst.iter().all(|w| *w < 1e-2), "{worst:?}");
}

#[test]
fn uniform_tube_lip_pressure() {
    let a0 = 3.0;
    let consts = PhysicalConstants::default();
    let g = default_observable_grid();
    let vals = vec![consts.c_mu() / a0; g.len()];
    let data = SpectralData::new(ObservableKind::LipPressureMag, g, SpectralValues::Real(vals), None).unwrap();
    match data_to_jost_magnitude(&data, SideInfo::default(), consts).unwrap() {
        MagnitudeOutcome::Unique { mag, scale } => {
            assert!((scale.sqrt_a0_al.unwrap() - a0).abs() < 1e-10);
            for (&k, &m) in mag.grid.points().iter().zip(&mag.values) {
                assert!((m - k.abs()).abs() < 1e-8);
            }
        }
        other => panic!("{other:?}"),
    }
}

fn reference_data(fw: &Forward, kind: ObservableKind) -> SpectralData {
    let g = default_observable_grid();
    synthesize(&fw.area, &[kind], &g, fw.model.consts, reference::MIC_DISTANCE).unwrap().remove(0)
}

fn magnitude_error(fw: &Forward, mag: &RealSamples) -> f64 {
    let g = sym();
    mag.grid
        .points()
        .iter()
        .zip(&mag.values)
        .filter(|(k, _)| in_band(**k))
        .map(|(&k, &m)| {
            let j = g.points().iter().position(|&x| (x - k).abs() < 1e-9).unwrap();
            (m / fw.jost.values[j].norm() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn scale_and_magnitude_from_every_kind() {
    let fw = reference_forward();
    let consts = fw.model.consts;
    let ends = fw.area.ends();
    let side = SideInfo { a_l: Some(ends.al), abs_da_l: Some(ends.dal.abs()), ratio: None };
    let mut mags = Vec::new();
    for kind in [
        ObservableKind::LipPressureMag,
        ObservableKind::GreenMag,
        ObservableKind::TransferMag,
        ObservableKind::MicPressureMag,
    ] {
        let data = reference_data(&fw, kind);
        let MagnitudeOutcome::Unique { mag, scale } = data_to_jost_magnitude(&data, side, consts).unwrap() else {
            panic!("{kind} should be unique with side information");
        };
        let err = magnitude_error(&fw, &mag);
        assert!(err < 1e-2, "{kind}: {err}");
        match kind {
            ObservableKind::GreenMag => {
                assert!((scale.a0.unwrap() / reference::A0 - 1.0).abs() < 5e-3, "{:?}", scale)
            }
            ObservableKind::LipPressureMag => {
                let want = (reference::A0 * ends.al).sqrt();
                assert!((scale.sqrt_a0_al.unwrap() / want - 1.0).abs() < 5e-3);
            }
            _ => assert!((scale.a0.unwrap() / reference::A0 - 1.0).abs() < 5e-3),
        }
        mags.push(mag);
    }
    for m in &mags[1..] {
        for (a, b) in m.values.iter().zip(&mags[0].values).skip(1) {
            assert!((a / b - 1.0).abs() < 1e-2);
        }
    }
}

#[test]
fn transfer_without_side_information_is_a_family() {
    let fw = reference_forward();
    let data = reference_data(&fw, ObservableKind::TransferMag);
    match data_to_jost_magnitude(&data, SideInfo::default(), fw.model.consts).unwrap() {
        MagnitudeOutcome::NonUnique { family, .. } => assert_eq!(family.names(), vec![PARAM_A_L, PARAM_ABS_DA_L]),
        other => panic!("{other:?}"),
    }
    let side = SideInfo { a_l: Some(11.596), ..Default::default() };
    match data_to_jost_magnitude(&data, side, fw.model.consts).unwrap() {
        MagnitudeOutcome::NonUnique { family, scale } => {
            assert_eq!(family.names(), vec![PARAM_RATIO]);
            assert!((scale.a0.unwrap() / reference::A0 - 1.0).abs() < 5e-3);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn wrong_kind_is_rejected() {
    let g = default_observable_grid();
    let data =
        SpectralData::new(ObservableKind::OutputImpedanceMag, g, SpectralValues::Real(vec![1.0; 2000]), None).unwrap();
    assert!(data_to_jost_magnitude(&data, SideInfo::default(), PhysicalConstants::default()).is_err());
}

#[test]
fn uniform_tube_input_impedance() {
    let a0 = 2.0;
    let consts = PhysicalConstants::default();
    let g = default_observable_grid();
    let data = SpectralData::new(
        ObservableKind::InputImpedanceMag,
        g,
        SpectralValues::Real(vec![consts.c_mu() / a0; 2000]),
        None,
    )
    .unwrap();
    let r = ratio_from_input_impedance(&data, consts).unwrap();
    assert!((r.a0 - a0).abs() < 1e-10);
    assert!(r.lambda.values.iter().all(|z| z.norm() < 1e-10));
    for (&k, &m) in r.mag.grid.points().iter().zip(&r.mag.values) {
        assert!((m - k.abs()).abs() < 1e-9);
    }
}

#[test]
fn exponential_tube_input_impedance() {
    let gamma = 0.1;
    let area = AreaFunction::from_fn(17.5, 1751, |x| (2.0 * gamma * x).exp(), |x| 2.0 * gamma * (2.0 * gamma * x).exp())
        .unwrap();
    let consts = PhysicalConstants::default();
    let g = default_observable_grid();
    let data = synthesize(&area, &[ObservableKind::InputImpedanceMag], &g, consts, 20.0).unwrap().remove(0);
    let r = ratio_from_input_impedance(&data, consts).unwrap();
    assert!((r.a0 - 1.0).abs() < 5e-3, "{}", r.a0);
    let (q, bp) = area_to_potential(&area).unwrap();
    let fs = jost_function(&jost_boundary(&q, &sym()).unwrap(), bp).unwrap();
    let ks = sym();
    for (j, &k) in ks.points().iter().enumerate() {
        if in_band(k) {
            assert!((r.mag.values[j] / fs.values[j].norm() - 1.0).abs() < 1e-2, "k={k}");
        }
    }
}

#[test]
fn reference_input_impedance() {
    let fw = reference_forward();
    let data = reference_data(&fw, ObservableKind::InputImpedanceMag);
    let r = ratio_from_input_impedance(&data, fw.model.consts).unwrap();
    assert!((r.a0 / reference::A0 - 1.0).abs() < 5e-3, "{}", r.a0);
    let err = magnitude_error(&fw, &r.mag);
    assert!(err < 1e-2, "{err}");
}

#[test]
fn zero_reflectance_completes_trivially() {
    let g = default_observable_grid();
    let data =
        SpectralData::new(ObservableKind::ReflectanceRe, g, SpectralValues::Real(vec![0.0; 2000]), None).unwrap();
    let s = reflectance_completion(&data).unwrap();
    for j in 0..s.kgrid.len() {
        assert!(s.l[j].norm() < 1e-12);
        assert!((s.t[j] - 1.0).norm() < 1e-12);
        assert!(s.r[j].norm() < 1e-12);
    }
}

#[test]
fn reference_reflectance_from_either_part() {
    let g = default_observable_grid();
    let mut completed = Vec::new();
    for kind in [ObservableKind::ReflectanceRe, ObservableKind::ReflectanceIm] {
        let (data, _) = reference::golden_dataset(kind, &g).unwrap();
        let s = reflectance_completion(&data).unwrap();
        let n = s.kgrid.len();
        let c = n / 2;
        assert!((s.l[c].re + 1.0).abs() < 1e-2, "{kind}: L(0) = {}", s.l[c]);
        for (j, &k) in s.kgrid.points().iter().enumerate() {
            assert_eq!(s.l[n - 1 - j], s.l[j].conj());
            let want = reference::ell(Complex64::new(k, 0.0));
            if k.abs() <= 20.0 {
                assert!((s.l[j] - want).norm() < 1e-2 * want.norm().max(0.05), "{kind} k={k}: {} vs {want}", s.l[j]);
            }
            if (0.05..=20.0).contains(&k.abs()) {
                let t = reference::tau(Complex64::new(k, 0.0));
                assert!((s.t[j] - t).norm() < 1e-2, "{kind} T k={k}: {} vs {t}", s.t[j]);
                let r = reference::rho(Complex64::new(k, 0.0));
                assert!((s.r[j] - r).norm() < 1e-2, "{kind} R k={k}: {} vs {r}", s.r[j]);
            }
        }
        completed.push(s.l);
    }
    for (a, b) in completed[0].iter().zip(&completed[1]) {
        assert!((a - b).norm() < 1e-2);
    }
}

#[test]
fn superunitary_reflectance_is_rejected() {
    let g = default_observable_grid();
    let data = SpectralData::new(ObservableKind::ReflectanceRe, g, SpectralValues::Real(vec![1.5; 2000]), None).unwrap();
    assert!(reflectance_completion(&data).is_err());
}
