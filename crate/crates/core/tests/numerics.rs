use horn_inverse::numerics::*;
use horn_inverse::Error;
use num_complex::Complex64;
use proptest::prelude::*;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn kgrid() -> RealGrid {
    RealGrid::symmetric(40.0, 2000).unwrap()
}

fn small_grid() -> RealGrid {
    RealGrid::symmetric(40.0, 800).unwrap()
}

fn max_err(got: &[Complex64], want: impl Fn(usize) -> Complex64) -> f64 {
    got.iter().enumerate().fold(0.0, |m, (i, g)| m.max((g - want(i)).norm()))
}

#[test]
fn grid_validation() {
    assert!(RealGrid::new(vec![0.0]).is_err());
    assert!(RealGrid::new(vec![0.0, 0.0]).is_err());
    assert!(RealGrid::new(vec![0.0, f64::NAN]).is_err());
    let g = RealGrid::uniform(0.0, 17.5, 2001).unwrap();
    assert_eq!(g.len(), 2001);
    assert_eq!(g.last(), 17.5);
    assert!(g.spacing().is_some());
    let s = RealGrid::symmetric(40.0, 2000).unwrap();
    assert!(s.is_symmetric());
    assert_eq!(s.points()[2000], 0.0);
    assert!(RealGrid::new(vec![0.0, 1.0, 3.0]).unwrap().spacing().is_none());
}

#[test]
fn tail_limit_constant() {
    let g = RealGrid::uniform(0.05, 40.0, 2000).unwrap();
    let s = RealSamples::from_fn(g, |_| 5.0).unwrap();
    let fit = tail_limit(&s, TailModel::ConstantPlusInverseK).unwrap();
    assert!((fit.limit - 5.0).abs() < 1e-12);
    assert!(fit.converged);
}

#[test]
fn tail_limit_exact_inverse_k() {
    let g = RealGrid::uniform(10.0, 100.0, 500).unwrap();
    let s = RealSamples::from_fn(g, |k| 2.0 + 3.0 / k).unwrap();
    let fit = tail_limit(&s, TailModel::ConstantPlusInverseK).unwrap();
    assert!((fit.limit - 2.0).abs() < 1e-10, "{}", fit.limit);
    assert!((fit.coefficients[1] - 3.0).abs() < 1e-8);
}

#[test]
fn tail_limit_even_powers() {
    let g = RealGrid::uniform(0.02, 40.0, 2000).unwrap();
    let s = RealSamples::from_fn(g, |k| (1.0 + 1.3 / (k * k)).sqrt()).unwrap();
    let fit = tail_limit(&s, TailModel::EvenInversePowers).unwrap();
    assert!((fit.limit - 1.0).abs() < 1e-8, "{}", fit.limit);
}

#[test]
fn rational_tail_transforms_match_quadrature() {
    let tail = RationalTail { beta: 1.3, even: [0.7, -0.4], odd: [0.2, 0.9] };
    // Fourier transform by brute-force quadrature on a wide grid.
    let n = 400_000;
    let kmax = 4000.0;
    let h = 2.0 * kmax / n as f64;
    for &y in &[0.0, 0.3, 1.7, -0.9] {
        let mut acc = Complex64::default();
        for j in 0..=n {
            let k = -kmax + j as f64 * h;
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            acc += w * tail.value(k) * Complex64::new(0.0, k * y).exp();
        }
        // truncated even tail beyond ±kmax behaves like even[0]/k²
        if y == 0.0 {
            acc += 2.0 * tail.even[0] / (kmax * h);
        }
        acc *= h / (2.0 * std::f64::consts::PI);
        let exact = tail.fourier(y);
        assert!((acc.re - exact.re).abs() < 1e-6, "y={y}: {acc} vs {exact}");
        if y != 0.0 {
            assert!((acc.im - exact.im).abs() < 1e-3, "y={y}: {acc} vs {exact}");
        }
    }
    // Schwarz extension: real part reproduces the function on the axis.
    for &k in &[-3.0, -0.2, 0.0, 0.5, 7.0] {
        let s = tail.schwarz(Complex64::new(k, 0.0));
        assert!((s.re - tail.value(k)).abs() < 1e-14);
    }
}

#[test]
fn cpv_hilbert_of_lorentzian() {
    let g = RealSamples::from_fn(kgrid(), |t| 1.0 / (1.0 + t * t)).unwrap();
    let (h, diag) = cpv_hilbert(&g).unwrap();
    assert!(!diag.warning);
    for (k, v) in h.grid.points().iter().zip(&h.values) {
        assert!((v - k / (1.0 + k * k)).abs() < 1e-10, "k={k}");
    }
}

#[test]
fn cpv_hilbert_of_zero() {
    let g = RealSamples::from_fn(kgrid(), |_| 0.0).unwrap();
    let (h, _) = cpv_hilbert(&g).unwrap();
    assert!(h.values.iter().all(|v| *v == 0.0));
}

#[test]
fn cpv_hilbert_non_model_input() {
    // 1/((t²+1)(t²+9)) = [1/(t²+1) − 1/(t²+9)]/8; Schwarz: [i/(k+i) − i/(3(k+3i))]/8.
    let g = RealSamples::from_fn(kgrid(), |t| 1.0 / ((t * t + 1.0) * (t * t + 9.0))).unwrap();
    let (h, _) = cpv_hilbert(&g).unwrap();
    for (k, v) in h.grid.points().iter().zip(&h.values) {
        let kc = Complex64::new(*k, 0.0);
        let exact = ((I / (kc + I) - I / (3.0 * (kc + 3.0 * I))) / 8.0).im;
        assert!((v - exact).abs() < 1e-9, "k={k}: {v} vs {exact}");
    }
}

#[test]
fn schwarz_extend_examples() {
    let re = RealSamples::from_fn(kgrid(), |t| 1.0 / (1.0 + t * t)).unwrap();
    let (s, _) = schwarz_extend(&re).unwrap();
    let err = max_err(&s.values, |i| {
        let k = s.grid.points()[i];
        Complex64::new(1.0, k) / (1.0 + k * k)
    });
    assert!(err < 1e-10, "{err}");

    let re = RealSamples::from_fn(kgrid(), |t| -1.0 / (1.0 + t * t)).unwrap();
    let (s, _) = schwarz_extend(&re).unwrap();
    let err = max_err(&s.values, |i| -I / (s.grid.points()[i] + I));
    assert!(err < 1e-10, "{err}");

    let re = RealSamples::from_fn(kgrid(), |_| 0.0).unwrap();
    let (s, _) = schwarz_extend(&re).unwrap();
    assert!(s.values.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn schwarz_extend_odd_input() {
    let u = RealSamples::from_fn(kgrid(), |t| t / (t * t + 4.0)).unwrap();
    let (s, _) = schwarz_extend_parity(&u, Parity::Odd).unwrap();
    let err = max_err(&s.values, |i| 1.0 / (s.grid.points()[i] + 2.0 * I));
    assert!(err < 1e-6, "{err}");
}

#[test]
fn schwarz_extend_rejects_asymmetric() {
    let re = RealSamples::from_fn(kgrid(), |t| 1.0 / (1.0 + (t - 0.3).powi(2))).unwrap();
    assert!(matches!(schwarz_extend(&re), Err(Error::Symmetry { .. })));
}

#[test]
fn two_hilbert_paths_agree_on_gaussian() {
    let g = RealSamples::from_fn(kgrid(), |t| (-t * t / 3.0).exp() * (1.0 + 0.5 * t * t)).unwrap();
    let (h, _) = cpv_hilbert(&g).unwrap();
    let (s, _) = schwarz_extend(&g).unwrap();
    let err = h.values.iter().zip(&s.values).fold(0.0f64, |m, (a, b)| m.max((a - b.im).abs()));
    assert!(err < 1e-8, "{err}");
}

#[test]
fn outer_unit_modulus() {
    let mag = RealSamples::from_fn(kgrid(), |_| 1.0).unwrap();
    let (o, rep) = outer_from_magnitude(&mag, Normalization::None).unwrap();
    assert!(!rep.zero_at_origin);
    assert!(max_err(&o.values, |_| Complex64::new(1.0, 0.0)) < 1e-14);
}

#[test]
fn outer_rational_ratio() {
    let mag = RealSamples::from_fn(kgrid(), |k| ((k * k + 1.0) / (k * k + 4.0)).sqrt()).unwrap();
    let (o, _) = outer_from_magnitude(&mag, Normalization::None).unwrap();
    let err = max_err(&o.values, |i| {
        let k = o.grid.points()[i];
        (k + I) / (k + 2.0 * I)
    });
    assert!(err < 1e-8, "{err}");
}

#[test]
fn outer_linear_family_is_exact() {
    for cot in [-0.5, -1.0, -2.0] {
        let mag = RealSamples::from_fn(kgrid(), |k| (k * k + cot * cot).sqrt()).unwrap();
        let (o, rep) = outer_from_magnitude(&mag, Normalization::LinearFactorK).unwrap();
        assert!(!rep.zero_at_origin);
        let err = o.values.iter().zip(o.grid.points()).fold(0.0f64, |m, (v, &k)| {
            let f = k - I * cot;
            m.max((v - f).norm() / f.norm())
        });
        assert!(err <= 1e-10, "cot={cot}: {err}");
    }
}

#[test]
fn outer_with_zero_at_origin() {
    let mag = RealSamples::from_fn(kgrid(), |k| k.abs()).unwrap();
    let (o, rep) = outer_from_magnitude(&mag, Normalization::LinearFactorK).unwrap();
    assert!(rep.zero_at_origin);
    assert!(max_err(&o.values, |i| Complex64::new(o.grid.points()[i], 0.0)) < 1e-12);

    // |T| of a transmission coefficient with a simple zero at k = 0.
    let mag = RealSamples::from_fn(kgrid(), |k| (k * k / (k * k + 4.0)).sqrt()).unwrap();
    let (o, rep) = outer_from_magnitude(&mag, Normalization::None).unwrap();
    assert!(rep.zero_at_origin);
    let err = max_err(&o.values, |i| {
        let k = o.grid.points()[i];
        k / (k + 2.0 * I)
    });
    assert!(err < 1e-7, "{err}");
}

#[test]
fn outer_near_threshold_jost_function() {
    // F = (k² + 1.7ik − 0.1)/(k + i√5): zeros close to the real axis.
    let s5 = 5f64.sqrt();
    let f = |k: f64| {
        let kc = Complex64::new(k, 0.0);
        (kc * kc + 1.7 * I * kc - 0.1) / (kc + I * s5)
    };
    let mag = RealSamples::from_fn(kgrid(), |k| f(k).norm()).unwrap();
    let (o, rep) = outer_from_magnitude(&mag, Normalization::LinearFactorK).unwrap();
    assert!(!rep.zero_at_origin);
    let err = o.values.iter().zip(o.grid.points()).fold(0.0f64, |m, (v, &k)| {
        if k.abs() > 20.0 {
            m
        } else {
            m.max((v - f(k)).norm() / f(k).norm())
        }
    });
    assert!(err < 1e-5, "{err}");
}

#[test]
fn outer_rejects_zero_magnitude() {
    let mut mag = RealSamples::from_fn(kgrid(), |_| 1.0).unwrap();
    mag.values[2050] = 0.0;
    mag.values[1950] = 0.0;
    assert!(matches!(
        outer_from_magnitude(&mag, Normalization::None),
        Err(Error::NonpositiveMagnitude { .. })
    ));
}

#[test]
fn fourier_kernel_of_lorentzians() {
    // R(k) = 1/(k² + 4) + i k/(k² + 9)²
    let s = ComplexSamples::from_fn(kgrid(), "test", |k| {
        Complex64::new(1.0 / (k * k + 4.0), k / (k * k + 9.0).powi(2))
    })
    .unwrap();
    let ys: Vec<f64> = (0..50).map(|i| -5.0 + 0.2 * i as f64).collect();
    let got = fourier_kernel(&s, &ys).unwrap();
    for (y, g) in ys.iter().zip(&got) {
        let e2 = (-2.0 * y.abs()).exp() / 4.0;
        // (1/2π)∫ k e^{iky}/(k²+9)² dk = i y e^{−3|y|}/12, times i
        let e3 = -y * (-3.0 * y.abs()).exp() / 12.0;
        let want = Complex64::new(e2 + e3, 0.0);
        assert!((g - want).norm() < 1e-7, "y={y}: {g} vs {want}");
    }
}

#[test]
fn cosine_kernel_of_lorentzian() {
    let phi = RealSamples::from_fn(kgrid(), |k| -1.0 / (k * k + 1.0)).unwrap();
    let ys: Vec<f64> = (0..40).map(|i| 0.25 * i as f64).collect();
    let got = cosine_kernel(&phi, &ys).unwrap();
    for (y, g) in ys.iter().zip(&got) {
        assert!((g + (-y).exp()).abs() < 1e-12, "y={y}");
    }
}

#[test]
fn fredholm_zero_kernel() {
    let d = RealGrid::uniform(0.0, 2.0, 41).unwrap();
    let r = RealSamples::from_fn(d.clone(), |s| s.sin()).unwrap();
    let sol = fredholm_solve(|_, _| 0.0, &r, &d).unwrap();
    for (u, v) in sol.u.values.iter().zip(&r.values) {
        assert_eq!(*u, -v);
    }
}

#[test]
fn fredholm_separable_kernel() {
    let d = RealGrid::uniform(0.0, 3.0, 301).unwrap();
    let a = |s: f64| (0.5 * s).cos();
    let b = |t: f64| (-t).exp();
    let r = RealSamples::from_fn(d.clone(), |s| 1.0 + s).unwrap();
    let sol = fredholm_solve(|s, t| a(s) * b(t), &r, &d).unwrap();
    // Rank-one oracle with the same trapezoid weights.
    let w = trapezoid_weights(d.points());
    let int = |f: &dyn Fn(usize) -> f64| (0..d.len()).map(|j| w[j] * f(j)).sum::<f64>();
    let p = d.points();
    let br = int(&|j| b(p[j]) * r.values[j]);
    let ab = int(&|j| b(p[j]) * a(p[j]));
    let beta = -br / (1.0 + ab);
    for (j, u) in sol.u.values.iter().enumerate() {
        let want = -r.values[j] - a(p[j]) * beta;
        assert!((u - want).abs() < 1e-12);
    }
    assert!(sol.relative_residual < 1e-12);
}

#[test]
fn fredholm_singular_reports_condition() {
    let d = RealGrid::uniform(0.0, 1.0, 11).unwrap();
    let r = RealSamples::from_fn(d.clone(), |_| 1.0).unwrap();
    // ∫₀¹ (−1) u dt = −u on constants: I + K is singular for this weight sum.
    let res = fredholm_solve(|_, _| -1.0, &r, &d);
    assert!(matches!(res, Err(Error::Singular { .. }) | Err(Error::Residual { .. })));
}

#[test]
fn growing_inverse_matches_direct_inverse() {
    use nalgebra::DMatrix;
    let n = 40;
    let m = DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (i as f64, j as f64);
        (-(a - b).abs() / 7.0).exp() + if i == j { 3.0 + 0.1 * a } else { 0.0 }
    });
    let mut g = GrowingInverse::with_capacity(n);
    for k in 0..n {
        let b: Vec<f64> = (0..k).map(|i| m[(i, k)]).collect();
        g.append(&b, m[(k, k)] - 0.5).unwrap();
        g.update_diagonal(k, 0.5).unwrap();
    }
    let inv = m.try_inverse().unwrap();
    for i in 0..n {
        for j in 0..n {
            assert!((g.get(i, j) - inv[(i, j)]).abs() < 1e-12);
        }
    }
}

#[test]
fn ode_plane_wave_and_order() {
    let k = 3.0;
    let l = 2.0;
    let mut errs = vec![];
    for n in [41, 81, 161] {
        let span = RealGrid::uniform(0.0, l, n).unwrap();
        let end = Complex64::new(0.0, k * l).exp();
        let sol = ode_integrate_complex(|_| -k * k, (end, I * k * end), &span, Direction::Backward, 1).unwrap();
        let err = sol
            .y
            .iter()
            .zip(span.points())
            .fold(0.0f64, |m, (y, &x)| m.max((y - Complex64::new(0.0, k * x).exp()).norm()));
        errs.push(err);
    }
    let order1 = (errs[0] / errs[1]).log2();
    let order2 = (errs[1] / errs[2]).log2();
    assert!(order1 >= 3.5 && order2 >= 3.5, "{errs:?}");
}

#[test]
fn ode_zero_energy_constant_potential() {
    let gamma = 0.8;
    let cot = -0.3;
    let span = RealGrid::uniform(0.0, 5.0, 501).unwrap();
    let sol = ode_integrate_complex(
        |_| gamma * gamma,
        (Complex64::new(1.0, 0.0), Complex64::new(-cot, 0.0)),
        &span,
        Direction::Forward,
        2,
    )
    .unwrap();
    for (y, &x) in sol.y.iter().zip(span.points()) {
        let want = (gamma * x).cosh() - cot / gamma * (gamma * x).sinh();
        assert!((y.re - want).abs() < 1e-9 * want.abs().max(1.0));
    }
}

#[test]
fn derivative_is_fourth_order() {
    let g = RealGrid::uniform(0.0, 2.0, 201).unwrap();
    let v: Vec<f64> = g.points().iter().map(|x| (2.0 * x).sin()).collect();
    let d = derivative(&g, &v);
    for (x, dv) in g.points().iter().zip(&d) {
        assert!((dv - 2.0 * (2.0 * x).cos()).abs() < 1e-7);
    }
}

#[test]
fn interpolant_reproduces_quintics() {
    let g = RealGrid::uniform(0.0, 1.0, 11).unwrap();
    let p = |x: f64| 1.0 - 2.0 * x + 3.0 * x.powi(3) - x.powi(5);
    let v: Vec<f64> = g.points().iter().map(|&x| p(x)).collect();
    let it = Interpolant::new(&g, &v);
    for x in [0.0, 0.013, 0.47, 0.999, 1.0] {
        assert!((it.eval(x) - p(x)).abs() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn schwarz_real_part_is_input_and_paths_agree(
        a in 0.2f64..3.0, b in 0.2f64..3.0, ca in -2.0f64..2.0, cb in -2.0f64..2.0
    ) {
        let g = RealSamples::from_fn(small_grid(), |t| ca / (t * t + a * a) + cb / (t * t + b * b).powi(2)).unwrap();
        let (s, _) = schwarz_extend(&g).unwrap();
        let (h, _) = cpv_hilbert(&g).unwrap();
        let scale = g.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..g.values.len() {
            prop_assert!((s.values[i].re - g.values[i]).abs() < 1e-14 * scale);
            prop_assert!((s.values[i].im - h.values[i]).abs() < 1e-7 * scale);
        }
    }

    #[test]
    fn outer_modulus_reproduces_input(a in 0.3f64..3.0, b in 0.3f64..3.0) {
        let mag = RealSamples::from_fn(small_grid(), |k| ((k * k + a * a) / (k * k + b * b)).sqrt()).unwrap();
        let (o, _) = outer_from_magnitude(&mag, Normalization::None).unwrap();
        for (v, m) in o.values.iter().zip(&mag.values) {
            prop_assert!((v.norm() - m).abs() < 1e-10 * m);
        }
        // analyticity: the outer function equals (k + ia)/(k + ib)
        for (v, &k) in o.values.iter().zip(o.grid.points()) {
            let want = (k + I * a) / (k + I * b);
            prop_assert!((v - want).norm() < 1e-6);
        }
    }
}
