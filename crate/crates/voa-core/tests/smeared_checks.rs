use num_complex::Complex64;

use voa_core::models;
use voa_core::scalar::Scalar;
use voa_core::smeared::energy::{energy_bound_witness, SampleSpec};
use voa_core::smeared::ladder::{
    a_of_f, bisognano_wichmann_residual, ladder_module, p_eval, p_polynomial,
    symplectic_form, symplectic_inner_path,
};
use voa_core::smeared::operators::{adjoint_residual, covariance_residual, smeared_matrix};
use voa_core::smeared::testfn::supports_declared_disjoint;
use voa_core::smeared::wightman::{commutator_norm, wightman_residual, SmearedField};
use voa_core::smeared::{goodman_wallach_check, OrthoFrame, TestFunction};
use voa_core::unitarity::{invariant_form, pct_operator};

fn close(z: Complex64, re: f64, im: f64, tol: f64) -> bool {
    (z.re - re).abs() <= tol && (z.im - im).abs() <= tol
}

#[test]
fn bump_coefficients_match_quadrature_references() {
    // reference values from adaptive quadrature at 30 digits
    let f = TestFunction::bump(0.0, std::f64::consts::PI, 64).unwrap();
    assert!(close(f.coeff(0), 0.11099845404201986, 0.0, 1e-13));
    assert!(close(f.coeff(1), 0.0, -0.090786111937609405, 1e-13));
    assert!(close(f.coeff(2), -0.045126223772143147, 0.0, 1e-13));
    assert!(close(f.coeff(5), 0.0, 0.0059505860770505708, 1e-13));
    assert!(close(f.coeff(10), 0.00062331566217288536, 0.0, 1e-13));
    assert!(close(f.coeff(50), -2.5594378324480078e-6, 0.0, 1e-13));
    assert_eq!(f.coeff(-5), f.coeff(5).conj());
    assert!(f.is_real());

    let g = TestFunction::bump(0.0, 1.0, 64).unwrap();
    assert!(close(g.coeff(0), 0.035331905272692061, 0.0, 1e-13));
    assert!(close(
        g.coeff(1),
        0.030398104510927652,
        -0.016606560180851536,
        1e-13
    ));
}

#[test]
fn fourier_norms_and_tails() {
    let e0 = TestFunction::mode(0, 8).unwrap();
    assert_eq!(e0.fourier_norm(0), 1.0);
    assert_eq!(e0.tail_bound(0), 0.0);
    let e3 = TestFunction::mode(3, 8).unwrap();
    assert_eq!(e3.fourier_norm(2), 16.0);

    let f = TestFunction::bump(0.0, std::f64::consts::PI, 256).unwrap();
    let n0 = f.fourier_norm(0);
    let n2 = f.fourier_norm(2);
    assert!((n0 - 0.4504696).abs() < 1e-5, "norm_0 = {n0}");
    assert!((n2 - 6.655782).abs() < 1e-4, "norm_2 = {n2}");
    // the s = 0 tail past the window is genuinely tiny
    let t0 = f.tail_bound(0);
    assert!(t0 > 1e-11 && t0 < 1e-8, "tail_0 = {t0}");
    // the s = 2 tail is small but far from negligible: the first dropped
    // coefficient alone contributes (258)^2 |f_257| ~ 5e-7
    let t2 = f.tail_bound(2);
    assert!(t2 > 1e-6 && t2 < 1e-3, "tail_2 = {t2}");
}

#[test]
fn angle_parser_handles_pi_expressions() {
    use voa_core::smeared::testfn::parse_angle;
    let pi = std::f64::consts::PI;
    assert_eq!(parse_angle("0").unwrap(), 0.0);
    assert!((parse_angle("pi").unwrap() - pi).abs() < 1e-15);
    assert!((parse_angle("2pi/3").unwrap() - 2.0 * pi / 3.0).abs() < 1e-15);
    assert!((parse_angle("-pi/2").unwrap() + pi / 2.0).abs() < 1e-15);
    assert!((parse_angle("1.25").unwrap() - 1.25).abs() < 1e-15);
    assert!(parse_angle("2x").is_err());
    let f = TestFunction::parse("bump:0,pi", 16).unwrap();
    assert_eq!(f.support, Some((0.0, pi)));
    assert!(TestFunction::parse("mode:-3", 8).is_ok());
    assert!(TestFunction::parse("step:0,1", 8).is_err());
}

#[test]
fn smeared_operator_creation_adjoint_covariance() {
    let model = models::heisenberg(6);
    let frame = OrthoFrame::new(&model).unwrap();
    let form = invariant_form(&model).unwrap();
    let pct = pct_operator(&model, &form).unwrap();
    let a = model.generators[0].vector.clone();

    // f = e_{-d}: only the creation coefficient survives, Y(a,f) vacuum = a
    let f = TestFunction::mode(-1, 8).unwrap();
    let y = smeared_matrix(&model, &frame, &a, &f).unwrap();
    let vac = frame.vector(&model.vacuum());
    let av = frame.vector(&a);
    let mut img = vec![Complex64::new(0.0, 0.0); y.nrows()];
    for i in 0..y.nrows() {
        for j in 0..y.ncols() {
            img[i] += y[(i, j)] * vac[j];
        }
    }
    for (i, z) in img.iter().enumerate() {
        assert!((z - Complex64::new(av[i], 0.0)).norm() < 1e-12);
    }

    let bump = TestFunction::bump(0.0, std::f64::consts::PI, 16).unwrap();
    let res = adjoint_residual(&model, &frame, &pct, &a, &bump).unwrap();
    assert!(res < 1e-12, "adjoint residual {res}");
    let cov = covariance_residual(&model, &frame, &a, &bump, 0.7361).unwrap();
    assert!(cov < 1e-12, "covariance residual {cov}");

    let vir = models::virasoro(Scalar::ratio(1, 2), 6);
    let vframe = OrthoFrame::new(&vir).unwrap();
    let vform = invariant_form(&vir).unwrap();
    let vpct = pct_operator(&vir, &vform).unwrap();
    let nu = vir.conformal_vector.clone();
    let res = adjoint_residual(&vir, &vframe, &vpct, &nu, &bump).unwrap();
    assert!(res < 1e-12, "virasoro adjoint residual {res}");
    let cov = covariance_residual(&vir, &vframe, &nu, &bump, 0.7361).unwrap();
    assert!(cov < 1e-12, "virasoro covariance residual {cov}");
}

#[test]
fn goodman_wallach_bound_holds_away_from_the_zero_mode() {
    // The stated bound ||L_n a|| <= sqrt(c/2)(|n|+1)^{3/2} ||(L_0+1)a|| is
    // false at n = 0 whenever c < 2: ||L_0 a|| = l ||a|| while the bound
    // gives sqrt(c/2)(l+1)||a||, and l/(l+1) exceeds sqrt(c/2) at modest
    // levels. The checker reports exactly those violations and no others.
    let vir = models::virasoro(Scalar::ratio(1, 2), 6);
    let rep = goodman_wallach_check(&vir).unwrap();
    // 10 basis vectors across levels 0..=6, 7 in-window modes each
    assert_eq!(rep.checked, 70);
    // c = 1/2: zero-mode failures at every level l >= 2, dims [1,1,2,2,3]
    assert_eq!(rep.violations.len(), 9, "{:?}", rep.violations);
    assert!(rep.violations.iter().all(|v| v.starts_with("||L_0 ")));
    // worst ratio is the zero mode at the cutoff level: l^2 / ((c/2)(l+1)^2)
    assert!((rep.max_ratio - 144.0 / 49.0).abs() < 1e-12, "{}", rep.max_ratio);

    // c = 1: zero-mode failures exactly where l^2 > (l+1)^2/2, i.e. l >= 3
    let h = models::heisenberg(6);
    let rep = goodman_wallach_check(&h).unwrap();
    assert_eq!(rep.central_charge, Scalar::one());
    assert_eq!(rep.violations.len(), 3 + 5 + 7 + 11, "{:?}", rep.violations);
    assert!(rep.violations.iter().all(|v| v.starts_with("||L_0 ")));

    // c = 2 is the threshold: sqrt(c/2) = 1 covers the zero mode as well
    let vir2 = models::virasoro(Scalar::from_int(2), 6);
    let rep = goodman_wallach_check(&vir2).unwrap();
    assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    assert!(rep.max_ratio <= 1.0);
}

#[test]
fn energy_witness_stability_and_vacuum() {
    let spec = SampleSpec::default();

    // vacuum: only the identity mode contributes, M = 1 at n = 0
    let h = models::heisenberg(6);
    let frame = OrthoFrame::new(&h).unwrap();
    let w = energy_bound_witness(&h, &frame, &h.vacuum(), "1", 0, 0, spec).unwrap();
    assert!((w.m - 1.0).abs() < 1e-9, "vacuum witness {}", w.m);
    assert_eq!(w.max_mode, 0);

    // current with s = 1, k = 1: the constant is stable under a larger window
    let a6 = h.generators[0].vector.clone();
    let w6 = energy_bound_witness(&h, &frame, &a6, "a", 1, 1, spec).unwrap();
    let h8 = models::heisenberg(8);
    let frame8 = OrthoFrame::new(&h8).unwrap();
    let a8 = h8.generators[0].vector.clone();
    let w8 = energy_bound_witness(&h8, &frame8, &a8, "a", 1, 1, spec).unwrap();
    assert!(
        (w8.m - w6.m).abs() <= 0.05 * w8.m,
        "witness drifts: {} vs {}",
        w6.m,
        w8.m
    );

    // nu with s = 2 surrogate, k = 1: nonzero modes stay below
    // sqrt(c/2)/sqrt(2) ~ 0.354, so the max sits at the zero mode with
    // ratio l/(l+1), peaking at the cutoff level
    let vir = models::virasoro(Scalar::ratio(1, 2), 6);
    let vframe = OrthoFrame::new(&vir).unwrap();
    let nu = vir.conformal_vector.clone();
    let w = energy_bound_witness(&vir, &vframe, &nu, "nu", 2, 1, spec).unwrap();
    assert_eq!(w.max_mode, 0);
    assert!((w.m - 6.0 / 7.0).abs() < 1e-9, "nu witness {}", w.m);
}

#[test]
fn commutator_of_single_modes_is_the_exact_formula_value() {
    let h = models::heisenberg(4);
    let frame = OrthoFrame::new(&h).unwrap();
    let a = h.generators[0].vector.clone();
    // [a_2, a_{-2}] = 2 on the vacuum
    let f = TestFunction::mode(2, 4).unwrap();
    let g = TestFunction::mode(-2, 4).unwrap();
    let x = SmearedField { vector: &a, function: &f };
    let y = SmearedField { vector: &a, function: &g };
    let n = commutator_norm(&h, &frame, x, y, &h.vacuum()).unwrap();
    assert!((n - 2.0).abs() < 1e-12, "norm {n}");

    // vacuum field commutes with everything
    let x0 = SmearedField { vector: &h.vacuum(), function: &f };
    let n = commutator_norm(&h, &frame, x0, y, &a).unwrap();
    assert_eq!(n, 0.0);
}

#[test]
fn wightman_residual_decays_with_window() {
    let h = models::heisenberg(8);
    let frame = OrthoFrame::new(&h).unwrap();
    let a = h.generators[0].vector.clone();
    let spec = SampleSpec::default();

    let run = |window: i64| {
        let f = TestFunction::bump(0.0, 1.0, window).unwrap();
        let g = TestFunction::bump(2.0, 3.0, window).unwrap();
        wightman_residual(
            &h,
            &frame,
            SmearedField { vector: &a, function: &f },
            SmearedField { vector: &a, function: &g },
            &h.vacuum(),
            spec,
        )
        .unwrap()
    };
    let r256 = run(256);
    assert!(r256.residual < 1e-8, "residual {}", r256.residual);
    assert!(r256.within_bound, "bound {}", r256.declared_bound);
    assert_eq!(r256.locality_order, 2);
    let r128 = run(128);
    assert!(
        r256.residual < r128.residual,
        "no decay: {} -> {}",
        r128.residual,
        r256.residual
    );

    // overlapping or undeclared supports refuse the locality claim
    let f = TestFunction::bump(0.0, 1.0, 64).unwrap();
    let go = TestFunction::bump(0.5, 1.5, 64).unwrap();
    assert!(!supports_declared_disjoint(&f, &go));
    let err = wightman_residual(
        &h,
        &frame,
        SmearedField { vector: &a, function: &f },
        SmearedField { vector: &a, function: &go },
        &h.vacuum(),
        spec,
    );
    assert!(err.is_err());
    let m = TestFunction::mode(1, 64).unwrap();
    assert!(!supports_declared_disjoint(&f, &m));
}

#[test]
fn ladder_norms_follow_the_binomial_identity() {
    for d in 1..=4u32 {
        let lad = ladder_module(d, 10).unwrap();
        for n in 0..=10usize {
            let expect = Scalar::binomial(2 * d as i64 + n as i64 - 1, n as u32);
            assert_eq!(lad.norms_sq[n], expect, "d={d} n={n}");
            if n >= 1 {
                let expect = Scalar::from_int(2 * d as i64 + n as i64 - 1);
                assert_eq!(lad.l1_coeffs[n], expect, "L1 coeff d={d} n={n}");
            }
        }
    }
    assert!(ladder_module(0, 4).is_err());

    // the same ladder realized inside a model: current of the rank-one
    // Heisenberg algebra, a^n = L_{-1}^n a / n!
    let h = models::heisenberg(8);
    let a = h.generators[0].vector.clone();
    let mut power = a.clone();
    for n in 1..=7u32 {
        power = h.apply_l(-1, &power).unwrap();
        let mut an = power.clone();
        an.scale(&Scalar::factorial(n).recip());
        let expect = Scalar::binomial(2 + n as i64 - 1, n);
        assert_eq!(h.norm_sq(&an), expect, "in-model norm at n={n}");
    }
}

#[test]
fn p_polynomial_interpolates_the_binomials() {
    let p1 = p_polynomial(1).unwrap();
    assert_eq!(p1, vec![Scalar::zero(), Scalar::one()]);
    // d = 2: x(x^2-1)/3! so that p_2(2) = C(3,0) = 1
    let p2 = p_polynomial(2).unwrap();
    assert_eq!(p_eval(&p2, 2), Scalar::one());
    assert_eq!(p_eval(&p2, 3), Scalar::from_int(4));
    for d in 1..=4u32 {
        let p = p_polynomial(d).unwrap();
        for n in 0..d as i64 {
            assert_eq!(p_eval(&p, n), Scalar::zero(), "zero at n={n} d={d}");
        }
        for n in d as i64..=(d as i64 + 3) {
            let expect = Scalar::binomial(d as i64 + n - 1, (n - d as i64) as u32);
            assert_eq!(p_eval(&p, n), expect, "d={d} n={n}");
            assert_eq!(p_eval(&p, -n), -&p_eval(&p, n), "odd parity d={d} n={n}");
        }
    }
}

#[test]
fn a_of_f_creation_and_errors() {
    let ladder = ladder_module(1, 8).unwrap();
    let f = TestFunction::mode(-1, 8).unwrap();
    let v = a_of_f(&ladder, &f, 8);
    assert_eq!(v.coeffs[0], Complex64::new(1.0, 0.0));
    assert!(v.coeffs[1..].iter().all(|z| z.norm() == 0.0));
    assert!((v.norm(&ladder) - 1.0).abs() < 1e-15);
}

#[test]
fn symplectic_form_agrees_along_both_paths() {
    // d = 1, f1 = cos, f2 = sin: exact value 1/4 both ways
    let ladder = ladder_module(1, 8).unwrap();
    let half = Complex64::new(0.5, 0.0);
    let ihalf = Complex64::new(0.0, 0.5);
    let cos = TestFunction::from_coeffs(&[(1, half), (-1, half)], 8, None).unwrap();
    let sin = TestFunction::from_coeffs(&[(1, -ihalf), (-1, ihalf)], 8, None).unwrap();
    let s = symplectic_form(&ladder, 1.0, &cos, &sin).unwrap();
    assert!((s - 0.25).abs() < 1e-15, "cos/sin value {s}");
    let si = symplectic_inner_path(&ladder, 1.0, &cos, &sin, 8);
    assert!((s - si).abs() < 1e-15);

    // antisymmetry
    let f = TestFunction::bump(0.0, std::f64::consts::PI, 64).unwrap();
    assert!(symplectic_form(&ladder, 1.0, &f, &f).unwrap().abs() < 1e-18);

    // overlapping bumps, frozen dual-path values at window 400
    for (d, expect) in [(1u32, 5.71968614355312e-3), (2u32, -2.17080853290063e-4)] {
        let ladder = ladder_module(d, 400).unwrap();
        let f1 = TestFunction::bump(0.0, std::f64::consts::PI, 400 + d as i64).unwrap();
        let f2 = TestFunction::bump(1.0, 3.0, 400 + d as i64).unwrap();
        let s = symplectic_form(&ladder, 1.0, &f1, &f2).unwrap();
        let si = symplectic_inner_path(&ladder, 1.0, &f1, &f2, 400);
        assert!(
            (s - si).abs() <= 1e-10 * s.abs().max(1.0),
            "paths disagree d={d}: {s} vs {si}"
        );
        assert!((s - expect).abs() < 1e-8, "d={d} value {s}");
    }

    // locality: disjoint bumps, d = 2, small values decaying with the window
    let ladder2 = ladder_module(2, 512).unwrap();
    let v = |w: i64| {
        let f1 = TestFunction::bump(0.0, 1.0, w).unwrap();
        let f2 = TestFunction::bump(2.0, 3.0, w).unwrap();
        symplectic_form(&ladder2, 1.0, &f1, &f2).unwrap().abs()
    };
    let (v128, v256) = (v(128), v(256));
    assert!(v256 < 1e-8, "symplectic locality {v256}");
    assert!(v256 < v128, "no decay: {v128} -> {v256}");

    let complex_f =
        TestFunction::from_coeffs(&[(1, Complex64::new(0.0, 1.0))], 4, None).unwrap();
    assert!(symplectic_form(&ladder, 1.0, &complex_f, &cos).is_err());
}

#[test]
fn modular_flow_residual_converges() {
    let pi = std::f64::consts::PI;
    // frozen spectral-window residuals: d=1: 2.47e-4 (100) -> 5.96e-7 (200);
    // d=2: 2.92e-3 (100) -> 7.19e-5 (200)
    for (d, lo, hi) in [(1u32, 1e-7, 2e-6), (2u32, 1e-5, 3e-4)] {
        let f = TestFunction::bump(0.0, pi, 200 + d as i64).unwrap();
        let rep = bisognano_wichmann_residual(d, &f, 200, 12.0).unwrap();
        assert!(rep.residual < 1e-3, "d={d} residual {}", rep.residual);
        assert!(
            rep.residual > lo && rep.residual < hi,
            "d={d} residual off the reference band: {}",
            rep.residual
        );
        assert!(
            rep.residual * 4.0 <= rep.residual_half,
            "d={d}: {} vs half {}",
            rep.residual,
            rep.residual_half
        );
        assert!(rep.kept > 0);
    }

    // zero function: zero residual by convention
    let z = TestFunction::from_coeffs(&[], 64, Some((0.5, 1.0))).unwrap();
    assert_eq!(bisognano_wichmann_residual(1, &z, 32, 12.0).unwrap().residual, 0.0);

    // support outside the upper semicircle is refused
    let f = TestFunction::bump(2.0, 4.0, 64).unwrap();
    assert!(bisognano_wichmann_residual(1, &f, 32, 12.0).is_err());
}
