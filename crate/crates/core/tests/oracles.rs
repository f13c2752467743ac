//! Reference values for the public API, each checked against an independent
//! closed form or hand computation.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use complex_splitting::coeffs::{self, Branch, CompositionScheme, TwoTermSplitScheme};
use complex_splitting::engine::{
    self, ab_step, composition_step, integrate, strang_step, RunConfig,
};
use complex_splitting::linstab::{self, build_k, pqde, Stability, StabilityAnalysis};
use complex_splitting::models::{self, HarmonicSystem, VolterraLotkaSystem};
use complex_splitting::order::{c_weights, order6_report, real_negativity_witness};
use complex_splitting::{Complex64 as C, Error, ProjectionPolicy, SplitSystem, SymmetryClass};

const SQRT3_6: f64 = 0.288_675_134_594_812_88;

fn cx(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn ab(name: &str) -> TwoTermSplitScheme<f64> {
    coeffs::ab_from_alpha(&coeffs::by_name(name).unwrap())
}

#[test]
fn third_order_coefficients() {
    let s = coeffs::third_order_two_term::<f64>(Branch::Plus);
    assert!((s.alphas()[0] - cx(0.5, SQRT3_6)).norm() < 1e-15);
    assert!((s.alphas()[1] - cx(0.5, -SQRT3_6)).norm() < 1e-15);
    assert_eq!(s.declared_order(), 3);
    assert_eq!(s.symmetry(), SymmetryClass::ConjugateSymmetric);
    for branch in [Branch::Plus, Branch::Minus] {
        let s = coeffs::third_order_two_term::<f64>(branch);
        assert_eq!(s.alphas().iter().sum::<C>(), cx(1.0, 0.0));
        assert!(coeffs::power_sum_residual(s.alphas(), 3) < 1e-15);
    }
}

#[test]
fn triple_jump_roots() {
    let real = coeffs::fourth_order_three_term::<f64>(0).unwrap();
    assert!((real.alphas()[0].re - 1.351_207_191_959_657_6).abs() < 1e-15);
    assert!((real.alphas()[1].re + 1.702_414_383_919_315_3).abs() < 1e-15);
    // 1 / (2 − 2^{1/3} e^{2iπ/3}) evaluated in extended precision
    let k1 = coeffs::fourth_order_three_term::<f64>(1).unwrap();
    assert!(
        (k1.alphas()[0] - cx(0.324_396_404_020_171_18, 0.134_586_272_490_806_7)).norm() < 1e-15
    );
    for k in 0..3 {
        let s = coeffs::fourth_order_three_term::<f64>(k).unwrap();
        let (a, b) = (s.alphas()[0], s.alphas()[1]);
        assert!((a * 2.0 + b - 1.0).norm() < 1e-15);
        assert!((a.powi(3) * 2.0 + b.powi(3)).norm() < 1e-14);
        assert_eq!(s.symmetry(), SymmetryClass::Symmetric);
    }
    assert!(coeffs::fourth_order_three_term::<f64>(3).is_err());
}

#[test]
fn palindromic_fourth_order() {
    let s = coeffs::fourth_order_palindromic_from_third::<f64>();
    assert_eq!(s.stages(), 4);
    assert!((s.alphas().iter().sum::<C>() - 1.0).norm() < 1e-15);
    assert_eq!(s.symmetry(), SymmetryClass::Symmetric);
}

#[test]
fn two_term_raise_from_leapfrog() {
    let s = coeffs::raise_order_two_term(&CompositionScheme::<f64>::leapfrog(), 2, 0).unwrap();
    let third = coeffs::third_order_two_term::<f64>(Branch::Minus);
    for (x, y) in s.alphas().iter().zip(third.alphas()) {
        assert!((x - y).norm() < 1e-15);
    }
    let mut s = CompositionScheme::<f64>::leapfrog();
    for n in 2..=5 {
        s = coeffs::raise_order_two_term(&s, n, 0).unwrap();
        assert!(s.alphas().iter().all(|a| a.re > 0.0));
    }
    assert_eq!(s.declared_order(), 6);
    let seven = coeffs::raise_order_two_term(&s, 6, 0).unwrap();
    assert!(seven.alphas().iter().any(|a| a.re <= 0.0));
    assert!(coeffs::raise_order_two_term(&s, 6, 9).is_err());
}

#[test]
fn three_term_raise_from_leapfrog() {
    let s = coeffs::raise_order_three_term(&CompositionScheme::<f64>::leapfrog(), 2).unwrap();
    let (a, b) = (s.alphas()[0], s.alphas()[1]);
    assert!((a * 2.0 + b - 1.0).norm() < 1e-15);
    assert!((a.powi(3) * 2.0 + b.powi(3)).norm() < 1e-14);
    assert!((a.re - 0.324_396_404_020_171_18).abs() < 1e-15);
    assert!((a.im.abs() - 0.134_586_272_490_806_7).abs() < 1e-15);
    let mut s = CompositionScheme::<f64>::leapfrog();
    for n in [2, 4, 6] {
        s = coeffs::raise_order_three_term(&s, n).unwrap();
    }
    assert_eq!(s.declared_order(), 8);
    assert!(s.alphas().iter().all(|a| a.re > 0.0));
}

#[test]
fn chambers_flattening() {
    let ab = coeffs::ab_from_alpha(&coeffs::third_order_two_term::<f64>(Branch::Plus));
    let a1 = cx(0.5, SQRT3_6);
    let want_a = [a1, a1.conj()];
    let want_b = [a1 / 2.0, cx(0.5, 0.0), a1.conj() / 2.0];
    for (x, y) in ab.a().iter().zip(&want_a) {
        assert!((x - y).norm() < 1e-15);
    }
    for (x, y) in ab.b().iter().zip(&want_b) {
        assert!((x - y).norm() < 1e-15);
    }
    let strang = coeffs::ab_from_alpha(&CompositionScheme::<f64>::leapfrog());
    assert_eq!(strang.a(), &[cx(1.0, 0.0)]);
    assert_eq!(strang.b(), &[cx(0.5, 0.0), cx(0.5, 0.0)]);
}

#[test]
fn chi_form_from_ab() {
    let chi = coeffs::alpha_from_ab(&TwoTermSplitScheme::<f64>::strang()).unwrap();
    assert_eq!(chi, vec![cx(0.5, 0.0), cx(0.5, 0.0)]);
    let chi = coeffs::alpha_from_ab(&ab("s23")).unwrap();
    let a1 = cx(0.5, SQRT3_6);
    for (x, y) in chi
        .iter()
        .zip([a1 / 2.0, a1 / 2.0, a1.conj() / 2.0, a1.conj() / 2.0])
    {
        assert!((x - y).norm() < 1e-15);
    }
    assert!(TwoTermSplitScheme::new(
        "bad",
        vec![cx(1.0, 0.0)],
        vec![cx(1.0, 0.0), cx(0.5, 0.0)],
        1
    )
    .is_err());
}

#[test]
fn table_coefficients() {
    let s76 = coeffs::s76::<f64>();
    assert_eq!(
        s76.alphas()[0],
        cx(0.116_900_037_554_661_284_389, 0.043_428_254_616_060_341_762)
    );
    assert_eq!(s76.symmetry(), SymmetryClass::Symmetric);
    let s7c6 = coeffs::s7c6::<f64>();
    assert_eq!(s7c6.alphas()[3], cx(0.220_040_091_637_223_372_13, 0.0));
    assert_eq!(s7c6.symmetry(), SymmetryClass::ConjugateSymmetric);
    for s in [&s76, &s7c6] {
        assert!((s.alphas().iter().sum::<C>() - 1.0).norm() < 1e-12);
    }
    let plain = CompositionScheme::new("x", vec![cx(0.3, 0.0), cx(0.7, 0.0)], 1).unwrap();
    assert_eq!(plain.symmetry(), SymmetryClass::NoSymmetry);
    assert!(matches!(
        coeffs::by_name::<f64>("s99"),
        Err(Error::UnknownName { .. })
    ));
}

#[test]
fn order_residuals() {
    assert_eq!(c_weights(&[cx(1.0, 0.0)]), vec![cx(0.5, 0.0)]);
    assert_eq!(
        c_weights(&[cx(0.5, 0.0), cx(0.5, 0.0)]),
        vec![cx(0.25, 0.0), cx(0.75, 0.0)]
    );
    let s76 = coeffs::s76::<f64>();
    let a = s76.alphas();
    let c4 = a[3] / 2.0 + a[0] + a[1] + a[2];
    assert!((c_weights(a)[3] - c4).norm() < 1e-16);
    for s in [coeffs::s76::<f64>(), coeffs::s7c6()] {
        let r = order6_report(s.label(), s.alphas(), 1e-12);
        assert_eq!(r.residuals.len(), 7);
        assert!(r.max_residual < 1e-12, "{}: {:?}", s.label(), r.residuals);
        assert_eq!(r.passes_at, 6);
    }
    let s23 = coeffs::by_name::<f64>("s23").unwrap();
    let r = order6_report(s23.label(), s23.alphas(), 1e-12);
    assert!(r.residuals["consistency"] < 1e-15);
    assert!(r.residuals["p3"] < 1e-15);
    assert!(r.residuals["p5"] > 1e-3);
    assert_eq!(r.passes_at, 3);
}

#[test]
fn negativity_witness_examples() {
    let tj = coeffs::fourth_order_three_term::<f64>(0).unwrap();
    let reals: Vec<f64> = tj.alphas().iter().map(|z| z.re).collect();
    let w = real_negativity_witness(&reals).unwrap();
    // [α, β, α, 0] gives a = [α+β, α], b = [α, β+α, 0]
    assert_eq!((w.a_index, w.b_index), (0, 1));
    assert!(matches!(
        real_negativity_witness(&[0.5, 0.5]),
        Err(Error::CubeConditionViolated { .. })
    ));
}

#[test]
fn strang_step_cases() {
    let sys = HarmonicSystem;
    let x0 = vec![cx(0.3, 0.1), cx(-1.2, 0.4)];
    let mut x = x0.clone();
    strang_step(&sys, cx(0.0, 0.0), &mut x).unwrap();
    assert_eq!(x, x0);
    // leapfrog matrix [[1 − h²/2, h], [−h + h³/4, 1 − h²/2]]
    let h = 0.2;
    let mut x = vec![cx(1.0, 0.0), cx(1.0, 0.0)];
    strang_step(&sys, cx(h, 0.0), &mut x).unwrap();
    let q = (1.0 - h * h / 2.0) + h;
    let p = (-h + h.powi(3) / 4.0) + (1.0 - h * h / 2.0);
    assert!((x[0].re - q).abs() < 1e-15 && (x[1].re - p).abs() < 1e-15);
    let z = cx(0.37, -0.21);
    let mut x = x0.clone();
    strang_step(&sys, z, &mut x).unwrap();
    strang_step(&sys, -z, &mut x).unwrap();
    assert!(engine::max_diff(&x, &x0) < 1e-12);
}

#[test]
fn composition_and_ab_steps_agree() {
    let sys = HarmonicSystem;
    let x0 = vec![cx(1.0, 0.0), cx(1.0, 0.0)];
    let mut x = x0.clone();
    composition_step(&CompositionScheme::leapfrog(), &sys, &mut x, 0.3).unwrap();
    let mut y = x0.clone();
    strang_step(&sys, cx(0.3, 0.0), &mut y).unwrap();
    assert_eq!(x, y);
    let mut z = x0.clone();
    ab_step(&TwoTermSplitScheme::strang(), &sys, &mut z, 0.3).unwrap();
    assert!(engine::max_diff(&y, &z) < 1e-15);

    let s23 = coeffs::by_name::<f64>("s23").unwrap();
    let mut x = x0.clone();
    let mut y = x0.clone();
    composition_step(&s23, &sys, &mut x, 0.25).unwrap();
    ab_step(&coeffs::ab_from_alpha(&s23), &sys, &mut y, 0.25).unwrap();
    assert!(engine::max_diff(&x, &y) < 1e-13);
}

#[test]
fn s23_one_period_energy() {
    let sys = HarmonicSystem;
    let s23 = coeffs::by_name::<f64>("s23").unwrap();
    let mut x = vec![cx(1.0, 0.0), cx(1.0, 0.0)];
    for _ in 0..14 {
        composition_step(&s23, &sys, &mut x, PI / 7.0).unwrap();
    }
    assert!((models::harmonic_energy(&x) - 1.0).abs() < 1e-2);
}

#[test]
fn sixth_order_one_step_defects_on_vl() {
    // one-step defect against a fine reference shrinks by about 2^7 per halving
    let sys = VolterraLotkaSystem;
    let fine = coeffs::s7c6::<f64>();
    let reference = |h: f64| {
        let mut x = vec![cx(2.0, 0.0), cx(4.0, 0.0)];
        for _ in 0..64 {
            composition_step(&fine, &sys, &mut x, h / 64.0).unwrap();
        }
        x
    };
    let mut outputs = Vec::new();
    for s in [coeffs::s76::<f64>(), coeffs::s7c6()] {
        let mut defect = |h: f64| {
            let mut x = vec![cx(2.0, 0.0), cx(4.0, 0.0)];
            composition_step(&s, &sys, &mut x, h).unwrap();
            outputs.push(x.clone());
            engine::max_diff(&x, &reference(h))
        };
        let ratio = defect(0.2) / defect(0.1);
        assert!(
            (2f64.powi(7) / 2.0..2f64.powi(7) * 2.0).contains(&ratio),
            "{}: {ratio}",
            s.label()
        );
    }
    assert!(engine::max_diff(&outputs[0], &outputs[2]) > 1e-12);
}

#[test]
fn chambers_defect_is_imaginary_at_leading_order() {
    // the real part of the one-step energy defect drops one order faster
    let sys = HarmonicSystem;
    let ab = ab("s23");
    let defect = |h: f64| {
        let mut x = vec![cx(1.0, 0.0), cx(0.0, 0.0)];
        ab_step(&ab, &sys, &mut x, h).unwrap();
        let e = (x[0] * x[0] + x[1] * x[1]) / 2.0 - 0.5;
        (e.re.abs(), e.im.abs())
    };
    let (r1, i1) = defect(0.1);
    let (r2, i2) = defect(0.05);
    assert!(r1 < i1);
    assert!((r1 / r2).log2() > (i1 / i2).log2() + 0.7);
}

fn decile_maxima(series: &[(f64, f64)]) -> Vec<f64> {
    series
        .chunks(series.len() / 10)
        .map(|c| c.iter().map(|(_, e)| *e).fold(0.0, f64::max))
        .collect()
}

#[test]
fn integrate_preconditions_and_guards() {
    let sys = HarmonicSystem;
    let s34 = coeffs::by_name::<f64>("s34").unwrap();
    assert!(integrate(&s34, &sys, &[1.0, 1.0], RunConfig::new(0.1, 0), &[]).is_err());
    // at h = 2π/9 the dominant eigenvalue has modulus 1 + 2.708e-5, so the
    // energy error keeps growing but stays far below 1 over 500 periods
    let h = 2.0 * PI / 9.0;
    let obs = models::harmonic_error_observables(1.0, 1.0);
    let cfg = RunConfig::new(h, 9 * 500).policy(ProjectionPolicy::OutputOnly);
    let t = integrate(&s34, &sys, &[1.0, 1.0], cfg, &obs).unwrap();
    let env = decile_maxima(&t.series("energy_error").unwrap());
    assert!(env.windows(2).take(9).all(|w| w[1] > w[0]), "{env:?}");
    assert!(env[9] > 10.0 * env[0]);
    let v = linstab::classify(&ab("s34"), h).unwrap();
    assert!((v.max_eigen_modulus - 1.0 - 2.708_2e-5).abs() < 1e-8);
}

#[test]
fn s7c6_energy_error_stays_below_its_bound() {
    // sup over the rotation phase of the real-part energy error of
    // K(π/2)^n (1, 1), from an independent eigendecomposition
    const BOUND: f64 = 2.1662e-4;
    let sys = HarmonicSystem;
    let s = coeffs::s7c6::<f64>();
    let obs = models::harmonic_error_observables(1.0, 1.0);
    let t = integrate(
        &s,
        &sys,
        &[1.0, 1.0],
        RunConfig::new(PI / 2.0, 4 * 10_000),
        &obs,
    )
    .unwrap();
    assert!(!t.diverged());
    let energy = t.series("energy_error").unwrap();
    assert!(energy.iter().all(|(_, e)| *e < BOUND));
    let pos = decile_maxima(&t.series("position_error").unwrap());
    assert!(pos.windows(2).take(9).all(|w| w[1] > w[0]));
}

#[test]
fn stability_examples() {
    let strang = StabilityAnalysis::new(&TwoTermSplitScheme::<f64>::strang()).unwrap();
    let r = strang.pqde();
    assert_eq!(r.p.coeffs(), &[cx(1.0, 0.0), cx(0.0, 0.0), cx(-0.5, 0.0)]);
    assert!(r.d.is_zero());
    assert_eq!(
        r.q.coeffs(),
        &[cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(-0.125, 0.0)]
    );
    assert_eq!(
        r.e.coeffs(),
        &[cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.125, 0.0)]
    );
    let v = strang.classify(0.1).unwrap();
    assert_eq!(v.stability, Stability::Stable);
    let (phi, ratio) = strang.phase(0.1).unwrap();
    assert!((phi - 0.995f64.acos()).abs() < 1e-15);
    assert!((ratio - 1.0004).abs() < 1e-4);

    assert_eq!(
        linstab::classify(&ab("s23"), PI / 7.0).unwrap().stability,
        Stability::Stable
    );
    let v = linstab::classify(&ab("s34"), 2.0 * PI / 9.0).unwrap();
    assert_eq!(v.stability, Stability::Unstable);
    assert!(v.max_eigen_modulus > 1.0);
    let (_, ratio) = linstab::phase(&ab("s23"), 1e-3).unwrap();
    assert!((ratio - 1.0).abs() < 1e-5);
    let (_, ratio) = linstab::phase(&ab("s7c6"), PI / 2.0).unwrap();
    assert!((ratio - 1.0).abs() < 1e-2);
}

#[test]
fn k_matches_stepping() {
    let s23 = coeffs::by_name::<f64>("s23").unwrap();
    let k = StabilityAnalysis::new(&coeffs::ab_from_alpha(&s23))
        .unwrap()
        .k_at(0.1);
    let sys = HarmonicSystem;
    for col in 0..2 {
        let mut x = vec![cx(0.0, 0.0); 2];
        x[col] = cx(1.0, 0.0);
        composition_step(&s23, &sys, &mut x, 0.1).unwrap();
        for row in 0..2 {
            assert!((x[row] - k[row][col]).norm() < 1e-14);
        }
    }
}

#[test]
fn structure_of_table_schemes() {
    let r = pqde(&build_k(&ab("s7c6"))).unwrap();
    for poly in [&r.p, &r.q, &r.e] {
        assert!(poly.max_abs_im() < 1e-12);
    }
    assert!(r.d.max_abs_re() < 1e-12);
    let r = pqde(&build_k(&ab("s76"))).unwrap();
    assert!(r.d.max_abs() < 1e-12);
    assert!(linstab::adjoint_symmetry_check(&ab("s7c6")));
    assert!(!linstab::adjoint_symmetry_check(&ab("s76")));
    assert!(linstab::symmetric_inverse_check(&ab("s76")));
}

#[test]
fn model_flows() {
    let mut x = vec![cx(2.0, 0.0), cx(4.0, 0.0)];
    let t = 0.3;
    models::vl_flow_a(cx(t, 0.0), &mut x).unwrap();
    assert!((x[0].re - 2.0 * (2.0 * t).exp()).abs() < 1e-15 && x[1] == cx(4.0, 0.0));
    let mut x = vec![cx(1.0, 0.0), cx(1.7, 0.0)];
    models::vl_flow_b(cx(t, 0.0), &mut x).unwrap();
    assert_eq!(x[1], cx(1.7, 0.0));
    assert!((models::vl_invariant(2.0f64, 4.0).unwrap() + 2.534_264_097_200_273_4).abs() < 1e-15);
    assert!(models::vl_invariant(-1.0, 4.0).is_none());
    let mut x = vec![cx(1.0, 0.0), cx(1.0, 0.0)];
    assert!(models::vl_flow_a(cx(800.0, 0.0), &mut x).is_err());

    assert_eq!(models::harmonic_reference(0.0, (0.4, -0.2)), (0.4, -0.2));
    let (q, p) = models::harmonic_reference(2.0 * PI, (0.4, -0.2));
    assert!((q - 0.4).abs() < 1e-15 && (p + 0.2).abs() < 1e-15);
    let (q, p) = models::harmonic_reference(PI / 2.0, (1.0, 1.0));
    assert!((q - 1.0).abs() < 1e-15 && (p + 1.0).abs() < 1e-15);

    let sys = HarmonicSystem;
    let mut x = vec![cx(1.0, 0.0), cx(0.0, 0.0)];
    strang_step(&sys, cx(0.01, 0.0), &mut x).unwrap();
    assert!((models::harmonic_energy(&x) - 0.5).abs() < 1e-4);
    assert_eq!(SplitSystem::<f64>::parts(&sys), 2);
}
