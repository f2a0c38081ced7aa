mod common;

use std::f64::consts::PI;

use common::sample;
use floerlab::floer_function::stencil::directional_derivative;
use floerlab::floer_function::{
    check_floer_function, gradient_axiom_check, FloerFunction, FunctionCheckOptions, QuadraticSpectral, ScaledGradient,
    SpectralFamily,
};
use floerlab::harness::{anharmonic_action, harmonic_action};
use floerlab::sampling::{random_direction, stream};
use floerlab::scale_operator::{fredholm_point, FredholmVerdict, LevelOperator, KERNEL_THRESHOLD};
use floerlab::scale_space::{inner, FourierLoop, Level};
use proptest::prelude::*;

fn loop_at(seed: u64, n: usize) -> FourierLoop {
    &sample(seed, "floer-function", 2, n, 5) * 0.5
}

fn quick() -> FunctionCheckOptions {
    FunctionCheckOptions { sweep: vec![16, 32, 64], stabilize_from: 32, ..FunctionCheckOptions::default() }
}

#[test]
fn harmonic_hessian_at_zero_has_closed_form_gap() {
    let f = harmonic_action();
    for n in [8, 32, 128] {
        let zero = FourierLoop::zeros(2, n);
        assert_eq!(f.grad(&zero).unwrap().norm(Level::ZERO), 0.0);
        let a = f.hess(&zero).unwrap();
        let expected = f.cauchy_riemann(n).sub(&LevelOperator::identity(2, n, Level::ZERO));
        assert!(a.max_abs_diff(&expected) < 1e-12);
        // per-mode blocks J₀·2πik − 1 have singular values |2πk ± 1| / √(1 + 4π²k²)
        let p = fredholm_point(&a, Level::ONE, Level::ZERO, KERNEL_THRESHOLD);
        let oracle = (2.0 * PI - 1.0) / (1.0 + 4.0 * PI * PI).sqrt();
        assert_eq!((p.ker_dim, p.coker_dim), (0, 0));
        assert!((p.sigma_min - oracle).abs() < 1e-12, "{} vs {oracle}", p.sigma_min);
    }
}

#[test]
fn gradient_matches_central_differences() {
    for f in [harmonic_action(), anharmonic_action()] {
        let mut rng = stream(1, "gradient-fd");
        for seed in 0..5 {
            let q = loop_at(seed, 32);
            let g = f.grad(&q).unwrap();
            for _ in 0..4 {
                let xi = random_direction(&mut rng, 2, 32, 8, Level::ONE);
                let fd = directional_derivative(&|u| f.eval(u), &q, &xi, 1e-3).unwrap();
                let exact = inner(&g, &xi, Level::ZERO).unwrap();
                assert!((fd - exact).abs() <= 1e-7 * g.norm(Level::ZERO) * xi.norm(Level::ZERO));
            }
        }
    }
}

#[test]
fn builtin_actions_pass_on_a_short_sweep() {
    let samples = [loop_at(10, 16), loop_at(11, 16)];
    for f in [harmonic_action(), anharmonic_action()] {
        let r = check_floer_function(&f, &samples, &quick()).unwrap();
        assert!(r.passed, "{}", serde_json::to_string_pretty(&r).unwrap());
        for fr in r.hessian.fredholm.h1_h0.iter().chain(&r.hessian.fredholm.h2_h1) {
            assert_eq!(fr.verdict, FredholmVerdict::IndexZero);
        }
    }
}

#[test]
fn scaled_gradient_fails_by_about_one_percent() {
    let f = ScaledGradient { inner: harmonic_action(), factor: 1.01 };
    let q = loop_at(12, 16);
    let r = gradient_axiom_check(&f, std::slice::from_ref(&q), &quick()).unwrap();
    assert!(!r.differentiability.passed);
    let g = f.grad(&q).unwrap();
    let mut rng = stream(16, "scaled");
    for _ in 0..5 {
        let xi = random_direction(&mut rng, 2, 16, 8, Level::ONE);
        let fd = directional_derivative(&|u| f.eval(u), &q, &xi, 1e-3).unwrap();
        let exact = inner(&g, &xi, Level::ZERO).unwrap();
        let rel = (fd - exact).abs() / exact.abs();
        assert!((rel - 0.01 / 1.01).abs() < 1e-6, "{rel}");
    }
}

#[test]
fn identity_quadratic_is_half_the_l2_norm_and_not_fredholm() {
    let f = QuadraticSpectral::family(SpectralFamily::Identity { dim: 2 }).unwrap();
    let q = loop_at(13, 16);
    assert!((f.eval(&q).unwrap() - 0.5 * q.norm(Level::ZERO).powi(2)).abs() < 1e-12);
    assert!(f.grad(&q).unwrap().max_abs_diff(&q) < 1e-15);
    let r = check_floer_function(&f, &[q], &quick()).unwrap();
    assert!(!r.passed);
    assert!(r.hessian.fredholm.h1_h0.iter().all(|fr| fr.verdict == FredholmVerdict::NotFredholm));
}

#[test]
fn zero_hamiltonian_is_the_cauchy_riemann_quadratic() {
    let f = QuadraticSpectral::family(SpectralFamily::CauchyRiemann { dim: 2 }).unwrap();
    let circle = FourierLoop::trig(2, 8, 1, &[1.0, 0.0], &[0.0, 1.0]);
    // the counterclockwise unit circle has action −π
    assert!((f.eval(&circle).unwrap() + PI).abs() < 1e-12);
    let h = harmonic_action();
    assert!((h.eval(&circle).unwrap() + PI + 0.5).abs() < 1e-12);
}

#[test]
fn gradient_difference_quotient_converges_at_second_order() {
    let f = anharmonic_action();
    let q = loop_at(14, 32);
    let xi = random_direction(&mut stream(15, "grad-hess"), 2, 32, 8, Level::ONE);
    let exact = f.hess(&q).unwrap().apply(&xi);
    let err = |h: f64| {
        let fd = &(&f.grad(&q.axpy(h, &xi)).unwrap() - &f.grad(&q.axpy(-h, &xi)).unwrap()) * (0.5 / h);
        (&fd - &exact).norm(Level::ZERO)
    };
    let (coarse, fine) = (err(1e-2), err(1e-3));
    assert!(coarse / fine > 80.0 && coarse / fine < 120.0, "{coarse:e} {fine:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hessian_is_level_zero_symmetric(seed in any::<u64>()) {
        let f = anharmonic_action();
        let q = loop_at(seed, 16);
        let a = f.hess(&q).unwrap();
        let mut rng = stream(seed, "symmetry");
        let xi = random_direction(&mut rng, 2, 16, 16, Level::ONE);
        let eta = random_direction(&mut rng, 2, 16, 16, Level::ONE);
        let lhs = inner(&a.apply(&xi), &eta, Level::ZERO).unwrap();
        let rhs = inner(&xi, &a.apply(&eta), Level::ZERO).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1.0));
    }

    #[test]
    fn level_two_objects_restrict(seed in any::<u64>()) {
        let f = anharmonic_action();
        let q = loop_at(seed, 16);
        prop_assert_eq!(f.grad2(&q).unwrap(), f.grad(&q).unwrap());
        let (a2, a) = (f.hess2(&q).unwrap(), f.hess(&q).unwrap());
        prop_assert_eq!(a2.matrix(), a.matrix());
    }
}
