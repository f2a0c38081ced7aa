//! Acceptance run. Prints one line per criterion and exits non-zero if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::sample;
use floerlab::floer_function::stencil::{directional_derivative, mixed_second_difference};
use floerlab::floer_function::{FloerFunction, QuadraticSpectral, SpectralFamily};
use floerlab::floer_map::{leibniz_check, AxiomOptions};
use floerlab::harness::{
    harmonic_action, map_at, rotation, rough_multiplier, run_verify, shear, smooth_multiplier, RunConfig,
};
use floerlab::loop_atlas::{check_compatibility, check_transitivity, sphere_atlas_at};
use floerlab::pullback::{kappa_bound_check, riesz_correction, PullbackBundle};
use floerlab::sampling::{random_direction, stream};
use floerlab::scale_operator::{check_interpolation, fredholm_diagnostic, multiplication_by_loop, FredholmOptions};
use floerlab::scale_space::{inner, FourierLoop, Level};
use floerlab::sobolev_evidence::{
    holder_embedding_check, mult_norm_sweep_with, Boundedness, HolderOptions, HolderVerdict, MultSignature,
};
use floerlab::sweep::{as_pairs, relative_variation, DEFAULT_SWEEP};

type Outcome = floerlab::error::Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

const S_SWEEP: [f64; 3] = [0.6, 0.75, 0.9];

fn base_loop(seed: u64, n: usize) -> FourierLoop {
    &sample(seed, "acceptance", 2, n, 6) * 0.5
}

/// Relative errors are measured against the Cauchy-Schwarz scale of the pairing.
fn gradient_oracle() -> Outcome {
    let n = 128;
    let f = harmonic_action();
    let bundle = PullbackBundle::new(&f, map_at(shear(), 0.75)?);
    let mut rng = stream(1, "criterion-1");
    let mut worst = 0.0_f64;
    for seed in 0..10 {
        let q = base_loop(seed, n);
        let g = bundle.grad(&q)?;
        for _ in 0..10 {
            let xi = random_direction(&mut rng, 2, n, 16, Level::ONE);
            let fd = directional_derivative(&|u| bundle.eval(u), &q, &xi, 1e-3)?;
            let exact = inner(&g, &xi, Level::ZERO)?;
            worst = worst.max((fd - exact).abs() / (g.norm(Level::ZERO) * xi.norm(Level::ZERO)));
        }
    }
    Ok((worst <= 1e-7, format!("100 pairs at N={n}, worst relative error {worst:.2e} (tol 1e-7)")))
}

fn hessian_oracle() -> Outcome {
    let n = 128;
    let f = harmonic_action();
    let bundle = PullbackBundle::new(&f, map_at(shear(), 0.75)?);
    let mut rng = stream(2, "criterion-2");
    let (mut worst, mut asym) = (0.0_f64, 0.0_f64);
    for seed in 0..10 {
        let q = base_loop(seed, n);
        let a = bundle.hess(&q)?;
        for _ in 0..10 {
            let xi = random_direction(&mut rng, 2, n, 16, Level::ONE);
            let eta = random_direction(&mut rng, 2, n, 16, Level::ONE);
            let fd = mixed_second_difference(&|u| bundle.eval(u), &q, &xi, &eta, 1e-3)?;
            let axi = a.apply(&xi);
            let exact = inner(&axi, &eta, Level::ZERO)?;
            worst = worst.max((fd - exact).abs() / (axi.norm(Level::ZERO) * eta.norm(Level::ZERO)));
            let back = inner(&xi, &a.apply(&eta), Level::ZERO)?;
            asym = asym.max((exact - back).abs() / exact.abs().max(back.abs()));
        }
    }
    Ok((
        worst <= 1e-6 && asym <= 1e-10,
        format!("100 pairs at N={n}, worst relative error {worst:.2e} (tol 1e-6), symmetry {asym:.2e} (tol 1e-10)"),
    ))
}

fn riesz_correction_bound() -> Outcome {
    let f = harmonic_action();
    let n = 64;
    let phi = map_at(shear(), 0.75)?;
    let q = base_loop(3, n);
    let k = riesz_correction(&f, &phi, &q)?;
    let g = f.grad(&phi.apply(&q)?)?;
    let b = phi.d2phi(&q)?;
    let mut rng = stream(3, "criterion-3");
    let mut pairing = 0.0_f64;
    for _ in 0..20 {
        let xi = random_direction(&mut rng, 2, n, n, Level::ONE);
        let eta = random_direction(&mut rng, 2, n, n, Level::ONE);
        let lhs = inner(&k.apply(&xi), &eta, Level::ZERO)?;
        let form = b.apply(&xi, &eta);
        let rhs = inner(&g, &form, Level::ZERO)?;
        pairing = pairing.max((lhs - rhs).abs() / (g.norm(Level::ZERO) * form.norm(Level::ZERO)));
    }
    let mut worst_ratio = 0.0_f64;
    let mut holds = true;
    for s in S_SWEEP {
        let phi = map_at(shear(), s)?;
        for n in [32, 64, 128, 256] {
            let r = kappa_bound_check(&f, &phi, &base_loop(3, 16).resized(n))?;
            holds &= r.holds;
            worst_ratio = worst_ratio.max(r.ratio());
        }
    }
    Ok((
        pairing <= 1e-10 && holds,
        format!(
            "pairing residual {pairing:.2e} (tol 1e-10), ‖K‖/κ at most {worst_ratio:.3} over N 32..256, s {S_SWEEP:?}"
        ),
    ))
}

fn fredholm_evidence() -> Outcome {
    let f = harmonic_action();
    let q = base_loop(4, 16);
    let opts = FredholmOptions::default();
    let h1_h0 = fredholm_diagnostic(
        |n| f.hess(&q.resized(n)).expect("hessian"),
        Level::ONE,
        Level::ZERO,
        &DEFAULT_SWEEP,
        opts,
    )?;
    let h2_h1 = fredholm_diagnostic(
        |n| f.hess2(&q.resized(n)).expect("hessian"),
        Level::TWO,
        Level::ONE,
        &DEFAULT_SWEEP,
        opts,
    )?;
    let mut ok = true;
    let mut gaps = Vec::new();
    for r in [&h1_h0, &h2_h1] {
        ok &= r.sweep.iter().all(|p| p.ker_dim == p.coker_dim);
        let points: Vec<(usize, f64)> = r.sweep.iter().map(|p| (p.n, p.gap)).collect();
        let variation = relative_variation(&points, 64);
        ok &= variation <= 0.02;
        gaps.push(variation);
    }
    let id = QuadraticSpectral::family(SpectralFamily::Identity { dim: 2 })?;
    let control =
        fredholm_diagnostic(|n| id.hess(&q.resized(n)).expect("hessian"), Level::ONE, Level::ZERO, &[32, 256], opts)?;
    let drop = control.sweep[0].sigma_min / control.sweep[1].sigma_min;
    ok &= drop >= 4.0;
    Ok((
        ok,
        format!("ker = coker on every N, gap variation {:.2e} / {:.2e} (tol 0.02), inclusion σ_min drop {drop:.2}x (need 4x)", gaps[0], gaps[1]),
    ))
}

fn stein_weiss() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut ok = true;
    for seed in 0..50 {
        let g = sample(seed, "criterion-5", 1, 16, 4);
        let t = multiplication_by_loop(&g, 1, 16, Level::ZERO);
        for s in [0.25, 0.5, 0.75] {
            let r = check_interpolation(&t, Level::new(s)?)?;
            ok &= r.norm_s <= r.bound + 1e-10;
            worst = worst.max(r.norm_s - r.bound);
        }
    }
    Ok((ok, format!("50 multipliers, largest excess ‖T‖_s − bound = {worst:.2e}")))
}

fn sobolev_multiplication() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for sig in MultSignature::ALL {
        let r = mult_norm_sweep_with(&smooth_multiplier(), sig, &DEFAULT_SWEEP, 64, 0.05)?;
        let variation = relative_variation(&as_pairs(&r.sweep), 64);
        ok &= r.verdict == Boundedness::Bounded && variation <= 0.05;
        parts.push(format!("{} {variation:.1e}", sig.label()));
    }
    let rough = mult_norm_sweep_with(&rough_multiplier(), MultSignature::SobolevAlgebra, &DEFAULT_SWEEP, 64, 0.05)?;
    ok &= rough.growth() >= 2.0;
    Ok((ok, format!("variation from N=64: {}; rough growth {:.2}x (need 2x)", parts.join(", "), rough.growth())))
}

fn leibniz() -> Outcome {
    let n = 64;
    let mut slopes = Vec::new();
    for (psi, phi) in [(shear(), rotation()), (rotation(), shear())] {
        for seed in 0..3 {
            let mut rng = stream(seed, "criterion-7");
            let q = base_loop(seed, 16).resized(n);
            let xi = random_direction(&mut rng, 2, n, 4, Level::ONE);
            let eta = random_direction(&mut rng, 2, n, 4, Level::ZERO);
            let r = leibniz_check(
                &map_at(psi.clone(), 0.75)?,
                &map_at(phi.clone(), 0.75)?,
                &q,
                &xi,
                &eta,
                &[1e-2, 3e-3, 1e-3],
            )?;
            slopes.push(r.slope);
        }
    }
    let ok = slopes.iter().all(|s| (s - 2.0).abs() <= 0.2);
    let text: Vec<String> = slopes.iter().map(|s| format!("{s:.3}")).collect();
    Ok((ok, format!("slopes [{}] (need 2.0 ± 0.2)", text.join(", "))))
}

fn holder() -> Outcome {
    let opts = HolderOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for s in S_SWEEP {
        let r = holder_embedding_check(s, &opts)?;
        let points: Vec<(usize, f64)> = r.sweep.iter().map(|p| (p.n, p.ratio)).collect();
        let variation = relative_variation(&points, 64);
        ok &= r.verdict == HolderVerdict::Embeds && variation <= 0.1;
        parts.push(format!("s={s} {variation:.1e}"));
    }
    let edge = holder_embedding_check(0.5, &opts)?;
    ok &= edge.monotone_growth;
    let first = edge.sweep.first().map_or(f64::NAN, |p| p.ratio);
    Ok((
        ok,
        format!(
            "variation from N=64: {}; s=0.5 ratio {first:.3} -> {:.3}, monotone {}",
            parts.join(", "),
            edge.constant,
            edge.monotone_growth
        ),
    ))
}

fn atlas() -> Outcome {
    let opts = AxiomOptions::default();
    let mut ok = true;
    let mut residual = 0.0_f64;
    for s in S_SWEEP {
        let atlas = sphere_atlas_at(s);
        ok &= check_compatibility(&atlas, &atlas, &atlas.corpus, 1, &opts)?.passed;
        let tilted = atlas.rotated("tilted", [1.0, 0.0, 0.0], 0.3);
        let twisted = atlas.rotated("twisted", [0.0, 1.0, 0.0], -0.25);
        let small = AxiomOptions { sweep: vec![16, 32, 64], ..opts.clone() };
        let r = check_transitivity(&atlas, &tilted, &twisted, &atlas.corpus, 256, &small)?;
        let c = &r.cocycle;
        residual = residual.max(c.apply_residual.max(c.dphi_residual).max(c.inverse_residual));
        ok &= r.passed && r.locality.iter().all(|l| l.consistent);
    }
    ok &= residual <= 1e-10;
    Ok((ok, format!("axioms and transitivity at s {S_SWEEP:?}, cocycle residual {residual:.2e} (tol 1e-10)")))
}

fn determinism() -> Outcome {
    let cfg = RunConfig {
        n: vec![16, 32],
        samples: 1,
        negative_controls: true,
        transitivity_max_n: 32,
        ..RunConfig::default()
    };
    let first = run_verify(&cfg)?.to_json();
    let second = run_verify(&cfg)?.to_json();
    Ok((first == second, format!("{} bytes, identical: {}", first.len(), first == second)))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("pull-back gradient", gradient_oracle),
        ("pull-back Hessian", hessian_oracle),
        ("Riesz correction", riesz_correction_bound),
        ("Fredholm index zero", fredholm_evidence),
        ("Stein-Weiss", stein_weiss),
        ("Sobolev multiplication", sobolev_multiplication),
        ("Leibniz", leibniz),
        ("Hölder embedding", holder),
        ("atlas", atlas),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {}: {} {name}: {detail} [{secs:.1}s]", i + 1, if passed { "PASS" } else { "FAIL" });
        if !passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria fail", criteria.len());
        ExitCode::FAILURE
    }
}
