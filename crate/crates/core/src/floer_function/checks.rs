use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stencil::{directional_derivative, directional_derivative_loop, mixed_second_difference};
use super::FloerFunction;
use crate::error::Result;
use crate::floer_map::scale_weights;
use crate::sampling::{random_direction, stream};
use crate::scale_operator::{adjoint, fredholm_diagnostic, op_norm, FredholmOptions, FredholmReport};
use crate::scale_space::{inner, FourierLoop, Level};
use crate::sweep::{as_pairs, classify, SweepPoint, Trend};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionCheckOptions {
    /// Base step of the difference stencils (Richardson with `h/2`).
    pub h: f64,
    pub grad_tol: f64,
    pub hess_tol: f64,
    pub symmetry_tol: f64,
    pub consistency_tol: f64,
    /// Random directions per sample, on top of the gradient direction.
    pub directions: usize,
    /// Fourier band of the random directions.
    pub band: usize,
    pub sweep: Vec<usize>,
    pub stabilize_from: usize,
    pub rel_tol: f64,
    pub gap_tol: f64,
    pub steps: Vec<f64>,
    pub continuity_n: usize,
    pub seed: u64,
}

impl Default for FunctionCheckOptions {
    fn default() -> Self {
        Self {
            h: 1e-3,
            grad_tol: 1e-7,
            hess_tol: 1e-6,
            symmetry_tol: 1e-10,
            consistency_tol: 1e-6,
            directions: 3,
            band: 8,
            sweep: crate::sweep::DEFAULT_SWEEP.to_vec(),
            stabilize_from: 64,
            rel_tol: 0.05,
            gap_tol: 0.02,
            steps: vec![1e-1, 1e-2, 1e-3],
            continuity_n: 32,
            seed: 0,
        }
    }
}

/// Finite-difference pairing residuals, scaled by the Cauchy–Schwarz bound
/// of the pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingCheck {
    pub checks: usize,
    pub max_rel_error: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub max_rel_error: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub max_rel_residual: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictionCheck {
    /// Largest coefficient difference between the level-1 and level-0 objects.
    pub max_coefficient_gap: f64,
    pub sweep: Vec<SweepPoint>,
    pub trend: Trend,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityCheck {
    pub steps: Vec<f64>,
    pub moduli: Vec<f64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FredholmCheck {
    #[serde(rename = "H1->H0")]
    pub h1_h0: Vec<FredholmReport>,
    #[serde(rename = "H2->H1")]
    pub h2_h1: Vec<FredholmReport>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientReport {
    pub function: String,
    #[serde(rename = "Differentiability")]
    pub differentiability: PairingCheck,
    #[serde(rename = "Restriction")]
    pub restriction: RestrictionCheck,
    #[serde(rename = "C1")]
    pub c1: ConsistencyCheck,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HessianReport {
    pub function: String,
    #[serde(rename = "H0-Hessian")]
    pub h0_hessian: PairingCheck,
    #[serde(rename = "Symmetry")]
    pub symmetry: SymmetryCheck,
    #[serde(rename = "Gradient-Hessian")]
    pub gradient_hessian: ConsistencyCheck,
    #[serde(rename = "Restriction")]
    pub restriction: RestrictionCheck,
    #[serde(rename = "Continuity")]
    pub continuity: ContinuityCheck,
    #[serde(rename = "Fredholm")]
    pub fredholm: FredholmCheck,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionReport {
    pub gradient: GradientReport,
    pub hessian: HessianReport,
    pub passed: bool,
}

fn rel(err: f64, scale: f64) -> f64 {
    if scale > 1e-14 {
        err / scale
    } else {
        err
    }
}

/// Unit-`H₁` directions for sample `q`: the gradient direction first, then random ones.
fn directions(
    f: &dyn FloerFunction,
    q: &FourierLoop,
    idx: usize,
    opts: &FunctionCheckOptions,
) -> Result<Vec<FourierLoop>> {
    let mut rng = stream(opts.seed, &format!("directions/{idx}"));
    let mut out = Vec::with_capacity(opts.directions + 1);
    let g = scale_weights(&f.grad(q)?, -1.0);
    let n = g.norm(Level::ONE);
    if n > 0.0 {
        out.push(&g * (1.0 / n));
    }
    for _ in 0..opts.directions {
        out.push(random_direction(&mut rng, q.dim(), q.truncation(), opts.band.min(q.truncation()), Level::ONE));
    }
    Ok(out)
}

fn gradient_consistency(
    f: &dyn FloerFunction,
    samples: &[FourierLoop],
    opts: &FunctionCheckOptions,
) -> Result<ConsistencyCheck> {
    let mut worst = 0.0_f64;
    for (i, q) in samples.iter().enumerate() {
        let a = f.hess(q)?;
        for xi in directions(f, q, i, opts)? {
            let fd = directional_derivative_loop(&|u| f.grad(u), q, &xi, opts.h)?;
            let exact = a.apply(&xi);
            worst = worst.max(rel((&fd - &exact).norm(Level::ZERO), exact.norm(Level::ZERO)));
        }
    }
    Ok(ConsistencyCheck { max_rel_error: worst, tol: opts.consistency_tol, passed: worst <= opts.consistency_tol })
}

/// `df|_q ξ = ⟨∇f|_q, ξ⟩₀`, restriction of the gradient to `U₂`, and `C¹`
/// dependence through the Hessian.
pub fn gradient_axiom_check(
    f: &dyn FloerFunction,
    samples: &[FourierLoop],
    opts: &FunctionCheckOptions,
) -> Result<GradientReport> {
    let mut worst = 0.0_f64;
    let mut checks = 0;
    for (i, q) in samples.iter().enumerate() {
        let g = f.grad(q)?;
        for xi in directions(f, q, i, opts)? {
            let fd = directional_derivative(&|u| f.eval(u), q, &xi, opts.h)?;
            let exact = inner(&g, &xi, Level::ZERO)?;
            let scale = g.norm(Level::ZERO) * xi.norm(Level::ZERO);
            worst = worst.max(rel((fd - exact).abs(), scale));
            checks += 1;
        }
    }
    let differentiability =
        PairingCheck { checks, max_rel_error: worst, tol: opts.grad_tol, passed: worst <= opts.grad_tol };

    let mut gap = 0.0_f64;
    for q in samples {
        gap = gap.max(f.grad2(q)?.max_abs_diff(&f.grad(q)?));
    }
    let sweep = opts
        .sweep
        .par_iter()
        .map(|&n| -> Result<SweepPoint> {
            let mut norm = 0.0_f64;
            for q in samples {
                norm = norm.max(f.grad2(&q.resized(n))?.norm(Level::ONE));
            }
            Ok(SweepPoint { n, norm })
        })
        .collect::<Result<Vec<_>>>()?;
    let trend = classify(&as_pairs(&sweep), opts.stabilize_from, opts.rel_tol);
    let restriction =
        RestrictionCheck { max_coefficient_gap: gap, passed: gap == 0.0 && trend == Trend::Stable, sweep, trend };
    let c1 = gradient_consistency(f, samples, opts)?;
    Ok(GradientReport {
        function: f.name(),
        passed: differentiability.passed && restriction.passed && c1.passed,
        differentiability,
        restriction,
        c1,
    })
}

/// Second differences, symmetry, gradient consistency, level-2 restriction,
/// sampled continuity, and Fredholm evidence at both level pairs.
pub fn hessian_axiom_check(
    f: &dyn FloerFunction,
    samples: &[FourierLoop],
    opts: &FunctionCheckOptions,
) -> Result<HessianReport> {
    let mut worst = 0.0_f64;
    let mut checks = 0;
    let mut sym = 0.0_f64;
    for (i, q) in samples.iter().enumerate() {
        let a = f.hess(q)?;
        let scale = a.max_abs_entry();
        let asym = a.sub(&adjoint(&a, Level::ZERO)).max_abs_entry();
        sym = sym.max(rel(asym, scale));
        let dirs = directions(f, q, i, opts)?;
        for (k, xi) in dirs.iter().enumerate() {
            let eta = &dirs[(k + 1) % dirs.len()];
            let fd = mixed_second_difference(&|u| f.eval(u), q, xi, eta, opts.h)?;
            let axi = a.apply(xi);
            let exact = inner(&axi, eta, Level::ZERO)?;
            worst = worst.max(rel((fd - exact).abs(), axi.norm(Level::ZERO) * eta.norm(Level::ZERO)));
            checks += 1;
        }
    }
    let h0_hessian = PairingCheck { checks, max_rel_error: worst, tol: opts.hess_tol, passed: worst <= opts.hess_tol };
    let symmetry = SymmetryCheck { max_rel_residual: sym, tol: opts.symmetry_tol, passed: sym <= opts.symmetry_tol };
    let gradient_hessian = gradient_consistency(f, samples, opts)?;

    let mut gap = 0.0_f64;
    for q in samples {
        gap = gap.max(f.hess2(q)?.max_abs_diff(&f.hess(q)?));
    }
    let sweep = opts
        .sweep
        .par_iter()
        .map(|&n| -> Result<SweepPoint> {
            let mut norm = 0.0_f64;
            for q in samples {
                norm = norm.max(op_norm(&f.hess2(&q.resized(n))?, Level::TWO, Level::ONE));
            }
            Ok(SweepPoint { n, norm })
        })
        .collect::<Result<Vec<_>>>()?;
    let trend = classify(&as_pairs(&sweep), opts.stabilize_from, opts.rel_tol);
    let restriction =
        RestrictionCheck { max_coefficient_gap: gap, passed: gap == 0.0 && trend == Trend::Stable, sweep, trend };

    let continuity = hessian_continuity(f, samples, opts)?;
    let fredholm = fredholm_check(f, samples, opts)?;
    Ok(HessianReport {
        function: f.name(),
        passed: h0_hessian.passed
            && symmetry.passed
            && gradient_hessian.passed
            && restriction.passed
            && continuity.holds
            && fredholm.passed,
        h0_hessian,
        symmetry,
        gradient_hessian,
        restriction,
        continuity,
        fredholm,
    })
}

fn hessian_continuity(
    f: &dyn FloerFunction,
    samples: &[FourierLoop],
    opts: &FunctionCheckOptions,
) -> Result<ContinuityCheck> {
    let n = opts.continuity_n;
    let mut rng = stream(opts.seed, "hessian-continuity");
    let mut moduli = vec![0.0_f64; opts.steps.len()];
    for q in samples {
        let q = q.resized(n);
        let zeta = random_direction(&mut rng, q.dim(), n, opts.band.min(n), Level::ONE);
        let a = f.hess(&q)?;
        for (m, &h) in moduli.iter_mut().zip(&opts.steps) {
            let d = f.hess(&q.axpy(h, &zeta))?.sub(&a);
            *m = m.max(op_norm(&d, Level::ONE, Level::ZERO));
        }
    }
    let first = moduli.first().copied().unwrap_or(0.0);
    let last = moduli.last().copied().unwrap_or(0.0);
    Ok(ContinuityCheck { steps: opts.steps.clone(), holds: last <= 0.1 * first + 1e-12, moduli })
}

fn fredholm_check(
    f: &dyn FloerFunction,
    samples: &[FourierLoop],
    opts: &FunctionCheckOptions,
) -> Result<FredholmCheck> {
    let fopts = FredholmOptions {
        stabilize_from: opts.stabilize_from,
        gap_tolerance: opts.gap_tol,
        ..FredholmOptions::default()
    };
    let mut h1_h0 = Vec::new();
    let mut h2_h1 = Vec::new();
    for q in samples {
        for n in &opts.sweep {
            f.hess2(&q.resized(*n))?;
        }
        h1_h0.push(fredholm_diagnostic(
            |n| f.hess(&q.resized(n)).expect("checked above"),
            Level::ONE,
            Level::ZERO,
            &opts.sweep,
            fopts,
        )?);
        h2_h1.push(fredholm_diagnostic(
            |n| f.hess2(&q.resized(n)).expect("checked above"),
            Level::TWO,
            Level::ONE,
            &opts.sweep,
            fopts,
        )?);
    }
    let passed = h1_h0.iter().chain(&h2_h1).all(|r| r.index_zero());
    Ok(FredholmCheck { h1_h0, h2_h1, passed })
}

/// Both axiom groups on the same samples.
pub fn check_floer_function(
    f: &dyn FloerFunction,
    samples: &[FourierLoop],
    opts: &FunctionCheckOptions,
) -> Result<FunctionReport> {
    let gradient = gradient_axiom_check(f, samples, opts)?;
    let hessian = hessian_axiom_check(f, samples, opts)?;
    Ok(FunctionReport { passed: gradient.passed && hessian.passed, gradient, hessian })
}
