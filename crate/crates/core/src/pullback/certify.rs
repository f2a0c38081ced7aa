use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{hessian_parts, riesz_correction, PullbackBundle};
use crate::error::Result;
use crate::floer_function::{check_floer_function, FloerFunction, FunctionCheckOptions, FunctionReport};
use crate::floer_map::{log_slope, scale_weights, SuperpositionMap};
use crate::scale_operator::{
    compactness_profile, fredholm_diagnostic, op_norm_exponents, top_singular_pair, FredholmOptions, FredholmReport,
};
use crate::scale_space::{FourierLoop, Level};

/// `‖K^q‖_{1+s → 1}` against `κ_{1+s} = ‖∇f|_{φ(q)}‖₁ · ‖D²φ|_q‖`, the
/// bilinear norm taken on `H_{1+s} × H_{-1} → H_{-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub s: f64,
    pub gradient_norm: f64,
    pub bilinear_norm: f64,
    pub kappa: f64,
    #[serde(rename = "K_norm")]
    pub k_norm: f64,
    pub holds: bool,
}

impl KappaReport {
    /// `K_norm / kappa`, or 0 when both vanish.
    pub fn ratio(&self) -> f64 {
        if self.kappa > 0.0 {
            self.k_norm / self.kappa
        } else if self.k_norm > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

pub fn kappa_bound_check<F: FloerFunction + ?Sized>(
    f: &F,
    phi: &SuperpositionMap,
    q: &FourierLoop,
) -> Result<KappaReport> {
    let s = phi.s();
    let d = phi.derivatives(q)?;
    let g = f.grad2(&d.value)?;
    let k = riesz_correction(f, phi, q)?;
    let k_norm = op_norm_exponents(&k, 1.0 + s, 1.0);
    let mut starts = Vec::new();
    if k_norm > 0.0 {
        let (_, xi, y) = top_singular_pair(&k, 1.0 + s, 1.0);
        starts.push((xi, scale_weights(&y, 1.0)));
    }
    let bilinear_norm = d.second.norm_with_starts(1.0 + s, -1.0, -1.0, starts).value;
    let gradient_norm = g.norm(Level::ONE);
    let kappa = gradient_norm * bilinear_norm;
    Ok(KappaReport { n: q.truncation(), s, gradient_norm, bilinear_norm, kappa, k_norm, holds: k_norm <= kappa + 1e-8 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub mode: usize,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackSection {
    pub s: f64,
    /// Entries of the sample and truncation with the largest `K_norm / kappa`.
    pub kappa: f64,
    #[serde(rename = "K_norm")]
    pub k_norm: f64,
    pub kappa_sweep: Vec<KappaReport>,
    pub kappa_holds: bool,
    /// Weighted singular values of `K^q∘ι_s: H₁ → H₀` at Fourier mode
    /// positions, first sample, largest truncation.
    pub compact_tail: Vec<TailPoint>,
    pub tail_slope: f64,
    pub tail_decays: bool,
    /// Fredholm evidence for `Dφ* A Dφ`, one report per sample.
    pub conjugated_summand: Vec<FredholmReport>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackReport {
    #[serde(flatten)]
    pub report: FunctionReport,
    pub pullback: PullbackSection,
}

impl PullbackReport {
    pub fn passed(&self) -> bool {
        self.report.passed && self.pullback.passed
    }
}

/// Singular values at the position of Fourier mode `k = 1, 2, 4, …, N/2`;
/// mode `N` sits on the truncation edge and is left out.
///
/// A multiplier of pointwise rank `r` has `r(2N+1)` nonzero singular values,
/// so mode `k` sits at position `r(2k+1)`.
fn tail_points(profile: &[f64], truncation: usize) -> Vec<TailPoint> {
    let top = profile.first().copied().unwrap_or(0.0);
    let nonzero = profile.iter().filter(|&&v| v > 1e-12 * top).count();
    let rank = ((nonzero as f64 / (2 * truncation + 1) as f64).round() as usize).max(1);
    std::iter::successors(Some(1usize), |k| Some(k * 2))
        .take_while(|&k| 2 * k <= truncation)
        .map(|mode| TailPoint { mode, sigma: profile[(rank * (2 * mode + 1)).min(profile.len()) - 1] })
        .collect()
}

/// Runs the Floer-function checks on `f ∘ φ` and the structural checks
/// behind them: the `κ` bound over the sweep, decay of the correction's
/// profile, and Fredholm evidence for the conjugated summand.
pub fn certify_pullback<F: FloerFunction>(
    f: &F,
    phi: &SuperpositionMap,
    samples: &[FourierLoop],
    opts: &FunctionCheckOptions,
) -> Result<PullbackReport> {
    let bundle = PullbackBundle::new(f, phi.clone());
    let report = check_floer_function(&bundle, samples, opts)?;
    let s = phi.s();

    let jobs: Vec<(&FourierLoop, usize)> =
        samples.iter().flat_map(|q| opts.sweep.iter().map(move |&n| (q, n))).collect();
    let kappa_sweep =
        jobs.par_iter().map(|(q, n)| kappa_bound_check(f, phi, &q.resized(*n))).collect::<Result<Vec<_>>>()?;
    let worst = kappa_sweep.iter().max_by(|a, b| a.ratio().total_cmp(&b.ratio())).cloned();
    let kappa_holds = kappa_sweep.iter().all(|r| r.holds);

    let (compact_tail, tail_slope) = match (samples.first(), opts.sweep.iter().max()) {
        (Some(q), Some(&n)) => {
            let k = riesz_correction(f, phi, &q.resized(n))?;
            let profile = compactness_profile(&k, Level::ONE, Level::ZERO);
            let tail = tail_points(&profile, n);
            let far: Vec<&TailPoint> = tail.iter().filter(|p| 8 * p.mode >= n).collect();
            let slope = log_slope(
                &far.iter().map(|p| p.mode as f64).collect::<Vec<_>>(),
                &far.iter().map(|p| p.sigma).collect::<Vec<_>>(),
            );
            (tail, slope)
        }
        _ => (Vec::new(), f64::NAN),
    };
    let all_zero = compact_tail.iter().all(|p| p.sigma <= 1e-14);
    let tail_decays = all_zero || tail_slope <= s - 1.0;

    let fopts = FredholmOptions {
        stabilize_from: opts.stabilize_from,
        gap_tolerance: opts.gap_tol,
        ..FredholmOptions::default()
    };
    let conjugated_summand = samples
        .iter()
        .map(|q| {
            for &n in &opts.sweep {
                hessian_parts(f, phi, &q.resized(n))?;
            }
            fredholm_diagnostic(
                |n| hessian_parts(f, phi, &q.resized(n)).expect("checked above").0,
                Level::ONE,
                Level::ZERO,
                &opts.sweep,
                fopts,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let passed = kappa_holds && tail_decays && conjugated_summand.iter().all(|r| r.index_zero());
    Ok(PullbackReport {
        report,
        pullback: PullbackSection {
            s,
            kappa: worst.as_ref().map_or(0.0, |r| r.kappa),
            k_norm: worst.as_ref().map_or(0.0, |r| r.k_norm),
            kappa_sweep,
            kappa_holds,
            compact_tail,
            tail_slope,
            tail_decays,
            conjugated_summand,
            passed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer_function::{quadratic_spectral, symplectic_action, HamiltonianData};
    use crate::floer_map::Chart;
    use crate::scale_operator::LevelOperator;
    use nalgebra::DMatrix;

    #[test]
    fn linear_map_has_zero_kappa() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        let phi = SuperpositionMap::new(Chart::linear(&m).unwrap(), Level::new(0.75).unwrap()).unwrap();
        let f = symplectic_action(HamiltonianData::Harmonic { dim: 2 }).unwrap();
        let q = FourierLoop::trig(2, 8, 1, &[0.5, 0.0], &[0.0, 0.5]);
        let r = kappa_bound_check(&f, &phi, &q).unwrap();
        assert_eq!((r.kappa, r.k_norm), (0.0, 0.0));
        assert!(r.holds);
    }

    #[test]
    fn zero_gradient_gives_zero_on_both_sides() {
        let f = quadratic_spectral(LevelOperator::identity(2, 8, Level::ZERO)).unwrap();
        let phi = SuperpositionMap::new(Chart::Shear { c: 1.0 }, Level::new(0.75).unwrap()).unwrap();
        let r = kappa_bound_check(&f, &phi, &FourierLoop::zeros(2, 8)).unwrap();
        assert_eq!((r.kappa, r.k_norm), (0.0, 0.0));
        assert!(r.holds && r.ratio() == 0.0);
    }

    #[test]
    fn shear_action_kappa_dominates() {
        let f = symplectic_action(HamiltonianData::Harmonic { dim: 2 }).unwrap();
        let phi = SuperpositionMap::new(Chart::Shear { c: 1.0 }, Level::new(0.75).unwrap()).unwrap();
        let q = &FourierLoop::trig(2, 16, 1, &[0.6, 0.0], &[0.0, 0.6])
            + &FourierLoop::trig(2, 16, 2, &[0.1, 0.0], &[0.0, -0.1]);
        let r = kappa_bound_check(&f, &phi, &q).unwrap();
        assert!(r.k_norm > 0.0 && r.holds, "{r:?}");
    }

    #[test]
    fn tail_positions() {
        let mut profile: Vec<f64> = (1..=17).rev().map(f64::from).collect();
        profile.extend([0.0; 17]);
        let tail = tail_points(&profile, 8);
        assert_eq!(tail.iter().map(|p| p.mode).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(tail.iter().map(|p| p.sigma).collect::<Vec<_>>(), vec![15.0, 13.0, 9.0]);
        let full: Vec<f64> = (1..=34).rev().map(f64::from).collect();
        assert_eq!(tail_points(&full, 8)[0].sigma, full[5]);
    }
}
