use serde::{Deserialize, Serialize};

use super::{weighted_singular_values, LevelOperator};
use crate::error::{FloerError, Result};
use crate::scale_space::Level;
use crate::sweep::{classify, relative_variation, Trend};

/// Numerical kernel threshold, relative to the largest singular value.
pub const KERNEL_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FredholmOptions {
    pub threshold: f64,
    /// Gap stabilization is judged on `N ≥ stabilize_from`.
    pub stabilize_from: usize,
    pub gap_tolerance: f64,
}

impl Default for FredholmOptions {
    fn default() -> Self {
        Self { threshold: KERNEL_THRESHOLD, stabilize_from: 64, gap_tolerance: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FredholmPoint {
    #[serde(rename = "N")]
    pub n: usize,
    pub sigma_min: f64,
    /// Smallest singular value past the numerical kernel.
    pub gap: f64,
    pub ker_dim: usize,
    pub coker_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FredholmVerdict {
    IndexZero,
    NonzeroIndex,
    NotFredholm,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FredholmReport {
    pub a: f64,
    pub b: f64,
    pub sweep: Vec<FredholmPoint>,
    pub index_estimate: i64,
    pub gap_variation: f64,
    pub verdict: FredholmVerdict,
}

impl FredholmReport {
    pub fn index_zero(&self) -> bool {
        self.verdict == FredholmVerdict::IndexZero
    }
}

pub fn fredholm_point(op: &LevelOperator, a: Level, b: Level, threshold: f64) -> FredholmPoint {
    let sv = weighted_singular_values(op, a.value(), b.value());
    let rows = op.matrix().nrows();
    let cols = op.matrix().ncols();
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&x| x > threshold * top).count();
    let ker_dim = cols - rank;
    let coker_dim = rows - rank;
    let ascending: Vec<f64> = sv.iter().rev().copied().collect();
    // zero-padded when the matrix is rectangular
    let full = ascending.len().max(cols);
    let pad = full - ascending.len();
    let at = |i: usize| if i < pad { 0.0 } else { ascending[i - pad] };
    FredholmPoint {
        n: op.truncation(),
        sigma_min: at(0),
        gap: if ker_dim < full { at(ker_dim) } else { 0.0 },
        ker_dim,
        coker_dim,
    }
}

/// Kernel/cokernel counts and the post-kernel gap along an `N`-family.
///
/// A finite matrix always has index zero, so the evidence is the behaviour of
/// the gap: it must settle above zero. A gap that keeps falling is the
/// signature of a compact operator.
pub fn fredholm_diagnostic(
    family: impl Fn(usize) -> LevelOperator,
    a: Level,
    b: Level,
    sweep: &[usize],
    opts: FredholmOptions,
) -> Result<FredholmReport> {
    let mut points = Vec::with_capacity(sweep.len());
    let mut dim = None;
    for &n in sweep {
        let op = family(n);
        if op.truncation() != n || *dim.get_or_insert(op.dim()) != op.dim() {
            return Err(FloerError::DimensionMismatch(format!(
                "family member for N={n} has shape (n={}, N={})",
                op.dim(),
                op.truncation()
            )));
        }
        points.push(fredholm_point(&op, a, b, opts.threshold));
    }
    let last = points.last().ok_or_else(|| FloerError::Parameter("empty truncation sweep".into()))?;
    let index_estimate = last.ker_dim as i64 - last.coker_dim as i64;
    let gaps: Vec<(usize, f64)> = points.iter().map(|p| (p.n, p.gap)).collect();
    let gap_variation = relative_variation(&gaps, opts.stabilize_from);
    let trend = classify(&gaps, opts.stabilize_from, opts.gap_tolerance);
    let verdict = if points.iter().any(|p| p.ker_dim != p.coker_dim) {
        FredholmVerdict::NonzeroIndex
    } else if trend == Trend::Stable && last.gap > 0.0 {
        FredholmVerdict::IndexZero
    } else if trend == Trend::Decaying {
        FredholmVerdict::NotFredholm
    } else {
        FredholmVerdict::Inconclusive
    };
    Ok(FredholmReport { a: a.value(), b: b.value(), sweep: points, index_estimate, gap_variation, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn j0_dt(n: usize) -> LevelOperator {
        let j0 = LevelOperator::complex_structure(2).unwrap();
        LevelOperator::pointwise(&j0, n, Level::ZERO).compose(&LevelOperator::derivative(2, n))
    }

    const SWEEP: [usize; 4] = [16, 32, 64, 128];

    #[test]
    fn cauchy_riemann_operator_has_constant_kernel() {
        let rep = fredholm_diagnostic(j0_dt, Level::ONE, Level::ZERO, &SWEEP, FredholmOptions::default()).unwrap();
        let expected = 2.0 * PI / (1.0 + 4.0 * PI * PI).sqrt();
        for p in &rep.sweep {
            assert_eq!((p.ker_dim, p.coker_dim), (2, 2));
            assert!((p.gap - expected).abs() < 1e-12);
        }
        assert_eq!(rep.index_estimate, 0);
        assert_eq!(rep.verdict, FredholmVerdict::IndexZero);
    }

    #[test]
    fn inclusion_is_flagged() {
        let rep = fredholm_diagnostic(
            |n| LevelOperator::identity(2, n, Level::ZERO).with_levels(Level::ONE, Level::ZERO),
            Level::ONE,
            Level::ZERO,
            &SWEEP,
            FredholmOptions::default(),
        )
        .unwrap();
        for p in &rep.sweep {
            let expected = (1.0 + 4.0 * PI * PI * (p.n * p.n) as f64).powf(-0.5);
            assert!((p.sigma_min - expected).abs() < 1e-14);
        }
        assert_eq!(rep.verdict, FredholmVerdict::NotFredholm);
    }

    #[test]
    fn shifted_operator_is_invertible() {
        let rep = fredholm_diagnostic(
            |n| j0_dt(n).sub(&LevelOperator::identity(2, n, Level::ZERO)),
            Level::ONE,
            Level::ZERO,
            &SWEEP,
            FredholmOptions::default(),
        )
        .unwrap();
        assert!(rep.sweep.iter().all(|p| p.ker_dim == 0 && p.coker_dim == 0));
        assert_eq!(rep.verdict, FredholmVerdict::IndexZero);
    }

    #[test]
    fn inconsistent_family_is_rejected() {
        let r = fredholm_diagnostic(
            |n| LevelOperator::identity(if n > 16 { 2 } else { 1 }, n, Level::ZERO),
            Level::ZERO,
            Level::ZERO,
            &[16, 32],
            FredholmOptions::default(),
        );
        assert!(matches!(r, Err(FloerError::DimensionMismatch(_))));
    }

    #[test]
    fn report_json_has_expected_keys() {
        let rep = fredholm_diagnostic(j0_dt, Level::ONE, Level::ZERO, &[16], FredholmOptions::default()).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        for key in ["a", "b", "sweep", "index_estimate", "verdict"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["sweep"][0].get("N").is_some());
        assert_eq!(v["verdict"], "index_zero");
    }
}
