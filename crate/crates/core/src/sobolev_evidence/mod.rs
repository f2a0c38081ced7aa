//! Numerical evidence for multiplication estimates on the loop scale and for
//! the embedding `H_s ⊂ C^{s-1/2}`.

mod holder;

pub use holder::{holder_embedding_check, holder_seminorm, HolderOptions, HolderPoint, HolderReport, HolderVerdict};

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FloerError, Result};
use crate::scale_operator::{multiplication_by_loop, op_norm, LevelOperator};
use crate::scale_space::{FourierLoop, Grid, Level};
use crate::sweep::{as_pairs, classify, SweepPoint, Trend};

/// Where the multiplying factor lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FactorLevel {
    Sobolev(Level),
    Continuous,
}

/// One of the four multiplication estimates `factor × input → output`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MultSignature {
    /// `H₁ × H₁ → H₁`.
    SobolevAlgebra,
    /// `C⁰ × H₀ → H₀`.
    ContinuousOnL2,
    /// `H₁ × H₀ → H₀`.
    SobolevOnL2,
    /// `H_{-1} × H₁ → H_{-1}`, defined by `(f*·g)h = f*(gh)`.
    Dual,
}

impl MultSignature {
    pub const ALL: [MultSignature; 4] =
        [MultSignature::SobolevAlgebra, MultSignature::ContinuousOnL2, MultSignature::SobolevOnL2, MultSignature::Dual];

    pub fn label(self) -> &'static str {
        match self {
            MultSignature::SobolevAlgebra => "(1,1→1)",
            MultSignature::ContinuousOnL2 => "(C⁰,0→0)",
            MultSignature::SobolevOnL2 => "(1,0→0)",
            MultSignature::Dual => "(−1,1→−1)",
        }
    }

    pub fn from_label(label: &str) -> Result<Self> {
        let normalized = label.replace("->", "→").replace('-', "−").replace("C0", "C⁰");
        Self::ALL
            .into_iter()
            .find(|s| s.label() == normalized)
            .ok_or_else(|| FloerError::InvalidSignature(label.to_string()))
    }

    /// The signature with the given factor, input and output levels.
    pub fn from_levels(factor: FactorLevel, input: Level, output: Level) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.factor() == factor && s.input() == input && s.output() == output)
            .ok_or_else(|| FloerError::InvalidSignature(format!("{factor:?} × {} → {}", input.value(), output.value())))
    }

    pub fn factor(self) -> FactorLevel {
        match self {
            MultSignature::SobolevAlgebra | MultSignature::SobolevOnL2 => FactorLevel::Sobolev(Level::ONE),
            MultSignature::ContinuousOnL2 => FactorLevel::Continuous,
            MultSignature::Dual => FactorLevel::Sobolev(Level::MINUS_ONE),
        }
    }

    pub fn input(self) -> Level {
        match self {
            MultSignature::SobolevAlgebra | MultSignature::Dual => Level::ONE,
            MultSignature::ContinuousOnL2 | MultSignature::SobolevOnL2 => Level::ZERO,
        }
    }

    pub fn output(self) -> Level {
        match self {
            MultSignature::SobolevAlgebra => Level::ONE,
            MultSignature::ContinuousOnL2 | MultSignature::SobolevOnL2 => Level::ZERO,
            MultSignature::Dual => Level::MINUS_ONE,
        }
    }

    /// Norm of the factor `g` in the factor space; the sup norm is read on a
    /// grid with 32 points per retained mode.
    pub fn factor_norm(self, g: &FourierLoop) -> f64 {
        match self.factor() {
            FactorLevel::Sobolev(l) => g.norm(l),
            FactorLevel::Continuous => sup_norm(g),
        }
    }
}

impl fmt::Display for MultSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl TryFrom<String> for MultSignature {
    type Error = FloerError;

    fn try_from(s: String) -> Result<Self> {
        Self::from_label(&s)
    }
}

impl From<MultSignature> for String {
    fn from(s: MultSignature) -> String {
        s.label().to_string()
    }
}

pub fn sup_norm(g: &FourierLoop) -> f64 {
    let grid = Grid::with_factor(g.truncation().max(1), 32).expect("factor above the aliasing bound");
    grid.sample(g).expect("grid fits the truncation").iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `sup|u| ≤ C ‖u‖₁` on scalar loops, `C² = Σ_k (1 + 4π²k²)⁻¹ = coth(1/2)/2`.
pub fn c0_embedding_constant() -> f64 {
    (0.5 / 0.5_f64.tanh()).sqrt()
}

/// Multiplication by the scalar loop `g` on scalar loops of the same
/// truncation, read between the signature's input and output levels.
pub fn mult_operator(g: &FourierLoop, sig: MultSignature) -> Result<LevelOperator> {
    if g.dim() != 1 {
        return Err(FloerError::DimensionMismatch(format!("multiplier with {} components", g.dim())));
    }
    if !g.is_finite() {
        return Err(FloerError::InvalidLoop("multiplier has non-finite coefficients".into()));
    }
    Ok(multiplication_by_loop(g, 1, g.truncation(), sig.input()).with_levels(sig.input(), sig.output()))
}

/// A multiplier defined at every truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Multiplier {
    /// A band-limited loop; modes beyond its truncation vanish.
    Loop { g: FourierLoop },
    /// `1 + Σ_{k≥1} k^{-exponent} cos(2πkt)`.
    PowerLaw { exponent: f64 },
}

impl Multiplier {
    /// Coefficients up to `|k| ≤ truncation`.
    pub fn at(&self, truncation: usize) -> FourierLoop {
        match self {
            Multiplier::Loop { g } => g.resized(truncation),
            Multiplier::PowerLaw { exponent } => {
                let mut g = FourierLoop::zeros(1, truncation);
                g.set_mode(0, 0, Complex64::new(1.0, 0.0));
                for k in 1..=truncation {
                    g.set_mode(0, k as i64, Complex64::new(0.5 * (k as f64).powf(-exponent), 0.0));
                }
                g
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultSweepReport {
    pub signature: MultSignature,
    pub sweep: Vec<SweepPoint>,
    pub verdict: Boundedness,
}

impl MultSweepReport {
    /// Last norm over first norm.
    pub fn growth(&self) -> f64 {
        match (self.sweep.first(), self.sweep.last()) {
            (Some(a), Some(b)) if a.norm > 0.0 => b.norm / a.norm,
            _ => f64::NAN,
        }
    }
}

/// Operator norms of multiplication by `g` at each truncation `N`, using the
/// factor's modes up to `2N` so the Galerkin matrix sees the whole product.
/// Bounded means within 5% of the final value from `N = 64` on.
pub fn mult_norm_sweep(g: &Multiplier, sig: MultSignature, sweep: &[usize]) -> Result<MultSweepReport> {
    mult_norm_sweep_with(g, sig, sweep, 64, 0.05)
}

/// [`mult_norm_sweep`] with the stabilization rule given explicitly.
pub fn mult_norm_sweep_with(
    g: &Multiplier,
    sig: MultSignature,
    sweep: &[usize],
    stabilize_from: usize,
    rel_tol: f64,
) -> Result<MultSweepReport> {
    let points = sweep
        .par_iter()
        .map(|&n| -> Result<SweepPoint> {
            let factor = g.at(2 * n);
            if factor.dim() != 1 {
                return Err(FloerError::DimensionMismatch(format!("multiplier with {} components", factor.dim())));
            }
            let op = multiplication_by_loop(&factor, 1, n, sig.input()).with_levels(sig.input(), sig.output());
            Ok(SweepPoint { n, norm: op_norm(&op, sig.input(), sig.output()) })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = match classify(&as_pairs(&points), stabilize_from, rel_tol) {
        Trend::Stable => Boundedness::Bounded,
        Trend::Growing => Boundedness::Unbounded,
        Trend::Decaying | Trend::Unsettled => Boundedness::Inconclusive,
    };
    Ok(MultSweepReport { signature: sig, sweep: points, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_loop, stream};
    use crate::scale_space::inner;

    fn two_plus_sine(n: usize) -> FourierLoop {
        &FourierLoop::constant(&[2.0], n) + &FourierLoop::trig(1, n, 1, &[0.0], &[1.0])
    }

    #[test]
    fn labels_round_trip() {
        for sig in MultSignature::ALL {
            assert_eq!(MultSignature::from_label(sig.label()).unwrap(), sig);
            assert_eq!(MultSignature::from_levels(sig.factor(), sig.input(), sig.output()).unwrap(), sig);
            let json = serde_json::to_string(&sig).unwrap();
            assert_eq!(serde_json::from_str::<MultSignature>(&json).unwrap(), sig);
        }
        assert_eq!(MultSignature::from_label("(-1,1->-1)").unwrap(), MultSignature::Dual);
        assert!(MultSignature::from_label("(2,2→2)").is_err());
        assert!(MultSignature::from_levels(FactorLevel::Continuous, Level::ONE, Level::ONE).is_err());
        assert!(serde_json::from_str::<MultSignature>("\"(0,0→1)\"").is_err());
    }

    #[test]
    fn unit_multiplier_has_unit_norm() {
        let one = FourierLoop::constant(&[1.0], 8);
        for sig in MultSignature::ALL {
            let op = mult_operator(&one, sig).unwrap();
            assert!((op_norm(&op, sig.input(), sig.output()) - 1.0).abs() < 1e-12, "{sig}");
            assert_eq!(op.matrix(), &nalgebra::DMatrix::<f64>::identity(17, 17));
        }
    }

    #[test]
    fn zero_multiplier() {
        let zero = Multiplier::Loop { g: FourierLoop::zeros(1, 4) };
        for sig in MultSignature::ALL {
            let r = mult_norm_sweep(&zero, sig, &[16, 32, 64, 128]).unwrap();
            assert!(r.sweep.iter().all(|p| p.norm == 0.0));
        }
    }

    #[test]
    fn sup_norm_bound_on_l2() {
        let g = two_plus_sine(32);
        let norm = op_norm(&mult_operator(&g, MultSignature::SobolevOnL2).unwrap(), Level::ZERO, Level::ZERO);
        assert!((0.99 * 3.0..=3.0).contains(&norm), "{norm}");
        assert!((MultSignature::ContinuousOnL2.factor_norm(&g) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dual_pairing_identity() {
        let mut rng = stream(3, "dual");
        for _ in 0..20 {
            let f = random_loop(&mut rng, 1, 12, 12, 1.0, 1.0, true);
            let g = random_loop(&mut rng, 1, 12, 12, 1.0, 1.0, true);
            let h = random_loop(&mut rng, 1, 12, 12, 1.0, 1.0, true);
            let lhs = inner(&mult_operator(&f, MultSignature::Dual).unwrap().apply(&g), &h, Level::ZERO).unwrap();
            let rhs =
                inner(&f, &mult_operator(&g, MultSignature::SobolevAlgebra).unwrap().apply(&h), Level::ZERO).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn embedding_constant() {
        let c2: f64 = (-20000..=20000_i64).map(|k| crate::scale_space::spectral_weight(k, -1.0)).sum();
        assert!((c0_embedding_constant() - c2.sqrt()).abs() < 1e-5);
    }
}
