//! Truncated Fourier model of the scale `H_s(S¹, ℝⁿ)`, `s ∈ {-1} ∪ [0, 2]`.
//!
//! All levels share one coefficient space. The norm at level `s` is
//! `‖u‖_s² = Σ_k (1 + 4π²k²)^s |û_k|²`, so `‖u‖_1² = ‖u‖_0² + ‖u̇‖_0²` and
//! `H_{-1}` is the dual of `H_1` under the `L²` pairing, realized diagonally.

mod fourier_loop;
mod grid;
mod level;

pub use fourier_loop::FourierLoop;
pub use grid::{points_of, Grid};
pub use level::{spectral_weight, Level, FOUR_PI_SQ};

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub fn sobolev_norm(u: &FourierLoop, s: Level) -> f64 {
    u.norm(s)
}

/// Level-`s` inner product `Re Σ_k w_k(s) û_k conj(v̂_k)`.
pub fn inner(u: &FourierLoop, v: &FourierLoop, s: Level) -> Result<f64> {
    u.check_same_shape(v)?;
    Ok(inner_unchecked(u, v, s.value()))
}

pub(crate) fn inner_unchecked(u: &FourierLoop, v: &FourierLoop, exponent: f64) -> f64 {
    let n = u.truncation() as i64;
    let mut total = 0.0;
    for k in -n..=n {
        let w = spectral_weight(k, exponent);
        for j in 0..u.dim() {
            total += w * (u.coeff(j, k) * v.coeff(j, k).conj()).re;
        }
    }
    total
}

/// A linear functional read through the `L²` pairing, `h ↦ Re Σ f̂_k conj(ĥ_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualFunctional(FourierLoop);

impl DualFunctional {
    pub fn new(coeffs: FourierLoop) -> Self {
        Self(coeffs)
    }

    pub fn coefficients(&self) -> &FourierLoop {
        &self.0
    }

    /// Norm as an element of `H_{-1} = (H_1)*`.
    pub fn norm_minus_one(&self) -> f64 {
        self.0.norm(Level::MINUS_ONE)
    }

    /// Operator norm of the functional on `H_a`:
    /// `sup_{‖h‖_a ≤ 1} |f(h)| = (Σ w_k(-a) |f̂_k|²)^{1/2}`.
    pub fn dual_norm(&self, on: Level) -> f64 {
        self.0.weighted_norm_sq(-on.value()).sqrt()
    }

    pub fn apply(&self, h: &FourierLoop) -> Result<f64> {
        dual_pair(self, h)
    }
}

pub fn dual_pair(f: &DualFunctional, h: &FourierLoop) -> Result<f64> {
    f.0.check_same_shape(h)?;
    Ok(inner_unchecked(&f.0, h, 0.0))
}

/// The insertion `v ↦ ⟨v, ·⟩_0`, an isometry `H_1 → (H_{-1})*`.
pub fn flat(v: &FourierLoop) -> DualFunctional {
    DualFunctional(v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn constant_loop_has_unit_norm_at_every_level() {
        let u = FourierLoop::constant(&[1.0, 0.0], 8);
        for s in [-1.0, 0.0, 0.3, 1.0, 2.0] {
            assert!((sobolev_norm(&u, Level::new(s).unwrap()) - 1.0).abs() < 1e-15);
        }
        assert_eq!(sobolev_norm(&FourierLoop::zeros(3, 8), Level::TWO), 0.0);
    }

    #[test]
    fn orthogonal_modes() {
        let a = FourierLoop::unit_mode(1, 6, 0, 1);
        let b = FourierLoop::unit_mode(1, 6, 0, 2);
        for s in [-1.0, 0.0, 1.0, 2.0] {
            assert_eq!(inner(&a, &b, Level::new(s).unwrap()).unwrap(), 0.0);
        }
    }

    #[test]
    fn inner_rejects_shape_mismatch() {
        let a = FourierLoop::zeros(1, 6);
        let b = FourierLoop::zeros(2, 6);
        assert!(inner(&a, &b, Level::ZERO).is_err());
    }

    #[test]
    fn flat_of_constant() {
        let c = FourierLoop::constant(&[1.0], 4);
        let f = flat(&c);
        assert!((dual_pair(&f, &c).unwrap() - 1.0).abs() < 1e-15);
        assert!((f.dual_norm(Level::MINUS_ONE) - 1.0).abs() < 1e-15);
        assert_eq!(flat(&FourierLoop::zeros(1, 4)).dual_norm(Level::MINUS_ONE), 0.0);
    }

    #[test]
    fn disjoint_supports_pair_to_zero() {
        let mut f = FourierLoop::zeros(1, 4);
        f.set_mode(0, 1, Complex64::new(0.3, 0.2));
        let mut h = FourierLoop::zeros(1, 4);
        h.set_mode(0, 2, Complex64::new(1.0, -1.0));
        assert_eq!(dual_pair(&DualFunctional::new(f), &h).unwrap(), 0.0);
    }
}
