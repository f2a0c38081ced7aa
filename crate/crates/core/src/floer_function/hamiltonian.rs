use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{FloerError, Result};

/// Built-in Hamiltonians `H(t, x)` on `ℝ^{2n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianData {
    Zero {
        dim: usize,
    },
    /// `½|x|²`.
    Harmonic {
        dim: usize,
    },
    /// `½|x|² + (β/4)|x|⁴ + ε cos(2πt) x₀`.
    Anharmonic {
        dim: usize,
        quartic: f64,
        forcing: f64,
    },
}

impl HamiltonianData {
    pub fn dim(&self) -> usize {
        match self {
            Self::Zero { dim } | Self::Harmonic { dim } | Self::Anharmonic { dim, .. } => *dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 || !d.is_multiple_of(2) {
            return Err(FloerError::OddDimension(d));
        }
        Ok(())
    }

    /// Standard complex structure on `ℝ^{2n}`.
    pub fn j0(&self) -> Result<DMatrix<f64>> {
        crate::scale_operator::LevelOperator::complex_structure(self.dim())
    }

    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match self {
            Self::Zero { .. } => 0.0,
            Self::Harmonic { .. } => 0.5 * r2,
            Self::Anharmonic { quartic, forcing, .. } => {
                0.5 * r2 + 0.25 * quartic * r2 * r2 + forcing * (2.0 * PI * t).cos() * x[0]
            }
        }
    }

    pub fn gradient(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match self {
            Self::Zero { dim } => vec![0.0; *dim],
            Self::Harmonic { .. } => x.to_vec(),
            Self::Anharmonic { quartic, forcing, .. } => {
                let mut g: Vec<f64> = x.iter().map(|v| v * (1.0 + quartic * r2)).collect();
                g[0] += forcing * (2.0 * PI * t).cos();
                g
            }
        }
    }

    /// Row-major `∇ₓ²H`.
    pub fn hessian(&self, _t: f64, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let mut h = vec![0.0; d * d];
        match self {
            Self::Zero { .. } => {}
            Self::Harmonic { .. } => (0..d).for_each(|i| h[i * d + i] = 1.0),
            Self::Anharmonic { quartic, .. } => {
                for i in 0..d {
                    for j in 0..d {
                        h[i * d + j] = 2.0 * quartic * x[i] * x[j];
                    }
                    h[i * d + i] += 1.0 + quartic * r2;
                }
            }
        }
        h
    }

    pub fn dt_gradient(&self, t: f64, _x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        if let Self::Anharmonic { forcing, .. } = self {
            g[0] = -2.0 * PI * forcing * (2.0 * PI * t).sin();
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_dimension_is_rejected() {
        assert_eq!(HamiltonianData::Harmonic { dim: 3 }.validate(), Err(FloerError::OddDimension(3)));
        assert!(HamiltonianData::Zero { dim: 4 }.validate().is_ok());
    }

    #[test]
    fn derivatives_are_consistent() {
        let h = HamiltonianData::Anharmonic { dim: 2, quartic: 0.3, forcing: 0.2 };
        let (t, x) = (0.13, [0.4, -0.9]);
        let e = 1e-5;
        let g = h.gradient(t, &x);
        let hs = h.hessian(t, &x);
        for i in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += e;
            xm[i] -= e;
            assert!(((h.value(t, &xp) - h.value(t, &xm)) / (2.0 * e) - g[i]).abs() < 1e-8);
            for j in 0..2 {
                let fd = (h.gradient(t, &xp)[j] - h.gradient(t, &xm)[j]) / (2.0 * e);
                assert!((fd - hs[j * 2 + i]).abs() < 1e-8);
            }
            assert!((hs[i * 2 + 1 - i] - hs[(1 - i) * 2 + i]).abs() < 1e-15);
        }
        let dt = (h.gradient(t + e, &x)[0] - h.gradient(t - e, &x)[0]) / (2.0 * e);
        assert!((dt - h.dt_gradient(t, &x)[0]).abs() < 1e-7);
    }
}
