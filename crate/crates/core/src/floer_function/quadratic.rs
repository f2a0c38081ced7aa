use serde::{Deserialize, Serialize};

use super::FloerFunction;
use crate::error::{FloerError, Result};
use crate::scale_operator::LevelOperator;
use crate::scale_space::{inner, FourierLoop, Level};

/// Families `N ↦ L_N` of level-0 symmetric operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralFamily {
    Zero {
        dim: usize,
    },
    Identity {
        dim: usize,
    },
    /// `J₀ d/dt`.
    CauchyRiemann {
        dim: usize,
    },
    /// `J₀ d/dt − c`.
    Shifted {
        dim: usize,
        shift: f64,
    },
}

impl SpectralFamily {
    pub fn dim(&self) -> usize {
        match self {
            Self::Zero { dim } | Self::Identity { dim } | Self::CauchyRiemann { dim } | Self::Shifted { dim, .. } => {
                *dim
            }
        }
    }

    pub fn at(&self, truncation: usize) -> Result<LevelOperator> {
        let d = self.dim();
        let cr = || -> Result<LevelOperator> {
            let j0 = LevelOperator::complex_structure(d)?;
            Ok(LevelOperator::pointwise(&j0, truncation, Level::ZERO)
                .compose(&LevelOperator::derivative(d, truncation)))
        };
        Ok(match self {
            Self::Zero { .. } => LevelOperator::zeros(d, truncation, Level::ZERO, Level::ZERO),
            Self::Identity { .. } => LevelOperator::identity(d, truncation, Level::ZERO),
            Self::CauchyRiemann { .. } => cr()?,
            Self::Shifted { shift, .. } => {
                cr()?.sub(&LevelOperator::identity(d, truncation, Level::ZERO).scale(*shift))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Family(SpectralFamily),
    Fixed(LevelOperator),
}

/// `f(u) = ½⟨Lu, u⟩₀`, `∇f = Lu`, `A^q = L`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSpectral {
    source: Source,
}

fn symmetry_residual(op: &LevelOperator) -> f64 {
    let m = op.matrix();
    let scale = op.max_abs_entry().max(1.0);
    (m - m.transpose()).abs().max() / scale
}

/// Quadratic function of a fixed operator; rejects operators that are not
/// symmetric at level 0.
pub fn quadratic_spectral(l: LevelOperator) -> Result<QuadraticSpectral> {
    let r = symmetry_residual(&l);
    if r > 1e-12 {
        return Err(FloerError::Asymmetric(r));
    }
    Ok(QuadraticSpectral { source: Source::Fixed(l) })
}

impl QuadraticSpectral {
    pub fn family(f: SpectralFamily) -> Result<Self> {
        let r = symmetry_residual(&f.at(4)?);
        if r > 1e-12 {
            return Err(FloerError::Asymmetric(r));
        }
        Ok(Self { source: Source::Family(f) })
    }

    fn operator(&self, q: &FourierLoop) -> Result<LevelOperator> {
        match &self.source {
            Source::Family(f) => {
                if q.dim() != f.dim() {
                    return Err(FloerError::DimensionMismatch(format!("loop in ℝ^{} for ℝ^{}", q.dim(), f.dim())));
                }
                f.at(q.truncation())
            }
            Source::Fixed(l) => {
                if l.dim() != q.dim() || l.truncation() != q.truncation() {
                    return Err(FloerError::DimensionMismatch(format!(
                        "operator on (n={}, N={}) applied to (n={}, N={})",
                        l.dim(),
                        l.truncation(),
                        q.dim(),
                        q.truncation()
                    )));
                }
                Ok(l.clone())
            }
        }
    }
}

impl FloerFunction for QuadraticSpectral {
    fn name(&self) -> String {
        match &self.source {
            Source::Family(f) => format!("quadratic({})", serde_json::to_string(f).unwrap_or_default()),
            Source::Fixed(_) => "quadratic(matrix)".into(),
        }
    }

    fn dim(&self) -> usize {
        match &self.source {
            Source::Family(f) => f.dim(),
            Source::Fixed(l) => l.dim(),
        }
    }

    fn eval(&self, q: &FourierLoop) -> Result<f64> {
        let l = self.operator(q)?;
        inner(&l.apply(q), q, Level::ZERO).map(|v| 0.5 * v)
    }

    fn grad(&self, q: &FourierLoop) -> Result<FourierLoop> {
        Ok(self.operator(q)?.apply(q))
    }

    fn hess(&self, q: &FourierLoop) -> Result<LevelOperator> {
        Ok(self.operator(q)?.with_levels(Level::ONE, Level::ZERO))
    }

    fn principal_split(&self, q: &FourierLoop) -> Result<(LevelOperator, LevelOperator)> {
        let l = self.hess(q)?;
        let zero = LevelOperator::zeros(l.dim(), l.truncation(), Level::ONE, Level::ZERO);
        Ok((l, zero))
    }
}

/// Wraps a function and scales its gradient; the derivative checks must catch it.
#[derive(Debug, Clone)]
pub struct ScaledGradient<F> {
    pub inner: F,
    pub factor: f64,
}

impl<F: FloerFunction> FloerFunction for ScaledGradient<F> {
    fn name(&self) -> String {
        format!("{}·∇{}", self.factor, self.inner.name())
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, q: &FourierLoop) -> Result<f64> {
        self.inner.eval(q)
    }

    fn grad(&self, q: &FourierLoop) -> Result<FourierLoop> {
        Ok(&self.inner.grad(q)? * self.factor)
    }

    fn hess(&self, q: &FourierLoop) -> Result<LevelOperator> {
        self.inner.hess(q)
    }

    fn principal_split(&self, q: &FourierLoop) -> Result<(LevelOperator, LevelOperator)> {
        self.inner.principal_split(q)
    }
}
