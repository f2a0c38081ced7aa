use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{FloerError, Result};
use crate::scale_space::{FourierLoop, Level};

/// A linear map on truncated loop space, annotated with the levels it is
/// read between.
///
/// The matrix acts on coordinates in the real `L²`-orthonormal basis of
/// [`FourierLoop::to_real`], so it commutes with the reality constraint by
/// construction. The same matrix realizes every arrow of a tower of
/// extensions; the annotation only records the intended reading.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelOperator {
    matrix: DMatrix<f64>,
    dim: usize,
    truncation: usize,
    dom: Level,
    cod: Level,
}

impl LevelOperator {
    pub fn new(matrix: DMatrix<f64>, dim: usize, truncation: usize, dom: Level, cod: Level) -> Result<Self> {
        let len = dim * (2 * truncation + 1);
        if matrix.nrows() != len || matrix.ncols() != len {
            return Err(FloerError::DimensionMismatch(format!(
                "operator of size {}x{} on loops of length {len}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(FloerError::Parameter("operator has non-finite entries".into()));
        }
        Ok(Self { matrix, dim, truncation, dom, cod })
    }

    pub(crate) fn from_parts(matrix: DMatrix<f64>, dim: usize, truncation: usize, dom: Level, cod: Level) -> Self {
        debug_assert_eq!(matrix.nrows(), dim * (2 * truncation + 1));
        Self { matrix, dim, truncation, dom, cod }
    }

    pub fn identity(dim: usize, truncation: usize, level: Level) -> Self {
        let len = dim * (2 * truncation + 1);
        Self::from_parts(DMatrix::identity(len, len), dim, truncation, level, level)
    }

    pub fn zeros(dim: usize, truncation: usize, dom: Level, cod: Level) -> Self {
        let len = dim * (2 * truncation + 1);
        Self::from_parts(DMatrix::zeros(len, len), dim, truncation, dom, cod)
    }

    /// `d/dt`, read `H_1 → H_0`.
    pub fn derivative(dim: usize, truncation: usize) -> Self {
        let m = 2 * truncation + 1;
        let mut mat = DMatrix::zeros(dim * m, dim * m);
        for j in 0..dim {
            let base = j * m;
            for k in 1..=truncation {
                let w = 2.0 * PI * k as f64;
                let c = base + 2 * k - 1;
                let s = base + 2 * k;
                // d/dt √2cos = -2πk √2sin, d/dt √2sin = 2πk √2cos
                mat[(s, c)] = -w;
                mat[(c, s)] = w;
            }
        }
        Self::from_parts(mat, dim, truncation, Level::ONE, Level::ZERO)
    }

    /// Pointwise multiplication by a constant `n × n` matrix.
    pub fn pointwise(matrix: &DMatrix<f64>, truncation: usize, level: Level) -> Self {
        let dim = matrix.nrows();
        assert_eq!(matrix.ncols(), dim, "pointwise matrix must be square");
        let m = 2 * truncation + 1;
        let mut mat = DMatrix::zeros(dim * m, dim * m);
        for i in 0..dim {
            for j in 0..dim {
                let a = matrix[(i, j)];
                if a != 0.0 {
                    for slot in 0..m {
                        mat[(i * m + slot, j * m + slot)] = a;
                    }
                }
            }
        }
        Self::from_parts(mat, dim, truncation, level, level)
    }

    /// Standard complex structure `J₀ = [[0, -I], [I, 0]]` on `ℝ^{2n}`.
    pub fn complex_structure(dim: usize) -> Result<DMatrix<f64>> {
        if !dim.is_multiple_of(2) {
            return Err(FloerError::OddDimension(dim));
        }
        let h = dim / 2;
        let mut j0 = DMatrix::zeros(dim, dim);
        for i in 0..h {
            j0[(i, h + i)] = -1.0;
            j0[(h + i, i)] = 1.0;
        }
        Ok(j0)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dom(&self) -> Level {
        self.dom
    }

    pub fn cod(&self) -> Level {
        self.cod
    }

    /// Same matrix, new reading (e.g. composing with an inclusion `ι_s`).
    pub fn with_levels(&self, dom: Level, cod: Level) -> Self {
        Self { dom, cod, ..self.clone() }
    }

    pub fn apply(&self, u: &FourierLoop) -> FourierLoop {
        assert_eq!(u.real_len(), self.matrix.ncols(), "loop does not match operator shape");
        let x = u.to_real();
        FourierLoop::from_real(self.dim, self.truncation, &(&self.matrix * x))
    }

    pub fn apply_real(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x
    }

    /// `self ∘ inner`, read from `inner.dom` to `self.cod`.
    pub fn compose(&self, inner: &LevelOperator) -> LevelOperator {
        assert_eq!(self.matrix.ncols(), inner.matrix.nrows());
        Self::from_parts(&self.matrix * &inner.matrix, self.dim, self.truncation, inner.dom, self.cod)
    }

    pub fn add(&self, other: &LevelOperator) -> LevelOperator {
        assert_eq!(self.matrix.shape(), other.matrix.shape());
        Self::from_parts(&self.matrix + &other.matrix, self.dim, self.truncation, self.dom, self.cod)
    }

    pub fn sub(&self, other: &LevelOperator) -> LevelOperator {
        assert_eq!(self.matrix.shape(), other.matrix.shape());
        Self::from_parts(&self.matrix - &other.matrix, self.dim, self.truncation, self.dom, self.cod)
    }

    pub fn scale(&self, a: f64) -> LevelOperator {
        Self::from_parts(&self.matrix * a, self.dim, self.truncation, self.dom, self.cod)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.matrix.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &LevelOperator) -> f64 {
        assert_eq!(self.matrix.shape(), other.matrix.shape());
        self.matrix.iter().zip(other.matrix.iter()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Real-basis indices of modes `|k| ≤ band`, all components.
    pub fn band_indices(&self, band: usize) -> Vec<usize> {
        let m = 2 * self.truncation + 1;
        let keep = (2 * band + 1).min(m);
        (0..self.dim).flat_map(|j| (0..keep).map(move |slot| j * m + slot)).collect()
    }

    /// Largest entry difference on the block of modes `|k|, |m| ≤ band`.
    ///
    /// Galerkin products of truncated multiplication matrices differ from the
    /// Galerkin matrix of the product near the truncation edge; identities such
    /// as the chain rule are compared away from it.
    pub fn interior_max_diff(&self, other: &LevelOperator, band: usize) -> f64 {
        let idx = self.band_indices(band);
        let mut worst = 0.0_f64;
        for &r in &idx {
            for &c in &idx {
                worst = worst.max((self.matrix[(r, c)] - other.matrix[(r, c)]).abs());
            }
        }
        worst
    }

    /// Restriction to a smaller truncation (the interior block).
    pub fn restricted(&self, truncation: usize) -> LevelOperator {
        assert!(truncation <= self.truncation);
        let idx = self.band_indices(truncation);
        let mat = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.matrix[(idx[r], idx[c])]);
        Self::from_parts(mat, self.dim, truncation, self.dom, self.cod)
    }
}
