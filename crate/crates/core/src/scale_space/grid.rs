use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::fourier_loop::FourierLoop;
use crate::error::{FloerError, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Uniform grid `t_j = j / (2M)`, `j = 0, …, 2M-1`, on the circle.
///
/// Nonlinear evaluations (superposition, products) happen on this grid and
/// are projected back onto `|k| ≤ N`. The grid must satisfy `M ≥ 3N/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    points: usize,
}

impl Grid {
    /// Grid of `points = 2M` samples checked against truncation `N`.
    pub fn new(points: usize, truncation: usize) -> Result<Self> {
        let required = (3 * truncation).max(1);
        if points < required || !points.is_multiple_of(2) {
            return Err(FloerError::Aliasing { points, truncation, required });
        }
        Ok(Self { points })
    }

    /// Default grid for truncation `N`: `2M = 8N` points (at least 16).
    ///
    /// With `2M > 4N` the grid Fourier coefficients of a sampled multiplier
    /// are unambiguous for every offset `|k - m| ≤ 2N`, so Galerkin matrices
    /// built from them agree exactly with grid evaluation of products.
    pub fn dealiased(truncation: usize) -> Self {
        Self { points: (8 * truncation).max(16) }
    }

    /// Grid with `factor · N` points; `factor` must be at least 3.
    pub fn with_factor(truncation: usize, factor: usize) -> Result<Self> {
        Self::new((factor * truncation).max(16), truncation)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.points as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|j| self.node(j))
    }

    /// Samples of one component from its coefficients `û_k`, `|k| ≤ N`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let truncation = (coeffs.len() - 1) / 2;
        let len = self.points;
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (idx, c) in coeffs.iter().enumerate() {
            let k = idx as i64 - truncation as i64;
            buf[k.rem_euclid(len as i64) as usize] += c;
        }
        plan(len, true).process(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Full grid DFT `ĝ_k = (1/2M) Σ_j g(t_j) e^{-2πikt_j}` in FFT order.
    pub fn spectrum(&self, samples: &[f64]) -> Vec<Complex64> {
        assert_eq!(samples.len(), self.points, "sample count does not match grid");
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        plan(self.points, false).process(&mut buf);
        let inv = 1.0 / self.points as f64;
        buf.iter_mut().for_each(|z| *z *= inv);
        buf
    }

    /// Grid coefficient of mode `k` from a spectrum returned by [`Grid::spectrum`].
    #[inline]
    pub fn spectral_coeff(&self, spectrum: &[Complex64], k: i64) -> Complex64 {
        spectrum[k.rem_euclid(self.points as i64) as usize]
    }

    /// Samples `u(t_j)` for every component, `[component][j]`.
    pub fn sample(&self, u: &FourierLoop) -> Result<Vec<Vec<f64>>> {
        self.check(u.truncation())?;
        Ok((0..u.dim()).map(|j| self.synthesize(u.component_coefficients(j))).collect())
    }

    /// Projects grid samples onto the modes `|k| ≤ N`.
    pub fn analyze(&self, samples: &[Vec<f64>], truncation: usize) -> Result<FourierLoop> {
        self.check(truncation)?;
        let mut out = FourierLoop::zeros(samples.len(), truncation);
        for (j, row) in samples.iter().enumerate() {
            let spec = self.spectrum(row);
            for k in 0..=truncation as i64 {
                out.set_mode(j, k, self.spectral_coeff(&spec, k));
            }
        }
        Ok(out)
    }

    fn check(&self, truncation: usize) -> Result<()> {
        let required = (3 * truncation).max(1);
        if self.points < required {
            return Err(FloerError::Aliasing { points: self.points, truncation, required });
        }
        Ok(())
    }
}

/// Pointwise transpose of `[component][j]` samples into per-point vectors.
pub fn points_of(samples: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let len = samples.first().map_or(0, Vec::len);
    (0..len).map(|j| samples.iter().map(|row| row[j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_loop_gives_constant_samples() {
        let u = FourierLoop::constant(&[1.5, -2.0], 4);
        let grid = Grid::dealiased(4);
        let s = grid.sample(&u).unwrap();
        assert!(s[0].iter().all(|x| (x - 1.5).abs() < 1e-14));
        assert!(s[1].iter().all(|x| (x + 2.0).abs() < 1e-14));
    }

    #[test]
    fn mode_one_samples_cosine_and_sine() {
        let u = FourierLoop::trig(2, 6, 1, &[1.0, 0.0], &[0.0, 1.0]);
        let grid = Grid::new(18, 6).unwrap();
        let s = grid.sample(&u).unwrap();
        for (j, t) in grid.nodes().enumerate() {
            assert!((s[0][j] - (2.0 * PI * t).cos()).abs() < 1e-12);
            assert!((s[1][j] - (2.0 * PI * t).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn too_small_grid_is_rejected() {
        assert!(matches!(Grid::new(40, 16), Err(FloerError::Aliasing { required: 48, .. })));
        let grid = Grid::new(48, 16).unwrap();
        let u = FourierLoop::zeros(1, 17);
        assert!(grid.sample(&u).is_err());
    }
}
