//! Galerkin matrices of multiplication by (matrix-valued) functions.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::LevelOperator;
use crate::scale_space::{FourierLoop, Grid, Level};
use std::f64::consts::SQRT_2;

/// Real-basis Galerkin block of multiplication by a scalar function with
/// Fourier coefficients `c(d)`; entry `(p, q)` is `∫ e_p g e_q dt`.
///
/// Needs `c(d)` for `|d| ≤ 2N`.
pub fn galerkin_block(c: impl Fn(i64) -> Complex64, truncation: usize) -> DMatrix<f64> {
    let m = 2 * truncation + 1;
    let n = truncation as i64;
    let mut out = DMatrix::zeros(m, m);
    out[(0, 0)] = c(0).re;
    for k in 1..=n {
        let ck = c(k);
        let (rc, rs) = (2 * k as usize - 1, 2 * k as usize);
        out[(rc, 0)] = SQRT_2 * ck.re;
        out[(rs, 0)] = -SQRT_2 * ck.im;
        out[(0, rc)] = SQRT_2 * ck.re;
        out[(0, rs)] = -SQRT_2 * ck.im;
    }
    for k in 1..=n {
        let (kc, ks) = (2 * k as usize - 1, 2 * k as usize);
        for mm in 1..=n {
            let (mc, ms) = (2 * mm as usize - 1, 2 * mm as usize);
            let plus = c(k + mm);
            let minus = c(k - mm);
            out[(kc, mc)] = plus.re + minus.re;
            out[(ks, ms)] = minus.re - plus.re;
            out[(kc, ms)] = minus.im - plus.im;
            out[(ks, mc)] = -minus.im - plus.im;
        }
    }
    out
}

/// Multiplication by the matrix field `G(t)` sampled on `grid`, where
/// `entries[i * cols + j]` holds the samples of `G_ij` (or `None` for zero).
///
/// The multiplier's grid Fourier coefficients are used, so the matrix agrees
/// with "multiply on the grid, then project" for band-limited inputs.
pub fn multiplication_from_samples(
    grid: &Grid,
    entries: &[Option<Vec<f64>>],
    dim: usize,
    truncation: usize,
    level: Level,
) -> LevelOperator {
    assert_eq!(entries.len(), dim * dim);
    let m = 2 * truncation + 1;
    let mut mat = DMatrix::zeros(dim * m, dim * m);
    for i in 0..dim {
        for j in 0..dim {
            if let Some(samples) = &entries[i * dim + j] {
                let spec = grid.spectrum(samples);
                let block = galerkin_block(|d| grid.spectral_coeff(&spec, d), truncation);
                mat.view_mut((i * m, j * m), (m, m)).copy_from(&block);
            }
        }
    }
    LevelOperator::from_parts(mat, dim, truncation, level, level)
}

/// Multiplication of `dim`-component loops by a scalar function given by its
/// Fourier coefficients. Modes of `g` beyond its own truncation count as zero.
pub fn multiplication_by_loop(g: &FourierLoop, dim: usize, truncation: usize, level: Level) -> LevelOperator {
    assert_eq!(g.dim(), 1, "scalar multiplier expected");
    let block = galerkin_block(|d| g.coeff(0, d), truncation);
    let m = 2 * truncation + 1;
    let mut mat = DMatrix::zeros(dim * m, dim * m);
    for i in 0..dim {
        mat.view_mut((i * m, i * m), (m, m)).copy_from(&block);
    }
    LevelOperator::from_parts(mat, dim, truncation, level, level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_product(grid: &Grid, g: &[f64], u: &FourierLoop) -> FourierLoop {
        let s = grid.sample(u).unwrap();
        let prod: Vec<f64> = s[0].iter().zip(g).map(|(a, b)| a * b).collect();
        grid.analyze(&[prod], u.truncation()).unwrap()
    }

    #[test]
    fn matches_grid_multiplication() {
        let n = 6;
        let grid = Grid::dealiased(n);
        let g: Vec<f64> =
            grid.nodes().map(|t| (2.0 * std::f64::consts::PI * t).sin().exp() + 0.3 * (6.0 * t).cos()).collect();
        let op = multiplication_from_samples(&grid, &[Some(g.clone())], 1, n, Level::ZERO);
        for k in 0..=n {
            for basis in [FourierLoop::trig(1, n, k, &[1.0], &[0.0]), FourierLoop::trig(1, n, k, &[0.0], &[1.0])] {
                let expected = grid_product(&grid, &g, &basis);
                assert!(op.apply(&basis).max_abs_diff(&expected) < 1e-13, "mode {k}");
            }
        }
    }

    #[test]
    fn constant_multiplier_is_scalar_identity() {
        let g = FourierLoop::constant(&[2.5], 3);
        let op = multiplication_by_loop(&g, 2, 5, Level::ONE);
        let len = 2 * 11;
        assert!((op.matrix() - DMatrix::<f64>::identity(len, len) * 2.5).abs().max() < 1e-15);
    }

    #[test]
    fn real_multiplier_is_symmetric() {
        let mut g = FourierLoop::zeros(1, 8);
        g.set_mode(0, 0, Complex64::new(1.0, 0.0));
        g.set_mode(0, 3, Complex64::new(0.2, -0.4));
        g.set_mode(0, 7, Complex64::new(-0.1, 0.05));
        let op = multiplication_by_loop(&g, 1, 6, Level::ZERO);
        assert!((op.matrix() - op.matrix().transpose()).abs().max() < 1e-15);
    }
}
