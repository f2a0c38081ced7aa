use nalgebra::{DMatrix, DVector};

use super::LevelOperator;
use crate::scale_space::{FourierLoop, Level};

fn weights(op: &LevelOperator, exponent: f64) -> DVector<f64> {
    FourierLoop::real_weights(op.dim(), op.truncation(), exponent)
}

/// `W_b^{1/2} · T · W_a^{-1/2}` for arbitrary real exponents `a`, `b`.
pub fn weighted_matrix_exponents(op: &LevelOperator, a: f64, b: f64) -> DMatrix<f64> {
    let wa = weights(op, -a / 2.0);
    let wb = weights(op, b / 2.0);
    let mut m = op.matrix().clone();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            m[(r, c)] *= wb[r] * wa[c];
        }
    }
    m
}

pub fn weighted_matrix(op: &LevelOperator, a: Level, b: Level) -> DMatrix<f64> {
    weighted_matrix_exponents(op, a.value(), b.value())
}

/// Weighted singular values in decreasing order.
pub fn weighted_singular_values(op: &LevelOperator, a: f64, b: f64) -> Vec<f64> {
    let m = weighted_matrix_exponents(op, a, b);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// `sup_{‖ξ‖_a = 1} ‖Tξ‖_b`.
pub fn op_norm(op: &LevelOperator, a: Level, b: Level) -> f64 {
    op_norm_exponents(op, a.value(), b.value())
}

pub fn op_norm_exponents(op: &LevelOperator, a: f64, b: f64) -> f64 {
    weighted_singular_values(op, a, b).first().copied().unwrap_or(0.0)
}

/// Adjoint with respect to the level-`s` inner product, `W_s^{-1} Tᵀ W_s`.
pub fn adjoint(op: &LevelOperator, s: Level) -> LevelOperator {
    let w = weights(op, s.value());
    let t = op.matrix();
    let n = t.nrows();
    let m = DMatrix::from_fn(n, n, |i, j| t[(j, i)] * w[j] / w[i]);
    LevelOperator::from_parts(m, op.dim(), op.truncation(), op.cod(), op.dom())
}

/// Singular values of the weighted matrix, decreasing.
pub fn compactness_profile(op: &LevelOperator, a: Level, b: Level) -> Vec<f64> {
    weighted_singular_values(op, a.value(), b.value())
}

/// Top weighted singular triple `(σ, x, y)` with `‖x‖_a = 1`, `‖y‖_b = 1`,
/// `Tx = σ y`, returned as loops.
pub fn top_singular_pair(op: &LevelOperator, a: f64, b: f64) -> (f64, FourierLoop, FourierLoop) {
    let m = weighted_matrix_exponents(op, a, b);
    let svd = m.svd(true, true);
    let (idx, sigma) = svd.singular_values.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |best, (i, s)| {
        if s > best.1 {
            (i, s)
        } else {
            best
        }
    });
    let u = svd.u.as_ref().expect("left vectors requested").column(idx).into_owned();
    let vt = svd.v_t.as_ref().expect("right vectors requested");
    let v = vt.row(idx).transpose();
    let wa = weights(op, -a / 2.0);
    let wb = weights(op, -b / 2.0);
    let x = v.component_mul(&wa);
    let y = u.component_mul(&wb);
    (
        sigma,
        FourierLoop::from_real(op.dim(), op.truncation(), &x),
        FourierLoop::from_real(op.dim(), op.truncation(), &y),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::stream;
    use crate::scale_space::inner;
    use rand::Rng;
    use std::f64::consts::PI;

    fn random_op(seed: u64, dim: usize, n: usize) -> LevelOperator {
        let mut rng = stream(seed, "op");
        let len = dim * (2 * n + 1);
        let m = DMatrix::from_fn(len, len, |_, _| rng.gen_range(-1.0..1.0));
        LevelOperator::new(m, dim, n, Level::ZERO, Level::ZERO).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let id = LevelOperator::identity(2, 8, Level::ZERO);
        assert!((op_norm(&id, Level::ONE, Level::ONE) - 1.0).abs() < 1e-14);
        let z = LevelOperator::zeros(2, 8, Level::ZERO, Level::ZERO);
        assert_eq!(op_norm(&z, Level::ZERO, Level::ONE), 0.0);
    }

    #[test]
    fn derivative_norm_is_top_mode_ratio() {
        for n in [4usize, 16, 32] {
            let d = LevelOperator::derivative(1, n);
            let w = 2.0 * PI * n as f64;
            let expected = w / (1.0 + w * w).sqrt();
            assert!((op_norm(&d, Level::ONE, Level::ZERO) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn adjoint_pairing_at_level_one() {
        let t = random_op(11, 1, 6);
        let ts = adjoint(&t, Level::ONE);
        let mut rng = stream(12, "pairs");
        for _ in 0..100 {
            let x = crate::sampling::random_loop(&mut rng, 1, 6, 6, 1.0, 0.0, true);
            let y = crate::sampling::random_loop(&mut rng, 1, 6, 6, 1.0, 0.0, true);
            let lhs = inner(&t.apply(&x), &y, Level::ONE).unwrap();
            let rhs = inner(&x, &ts.apply(&y), Level::ONE).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn adjoint_of_symmetric_at_zero_and_diagonal() {
        let t = random_op(5, 1, 4);
        let sym = LevelOperator::new(t.matrix() + t.matrix().transpose(), 1, 4, Level::ZERO, Level::ZERO).unwrap();
        assert_eq!(adjoint(&sym, Level::ZERO).matrix(), sym.matrix());
        let diag = DMatrix::from_diagonal(&DVector::from_fn(9, |i, _| i as f64 - 3.0));
        let d = LevelOperator::new(diag.clone(), 1, 4, Level::ZERO, Level::ZERO).unwrap();
        assert!((adjoint(&d, Level::TWO).matrix() - diag).abs().max() < 1e-12);
    }

    #[test]
    fn inclusion_profile_is_closed_form() {
        let n = 12;
        let iota = LevelOperator::identity(1, n, Level::ZERO).with_levels(Level::ONE, Level::ZERO);
        let prof = compactness_profile(&iota, Level::ONE, Level::ZERO);
        let mut expected: Vec<f64> = (0..=n as i64)
            .flat_map(|k| {
                let v = (1.0 + 4.0 * PI * PI * (k * k) as f64).powf(-0.5);
                if k == 0 {
                    vec![v]
                } else {
                    vec![v, v]
                }
            })
            .collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in prof.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn top_pair_realizes_norm() {
        let t = random_op(9, 2, 3);
        let (sigma, x, y) = top_singular_pair(&t, 1.0, 0.0);
        assert!((x.norm(Level::ONE) - 1.0).abs() < 1e-12);
        assert!((y.norm(Level::ZERO) - 1.0).abs() < 1e-12);
        assert!(t.apply(&x).max_abs_diff(&(&y * sigma)) < 1e-10);
        assert!((sigma - op_norm(&t, Level::ONE, Level::ZERO)).abs() < 1e-12);
    }
}
