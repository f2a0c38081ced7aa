use serde::{Deserialize, Serialize};

use super::{op_norm, LevelOperator};
use crate::error::{FloerError, Result};
use crate::scale_space::Level;
use crate::sweep::{as_pairs, classify, SweepPoint, Trend};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub s: f64,
    pub norm_0: f64,
    pub norm_1: f64,
    pub norm_s: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares `‖T‖_{s,s}` against `‖T‖_{0,0}^{1-s} ‖T‖_{1,1}^s` (slack `1e-10`).
pub fn check_interpolation(op: &LevelOperator, s: Level) -> Result<InterpolationReport> {
    let sv = s.value();
    if !(0.0..=1.0).contains(&sv) {
        return Err(FloerError::LevelOutOfRange(sv));
    }
    let norm_0 = op_norm(op, Level::ZERO, Level::ZERO);
    let norm_1 = op_norm(op, Level::ONE, Level::ONE);
    let norm_s = op_norm(op, s, s);
    let bound = norm_0.powf(1.0 - sv) * norm_1.powf(sv);
    Ok(InterpolationReport { s: sv, norm_0, norm_1, norm_s, bound, holds: norm_s <= bound + 1e-10 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSweep {
    pub level: f64,
    pub sweep: Vec<SweepPoint>,
    pub trend: Trend,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub levels: Vec<LevelSweep>,
    pub all_bounded: bool,
}

/// Reads each member of an `N`-family at every listed level (`H_a → H_a`) and
/// flags levels whose norm does not settle (5% from `N = 64`).
pub fn extension_consistency(
    family: impl Fn(usize) -> LevelOperator,
    levels: &[Level],
    sweep: &[usize],
) -> ExtensionReport {
    let ops: Vec<LevelOperator> = sweep.iter().map(|&n| family(n)).collect();
    let levels: Vec<LevelSweep> = levels
        .iter()
        .map(|&level| {
            let sweep: Vec<SweepPoint> =
                sweep.iter().zip(&ops).map(|(&n, op)| SweepPoint { n, norm: op_norm(op, level, level) }).collect();
            let trend = classify(&as_pairs(&sweep), 64, 0.05);
            LevelSweep { level: level.value(), bounded: trend == Trend::Stable, sweep, trend }
        })
        .collect();
    ExtensionReport { all_bounded: levels.iter().all(|l| l.bounded), levels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale_operator::multiplication_by_loop;
    use crate::scale_space::FourierLoop;
    use num_complex::Complex64;

    fn two_plus_sine(n: usize) -> FourierLoop {
        FourierLoop::from_coefficients(vec![vec![
            Complex64::new(0.0, 0.5),
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, -0.5),
        ]])
        .unwrap()
        .resized(n)
    }

    #[test]
    fn identity_interpolates_trivially() {
        let id = LevelOperator::identity(1, 8, Level::ZERO);
        let r = check_interpolation(&id, Level::new(0.5).unwrap()).unwrap();
        assert!(r.holds && (r.bound - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_operator_attains_bound() {
        // diagonal commutes with the weights: every level sees the same top entry
        let n = 5;
        let d = nalgebra::DVector::from_fn(2 * n + 1, |i, _| {
            crate::scale_space::spectral_weight(FourierLoop::slot_mode(i), 0.5)
        });
        let op = LevelOperator::new(nalgebra::DMatrix::from_diagonal(&d), 1, n, Level::ZERO, Level::ZERO).unwrap();
        let r = check_interpolation(&op, Level::new(0.3).unwrap()).unwrap();
        assert!(r.holds);
        assert!((r.norm_s - r.bound).abs() < 1e-12 * r.bound);
    }

    #[test]
    fn smooth_multiplier_interpolates() {
        let g = two_plus_sine(2);
        let op = multiplication_by_loop(&g, 1, 16, Level::ZERO);
        for i in 1..10 {
            let r = check_interpolation(&op, Level::new(i as f64 / 10.0).unwrap()).unwrap();
            assert!(r.holds, "{r:?}");
        }
        assert!(check_interpolation(&op, Level::TWO).is_err());
    }

    #[test]
    fn identity_tower_is_unit() {
        let rep = extension_consistency(
            |n| LevelOperator::identity(1, n, Level::ZERO),
            &[Level::MINUS_ONE, Level::ZERO, Level::ONE, Level::TWO],
            &[16, 32, 64],
        );
        assert!(rep.all_bounded);
        for l in &rep.levels {
            assert!(l.sweep.iter().all(|p| (p.norm - 1.0).abs() < 1e-12));
        }
    }
}
