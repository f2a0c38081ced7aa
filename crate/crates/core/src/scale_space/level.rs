use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FloerError, Result};

/// `4π²`, the factor in the spectral weight `(1 + 4π²k²)^s`.
pub const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Spectral weight of mode `k` at exponent `s`.
///
/// Unlike [`Level::weight`] this accepts any real exponent; it is used for
/// dual norms and inclusion profiles where exponents such as `s - 1` occur.
#[inline]
pub fn spectral_weight(k: i64, s: f64) -> f64 {
    let base = 1.0 + FOUR_PI_SQ * (k * k) as f64;
    if s == 0.0 {
        1.0
    } else if s == 1.0 {
        base
    } else {
        base.powf(s)
    }
}

/// Index `s` of the Sobolev space `H_s` of loops, restricted to `{-1} ∪ [0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Level(f64);

impl Level {
    pub const MINUS_ONE: Level = Level(-1.0);
    pub const ZERO: Level = Level(0.0);
    pub const ONE: Level = Level(1.0);
    pub const TWO: Level = Level(2.0);

    pub fn new(s: f64) -> Result<Self> {
        if s == -1.0 || (0.0..=2.0).contains(&s) {
            Ok(Level(s))
        } else {
            Err(FloerError::LevelOutOfRange(s))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `w_k(s) = (1 + 4π²k²)^s`.
    #[inline]
    pub fn weight(self, k: i64) -> f64 {
        spectral_weight(k, self.0)
    }
}

impl TryFrom<f64> for Level {
    type Error = FloerError;

    fn try_from(s: f64) -> Result<Self> {
        Level::new(s)
    }
}

impl From<Level> for f64 {
    fn from(level: Level) -> f64 {
        level.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_enforced() {
        assert!(Level::new(-1.0).is_ok());
        assert!(Level::new(0.0).is_ok());
        assert!(Level::new(1.75).is_ok());
        assert!(Level::new(2.0).is_ok());
        assert!(matches!(Level::new(-0.5), Err(FloerError::LevelOutOfRange(_))));
        assert!(Level::new(2.5).is_err());
        assert!(Level::new(f64::NAN).is_err());
    }

    #[test]
    fn weight_interpolates_exactly() {
        for k in [0_i64, 1, 3, 17, 200] {
            for s in [0.1, 0.25, 0.5, 0.9] {
                let lhs = Level::new(s).unwrap().weight(k);
                let rhs = Level::ZERO.weight(k).powf(1.0 - s) * Level::ONE.weight(k).powf(s);
                assert!((lhs - rhs).abs() <= 1e-12 * lhs, "k={k} s={s}");
            }
        }
    }

    #[test]
    fn serde_rejects_bad_levels() {
        let ok: Level = serde_json::from_str("0.75").unwrap();
        assert_eq!(ok.value(), 0.75);
        assert!(serde_json::from_str::<Level>("3.0").is_err());
    }
}
