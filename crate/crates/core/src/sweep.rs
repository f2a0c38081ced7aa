//! Truncation sweeps and the stabilization rule used for "bounded" verdicts.

use serde::{Deserialize, Serialize};

/// Default truncation sweep.
pub const DEFAULT_SWEEP: [usize; 5] = [16, 32, 64, 128, 256];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    #[serde(rename = "N")]
    pub n: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// Every value from the cutoff on lies within the tolerance of the final value.
    Stable,
    Growing,
    Decaying,
    Unsettled,
}

/// Classifies `(N, value)` pairs sorted by `N`.
///
/// Values with `N ≥ from` are compared against the last one; if fewer than
/// two points reach the cutoff, the whole sweep is used.
pub fn classify(points: &[(usize, f64)], from: usize, rel_tol: f64) -> Trend {
    let Some(&(_, last)) = points.last() else {
        return Trend::Unsettled;
    };
    if points.iter().any(|(_, v)| !v.is_finite()) {
        return Trend::Growing;
    }
    let tail: Vec<f64> = {
        let t: Vec<f64> = points.iter().filter(|(n, _)| *n >= from).map(|p| p.1).collect();
        if t.len() >= 2 {
            t
        } else {
            points.iter().map(|p| p.1).collect()
        }
    };
    let scale = last.abs();
    if scale <= 1e-300 {
        return if tail.iter().all(|v| v.abs() <= 1e-300) { Trend::Stable } else { Trend::Decaying };
    }
    if tail.iter().all(|v| (v - last).abs() <= rel_tol * scale) {
        return Trend::Stable;
    }
    let first = tail[0];
    if last > first * (1.0 + rel_tol) {
        Trend::Growing
    } else if last < first * (1.0 - rel_tol) {
        Trend::Decaying
    } else {
        Trend::Unsettled
    }
}

/// Largest relative deviation from the final value over `N ≥ from`.
pub fn relative_variation(points: &[(usize, f64)], from: usize) -> f64 {
    let Some(&(_, last)) = points.last() else {
        return f64::NAN;
    };
    let scale = last.abs().max(f64::MIN_POSITIVE);
    points.iter().filter(|(n, _)| *n >= from).map(|(_, v)| (v - last).abs() / scale).fold(0.0, f64::max)
}

pub fn as_pairs(points: &[SweepPoint]) -> Vec<(usize, f64)> {
    points.iter().map(|p| (p.n, p.norm)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let stable = [(16, 1.3), (32, 1.1), (64, 1.01), (128, 1.0), (256, 1.0)];
        assert_eq!(classify(&stable, 64, 0.05), Trend::Stable);
        let growing = [(16, 1.0), (32, 2.0), (64, 4.0), (128, 8.0), (256, 16.0)];
        assert_eq!(classify(&growing, 64, 0.05), Trend::Growing);
        let decaying: Vec<_> = growing.iter().map(|&(n, v)| (n, 1.0 / v)).collect();
        assert_eq!(classify(&decaying, 64, 0.05), Trend::Decaying);
        assert_eq!(classify(&[(16, 0.0), (64, 0.0), (128, 0.0)], 64, 0.05), Trend::Stable);
        assert_eq!(classify(&[(64, 1.0), (128, f64::INFINITY)], 64, 0.05), Trend::Growing);
    }

    #[test]
    fn variation_ignores_early_points() {
        let pts = [(16, 5.0), (64, 1.02), (128, 1.0)];
        assert!((relative_variation(&pts, 64) - 0.02).abs() < 1e-12);
    }
}
