use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FloerError, Result};
use crate::sampling::{random_loop, stream};
use crate::scale_space::{spectral_weight, FourierLoop, Grid, Level};
use crate::sweep::{classify, Trend};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderOptions {
    pub sweep: Vec<usize>,
    /// Random band-limited loops per truncation, on top of the extremal ones.
    pub random: usize,
    pub band: usize,
    pub stabilize_from: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for HolderOptions {
    fn default() -> Self {
        Self {
            sweep: crate::sweep::DEFAULT_SWEEP.to_vec(),
            random: 4,
            band: 8,
            stabilize_from: 64,
            rel_tol: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderPoint {
    #[serde(rename = "N")]
    pub n: usize,
    /// Largest `[u]_α / ‖u‖_s` over the samples.
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HolderVerdict {
    Embeds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub s: f64,
    pub alpha: f64,
    pub sweep: Vec<HolderPoint>,
    /// The ratio at the largest truncation.
    pub constant: f64,
    pub trend: Trend,
    pub monotone_growth: bool,
    pub verdict: HolderVerdict,
}

/// `max_{x, y} |u(x+y) − u(x)| / |y|^α` over grid points `x` and dyadic
/// offsets `y = 2^{-j} ≥ 1/points`; `points` must be a power of two.
pub fn holder_seminorm(u: &FourierLoop, alpha: f64, points: usize) -> Result<f64> {
    if !points.is_power_of_two() {
        return Err(FloerError::Parameter(format!("{points} grid points is not a power of two")));
    }
    let grid = Grid::new(points, u.truncation())?;
    let samples = grid.sample(u)?;
    let mut best = 0.0_f64;
    let mut shift = points / 2;
    while shift >= 1 {
        let y = shift as f64 / points as f64;
        for x in 0..points {
            let x2 = (x + shift) % points;
            let d2: f64 = samples.iter().map(|row| (row[x2] - row[x]).powi(2)).sum();
            best = best.max(d2.sqrt() / y.powf(alpha));
        }
        shift /= 2;
    }
    Ok(best)
}

/// The loop maximizing `u(y) − u(0)` on the unit ball of `H_s`:
/// `û_k = w_k(−s)(e^{−2πiky} − 1)`.
fn representer(truncation: usize, s: f64, y: f64) -> FourierLoop {
    let mut u = FourierLoop::zeros(1, truncation);
    for k in 1..=truncation as i64 {
        let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 * y);
        u.set_mode(0, k, (phase - 1.0) * spectral_weight(k, -s));
    }
    u
}

/// Sweeps the ratio `[u]_{C^α} / ‖u‖_s`, `α = s − 1/2`, over truncations.
/// The samples are the extremal loops for each dyadic offset and a few random
/// band-limited loops. `s = 1/2` is accepted as the endpoint control.
pub fn holder_embedding_check(s: f64, opts: &HolderOptions) -> Result<HolderReport> {
    if !(0.5..1.5).contains(&s) {
        return Err(FloerError::Parameter(format!("Hölder check needs s in [1/2, 3/2), got {s}")));
    }
    let level = Level::new(s)?;
    let alpha = s - 0.5;
    let sweep = opts
        .sweep
        .par_iter()
        .map(|&n| -> Result<HolderPoint> {
            let points = (8 * n).next_power_of_two().max(16);
            let mut samples: Vec<FourierLoop> = std::iter::successors(Some(points / 2), |&m| (m > 1).then_some(m / 2))
                .map(|shift| representer(n, s, shift as f64 / points as f64))
                .collect();
            let mut rng = stream(opts.seed, "holder");
            for _ in 0..opts.random {
                samples.push(random_loop(&mut rng, 1, n, opts.band.min(n), 1.0, 1.0, true));
            }
            let mut ratio = 0.0_f64;
            for u in &samples {
                let norm = u.norm(level);
                if norm > 0.0 {
                    ratio = ratio.max(holder_seminorm(u, alpha, points)? / norm);
                }
            }
            Ok(HolderPoint { n, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, f64)> = sweep.iter().map(|p| (p.n, p.ratio)).collect();
    let trend = classify(&pairs, opts.stabilize_from, opts.rel_tol);
    let monotone_growth = sweep.windows(2).all(|w| w[1].ratio > w[0].ratio);
    let verdict = match trend {
        Trend::Stable => HolderVerdict::Embeds,
        Trend::Growing => HolderVerdict::Fails,
        Trend::Decaying | Trend::Unsettled => HolderVerdict::Inconclusive,
    };
    Ok(HolderReport {
        s,
        alpha,
        constant: sweep.last().map_or(f64::NAN, |p| p.ratio),
        sweep,
        trend,
        monotone_growth,
        verdict,
    })
}
