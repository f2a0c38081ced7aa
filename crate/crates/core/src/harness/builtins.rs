//! The functions, charts, multipliers and loops the suites run on.

use crate::floer_function::{symplectic_action, HamiltonianData, SymplecticAction};
use crate::floer_map::{Chart, SuperpositionMap};
use crate::loop_atlas::{flat_atlas, Atlas, CorpusLoop, ManifoldChart};
use crate::sampling::{random_loop, stream};
use crate::scale_space::{FourierLoop, Level};
use crate::sobolev_evidence::Multiplier;
use crate::Result;

/// Base truncation of the random sample loops; the suites resize them.
pub const SAMPLE_TRUNCATION: usize = 16;

/// Action with `H = ½|x|²` on `ℝ²`.
pub fn harmonic_action() -> SymplecticAction {
    symplectic_action(HamiltonianData::Harmonic { dim: 2 }).expect("even dimension")
}

pub fn anharmonic_action() -> SymplecticAction {
    symplectic_action(HamiltonianData::Anharmonic { dim: 2, quartic: 0.5, forcing: 0.1 }).expect("even dimension")
}

pub fn shear() -> Chart {
    Chart::Shear { c: 1.0 }
}

pub fn rotation() -> Chart {
    Chart::AngleRotation { a: 0.8 }
}

pub fn kinked() -> Chart {
    Chart::KinkedShear { c: 1.0 }
}

pub fn map_at(chart: Chart, s: f64) -> Result<SuperpositionMap> {
    SuperpositionMap::new(chart, Level::new(s)?)
}

/// Random loops in `ℝ²` with decaying coefficients of moderate size.
pub fn sample_loops(seed: u64, name: &str, count: usize) -> Vec<FourierLoop> {
    let mut rng = stream(seed, name);
    (0..count).map(|_| random_loop(&mut rng, 2, SAMPLE_TRUNCATION, 4, 0.5, 1.5, true)).collect()
}

/// Circle of radius 0.6 around `(0.2, 0.1)`; crosses the line `x = 0` where
/// the kinked shear loses its second derivative.
pub fn crossing_loop(truncation: usize) -> FourierLoop {
    &FourierLoop::trig(2, truncation, 1, &[0.6, 0.0], &[0.0, 0.6]) + &FourierLoop::constant(&[0.2, 0.1], truncation)
}

/// `2 + sin 2πt + 0.3 cos 4πt`.
pub fn smooth_multiplier() -> Multiplier {
    let g = &(&FourierLoop::constant(&[2.0], 2) + &FourierLoop::trig(1, 2, 1, &[0.0], &[1.0]))
        + &FourierLoop::trig(1, 2, 2, &[0.3], &[0.0]);
    Multiplier::Loop { g }
}

/// Coefficients decaying like `|k|^{-0.6}`: in `L²` but not in `H₁`.
pub fn rough_multiplier() -> Multiplier {
    Multiplier::PowerLaw { exponent: 0.6 }
}

/// The plane with one identity chart, and the same corpus seen through the
/// kinked shear.
pub fn kinked_atlases(s: f64) -> (Atlas, Atlas) {
    let corpus = vec![CorpusLoop {
        label: "crossing".into(),
        frame: ManifoldChart::Flat { rho: Chart::Identity { dim: 2 } },
        coords: crossing_loop(SAMPLE_TRUNCATION),
    }];
    (
        flat_atlas("plane", s, vec![("id".into(), Chart::Identity { dim: 2 })], corpus.clone()),
        flat_atlas("kinked", s, vec![("kink".into(), kinked())], corpus),
    )
}
