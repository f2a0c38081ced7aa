//! Superposition maps `u ↦ Φ ∘ u` induced by charts of `ℝⁿ`, their first and
//! second derivatives at every level of the scale, and the checks that make
//! them Floer maps.

mod axioms;
mod bilinear;
mod chart;
mod jet;
mod leibniz;
mod superposition;

pub use axioms::{
    extension_coherence, verify_axiom, verify_floer_axioms, Axiom, AxiomOptions, AxiomReport, Continuity, Reading,
    Verdict,
};
pub use bilinear::scale_weights;
pub use bilinear::{pair, BilinearLevelMap, BilinearNorm};
pub use chart::{rotation_matrix, validate_chart, Chart, ChartValidation, StereoFrame};
pub use jet::{Jet, Scalar};
pub use leibniz::{leibniz_check, log_slope, LeibnizReport};
pub use superposition::{compose, Derivatives, SuperpositionMap};
