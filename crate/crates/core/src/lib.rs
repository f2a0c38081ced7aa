//! Numerical laboratory for Floer maps and Floer functions on loop spaces.
//!
//! Loops `S¹ → ℝⁿ` are truncated Fourier series; the Sobolev scale
//! `H₂ ⊂ H₁ ⊂ H₀ ⊂ H_{-1}` is a family of diagonal weights on one coefficient
//! space. On top of that sit superposition maps induced by charts, Floer
//! functions (the symplectic action being the built-in example), their
//! pull-backs, and atlases of small loops on the sphere.

pub mod error;
pub mod floer_function;
pub mod floer_map;
pub mod harness;
pub mod loop_atlas;
pub mod pullback;
pub mod sampling;
pub mod scale_operator;
pub mod scale_space;
pub mod sobolev_evidence;
pub mod sweep;

pub use error::{FloerError, Result};
