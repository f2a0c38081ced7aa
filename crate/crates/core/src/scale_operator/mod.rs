//! Operators between levels of the scale, as dense matrices in the real
//! Fourier basis, with level-aware norms, adjoints and Fredholm evidence.

mod fredholm;
mod interpolation;
mod level_operator;
mod multiplication;
mod norms;

pub use fredholm::{
    fredholm_diagnostic, fredholm_point, FredholmOptions, FredholmPoint, FredholmReport, FredholmVerdict,
    KERNEL_THRESHOLD,
};
pub use interpolation::{check_interpolation, extension_consistency, ExtensionReport, InterpolationReport, LevelSweep};
pub use level_operator::LevelOperator;
pub use multiplication::{galerkin_block, multiplication_by_loop, multiplication_from_samples};
pub use norms::{
    adjoint, compactness_profile, op_norm, op_norm_exponents, top_singular_pair, weighted_matrix,
    weighted_matrix_exponents, weighted_singular_values,
};
