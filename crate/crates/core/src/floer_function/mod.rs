//! Floer functions: a value, a gradient at levels 0 and 1, and a Hessian
//! read `H₁ → H₀` and `H₂ → H₁`, together with the checks of those claims.

mod action;
mod checks;
mod hamiltonian;
mod quadratic;
pub mod stencil;

pub use action::{symplectic_action, SymplecticAction};
pub use checks::{
    check_floer_function, gradient_axiom_check, hessian_axiom_check, ConsistencyCheck, ContinuityCheck, FredholmCheck,
    FunctionCheckOptions, FunctionReport, GradientReport, HessianReport, PairingCheck, RestrictionCheck, SymmetryCheck,
};
pub use hamiltonian::HamiltonianData;
pub use quadratic::{quadratic_spectral, QuadraticSpectral, ScaledGradient, SpectralFamily};

use crate::error::{FloerError, Result};
use crate::scale_operator::LevelOperator;
use crate::scale_space::{FourierLoop, Level};

pub trait FloerFunction: Send + Sync {
    fn name(&self) -> String;

    fn dim(&self) -> usize;

    fn eval(&self, q: &FourierLoop) -> Result<f64>;

    /// `L²`-representative of `df|_q`.
    fn grad(&self, q: &FourierLoop) -> Result<FourierLoop>;

    /// `A^q`, read `H₁ → H₀`.
    fn hess(&self, q: &FourierLoop) -> Result<LevelOperator>;

    /// `(P, C)` with `A^q = P + C`, `P` an isomorphism `H₁ → H₀` and `C` compact.
    fn principal_split(&self, q: &FourierLoop) -> Result<(LevelOperator, LevelOperator)>;

    /// The gradient on `U₂`, read in `H₁`.
    fn grad2(&self, q: &FourierLoop) -> Result<FourierLoop> {
        check_u2(q)?;
        self.grad(q)
    }

    /// `A^q₂`, read `H₂ → H₁`.
    fn hess2(&self, q: &FourierLoop) -> Result<LevelOperator> {
        check_u2(q)?;
        Ok(self.hess(q)?.with_levels(Level::TWO, Level::ONE))
    }
}

macro_rules! forward_floer_function {
    ($($ptr:ty),*) => {$(
        impl<T: FloerFunction + ?Sized> FloerFunction for $ptr {
            fn name(&self) -> String {
                (**self).name()
            }
            fn dim(&self) -> usize {
                (**self).dim()
            }
            fn eval(&self, q: &FourierLoop) -> Result<f64> {
                (**self).eval(q)
            }
            fn grad(&self, q: &FourierLoop) -> Result<FourierLoop> {
                (**self).grad(q)
            }
            fn hess(&self, q: &FourierLoop) -> Result<LevelOperator> {
                (**self).hess(q)
            }
            fn principal_split(&self, q: &FourierLoop) -> Result<(LevelOperator, LevelOperator)> {
                (**self).principal_split(q)
            }
            fn grad2(&self, q: &FourierLoop) -> Result<FourierLoop> {
                (**self).grad2(q)
            }
            fn hess2(&self, q: &FourierLoop) -> Result<LevelOperator> {
                (**self).hess2(q)
            }
        }
    )*};
}

forward_floer_function!(&T, Box<T>, std::sync::Arc<T>);

/// Membership in `U₂`: finite `H₂` norm.
pub fn check_u2(q: &FourierLoop) -> Result<()> {
    let n = q.norm(Level::TWO);
    if n.is_finite() {
        Ok(())
    } else {
        Err(FloerError::NotInU2(format!("H_2 norm is {n}")))
    }
}
