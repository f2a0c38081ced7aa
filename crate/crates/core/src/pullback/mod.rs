//! Pull-back of a Floer function through a Floer map, `f̃ = f ∘ φ`, with
//! its gradient `Dφ* ∇f∘φ` and Hessian `Dφ* A Dφ + K∘ι_s`.

mod certify;

pub use certify::{certify_pullback, kappa_bound_check, KappaReport, PullbackReport, PullbackSection, TailPoint};

use crate::error::Result;
use crate::floer_function::{check_u2, FloerFunction};
use crate::floer_map::{Chart, SuperpositionMap};
use crate::scale_operator::{adjoint, weighted_matrix, LevelOperator};
use crate::scale_space::{FourierLoop, Level};

/// A base function on `V` together with the map it is pulled back through.
#[derive(Debug, Clone)]
pub struct PullbackBundle<F> {
    base: F,
    map: SuperpositionMap,
}

impl<F: FloerFunction> PullbackBundle<F> {
    pub fn new(base: F, map: SuperpositionMap) -> Self {
        Self { base, map }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn map(&self) -> &SuperpositionMap {
        &self.map
    }

    pub fn s(&self) -> f64 {
        self.map.s()
    }
}

fn is_identity(phi: &SuperpositionMap) -> bool {
    matches!(phi.chart(), Chart::Identity { .. })
}

fn s_level(phi: &SuperpositionMap) -> Level {
    Level::new(phi.s()).expect("map level lies in [0, 1]")
}

/// `∇(f∘φ)|_q = Dφ|_q* ∇f|_{φ(q)}`, the adjoint taken at level 0.
pub fn pull_back_gradient<F: FloerFunction + ?Sized>(
    f: &F,
    phi: &SuperpositionMap,
    q: &FourierLoop,
) -> Result<FourierLoop> {
    if is_identity(phi) {
        return f.grad(q);
    }
    let d = phi.derivatives(q)?;
    let g = f.grad(&d.value)?;
    Ok(adjoint(&d.first.with_levels(Level::ZERO, Level::ZERO), Level::ZERO).apply(&g))
}

/// `K^q` with `⟨K^q ξ, η⟩₀ = ⟨∇f|_{φ(q)}, D²φ|_q(ξ, η)⟩₀`, read `H_s → H₀`.
pub fn riesz_correction<F: FloerFunction + ?Sized>(
    f: &F,
    phi: &SuperpositionMap,
    q: &FourierLoop,
) -> Result<LevelOperator> {
    let d = phi.derivatives(q)?;
    let g = f.grad(&d.value)?;
    Ok(correction_from(&d.second.riesz(&g), s_level(phi)))
}

/// Applies the inverse level-0 Gram matrix to the matrix of the form.
fn correction_from(form: &LevelOperator, s: Level) -> LevelOperator {
    let gram =
        weighted_matrix(&LevelOperator::identity(form.dim(), form.truncation(), Level::ZERO), Level::ZERO, Level::ZERO);
    let inv = gram.try_inverse().expect("Gram matrix is diagonal and positive");
    LevelOperator::new(inv * form.matrix(), form.dim(), form.truncation(), s, Level::ZERO).expect("shape preserved")
}

fn conjugated(d_first: &LevelOperator, a: &LevelOperator) -> LevelOperator {
    let d0 = d_first.with_levels(Level::ZERO, Level::ZERO);
    adjoint(&d0, Level::ZERO).compose(&a.with_levels(Level::ZERO, Level::ZERO)).compose(&d0)
}

/// The conjugated summand `Dφ* A^{φ(q)} Dφ` and the correction `K^q`.
pub fn hessian_parts<F: FloerFunction + ?Sized>(
    f: &F,
    phi: &SuperpositionMap,
    q: &FourierLoop,
) -> Result<(LevelOperator, LevelOperator)> {
    let d = phi.derivatives(q)?;
    let g = f.grad(&d.value)?;
    let a = f.hess(&d.value)?;
    let k = correction_from(&d.second.riesz(&g), s_level(phi));
    Ok((conjugated(&d.first, &a).with_levels(Level::ONE, Level::ZERO), k))
}

/// `Ã^q = Dφ* A^{φ(q)} Dφ + K^q∘ι_s`, read `H₁ → H₀`.
pub fn pull_back_hessian<F: FloerFunction + ?Sized>(
    f: &F,
    phi: &SuperpositionMap,
    q: &FourierLoop,
) -> Result<LevelOperator> {
    if is_identity(phi) {
        return f.hess(q);
    }
    let (main, k) = hessian_parts(f, phi, q)?;
    Ok(main.add(&k.with_levels(Level::ONE, Level::ZERO)))
}

/// `Ã^q₂`, read `H₂ → H₁`; `K^q` enters through `ι_{1+s}`.
pub fn pull_back_hessian_level2<F: FloerFunction + ?Sized>(
    f: &F,
    phi: &SuperpositionMap,
    q: &FourierLoop,
) -> Result<LevelOperator> {
    check_u2(q)?;
    if is_identity(phi) {
        return f.hess2(q);
    }
    let d = phi.derivatives(q)?;
    let g = f.grad2(&d.value)?;
    let a = f.hess2(&d.value)?;
    let k = correction_from(&d.second.riesz(&g), s_level(phi));
    Ok(conjugated(&d.first, &a).add(&k.with_levels(Level::ZERO, Level::ZERO)).with_levels(Level::TWO, Level::ONE))
}

impl<F: FloerFunction> FloerFunction for PullbackBundle<F> {
    fn name(&self) -> String {
        format!("{}∘{}", self.base.name(), self.map.chart().name())
    }

    fn dim(&self) -> usize {
        self.map.dim()
    }

    fn eval(&self, q: &FourierLoop) -> Result<f64> {
        if is_identity(&self.map) {
            return self.base.eval(q);
        }
        self.base.eval(&self.map.apply(q)?)
    }

    fn grad(&self, q: &FourierLoop) -> Result<FourierLoop> {
        pull_back_gradient(&self.base, &self.map, q)
    }

    fn hess(&self, q: &FourierLoop) -> Result<LevelOperator> {
        pull_back_hessian(&self.base, &self.map, q)
    }

    /// `(Dφ* P Dφ, Dφ* C Dφ + K^q∘ι_s)` from the base split `(P, C)` at `φ(q)`.
    fn principal_split(&self, q: &FourierLoop) -> Result<(LevelOperator, LevelOperator)> {
        if is_identity(&self.map) {
            return self.base.principal_split(q);
        }
        let d = self.map.derivatives(q)?;
        let (p, c) = self.base.principal_split(&d.value)?;
        let g = self.base.grad(&d.value)?;
        let k = correction_from(&d.second.riesz(&g), s_level(&self.map));
        let lift = |op: &LevelOperator| conjugated(&d.first, op).with_levels(Level::ONE, Level::ZERO);
        Ok((lift(&p), lift(&c).add(&k.with_levels(Level::ONE, Level::ZERO))))
    }

    fn grad2(&self, q: &FourierLoop) -> Result<FourierLoop> {
        check_u2(q)?;
        self.grad(q)
    }

    fn hess2(&self, q: &FourierLoop) -> Result<LevelOperator> {
        pull_back_hessian_level2(&self.base, &self.map, q)
    }
}
