use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{FloerFunction, HamiltonianData};
use crate::error::{FloerError, Result};
use crate::scale_operator::{multiplication_from_samples, LevelOperator};
use crate::scale_space::{inner, points_of, FourierLoop, Grid, Level};

/// `f(u) = ½∫⟨J₀u̇, u⟩ dt − ∫H(t, u) dt` on loops in `ℝ^{2n}`.
///
/// With this sign `∇f = J₀u̇ − ∇ₓH(t, u)` and `A^u ξ = J₀ξ̇ − ∇ₓ²H(t, u) ξ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticAction {
    pub hamiltonian: HamiltonianData,
    /// Nonresonant shift `c` in the split `A = (J₀ d/dt − c) + (c − ∇²H)`.
    pub shift: f64,
}

pub fn symplectic_action(h: HamiltonianData) -> Result<SymplecticAction> {
    SymplecticAction::new(h, 1.0)
}

impl SymplecticAction {
    pub fn new(h: HamiltonianData, shift: f64) -> Result<Self> {
        h.validate()?;
        let k = shift / (2.0 * std::f64::consts::PI);
        if (k - k.round()).abs() < 1e-12 {
            return Err(FloerError::Parameter(format!("shift {shift} is resonant")));
        }
        Ok(Self { hamiltonian: h, shift })
    }

    fn j0(&self) -> DMatrix<f64> {
        self.hamiltonian.j0().expect("validated at construction")
    }

    fn check(&self, q: &FourierLoop) -> Result<()> {
        if q.dim() != self.hamiltonian.dim() {
            return Err(FloerError::DimensionMismatch(format!(
                "loop in ℝ^{} for a Hamiltonian on ℝ^{}",
                q.dim(),
                self.hamiltonian.dim()
            )));
        }
        if !q.is_finite() {
            return Err(FloerError::InvalidLoop("non-finite coefficients".into()));
        }
        Ok(())
    }

    fn grid(q: &FourierLoop) -> Grid {
        Grid::dealiased(q.truncation())
    }

    /// `J₀ d/dt` at truncation `N`.
    pub fn cauchy_riemann(&self, truncation: usize) -> LevelOperator {
        let d = self.hamiltonian.dim();
        LevelOperator::pointwise(&self.j0(), truncation, Level::ZERO).compose(&LevelOperator::derivative(d, truncation))
    }

    fn hessian_field(&self, q: &FourierLoop) -> Result<LevelOperator> {
        let grid = Self::grid(q);
        let pts = points_of(&grid.sample(q)?);
        let d = q.dim();
        let mut entries = vec![vec![0.0; pts.len()]; d * d];
        for (j, x) in pts.iter().enumerate() {
            let h = self.hamiltonian.hessian(grid.node(j), x);
            for (e, v) in entries.iter_mut().zip(h) {
                e[j] = v;
            }
        }
        let entries: Vec<Option<Vec<f64>>> =
            entries.into_iter().map(|e| e.iter().any(|&v| v != 0.0).then_some(e)).collect();
        Ok(multiplication_from_samples(&grid, &entries, d, q.truncation(), Level::ZERO))
    }
}

impl FloerFunction for SymplecticAction {
    fn name(&self) -> String {
        format!("symplectic_action({})", serde_json::to_string(&self.hamiltonian).unwrap_or_default())
    }

    fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    fn eval(&self, q: &FourierLoop) -> Result<f64> {
        self.check(q)?;
        let kinetic = 0.5 * inner(&q.derivative().map_pointwise(&self.j0()), q, Level::ZERO)?;
        let grid = Self::grid(q);
        let pts = points_of(&grid.sample(q)?);
        let potential: f64 = pts.iter().enumerate().map(|(j, x)| self.hamiltonian.value(grid.node(j), x)).sum::<f64>()
            / pts.len() as f64;
        Ok(kinetic - potential)
    }

    fn grad(&self, q: &FourierLoop) -> Result<FourierLoop> {
        self.check(q)?;
        let grid = Self::grid(q);
        let pts = points_of(&grid.sample(q)?);
        let d = q.dim();
        let mut rows = vec![vec![0.0; pts.len()]; d];
        for (j, x) in pts.iter().enumerate() {
            for (i, g) in self.hamiltonian.gradient(grid.node(j), x).into_iter().enumerate() {
                rows[i][j] = g;
            }
        }
        let dh = grid.analyze(&rows, q.truncation())?;
        Ok(&q.derivative().map_pointwise(&self.j0()) - &dh)
    }

    fn hess(&self, q: &FourierLoop) -> Result<LevelOperator> {
        self.check(q)?;
        let a = self.cauchy_riemann(q.truncation()).sub(&self.hessian_field(q)?);
        Ok(a.with_levels(Level::ONE, Level::ZERO))
    }

    fn principal_split(&self, q: &FourierLoop) -> Result<(LevelOperator, LevelOperator)> {
        self.check(q)?;
        let n = q.truncation();
        let shift = LevelOperator::identity(q.dim(), n, Level::ZERO).scale(self.shift);
        let principal = self.cauchy_riemann(n).sub(&shift).with_levels(Level::ONE, Level::ZERO);
        let compact = shift.sub(&self.hessian_field(q)?).with_levels(Level::ONE, Level::ZERO);
        Ok((principal, compact))
    }
}
