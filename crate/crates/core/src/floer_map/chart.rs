use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::jet::{Jet, Scalar};
use crate::error::{FloerError, Result};

/// Stereographic chart of `S² ⊂ ℝ³`: projection from `pole` onto the plane
/// spanned by the orthonormal frame `(e1, e2)`, restricted to `|x| ≤ radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StereoFrame {
    pub pole: [f64; 3],
    pub e1: [f64; 3],
    pub e2: [f64; 3],
    pub radius: f64,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn rotate(r: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [dot(&r[0], v), dot(&r[1], v), dot(&r[2], v)]
}

/// Rotation matrix about a unit axis (Rodrigues).
pub fn rotation_matrix(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let n = dot(&axis, &axis).sqrt();
    let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

impl StereoFrame {
    /// Projection from the north pole onto the equatorial plane.
    pub fn north(radius: f64) -> Self {
        Self { pole: [0.0, 0.0, 1.0], e1: [1.0, 0.0, 0.0], e2: [0.0, 1.0, 0.0], radius }
    }

    /// Projection from the south pole; the transition from [`StereoFrame::north`]
    /// is `x ↦ x/|x|²`.
    pub fn south(radius: f64) -> Self {
        Self { pole: [0.0, 0.0, -1.0], ..Self::north(radius) }
    }

    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Self {
        Self { pole: rotate(r, &self.pole), e1: rotate(r, &self.e1), e2: rotate(r, &self.e2), radius: self.radius }
    }

    /// Chart coordinates of a unit vector, `None` at the pole.
    pub fn project(&self, p: &[f64; 3]) -> Option<[f64; 2]> {
        let d = 1.0 - dot(p, &self.pole);
        if d <= 1e-300 {
            return None;
        }
        Some([dot(p, &self.e1) / d, dot(p, &self.e2) / d])
    }

    pub fn lift(&self, x: &[f64; 2]) -> [f64; 3] {
        let [p] = self.lift_generic(&[x[0], x[1]]);
        p
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == 2 && x[0].is_finite() && x[1].is_finite() && (x[0] * x[0] + x[1] * x[1]).sqrt() <= self.radius
    }

    pub fn contains_point(&self, p: &[f64; 3]) -> bool {
        self.project(p).is_some_and(|x| self.contains(&x))
    }

    fn lift_generic<S: Scalar>(&self, x: &[S; 2]) -> [[S; 3]; 1] {
        let r2 = x[0].clone() * x[0].clone() + x[1].clone() * x[1].clone();
        let one = x[0].constant_like(1.0);
        let d = (r2.clone() + one.clone()).recip();
        let m = r2 - one;
        let comp = |i: usize| {
            (x[0].scale(2.0 * self.e1[i]) + x[1].scale(2.0 * self.e2[i]) + m.scale(self.pole[i])) * d.clone()
        };
        [[comp(0), comp(1), comp(2)]]
    }

    fn project_generic<S: Scalar>(&self, p: &[S; 3]) -> [S; 2] {
        let lin = |e: &[f64; 3]| p[0].scale(e[0]) + p[1].scale(e[1]) + p[2].scale(e[2]);
        let d = (p[0].constant_like(1.0) - lin(&self.pole)).recip();
        [lin(&self.e1) * d.clone(), lin(&self.e2) * d]
    }
}

/// Built-in diffeomorphisms `Φ: 𝒰 ⊂ ℝⁿ → ℝⁿ` with exact derivatives through
/// third order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Chart {
    Identity {
        dim: usize,
    },
    /// `x ↦ Mx`, `M` row-major `dim × dim`.
    Linear {
        dim: usize,
        matrix: Vec<f64>,
    },
    /// `(x, y) ↦ (x, y + c x²)`.
    Shear {
        c: f64,
    },
    /// `x ↦ R(a|x|²) x` with `R(θ)` the planar rotation.
    AngleRotation {
        a: f64,
    },
    /// `(x, y) ↦ (x, y + c x|x|)`; only `C¹`.
    KinkedShear {
        c: f64,
    },
    /// `σ_to ∘ σ_from⁻¹` between stereographic charts of the sphere.
    Transition {
        from: StereoFrame,
        to: StereoFrame,
    },
    /// `outer ∘ inner`.
    Composite {
        outer: Box<Chart>,
        inner: Box<Chart>,
    },
}

impl Chart {
    pub fn linear(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(FloerError::DimensionMismatch(format!("{}x{} chart matrix", m.nrows(), m.ncols())));
        }
        let dim = m.nrows();
        Ok(Chart::Linear { dim, matrix: (0..dim * dim).map(|i| m[(i / dim, i % dim)]).collect() })
    }

    pub fn compose(outer: Chart, inner: Chart) -> Result<Self> {
        if outer.dim() != inner.dim() {
            return Err(FloerError::DimensionMismatch(format!(
                "cannot compose a chart on ℝ^{} after one on ℝ^{}",
                outer.dim(),
                inner.dim()
            )));
        }
        Ok(Chart::Composite { outer: Box::new(outer), inner: Box::new(inner) })
    }

    pub fn dim(&self) -> usize {
        match self {
            Chart::Identity { dim } | Chart::Linear { dim, .. } => *dim,
            Chart::Shear { .. }
            | Chart::AngleRotation { .. }
            | Chart::KinkedShear { .. }
            | Chart::Transition { .. } => 2,
            Chart::Composite { inner, .. } => inner.dim(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Chart::Identity { .. } => "identity".into(),
            Chart::Linear { .. } => "linear".into(),
            Chart::Shear { c } => format!("shear({c})"),
            Chart::AngleRotation { a } => format!("rotation({a})"),
            Chart::KinkedShear { c } => format!("kinked_shear({c})"),
            Chart::Transition { .. } => "stereographic_transition".into(),
            Chart::Composite { outer, inner } => format!("{}∘{}", outer.name(), inner.name()),
        }
    }

    /// Whether the chart is linear, i.e. has vanishing second derivative.
    pub fn is_linear(&self) -> bool {
        match self {
            Chart::Identity { .. } | Chart::Linear { .. } => true,
            Chart::Shear { c } => *c == 0.0,
            Chart::AngleRotation { a } => *a == 0.0,
            Chart::Composite { outer, inner } => outer.is_linear() && inner.is_linear(),
            _ => false,
        }
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            Chart::Transition { from, to } => {
                from.contains(x) && {
                    let y = self.eval(x);
                    to.contains(&y)
                }
            }
            Chart::Composite { outer, inner } => inner.in_domain(x) && outer.in_domain(&inner.eval(x)),
            _ => true,
        }
    }

    pub fn eval_generic<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        match self {
            Chart::Identity { .. } => x.to_vec(),
            Chart::Linear { dim, matrix } => (0..*dim)
                .map(|i| (0..*dim).fold(x[0].constant_like(0.0), |acc, j| acc + x[j].scale(matrix[i * dim + j])))
                .collect(),
            Chart::Shear { c } => vec![x[0].clone(), x[1].clone() + (x[0].clone() * x[0].clone()).scale(*c)],
            Chart::AngleRotation { a } => {
                let theta = (x[0].clone() * x[0].clone() + x[1].clone() * x[1].clone()).scale(*a);
                let (s, c) = (theta.sin(), theta.cos());
                vec![c.clone() * x[0].clone() - s.clone() * x[1].clone(), s * x[0].clone() + c * x[1].clone()]
            }
            Chart::KinkedShear { c } => vec![x[0].clone(), x[1].clone() + x[0].kink().scale(*c)],
            Chart::Transition { from, to } => {
                let [p] = from.lift_generic(&[x[0].clone(), x[1].clone()]);
                to.project_generic(&p).to_vec()
            }
            Chart::Composite { outer, inner } => outer.eval_generic(&inner.eval_generic(x)),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.eval_generic(x)
    }

    /// Component jets of `Φ` at `x`.
    pub fn jets(&self, x: &[f64]) -> Vec<Jet> {
        self.eval_generic(&Jet::variables(x))
    }

    pub fn inverse(&self) -> Result<Chart> {
        Ok(match self {
            Chart::Identity { dim } => Chart::Identity { dim: *dim },
            Chart::Linear { dim, matrix } => {
                let m = DMatrix::from_row_slice(*dim, *dim, matrix);
                let inv = m.try_inverse().ok_or_else(|| FloerError::MissingInverse("singular linear chart".into()))?;
                Chart::linear(&inv)?
            }
            Chart::Shear { c } => Chart::Shear { c: -c },
            Chart::AngleRotation { a } => Chart::AngleRotation { a: -a },
            Chart::KinkedShear { c } => Chart::KinkedShear { c: -c },
            Chart::Transition { from, to } => Chart::Transition { from: *to, to: *from },
            Chart::Composite { outer, inner } => {
                Chart::Composite { outer: Box::new(inner.inverse()?), inner: Box::new(outer.inverse()?) }
            }
        })
    }
}

/// Evidence that a chart behaves like a diffeomorphism at sampled points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartValidation {
    pub points: usize,
    pub min_abs_det: f64,
    pub max_jacobian_fd_error: f64,
    pub passed: bool,
}

/// Checks `det ∂Φ ≠ 0` and the Jacobian against central differences (`h = 1e-4`).
pub fn validate_chart(chart: &Chart, points: &[Vec<f64>]) -> ChartValidation {
    let n = chart.dim();
    let h = 1e-4;
    let mut min_det = f64::INFINITY;
    let mut worst = 0.0_f64;
    for x in points.iter().filter(|x| chart.in_domain(x)) {
        let jets = chart.jets(x);
        let jac = DMatrix::from_fn(n, n, |i, j| jets[i].grad(j));
        min_det = min_det.min(jac.determinant().abs());
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (chart.eval(&xp), chart.eval(&xm));
            for i in 0..n {
                let fd = (fp[i] - fm[i]) / (2.0 * h);
                worst = worst.max((fd - jac[(i, j)]).abs() / (1.0 + jac[(i, j)].abs()));
            }
        }
    }
    ChartValidation {
        points: points.len(),
        min_abs_det: min_det,
        max_jacobian_fd_error: worst,
        passed: min_det > 1e-12 && worst < 1e-6,
    }
}
