use serde::{Deserialize, Serialize};

use super::bilinear::BilinearLevelMap;
use super::chart::Chart;
use super::jet::{Jet, Scalar};
use crate::error::{FloerError, Result};
use crate::scale_operator::{multiplication_from_samples, LevelOperator};
use crate::scale_space::{FourierLoop, Grid, Level};

/// `φ(u) = Φ ∘ u` on loops, evaluated on a dealiased grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionMap {
    chart: Chart,
    s: f64,
    grid_factor: usize,
}

/// Value and derivatives of `φ` at one loop from a single jet pass.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub value: FourierLoop,
    pub first: LevelOperator,
    pub second: BilinearLevelMap,
}

impl SuperpositionMap {
    /// `s` must lie strictly between `½` and `1`.
    pub fn new(chart: Chart, s: Level) -> Result<Self> {
        let v = s.value();
        if !(v > 0.5 && v < 1.0) {
            return Err(FloerError::LevelOutOfRange(v));
        }
        Ok(Self::control(chart, v))
    }

    /// No range check on `s`; used for the `s ≤ ½` controls.
    pub fn control(chart: Chart, s: f64) -> Self {
        Self { chart, s, grid_factor: 8 }
    }

    pub fn with_grid_factor(mut self, factor: usize) -> Result<Self> {
        if factor < 3 {
            return Err(FloerError::Aliasing { points: factor, truncation: 1, required: 3 });
        }
        self.grid_factor = factor;
        Ok(self)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn grid(&self, truncation: usize) -> Grid {
        Grid::with_factor(truncation, self.grid_factor).expect("factor checked at construction")
    }

    fn sampled(&self, u: &FourierLoop) -> Result<(Grid, Vec<Vec<f64>>)> {
        if u.dim() != self.dim() {
            return Err(FloerError::DimensionMismatch(format!(
                "loop in ℝ^{} for a chart on ℝ^{}",
                u.dim(),
                self.dim()
            )));
        }
        if !u.is_finite() {
            return Err(FloerError::InvalidLoop("non-finite coefficients".into()));
        }
        let grid = self.grid(u.truncation());
        let samples = grid.sample(u)?;
        let points: Vec<Vec<f64>> = crate::scale_space::points_of(&samples);
        for (j, x) in points.iter().enumerate() {
            if !self.chart.in_domain(x) {
                return Err(FloerError::OutOfChart { index: j, t: grid.node(j), point: x.clone() });
            }
        }
        Ok((grid, points))
    }

    pub fn in_domain(&self, u: &FourierLoop) -> bool {
        self.sampled(u).is_ok()
    }

    pub fn apply(&self, u: &FourierLoop) -> Result<FourierLoop> {
        let (grid, points) = self.sampled(u)?;
        let n = self.dim();
        let mut rows = vec![vec![0.0; points.len()]; n];
        for (j, x) in points.iter().enumerate() {
            for (i, v) in self.chart.eval(x).into_iter().enumerate() {
                rows[i][j] = v;
            }
        }
        grid.analyze(&rows, u.truncation())
    }

    fn jets(&self, u: &FourierLoop) -> Result<(Grid, Vec<Vec<Jet>>)> {
        let (grid, points) = self.sampled(u)?;
        Ok((grid, points.iter().map(|x| self.chart.jets(x)).collect()))
    }

    fn first_from(&self, grid: &Grid, jets: &[Vec<Jet>], truncation: usize) -> LevelOperator {
        let n = self.dim();
        let entries: Vec<Option<Vec<f64>>> = (0..n * n)
            .map(|ij| {
                let col: Vec<f64> = jets.iter().map(|p| p[ij / n].grad(ij % n)).collect();
                col.iter().any(|&v| v != 0.0).then_some(col)
            })
            .collect();
        multiplication_from_samples(grid, &entries, n, truncation, Level::ONE)
    }

    fn second_from(&self, grid: Grid, jets: &[Vec<Jet>], truncation: usize) -> BilinearLevelMap {
        let n = self.dim();
        let field = (0..n * n * n)
            .map(|ijk| {
                let (i, j, k) = (ijk / (n * n), (ijk / n) % n, ijk % n);
                jets.iter().map(|p| p[i].hess(j, k)).collect()
            })
            .collect();
        BilinearLevelMap::from_samples(grid, n, truncation, field)
    }

    /// `ξ ↦ ∂Φ(u(·)) ξ(·)`. The one matrix is read as `dφ|_u ∈ 𝓛(H₁)`,
    /// `Dφ|_u ∈ 𝓛(H₀)` and its extension to `𝓛(H_{-1})`.
    pub fn dphi(&self, u: &FourierLoop) -> Result<LevelOperator> {
        let (grid, jets) = self.jets(u)?;
        Ok(self.first_from(&grid, &jets, u.truncation()))
    }

    pub fn d2phi(&self, u: &FourierLoop) -> Result<BilinearLevelMap> {
        let (grid, jets) = self.jets(u)?;
        Ok(self.second_from(grid, &jets, u.truncation()))
    }

    pub fn derivatives(&self, u: &FourierLoop) -> Result<Derivatives> {
        let (grid, jets) = self.jets(u)?;
        let n = self.dim();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| jets.iter().map(|p| p[i].value()).collect()).collect();
        Ok(Derivatives {
            value: grid.analyze(&rows, u.truncation())?,
            first: self.first_from(&grid, &jets, u.truncation()),
            second: self.second_from(grid, &jets, u.truncation()),
        })
    }

    /// `P_N(∂Φ(u) η)` on the grid, without assembling the matrix.
    pub fn tangent(&self, u: &FourierLoop, eta: &FourierLoop) -> Result<FourierLoop> {
        u.check_same_shape(eta)?;
        let (grid, jets) = self.jets(u)?;
        let es = grid.sample(eta)?;
        let n = self.dim();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| jets.iter().enumerate().map(|(p, jet)| (0..n).map(|k| jet[i].grad(k) * es[k][p]).sum()).collect())
            .collect();
        grid.analyze(&rows, u.truncation())
    }

    pub fn invert(&self) -> Result<SuperpositionMap> {
        Ok(Self { chart: self.chart.inverse()?, ..self.clone() })
    }
}

/// `ψ ∘ φ`, whose chart is `Ψ ∘ Φ` with chain-ruled jets.
pub fn compose(psi: &SuperpositionMap, phi: &SuperpositionMap) -> Result<SuperpositionMap> {
    if (psi.s - phi.s).abs() > 0.0 {
        return Err(FloerError::Parameter(format!("cannot compose maps at levels {} and {}", psi.s, phi.s)));
    }
    Ok(SuperpositionMap {
        chart: Chart::compose(psi.chart.clone(), phi.chart.clone())?,
        s: phi.s,
        grid_factor: phi.grid_factor.max(psi.grid_factor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn circle(n: usize, r: f64) -> FourierLoop {
        FourierLoop::trig(2, n, 1, &[r, 0.0], &[0.0, r])
    }

    fn map(chart: Chart) -> SuperpositionMap {
        SuperpositionMap::new(chart, Level::new(0.75).unwrap()).unwrap()
    }

    #[test]
    fn level_range_is_enforced() {
        assert!(SuperpositionMap::new(Chart::Shear { c: 1.0 }, Level::new(0.5).unwrap()).is_err());
        assert!(SuperpositionMap::new(Chart::Shear { c: 1.0 }, Level::ONE).is_err());
    }

    #[test]
    fn identity_and_linear() {
        let u = circle(8, 0.7);
        let id = map(Chart::Identity { dim: 2 });
        assert!(id.apply(&u).unwrap().max_abs_diff(&u) < 1e-12);
        assert!(id.dphi(&u).unwrap().max_abs_diff(&LevelOperator::identity(2, 8, Level::ONE)) < 1e-14);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -1.0, 0.5]);
        let lin = map(Chart::linear(&m).unwrap());
        assert!(lin.apply(&u).unwrap().max_abs_diff(&u.map_pointwise(&m)) < 1e-12);
        let expected = LevelOperator::pointwise(&m, 8, Level::ONE);
        assert!(lin.dphi(&u).unwrap().max_abs_diff(&expected) < 1e-14);
        assert!(lin.d2phi(&u).unwrap().is_zero());
    }

    #[test]
    fn out_of_chart_names_grid_point() {
        let t = map(Chart::Transition {
            from: super::super::StereoFrame::north(20.0),
            to: super::super::StereoFrame::south(20.0),
        });
        // passes through the origin at t = 0 in the north chart
        let u = FourierLoop::trig(2, 4, 1, &[0.0, 0.0], &[0.5, 0.0]);
        match t.apply(&u) {
            Err(FloerError::OutOfChart { index, point, .. }) => {
                assert_eq!(index, 0);
                assert!(point[0].abs() < 1e-12);
            }
            other => panic!("expected out-of-chart, got {other:?}"),
        }
    }

    #[test]
    fn tangent_matches_matrix() {
        let u = circle(10, 0.6);
        let phi = map(Chart::AngleRotation { a: 0.8 });
        let eta = FourierLoop::trig(2, 10, 3, &[0.2, -0.4], &[0.1, 0.3]);
        let a = phi.tangent(&u, &eta).unwrap();
        let b = phi.dphi(&u).unwrap().apply(&eta);
        assert!(a.max_abs_diff(&b) < 1e-13);
    }
}
