use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::sampling::{random_loop, stream};
use crate::scale_operator::{multiplication_from_samples, LevelOperator};
use crate::scale_space::{inner_unchecked, FourierLoop, Grid, Level};

/// Pointwise bilinear map `(ξ, η) ↦ Σ_{jk} H_{ijk}(t) ξ_j(t) η_k(t)` with the
/// coefficient field `H` sampled on a grid, projected onto `|k| ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearLevelMap {
    dim: usize,
    truncation: usize,
    grid: Grid,
    /// `field[(i·n + j)·n + k][point]`.
    field: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearNorm {
    pub value: f64,
    pub iterations: usize,
}

impl BilinearLevelMap {
    pub fn from_samples(grid: Grid, dim: usize, truncation: usize, field: Vec<Vec<f64>>) -> Self {
        assert_eq!(field.len(), dim * dim * dim);
        Self { dim, truncation, grid, field }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn is_zero(&self) -> bool {
        self.field.iter().all(|f| f.iter().all(|&x| x == 0.0))
    }

    fn at(&self, i: usize, j: usize, k: usize) -> &[f64] {
        &self.field[(i * self.dim + j) * self.dim + k]
    }

    pub fn sub(&self, other: &BilinearLevelMap) -> BilinearLevelMap {
        assert_eq!(self.grid, other.grid);
        let field =
            self.field.iter().zip(&other.field).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        Self { field, ..self.clone() }
    }

    fn samples(&self, u: &FourierLoop) -> Vec<Vec<f64>> {
        assert_eq!(u.dim(), self.dim);
        self.grid.sample(&u.resized(self.truncation)).expect("grid fits the truncation")
    }

    fn project(&self, rows: Vec<Vec<f64>>) -> FourierLoop {
        self.grid.analyze(&rows, self.truncation).expect("grid fits the truncation")
    }

    /// Contracts two slots pointwise and projects. `slot` is the index left free
    /// (0: output `i`, 1: first input `j`, 2: second input `k`).
    fn contract(&self, slot: usize, a: &[Vec<f64>], b: &[Vec<f64>]) -> FourierLoop {
        let n = self.dim;
        let pts = self.grid.points();
        let mut out = vec![vec![0.0; pts]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let h = self.at(i, j, k);
                    let (free, x, y) = match slot {
                        0 => (i, &a[j], &b[k]),
                        1 => (j, &a[i], &b[k]),
                        _ => (k, &a[i], &b[j]),
                    };
                    let row = &mut out[free];
                    for p in 0..pts {
                        row[p] += h[p] * x[p] * y[p];
                    }
                }
            }
        }
        self.project(out)
    }

    pub fn apply(&self, xi: &FourierLoop, eta: &FourierLoop) -> FourierLoop {
        self.contract(0, &self.samples(xi), &self.samples(eta))
    }

    /// `η ↦ B(ξ, η)` as a Galerkin matrix.
    pub fn partial(&self, xi: &FourierLoop) -> LevelOperator {
        let xs = self.samples(xi);
        let n = self.dim;
        let entries: Vec<Option<Vec<f64>>> = (0..n * n)
            .map(|ik| {
                let (i, k) = (ik / n, ik % n);
                let mut m = vec![0.0; self.grid.points()];
                for j in 0..n {
                    for (p, v) in m.iter_mut().enumerate() {
                        *v += self.at(i, j, k)[p] * xs[j][p];
                    }
                }
                m.iter().any(|&v| v != 0.0).then_some(m)
            })
            .collect();
        multiplication_from_samples(&self.grid, &entries, n, self.truncation, Level::ZERO)
    }

    /// The operator `K` with `⟨Kξ, η⟩₀ = ⟨z, B(ξ, η)⟩₀`.
    pub fn riesz(&self, z: &FourierLoop) -> LevelOperator {
        let zs = self.samples(z);
        let n = self.dim;
        let entries: Vec<Option<Vec<f64>>> = (0..n * n)
            .map(|kj| {
                let (k, j) = (kj / n, kj % n);
                let mut m = vec![0.0; self.grid.points()];
                for i in 0..n {
                    for (p, v) in m.iter_mut().enumerate() {
                        *v += self.at(i, j, k)[p] * zs[i][p];
                    }
                }
                m.iter().any(|&v| v != 0.0).then_some(m)
            })
            .collect();
        multiplication_from_samples(&self.grid, &entries, n, self.truncation, Level::ZERO)
    }

    /// Lower estimate of `sup ‖B(ξ, η)‖_c / (‖ξ‖_a ‖η‖_b)` by alternating
    /// maximization of `⟨z, B(ξ, η)⟩₀` over the three unit balls.
    pub fn norm(&self, a: f64, b: f64, c: f64) -> BilinearNorm {
        self.norm_with_starts(a, b, c, Vec::new())
    }

    /// [`BilinearLevelMap::norm`] with extra starting pairs; the result is at
    /// least the ratio attained by every start.
    pub fn norm_with_starts(&self, a: f64, b: f64, c: f64, extra: Vec<(FourierLoop, FourierLoop)>) -> BilinearNorm {
        if self.is_zero() {
            return BilinearNorm { value: 0.0, iterations: 0 };
        }
        let mut starts = vec![self.peak_start(a, b)];
        let mut rng = stream(0x5eed, "bilinear-norm");
        for _ in 0..2 {
            let band = self.truncation.min(8);
            starts.push((
                random_loop(&mut rng, self.dim, self.truncation, band, 1.0, 1.0, true),
                random_loop(&mut rng, self.dim, self.truncation, band, 1.0, 1.0, true),
            ));
        }
        starts.extend(extra);
        let mut best = BilinearNorm { value: 0.0, iterations: 0 };
        for (xi, eta) in starts {
            let r = self.ascend(xi, eta, a, b, c);
            if r.value > best.value {
                best = r;
            }
        }
        best
    }

    /// Dirichlet-type start concentrated where `|H|` peaks.
    fn peak_start(&self, a: f64, b: f64) -> (FourierLoop, FourierLoop) {
        let n = self.dim;
        let (mut best, mut at) = (0.0, (0, 0, 0));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for (p, v) in self.at(i, j, k).iter().enumerate() {
                        if v.abs() > best {
                            best = v.abs();
                            at = (j, k, p);
                        }
                    }
                }
            }
        }
        let (j, k, p) = at;
        let t = self.grid.node(p);
        let kernel = |comp: usize, exponent: f64| {
            let mut u = FourierLoop::zeros(n, self.truncation);
            for m in 0..=self.truncation as i64 {
                let w = crate::scale_space::spectral_weight(m, exponent);
                let phase = -2.0 * std::f64::consts::PI * m as f64 * t;
                u.set_mode(comp, m, Complex64::from_polar(w, phase));
            }
            u
        };
        (kernel(j, -a), kernel(k, -b))
    }

    fn ascend(&self, xi: FourierLoop, eta: FourierLoop, a: f64, b: f64, c: f64) -> BilinearNorm {
        let normalize = |u: FourierLoop, e: f64| {
            let n = u.weighted_norm_sq(e).sqrt();
            if n > 0.0 {
                &u * (1.0 / n)
            } else {
                u
            }
        };
        // maximizer of ⟨g, x⟩₀ on the unit ball of H_e is W_e⁻¹g/‖g‖_{-e}
        let dual_max = |g: &FourierLoop, e: f64| normalize(scale_weights(g, -e), e);
        let mut xi = normalize(xi, a);
        let mut eta = normalize(eta, b);
        let mut value = 0.0_f64;
        let mut iterations = 0;
        for it in 1..=400 {
            iterations = it;
            let (xs, es) = (self.samples(&xi), self.samples(&eta));
            let y = self.contract(0, &xs, &es);
            let current = y.weighted_norm_sq(c).sqrt();
            if current == 0.0 {
                break;
            }
            let z = &scale_weights(&y, c) * (1.0 / current);
            let zs = self.samples(&z);
            let gx = self.contract(1, &zs, &es);
            xi = dual_max(&gx, a);
            let xs = self.samples(&xi);
            let ge = self.contract(2, &zs, &xs);
            eta = dual_max(&ge, b);
            let converged = current <= value * (1.0 + 1e-11);
            value = value.max(current);
            if converged {
                break;
            }
        }
        let y = self.apply(&xi, &eta);
        let last = y.weighted_norm_sq(c).sqrt() / (xi.weighted_norm_sq(a).sqrt() * eta.weighted_norm_sq(b).sqrt());
        BilinearNorm { value: value.max(last), iterations }
    }
}

/// Multiplies mode `k` by `w_k^e`.
pub fn scale_weights(u: &FourierLoop, e: f64) -> FourierLoop {
    let mut out = u.clone();
    let n = u.truncation() as i64;
    for j in 0..u.dim() {
        for k in 0..=n {
            let w = crate::scale_space::spectral_weight(k, e);
            out.set_mode(j, k, u.coeff(j, k) * w);
        }
    }
    out
}

/// `⟨z, B(ξ, η)⟩₀`.
pub fn pair(b: &BilinearLevelMap, z: &FourierLoop, xi: &FourierLoop, eta: &FourierLoop) -> f64 {
    inner_unchecked(z, &b.apply(xi, eta), 0.0)
}
