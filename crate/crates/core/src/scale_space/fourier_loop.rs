use std::f64::consts::SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::level::{Level, FOUR_PI_SQ};
use crate::error::{FloerError, Result};

/// A real loop `S¹ → ℝⁿ` stored as complex Fourier coefficients `û_k`,
/// `|k| ≤ N`, with `u(t) = Σ û_k e^{2πikt}`.
///
/// Coefficients are laid out component-major: component `j`, mode `k` lives at
/// `j * (2N + 1) + (k + N)`. Every constructor keeps `û_{-k} = conj(û_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierLoop {
    dim: usize,
    truncation: usize,
    coeffs: Vec<Complex64>,
}

impl FourierLoop {
    pub fn zeros(dim: usize, truncation: usize) -> Self {
        assert!(dim > 0, "loops need at least one component");
        Self { dim, truncation, coeffs: vec![Complex64::new(0.0, 0.0); dim * (2 * truncation + 1)] }
    }

    /// Builds a loop from raw coefficients `coeffs[component][k + N]`, checking
    /// finiteness and the reality constraint.
    pub fn from_coefficients(coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = coeffs.len();
        if dim == 0 {
            return Err(FloerError::InvalidLoop("no components".into()));
        }
        let modes = coeffs[0].len();
        if modes.is_multiple_of(2) {
            return Err(FloerError::InvalidLoop(format!("expected 2N+1 modes per component, got {modes}")));
        }
        let truncation = (modes - 1) / 2;
        let mut out = Self::zeros(dim, truncation);
        let scale = coeffs.iter().flatten().map(|c| c.norm()).fold(1.0_f64, f64::max);
        for (j, row) in coeffs.iter().enumerate() {
            if row.len() != modes {
                return Err(FloerError::InvalidLoop(format!(
                    "component {j} has {} modes, expected {modes}",
                    row.len()
                )));
            }
            for (idx, c) in row.iter().enumerate() {
                if !c.re.is_finite() || !c.im.is_finite() {
                    return Err(FloerError::InvalidLoop(format!("non-finite coefficient in component {j}")));
                }
                let k = idx as i64 - truncation as i64;
                let mirror = row[(truncation as i64 - k) as usize];
                if (c - mirror.conj()).norm() > 1e-10 * scale {
                    return Err(FloerError::InvalidLoop(format!("reality violated at component {j}, mode {k}")));
                }
                out.coeffs[j * modes + idx] = *c;
            }
        }
        out.symmetrize();
        Ok(out)
    }

    /// Constant loop with the given value.
    pub fn constant(value: &[f64], truncation: usize) -> Self {
        let mut out = Self::zeros(value.len(), truncation);
        for (j, v) in value.iter().enumerate() {
            out.set_mode(j, 0, Complex64::new(*v, 0.0));
        }
        out
    }

    /// `√2·cos(2πkt)` in one component: the real basis vector of mode `k`,
    /// normalized to unit `L²` norm (the constant `1` when `k = 0`).
    pub fn unit_mode(dim: usize, truncation: usize, component: usize, k: usize) -> Self {
        let mut out = Self::zeros(dim, truncation);
        if k == 0 {
            out.set_mode(component, 0, Complex64::new(1.0, 0.0));
        } else {
            out.set_mode(component, k as i64, Complex64::new(1.0 / SQRT_2, 0.0));
        }
        out
    }

    /// Loop with components `a_j cos(2πkt) + b_j sin(2πkt)`.
    pub fn trig(dim: usize, truncation: usize, k: usize, cos: &[f64], sin: &[f64]) -> Self {
        let mut out = Self::zeros(dim, truncation);
        for j in 0..dim {
            let a = cos.get(j).copied().unwrap_or(0.0);
            let b = sin.get(j).copied().unwrap_or(0.0);
            if k == 0 {
                out.set_mode(j, 0, Complex64::new(a, 0.0));
            } else {
                out.set_mode(j, k as i64, Complex64::new(a / 2.0, -b / 2.0));
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation order `N`.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn modes_per_component(&self) -> usize {
        2 * self.truncation + 1
    }

    /// Length of the real coefficient vector, `n (2N + 1)`.
    pub fn real_len(&self) -> usize {
        self.dim * self.modes_per_component()
    }

    #[inline]
    fn index(&self, component: usize, k: i64) -> usize {
        debug_assert!(k.unsigned_abs() as usize <= self.truncation);
        component * self.modes_per_component() + (k + self.truncation as i64) as usize
    }

    pub fn coeff(&self, component: usize, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.truncation {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[self.index(component, k)]
    }

    /// Sets `û_k` and, to keep the loop real, `û_{-k} = conj(û_k)`.
    pub fn set_mode(&mut self, component: usize, k: i64, value: Complex64) {
        let i = self.index(component, k);
        let m = self.index(component, -k);
        if k == 0 {
            self.coeffs[i] = Complex64::new(value.re, 0.0);
        } else {
            self.coeffs[i] = value;
            self.coeffs[m] = value.conj();
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn component_coefficients(&self, component: usize) -> &[Complex64] {
        let m = self.modes_per_component();
        &self.coeffs[component * m..(component + 1) * m]
    }

    fn symmetrize(&mut self) {
        let n = self.truncation as i64;
        for j in 0..self.dim {
            let i0 = self.index(j, 0);
            self.coeffs[i0].im = 0.0;
            for k in 1..=n {
                let i = self.index(j, k);
                let m = self.index(j, -k);
                let avg = (self.coeffs[i] + self.coeffs[m].conj()) * 0.5;
                self.coeffs[i] = avg;
                self.coeffs[m] = avg.conj();
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Zero-pads or truncates to a new order.
    pub fn resized(&self, truncation: usize) -> Self {
        let mut out = Self::zeros(self.dim, truncation);
        let keep = self.truncation.min(truncation) as i64;
        for j in 0..self.dim {
            for k in -keep..=keep {
                let i = out.index(j, k);
                out.coeffs[i] = self.coeff(j, k);
            }
        }
        out
    }

    /// Keeps modes `|k| ≤ band` and zeroes the rest, without changing `N`.
    pub fn band_limited(&self, band: usize) -> Self {
        let mut out = self.clone();
        let n = self.truncation as i64;
        for j in 0..self.dim {
            for k in -n..=n {
                if k.unsigned_abs() as usize > band {
                    let i = out.index(j, k);
                    out.coeffs[i] = Complex64::new(0.0, 0.0);
                }
            }
        }
        out
    }

    /// `d/dt`, i.e. `û_k ↦ 2πik û_k`.
    pub fn derivative(&self) -> Self {
        let mut out = self.clone();
        let n = self.truncation as i64;
        let two_pi = 2.0 * std::f64::consts::PI;
        for j in 0..self.dim {
            for k in -n..=n {
                let i = out.index(j, k);
                out.coeffs[i] *= Complex64::new(0.0, two_pi * k as f64);
            }
        }
        out
    }

    /// Applies a constant `n × n` matrix pointwise, `u(t) ↦ M u(t)`.
    pub fn map_pointwise(&self, matrix: &nalgebra::DMatrix<f64>) -> Self {
        assert_eq!(matrix.ncols(), self.dim);
        let rows = matrix.nrows();
        let mut out = Self::zeros(rows, self.truncation);
        let m = self.modes_per_component();
        for i in 0..rows {
            for j in 0..self.dim {
                let a = matrix[(i, j)];
                if a == 0.0 {
                    continue;
                }
                for idx in 0..m {
                    out.coeffs[i * m + idx] += self.coeffs[j * m + idx] * a;
                }
            }
        }
        out
    }

    /// Coordinates in the real `L²`-orthonormal basis
    /// `{1, √2 cos 2πkt, √2 sin 2πkt}` per component. Slot `0` is the mean,
    /// slot `2k-1` the cosine and slot `2k` the sine coefficient of mode `k`.
    pub fn to_real(&self) -> DVector<f64> {
        let m = self.modes_per_component();
        let mut out = DVector::zeros(self.real_len());
        for j in 0..self.dim {
            out[j * m] = self.coeff(j, 0).re;
            for k in 1..=self.truncation {
                let c = self.coeff(j, k as i64);
                out[j * m + 2 * k - 1] = SQRT_2 * c.re;
                out[j * m + 2 * k] = -SQRT_2 * c.im;
            }
        }
        out
    }

    /// Inverse of [`FourierLoop::to_real`].
    pub fn from_real(dim: usize, truncation: usize, x: &DVector<f64>) -> Self {
        let mut out = Self::zeros(dim, truncation);
        let m = out.modes_per_component();
        assert_eq!(x.len(), dim * m, "real vector length does not match loop shape");
        for j in 0..dim {
            out.set_mode(j, 0, Complex64::new(x[j * m], 0.0));
            for k in 1..=truncation {
                let a = x[j * m + 2 * k - 1];
                let b = x[j * m + 2 * k];
                out.set_mode(j, k as i64, Complex64::new(a / SQRT_2, -b / SQRT_2));
            }
        }
        out
    }

    /// Fourier index `k ≥ 0` of a real-basis slot.
    #[inline]
    pub fn slot_mode(slot: usize) -> i64 {
        slot.div_ceil(2) as i64
    }

    /// Diagonal of the level-`s` Gram matrix in the real basis.
    pub fn real_weights(dim: usize, truncation: usize, exponent: f64) -> DVector<f64> {
        let m = 2 * truncation + 1;
        DVector::from_fn(dim * m, |i, _| super::level::spectral_weight(Self::slot_mode(i % m), exponent))
    }

    fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.dim == other.dim && self.truncation == other.truncation,
            "loop shapes differ: ({}, {}) vs ({}, {})",
            self.dim,
            self.truncation,
            other.dim,
            other.truncation
        );
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.truncation != other.truncation {
            return Err(FloerError::DimensionMismatch(format!(
                "loops of shape (n={}, N={}) and (n={}, N={})",
                self.dim, self.truncation, other.dim, other.truncation
            )));
        }
        Ok(())
    }

    /// `u + a v`.
    pub fn axpy(&self, a: f64, v: &Self) -> Self {
        self.assert_same_shape(v);
        let mut out = self.clone();
        for (o, x) in out.coeffs.iter_mut().zip(&v.coeffs) {
            *o += x * a;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.assert_same_shape(other);
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `‖u‖_s² = Σ_k (1 + 4π²k²)^s |û_k|²`, any real exponent.
    pub fn weighted_norm_sq(&self, exponent: f64) -> f64 {
        let n = self.truncation as i64;
        let mut total = 0.0;
        for k in -n..=n {
            let w = 1.0 + FOUR_PI_SQ * (k * k) as f64;
            let w = if exponent == 0.0 { 1.0 } else { w.powf(exponent) };
            for j in 0..self.dim {
                total += w * self.coeff(j, k).norm_sqr();
            }
        }
        total
    }

    pub fn norm(&self, level: Level) -> f64 {
        self.weighted_norm_sq(level.value()).sqrt()
    }
}

impl Add<&FourierLoop> for &FourierLoop {
    type Output = FourierLoop;

    fn add(self, rhs: &FourierLoop) -> FourierLoop {
        self.axpy(1.0, rhs)
    }
}

impl Sub<&FourierLoop> for &FourierLoop {
    type Output = FourierLoop;

    fn sub(self, rhs: &FourierLoop) -> FourierLoop {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &FourierLoop {
    type Output = FourierLoop;

    fn mul(self, rhs: f64) -> FourierLoop {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= rhs);
        out
    }
}

impl Neg for &FourierLoop {
    type Output = FourierLoop;

    fn neg(self) -> FourierLoop {
        self * -1.0
    }
}

/// JSON layout `{n, N, coeffs}` with `coeffs[component][k + N] = [re, im]`.
#[derive(Serialize, Deserialize)]
struct LoopRecord {
    n: usize,
    #[serde(rename = "N")]
    truncation: usize,
    coeffs: Vec<Vec<[f64; 2]>>,
}

impl Serialize for FourierLoop {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs =
            (0..self.dim).map(|j| self.component_coefficients(j).iter().map(|c| [c.re, c.im]).collect()).collect();
        LoopRecord { n: self.dim, truncation: self.truncation, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourierLoop {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let rec = LoopRecord::deserialize(deserializer)?;
        if rec.coeffs.len() != rec.n {
            return Err(D::Error::custom(format!("n = {} but {} components given", rec.n, rec.coeffs.len())));
        }
        if rec.coeffs.iter().any(|row| row.len() != 2 * rec.truncation + 1) {
            return Err(D::Error::custom("each component needs 2N+1 modes"));
        }
        let coeffs = rec
            .coeffs
            .into_iter()
            .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        FourierLoop::from_coefficients(coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_basis_round_trip() {
        let mut u = FourierLoop::zeros(2, 5);
        u.set_mode(0, 0, Complex64::new(0.3, 0.0));
        u.set_mode(0, 2, Complex64::new(0.1, -0.7));
        u.set_mode(1, 5, Complex64::new(-0.4, 0.2));
        let back = FourierLoop::from_real(2, 5, &u.to_real());
        assert!(back.max_abs_diff(&u) < 1e-15);
    }

    #[test]
    fn real_basis_is_l2_orthonormal() {
        let mut u = FourierLoop::zeros(1, 4);
        u.set_mode(0, 3, Complex64::new(0.25, 0.5));
        let x = u.to_real();
        assert!((x.norm_squared() - u.norm(Level::ZERO).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn reality_is_checked() {
        let bad = vec![vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)]];
        assert!(matches!(FourierLoop::from_coefficients(bad), Err(FloerError::InvalidLoop(_))));
    }

    #[test]
    fn json_round_trip() {
        let u = FourierLoop::trig(2, 3, 1, &[1.0, 0.0], &[0.0, 1.0]);
        let text = serde_json::to_string(&u).unwrap();
        assert!(text.starts_with("{\"n\":2,\"N\":3,\"coeffs\":"));
        let back: FourierLoop = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn trig_matches_cosine_and_sine() {
        let u = FourierLoop::trig(1, 2, 1, &[2.0], &[3.0]);
        // 2cos + 3sin  ->  û_1 = (2 - 3i)/2
        assert_eq!(u.coeff(0, 1), Complex64::new(1.0, -1.5));
        assert_eq!(u.coeff(0, -1), Complex64::new(1.0, 1.5));
    }
}
