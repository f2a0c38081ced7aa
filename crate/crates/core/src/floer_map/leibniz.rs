use serde::{Deserialize, Serialize};

use super::superposition::{compose, SuperpositionMap};
use crate::error::Result;
use crate::scale_space::{FourierLoop, Level};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeibnizReport {
    pub steps: Vec<f64>,
    /// `H₀` norms of the residual at each step.
    pub residuals: Vec<f64>,
    /// Least-squares slope of `log residual` against `log h`.
    pub slope: f64,
}

/// Residual of
/// `dD(ψ∘φ)|_q(ξ,η) − dDψ|_{φ(q)}(dφ|_qξ, Dφ|_qη) − Dψ|_{φ(q)} dDφ|_q(ξ,η)`
/// with every `dD` taken as a central difference in the base point.
pub fn leibniz_check(
    psi: &SuperpositionMap,
    phi: &SuperpositionMap,
    q: &FourierLoop,
    xi: &FourierLoop,
    eta: &FourierLoop,
    steps: &[f64],
) -> Result<LeibnizReport> {
    let chi = compose(psi, phi)?;
    let p = phi.apply(q)?;
    let a = phi.tangent(q, xi)?;
    let b = phi.tangent(q, eta)?;
    let mut residuals = Vec::with_capacity(steps.len());
    for &h in steps {
        let c = 0.5 / h;
        let d_chi = &(&chi.tangent(&q.axpy(h, xi), eta)? - &chi.tangent(&q.axpy(-h, xi), eta)?) * c;
        let d_psi = &(&psi.tangent(&p.axpy(h, &a), &b)? - &psi.tangent(&p.axpy(-h, &a), &b)?) * c;
        let d_phi = &(&phi.tangent(&q.axpy(h, xi), eta)? - &phi.tangent(&q.axpy(-h, xi), eta)?) * c;
        let r = &(&d_chi - &d_psi) - &psi.tangent(&p, &d_phi)?;
        residuals.push(r.norm(Level::ZERO));
    }
    Ok(LeibnizReport { slope: log_slope(steps, &residuals), steps: steps.to_vec(), residuals })
}

/// Least-squares slope in log-log coordinates; `NaN` if any value is not positive.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    if x.len() < 2 || y.iter().chain(x).any(|&v| v <= 0.0 || !v.is_finite()) {
        return f64::NAN;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [1e-1, 1e-2, 1e-3];
        let y: Vec<f64> = x.iter().map(|h| 3.0 * h * h).collect();
        assert!((log_slope(&x, &y) - 2.0).abs() < 1e-12);
        assert!(log_slope(&x, &[1.0, 0.0, 1.0]).is_nan());
    }
}
