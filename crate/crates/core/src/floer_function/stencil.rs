//! Finite-difference oracles for scalar functions on loops.

use crate::error::Result;
use crate::scale_space::FourierLoop;

/// Central difference of `h ↦ f(q + hξ)` at 0, Richardson-extrapolated
/// from steps `h` and `h/2`.
pub fn directional_derivative(
    f: &dyn Fn(&FourierLoop) -> Result<f64>,
    q: &FourierLoop,
    xi: &FourierLoop,
    h: f64,
) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((f(&q.axpy(h, xi))? - f(&q.axpy(-h, xi))?) / (2.0 * h)) };
    let (coarse, fine) = (d(h)?, d(0.5 * h)?);
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Four-point mixed second difference of `f` in directions `ξ, η`,
/// Richardson-extrapolated from `h` and `h/2`.
pub fn mixed_second_difference(
    f: &dyn Fn(&FourierLoop) -> Result<f64>,
    q: &FourierLoop,
    xi: &FourierLoop,
    eta: &FourierLoop,
    h: f64,
) -> Result<f64> {
    let d = |h: f64| -> Result<f64> {
        let at = |a: f64, b: f64| f(&q.axpy(a, xi).axpy(b, eta));
        Ok((at(h, h)? - at(h, -h)? - at(-h, h)? + at(-h, -h)?) / (4.0 * h * h))
    };
    let (coarse, fine) = (d(h)?, d(0.5 * h)?);
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Central difference of a loop-valued map along `ξ`.
pub fn directional_derivative_loop(
    g: &dyn Fn(&FourierLoop) -> Result<FourierLoop>,
    q: &FourierLoop,
    xi: &FourierLoop,
    h: f64,
) -> Result<FourierLoop> {
    let d = |h: f64| -> Result<FourierLoop> { Ok(&(&g(&q.axpy(h, xi))? - &g(&q.axpy(-h, xi))?) * (0.5 / h)) };
    let (coarse, fine) = (d(h)?, d(0.5 * h)?);
    Ok(&(&fine * (4.0 / 3.0)) - &(&coarse * (1.0 / 3.0)))
}
