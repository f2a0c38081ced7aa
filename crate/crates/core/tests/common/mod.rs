#![allow(dead_code)]

use std::f64::consts::PI;

use floerlab::sampling::{random_loop, stream};
use floerlab::scale_space::FourierLoop;

/// Direct evaluation of component `j` at time `t`.
pub fn eval(u: &FourierLoop, j: usize, t: f64) -> f64 {
    let n = u.truncation() as i64;
    (-n..=n)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 * t).sin_cos();
            let a = u.coeff(j, k);
            a.re * c - a.im * s
        })
        .sum()
}

/// Direct evaluation of the time derivative of component `j`.
pub fn eval_dot(u: &FourierLoop, j: usize, t: f64) -> f64 {
    let n = u.truncation() as i64;
    (-n..=n)
        .map(|k| {
            let w = 2.0 * PI * k as f64;
            let (s, c) = (w * t).sin_cos();
            let a = u.coeff(j, k);
            -w * (a.re * s + a.im * c)
        })
        .sum()
}

/// Trapezoid mean of `f` over `points` nodes; exact for trigonometric
/// polynomials of degree below `points`.
pub fn mean(points: usize, f: impl Fn(f64) -> f64) -> f64 {
    (0..points).map(|i| f(i as f64 / points as f64)).sum::<f64>() / points as f64
}

pub fn sample(seed: u64, name: &str, dim: usize, truncation: usize, band: usize) -> FourierLoop {
    random_loop(&mut stream(seed, name), dim, truncation, band, 1.0, 1.0, true)
}
