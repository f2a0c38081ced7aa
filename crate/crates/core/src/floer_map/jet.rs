//! Third-order forward-mode jets in `n` variables.

use std::ops::{Add, Mul, Neg, Sub};

/// Arithmetic shared by plain values and jets, so a chart is written once.
pub trait Scalar: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn constant_like(&self, c: f64) -> Self;
    fn value(&self) -> f64;
    fn scale(&self, a: f64) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn recip(&self) -> Self;
    /// `x ↦ x|x|`, which is `C¹` but not `C²` at the origin.
    fn kink(&self) -> Self;
}

impl Scalar for f64 {
    fn constant_like(&self, c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn scale(&self, a: f64) -> Self {
        a * self
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn kink(&self) -> Self {
        self * self.abs()
    }
}

/// Value, gradient, Hessian and third derivatives (full tensors, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    n: usize,
    v: f64,
    g: Vec<f64>,
    h: Vec<f64>,
    t: Vec<f64>,
}

impl Jet {
    pub fn constant(n: usize, c: f64) -> Self {
        Self { n, v: c, g: vec![0.0; n], h: vec![0.0; n * n], t: vec![0.0; n * n * n] }
    }

    pub fn variable(n: usize, i: usize, x: f64) -> Self {
        let mut j = Self::constant(n, x);
        j.g[i] = 1.0;
        j
    }

    /// Jets of the coordinate functions at `x`.
    pub fn variables(x: &[f64]) -> Vec<Jet> {
        (0..x.len()).map(|i| Self::variable(x.len(), i, x[i])).collect()
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.g[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.h[i * self.n + j]
    }

    pub fn third(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t[(i * self.n + j) * self.n + k]
    }

    fn zip(&self, o: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        debug_assert_eq!(self.n, o.n);
        Jet {
            n: self.n,
            v: f(self.v, o.v),
            g: self.g.iter().zip(&o.g).map(|(a, b)| f(*a, *b)).collect(),
            h: self.h.iter().zip(&o.h).map(|(a, b)| f(*a, *b)).collect(),
            t: self.t.iter().zip(&o.t).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// `f ∘ self` for a scalar `f` with derivatives `d = [f, f', f'', f''']` at the value.
    pub fn lift(&self, d: [f64; 4]) -> Jet {
        let n = self.n;
        let (u1, u2, u3) = (&self.g, &self.h, &self.t);
        let mut out = Jet::constant(n, d[0]);
        for i in 0..n {
            out.g[i] = d[1] * u1[i];
            for j in 0..n {
                out.h[i * n + j] = d[2] * u1[i] * u1[j] + d[1] * u2[i * n + j];
                for k in 0..n {
                    out.t[(i * n + j) * n + k] = d[3] * u1[i] * u1[j] * u1[k]
                        + d[2] * (u2[i * n + j] * u1[k] + u2[i * n + k] * u1[j] + u2[j * n + k] * u1[i])
                        + d[1] * u3[(i * n + j) * n + k];
                }
            }
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        self.zip(&o, |a, b| a + b)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self.zip(&o, |a, b| a - b)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, b: Jet) -> Jet {
        let a = self;
        let n = a.n;
        let mut out = Jet::constant(n, a.v * b.v);
        for i in 0..n {
            out.g[i] = a.g[i] * b.v + a.v * b.g[i];
            for j in 0..n {
                let ij = i * n + j;
                out.h[ij] = a.h[ij] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[ij];
                for k in 0..n {
                    let (ik, jk) = (i * n + k, j * n + k);
                    out.t[ij * n + k] = a.t[ij * n + k] * b.v
                        + a.h[ij] * b.g[k]
                        + a.h[ik] * b.g[j]
                        + a.h[jk] * b.g[i]
                        + a.g[i] * b.h[jk]
                        + a.g[j] * b.h[ik]
                        + a.g[k] * b.h[ij]
                        + a.v * b.t[ij * n + k];
                }
            }
        }
        out
    }
}

impl Scalar for Jet {
    fn constant_like(&self, c: f64) -> Self {
        Jet::constant(self.n, c)
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn scale(&self, a: f64) -> Self {
        let m = |x: &Vec<f64>| x.iter().map(|y| a * y).collect();
        Jet { n: self.n, v: a * self.v, g: m(&self.g), h: m(&self.h), t: m(&self.t) }
    }
    fn sin(&self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.lift([s, c, -s, -c])
    }
    fn cos(&self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.lift([c, -s, -c, s])
    }
    fn recip(&self) -> Self {
        let r = 1.0 / self.v;
        self.lift([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }
    fn kink(&self) -> Self {
        let x = self.v;
        self.lift([x * x.abs(), 2.0 * x.abs(), 2.0 * x.signum(), 0.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f<S: Scalar>(x: &[S]) -> S {
        // x0² x1 + sin(x0 x1) + 1/(1 + x1²)
        let one = x[0].constant_like(1.0);
        x[0].clone() * x[0].clone() * x[1].clone()
            + (x[0].clone() * x[1].clone()).sin()
            + (one + x[1].clone() * x[1].clone()).recip()
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = [0.4, -0.7];
        let j = f(&Jet::variables(&p));
        let h = 1e-4;
        let at = |dx: f64, dy: f64| f(&[p[0] + dx, p[1] + dy]);
        assert!((j.value() - at(0.0, 0.0)).abs() < 1e-15);
        let gx = (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h);
        assert!((j.grad(0) - gx).abs() < 1e-7);
        let hxy = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
        assert!((j.hess(0, 1) - hxy).abs() < 1e-6);
        let hp = 1e-3;
        let hxx = |dy: f64| (at(hp, dy) - 2.0 * at(0.0, dy) + at(-hp, dy)) / (hp * hp);
        let txxy = (hxx(hp) - hxx(-hp)) / (2.0 * hp);
        assert!((j.third(0, 0, 1) - txxy).abs() < 1e-4);
        assert!((j.third(0, 1, 0) - j.third(1, 0, 0)).abs() < 1e-12);
    }

    #[test]
    fn product_rule_third_order() {
        // (x³)''' = 6 through two multiplications
        let x = Jet::variable(1, 0, 2.0);
        let c = x.clone() * x.clone() * x;
        assert_eq!((c.value(), c.grad(0), c.hess(0, 0), c.third(0, 0, 0)), (8.0, 12.0, 12.0, 6.0));
    }
}
