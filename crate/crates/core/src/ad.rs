//! Forward-mode automatic differentiation on nested dual numbers.
//!
//! Generators are written once against the [`Scalar`] trait and evaluated at
//! three levels: plain `f64`, `Dual<f64>` for gradients, and
//! `Dual<Dual<f64>>` for Hessians. No tapes, no allocation per operation.

use crate::error::{Error, Result};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field-like scalar usable in generator expressions.
///
/// `primal` always reaches down to the underlying `f64`, so domain checks
/// written as `if x.primal() <= 0.0` behave identically at every
/// differentiation order.
pub trait Scalar:
    Copy
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn primal(self) -> f64;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;

    /// Integer power by binary exponentiation; safe for negative bases.
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(1.0);
        }
        let mut base = if n < 0 { Self::constant(1.0) / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::constant(1.0);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    fn scale(self, c: f64) -> Self {
        self * Self::constant(c)
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn primal(self) -> f64 {
        self
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

/// First-order jet `re + du·ε` with `ε² = 0`. Nest for higher orders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub du: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, du: T) -> Self {
        Dual { re, du }
    }

    /// Lifts a value with zero derivative.
    pub fn lift(re: T) -> Self {
        Dual { re, du: T::constant(0.0) }
    }

    /// Lifts a value with unit derivative (the active variable).
    pub fn active(re: T) -> Self {
        Dual { re, du: T::constant(1.0) }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.du * rhs.re + self.re * rhs.du)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let re = self.re / rhs.re;
        let du = (self.du * rhs.re - self.re * rhs.du) / (rhs.re * rhs.re);
        Dual::new(re, du)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.du)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn constant(c: f64) -> Self {
        Dual::lift(T::constant(c))
    }

    fn primal(self) -> f64 {
        self.re.primal()
    }

    fn ln(self) -> Self {
        Dual::new(self.re.ln(), self.du / self.re)
    }

    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.du * e)
    }

    fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        Dual::new(r, self.du / r.scale(2.0))
    }
}

/// A scalar-valued function of a coordinate vector, generic over the
/// differentiation level. Implementors write the formula once; the kernel
/// obtains values, gradients and Hessians from the same code path.
pub trait ScalarFn {
    /// Number of coordinates the function expects.
    fn dim(&self) -> usize;

    /// Evaluates at `x`, which has exactly `dim()` entries.
    ///
    /// Domain violations are reported through `Err`; implementations test
    /// conditions on `x[i].primal()` so the check is order-independent.
    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S>;
}

/// Value of `f` at `x`.
pub fn ad_value<F: ScalarFn + ?Sized>(f: &F, x: &[f64]) -> Result<f64> {
    debug_assert_eq!(f.dim(), x.len());
    f.apply(x)
}

/// Gradient of `f` at `x` by one forward pass per coordinate.
pub fn ad_gradient<F: ScalarFn + ?Sized>(f: &F, x: &[f64]) -> Result<Vec<f64>> {
    debug_assert_eq!(f.dim(), x.len());
    let n = x.len();
    let mut grad = vec![0.0; n];
    let mut args: Vec<Dual<f64>> = x.iter().map(|&v| Dual::lift(v)).collect();
    for i in 0..n {
        args[i].du = 1.0;
        grad[i] = f.apply(&args)?.du;
        args[i].du = 0.0;
    }
    Ok(grad)
}

/// Dense Hessian of `f` at `x` via second-order jets, symmetrised as
/// `(H + Hᵀ)/2` to cancel the last bits of evaluation-order noise.
pub fn ad_hessian<F: ScalarFn + ?Sized>(f: &F, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    debug_assert_eq!(f.dim(), x.len());
    let n = x.len();
    let mut hess = vec![vec![0.0; n]; n];
    let mut args: Vec<Dual<Dual<f64>>> = x.iter().map(|&v| Dual::lift(Dual::lift(v))).collect();
    for i in 0..n {
        args[i].du.re = 1.0;
        for j in 0..=i {
            args[j].re.du = 1.0;
            let out = f.apply(&args)?;
            hess[i][j] = out.du.du;
            args[j].re.du = 0.0;
        }
        args[i].du.re = 0.0;
    }
    // Only the lower triangle was computed; mirror it.
    for i in 0..n {
        for j in 0..i {
            hess[j][i] = hess[i][j];
        }
    }
    Ok(hess)
}

/// Convenience error for implementations that detect a bad coordinate.
pub fn domain_err<S>(index: usize, reason: &str) -> Result<S> {
    Err(Error::domain(index, reason))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    struct LogSumExp;

    impl ScalarFn for LogSumExp {
        fn dim(&self) -> usize {
            3
        }
        fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
            let mut s = S::constant(1.0);
            for &xi in x {
                s = s + xi.exp();
            }
            Ok(s.ln())
        }
    }

    struct Entropy;

    impl ScalarFn for Entropy {
        fn dim(&self) -> usize {
            2
        }
        fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
            let mut s = S::constant(0.0);
            for (i, &xi) in x.iter().enumerate() {
                if xi.primal() <= 0.0 {
                    return domain_err(i, "entropy needs positive coordinates");
                }
                s = s + xi * xi.ln();
            }
            Ok(s)
        }
    }

    #[test]
    fn gradient_matches_softmax() {
        let f = LogSumExp;
        let x = [0.3, -0.7, 1.1];
        let g = ad_gradient(&f, &x).unwrap();
        let z = 1.0 + x.iter().map(|v| v.exp()).sum::<f64>();
        for i in 0..3 {
            assert_relative_eq!(g[i], x[i].exp() / z, max_relative = 1e-14);
        }
    }

    #[test]
    fn hessian_matches_closed_form() {
        let f = LogSumExp;
        let x = [0.3, -0.7, 1.1];
        let h = ad_hessian(&f, &x).unwrap();
        let z = 1.0 + x.iter().map(|v| v.exp()).sum::<f64>();
        let p: Vec<f64> = x.iter().map(|v| v.exp() / z).collect();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { p[i] * (1.0 - p[i]) } else { -p[i] * p[j] };
                assert_relative_eq!(h[i][j], want, max_relative = 1e-12);
                assert_eq!(h[i][j], h[j][i]);
            }
        }
    }

    #[test]
    fn domain_error_carries_index() {
        let f = Entropy;
        let err = ad_gradient(&f, &[0.5, -0.1]).unwrap_err();
        match err {
            Error::Domain { index, .. } => assert_eq!(index, Some(1)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn powi_handles_negative_base_and_exponent() {
        let x = Dual::<f64>::active(-2.0);
        let y = x.powi(3);
        assert_relative_eq!(y.re, -8.0);
        assert_relative_eq!(y.du, 12.0);
        let z = x.powi(-2);
        assert_relative_eq!(z.re, 0.25);
        assert_relative_eq!(z.du, 2.0 / 8.0, max_relative = 1e-14);
    }
}
