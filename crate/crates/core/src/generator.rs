use crate::ad::{ad_gradient, ad_hessian, ad_value, Scalar, ScalarFn};
use crate::error::{check_dim, check_finite, Result};
use crate::linalg::rows_to_matrix;
use nalgebra::DMatrix;

/// A convex potential together with its first two derivatives.
///
/// This is the object-safe, `f64`-level interface the manifold machinery
/// consumes. Built-in manifolds implement it with closed forms; arbitrary
/// formulas get it for free through [`AutoDiffGenerator`].
pub trait Generator: Send + Sync {
    /// Number of coordinates of the flat chart this potential lives on.
    fn dimension(&self) -> usize;

    /// F(x).
    fn value(&self, x: &[f64]) -> Result<f64>;

    /// ∇F(x).
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// ∇²F(x), symmetric positive definite on the domain.
    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>>;

    /// Ok when `x` lies in the open domain of F.
    fn domain_check(&self, x: &[f64]) -> Result<()>;

    /// Interior starting point for Newton inversion of ∇F. The target dual
    /// vector is available for generators that can exploit it; the default
    /// is the origin, which suits potentials defined on all of ℝⁿ.
    fn gradient_inverse_seed(&self, target: &[f64]) -> Vec<f64> {
        let _ = target;
        vec![0.0; self.dimension()]
    }
}

/// Wraps any [`ScalarFn`] formula into a [`Generator`] using forward-mode
/// differentiation for the gradient and Hessian.
pub struct AutoDiffGenerator<F: ScalarFn> {
    f: F,
    seed: Option<Vec<f64>>,
}

impl<F: ScalarFn> AutoDiffGenerator<F> {
    pub fn new(f: F) -> Self {
        AutoDiffGenerator { f, seed: None }
    }

    /// Overrides the Newton seed; needed when the origin is out of domain.
    pub fn with_seed(mut self, seed: Vec<f64>) -> Self {
        debug_assert_eq!(seed.len(), self.f.dim());
        self.seed = Some(seed);
        self
    }

    pub fn inner(&self) -> &F {
        &self.f
    }
}

impl<F: ScalarFn + Send + Sync> Generator for AutoDiffGenerator<F> {
    fn dimension(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.f.dim(), x.len())?;
        check_finite(x, "generator input")?;
        ad_value(&self.f, x)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.f.dim(), x.len())?;
        check_finite(x, "generator input")?;
        ad_gradient(&self.f, x)
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(self.f.dim(), x.len())?;
        check_finite(x, "generator input")?;
        Ok(rows_to_matrix(&ad_hessian(&self.f, x)?))
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.f.dim(), x.len())?;
        check_finite(x, "generator input")?;
        self.f.apply(x).map(|_| ())
    }

    fn gradient_inverse_seed(&self, target: &[f64]) -> Vec<f64> {
        match &self.seed {
            Some(s) => s.clone(),
            None => {
                let _ = target;
                vec![0.0; self.f.dim()]
            }
        }
    }
}

/// F(x) = ½‖x‖². Self-dual: ∇F = id, ∇²F = I, so the induced divergence is
/// half the squared Euclidean distance. Used widely in tests and examples.
#[derive(Clone, Debug)]
pub struct QuadraticGenerator {
    pub dim: usize,
}

impl ScalarFn for QuadraticGenerator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let mut acc = S::constant(0.0);
        for &xi in x {
            acc = acc + xi * xi;
        }
        Ok(acc.scale(0.5))
    }
}

impl Generator for QuadraticGenerator {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        check_finite(x, "generator input")?;
        Ok(0.5 * x.iter().map(|v| v * v).sum::<f64>())
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        check_finite(x, "generator input")?;
        Ok(x.to_vec())
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(self.dim, x.len())?;
        Ok(DMatrix::identity(self.dim, self.dim))
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        check_finite(x, "generator input")
    }
}
