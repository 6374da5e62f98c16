use crate::ad::{Scalar, ScalarFn};
use crate::atlas::ConvertFn;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::{CoordinateTag, Point};
use nalgebra::DMatrix;
use std::sync::Arc;

/// F(x) = Σᵢ (xᵢ·log xᵢ − xᵢ) on the positive quadrant. Its Bregman
/// divergence is the extended Kullback-Leibler divergence
/// Σᵢ pᵢ·log(pᵢ/qᵢ) − pᵢ + qᵢ between unnormalised intensity vectors.
#[derive(Clone, Debug)]
pub struct ShiftedNegEntropy2;

impl ScalarFn for ShiftedNegEntropy2 {
    fn dim(&self) -> usize {
        2
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let mut acc = S::constant(0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi.primal() <= 0.0 {
                return Err(Error::domain(i, "coordinates must be strictly positive"));
            }
            acc = acc + xi * xi.ln() - xi;
        }
        Ok(acc)
    }
}

impl crate::generator::Generator for ShiftedNegEntropy2 {
    fn dimension(&self) -> usize {
        2
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.domain_check(x)?;
        Ok(x.iter().map(|v| v * v.ln() - v).sum())
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain_check(x)?;
        Ok(x.iter().map(|v| v.ln()).collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.domain_check(x)?;
        Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_fn(2, |i, _| 1.0 / x[i])))
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(2, x.len())?;
        check_finite(x, "generator input")?;
        for (i, &v) in x.iter().enumerate() {
            if v <= 0.0 {
                return Err(Error::domain(i, "coordinates must be strictly positive"));
            }
        }
        Ok(())
    }

    fn gradient_inverse_seed(&self, _target: &[f64]) -> Vec<f64> {
        vec![1.0, 1.0]
    }
}

/// Conjugate of [`ShiftedNegEntropy2`]: F*(y) = Σᵢ e^{yᵢ} on all of ℝ².
#[derive(Clone, Debug)]
pub struct SumExp2;

impl ScalarFn for SumExp2 {
    fn dim(&self) -> usize {
        2
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        Ok(x[0].exp() + x[1].exp())
    }
}

impl crate::generator::Generator for SumExp2 {
    fn dimension(&self) -> usize {
        2
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.domain_check(x)?;
        Ok(x.iter().map(|v| v.exp()).sum())
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain_check(x)?;
        Ok(x.iter().map(|v| v.exp()).collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.domain_check(x)?;
        Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_fn(2, |i, _| x[i].exp())))
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(2, x.len())?;
        check_finite(x, "generator input")
    }
}

/// Positive quadrant of the plane under the extended Kullback-Leibler
/// geometry. The primal chart carries the intensities themselves (λ ≡ θ),
/// the dual chart their logarithms.
pub struct EKL2DManifold {
    m: BregmanManifold,
}

impl EKL2DManifold {
    pub fn new() -> Result<Self> {
        let mut m = BregmanManifold::new(Arc::new(ShiftedNegEntropy2), Some(Arc::new(SumExp2)))?;
        m.register_coords(CoordinateTag::lambda(), 2);
        let id: ConvertFn = Arc::new(|x: &[f64]| Ok(x.to_vec()));
        m.register_conversion(&CoordinateTag::lambda(), &CoordinateTag::theta(), id.clone())?;
        m.register_conversion(&CoordinateTag::theta(), &CoordinateTag::lambda(), id)?;
        Ok(EKL2DManifold { m })
    }

    pub fn manifold(&self) -> &BregmanManifold {
        &self.m
    }

    /// Point in the primal chart from a pair of positive intensities.
    pub fn point_from_intensities(&self, x: &[f64]) -> Result<Point> {
        check_dim(2, x.len())?;
        self.m.theta_generator().domain_check(x)?;
        Point::theta(x.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::Generator;
    use crate::measures::bregman_divergence;
    use crate::point::DualCoordinate;
    use approx::assert_relative_eq;

    #[test]
    fn conjugate_at_the_origin_is_two() {
        let ekl = EKL2DManifold::new().unwrap();
        assert_relative_eq!(ekl.manifold().conjugate_value(&[0.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn divergence_is_extended_kl() {
        let ekl = EKL2DManifold::new().unwrap();
        let p = ekl.point_from_intensities(&[2.0, 0.5]).unwrap();
        let q = ekl.point_from_intensities(&[1.0, 1.5]).unwrap();
        let expected: f64 = [(2.0, 1.0), (0.5, 1.5)]
            .iter()
            .map(|&(a, b): &(f64, f64)| a * (a / b).ln() - a + b)
            .sum();
        let got = bregman_divergence(ekl.manifold(), &p, &q, DualCoordinate::Primal).unwrap();
        assert_relative_eq!(got, expected, epsilon = 1e-12);
    }

    #[test]
    fn charts_are_log_linked() {
        let ekl = EKL2DManifold::new().unwrap();
        let p = ekl.point_from_intensities(&[2.0, 0.5]).unwrap();
        let eta = ekl.manifold().coords_in(&p, DualCoordinate::Dual).unwrap();
        assert_relative_eq!(eta[0], 2.0_f64.ln(), epsilon = 1e-15);
        assert_relative_eq!(eta[1], 0.5_f64.ln(), epsilon = 1e-15);
        let back = ekl.manifold().legendre_dual_coord(&Point::eta(eta).unwrap()).unwrap();
        assert_eq!(back.coords, CoordinateTag::eta());
    }

    #[test]
    fn quadrant_boundary_is_rejected() {
        let ekl = EKL2DManifold::new().unwrap();
        assert!(ekl.point_from_intensities(&[0.0, 1.0]).is_err());
        assert!(ekl.point_from_intensities(&[1.0, -2.0]).is_err());
        let bad = ShiftedNegEntropy2.value(&[1.0, -1.0]);
        assert!(bad.is_err());
    }
}
