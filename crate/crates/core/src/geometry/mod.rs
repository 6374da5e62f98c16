//! Geodesics of the two flat connections, Bregman bisectors and balls, the
//! Lambert-W boundary curve of extended-KL spheres, and parallel transport.

mod ball;
mod bisector;
mod geodesic;
mod lambert;

pub use ball::{ball_is_in, ekl_ball_curve, BregmanBall, EklBallCurve};
pub use bisector::{bisector, BregmanBisector};
pub use geodesic::{geodesic, BregmanGeodesic};
pub use lambert::lambert_w;

use crate::error::{check_dim, check_finite, Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::{DualCoordinate, Point};
use nalgebra::DVector;

/// Number of segments used when a sampling count is not specified.
pub const DEFAULT_CURVE_SAMPLES: usize = 256;

/// A parametric curve over t ∈ [0, 1].
pub trait Curve {
    /// Point at parameter `t ∈ [0, 1]`.
    fn point_at(&self, t: f64) -> Result<Point>;

    /// `n + 1` uniformly spaced points at t = i/n.
    fn sample(&self, n: usize) -> Result<Vec<Point>> {
        if n == 0 {
            return Err(Error::invalid("sampling needs at least one segment"));
        }
        (0..=n).map(|i| self.point_at(i as f64 / n as f64)).collect()
    }
}

/// Rejects curve parameters outside the closed unit interval.
pub fn check_unit_interval(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::invalid(format!("curve parameter {t} is outside [0, 1]")))
    }
}

/// Parallel transport of a tangent vector along the flat connection of the
/// selected chart. In its own affine coordinates the connection is flat, so
/// the components are carried over unchanged; both endpoints are still
/// validated for convertibility.
pub fn dual_parallel_transport(
    m: &BregmanManifold,
    v: &[f64],
    from: &Point,
    to: &Point,
    dc: DualCoordinate,
) -> Result<Vec<f64>> {
    check_dim(m.dimension(), v.len())?;
    check_finite(v, "tangent vector")?;
    m.coords_in(from, dc)?;
    m.coords_in(to, dc)?;
    Ok(v.to_vec())
}

/// Re-expresses a tangent vector at `at` between the two flat charts. The
/// Jacobian of η(θ) is ∇²F, so θ-components push forward by the primal
/// Hessian and η-components push back by the dual one.
pub fn tangent_convert(
    m: &BregmanManifold,
    v: &[f64],
    at: &Point,
    from: DualCoordinate,
    to: DualCoordinate,
) -> Result<Vec<f64>> {
    check_dim(m.dimension(), v.len())?;
    check_finite(v, "tangent vector")?;
    if from == to {
        return Ok(v.to_vec());
    }
    let x = m.coords_in(at, from)?;
    let jac = m.chart_potential(from).hessian(&x)?;
    let out = jac * DVector::from_column_slice(v);
    Ok(out.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::QuadraticGenerator;
    use approx::assert_relative_eq;
    use std::sync::Arc;

    #[test]
    fn transport_is_identity_on_components() {
        let m = BregmanManifold::new(Arc::new(QuadraticGenerator { dim: 2 }), None).unwrap();
        let a = Point::theta(vec![0.0, 0.0]).unwrap();
        let b = Point::theta(vec![3.0, -1.0]).unwrap();
        let v = [1.0, 2.0];
        let out = dual_parallel_transport(&m, &v, &a, &b, DualCoordinate::Primal).unwrap();
        assert_eq!(out, v.to_vec());
        let out = dual_parallel_transport(&m, &v, &a, &a, DualCoordinate::Dual).unwrap();
        assert_eq!(out, v.to_vec());
    }

    #[test]
    fn tangent_conversion_roundtrips_through_the_hessians() {
        let m = BregmanManifold::new(Arc::new(QuadraticGenerator { dim: 2 }), None).unwrap();
        let p = Point::theta(vec![0.5, 0.25]).unwrap();
        let v = [0.3, -0.7];
        let pushed =
            tangent_convert(&m, &v, &p, DualCoordinate::Primal, DualCoordinate::Dual).unwrap();
        let back =
            tangent_convert(&m, &pushed, &p, DualCoordinate::Dual, DualCoordinate::Primal)
                .unwrap();
        for i in 0..2 {
            assert_relative_eq!(back[i], v[i], epsilon = 1e-12);
        }
    }
}
