use crate::error::{Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::{DualCoordinate, Point};

/// Bregman bisector, stored as the hyperplane ⟨x, normal⟩ = offset in its
/// natural chart.
///
/// The right-sided condition B(x:p) = B(x:q) is linear in the θ-chart (the
/// divergence is affine in its first argument's potential terms), while the
/// left-sided condition B(p:x) = B(q:x) is linear in the η-chart. `dcoords`
/// selects which chart the hyperplane lives in.
pub struct BregmanBisector<'a> {
    manifold: &'a BregmanManifold,
    p: Point,
    q: Point,
    dcoords: DualCoordinate,
    normal: Vec<f64>,
    offset: f64,
}

/// Bisector of `p` and `q` in the `dc` chart.
///
/// For `Primal` the hyperplane lives in θ-coordinates with normal
/// η(q) − η(p) and offset F*(η(q)) − F*(η(p)); its points satisfy
/// B(x:p) = B(x:q). For `Dual` it lives in η-coordinates with normal
/// θ(q) − θ(p) and offset F(θ(q)) − F(θ(p)); its points satisfy
/// B(p:x) = B(q:x).
pub fn bisector<'a>(
    m: &'a BregmanManifold,
    p: &Point,
    q: &Point,
    dc: DualCoordinate,
) -> Result<BregmanBisector<'a>> {
    // The normal lives in the chart dual to the hyperplane's chart.
    let other = dc.other();
    let p_o = m.coords_in(p, other)?;
    let q_o = m.coords_in(q, other)?;
    let normal: Vec<f64> = q_o.iter().zip(&p_o).map(|(b, a)| b - a).collect();
    if normal.iter().all(|v| *v == 0.0) {
        return Err(Error::DegenerateBisector);
    }
    let pot = m.chart_potential(other);
    let offset = pot.value(&q_o)? - pot.value(&p_o)?;
    Ok(BregmanBisector {
        manifold: m,
        p: p.clone(),
        q: q.clone(),
        dcoords: dc,
        normal,
        offset,
    })
}

impl BregmanBisector<'_> {
    pub fn manifold(&self) -> &BregmanManifold {
        self.manifold
    }

    pub fn p(&self) -> &Point {
        &self.p
    }

    pub fn q(&self) -> &Point {
        &self.q
    }

    pub fn dcoords(&self) -> DualCoordinate {
        self.dcoords
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed residual ⟨x, normal⟩ − offset for `x` given in the bisector's
    /// own chart; zero on the hyperplane.
    pub fn residual(&self, x: &[f64]) -> Result<f64> {
        crate::error::check_dim(self.normal.len(), x.len())?;
        let inner: f64 = x.iter().zip(&self.normal).map(|(a, b)| a * b).sum();
        Ok(inner - self.offset)
    }

    /// Membership test for a point in any coordinates.
    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        let x_dc = self.manifold.coords_in(x, self.dcoords)?;
        Ok(self.residual(&x_dc)?.abs() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::QuadraticGenerator;
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn euclidean(dim: usize) -> BregmanManifold {
        BregmanManifold::new(Arc::new(QuadraticGenerator { dim }), None).unwrap()
    }

    #[test]
    fn quadratic_bisector_is_the_euclidean_one() {
        let m = euclidean(2);
        let p = Point::theta(vec![0.0, 0.0]).unwrap();
        let q = Point::theta(vec![2.0, 0.0]).unwrap();
        let b = bisector(&m, &p, &q, DualCoordinate::Primal).unwrap();
        // ⟨x, (2,0)⟩ = 2 describes the vertical line x₁ = 1.
        assert_eq!(b.normal(), &[2.0, 0.0]);
        assert_relative_eq!(b.offset(), 2.0);
        for x2 in [-5.0, 0.0, 3.5] {
            assert_relative_eq!(b.residual(&[1.0, x2]).unwrap(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn swapping_anchors_negates_normal_and_offset() {
        let m = euclidean(2);
        let p = Point::theta(vec![0.5, -1.0]).unwrap();
        let q = Point::theta(vec![-0.25, 2.0]).unwrap();
        for dc in [DualCoordinate::Primal, DualCoordinate::Dual] {
            let b1 = bisector(&m, &p, &q, dc).unwrap();
            let b2 = bisector(&m, &q, &p, dc).unwrap();
            for i in 0..2 {
                assert_relative_eq!(b1.normal()[i], -b2.normal()[i]);
            }
            assert_relative_eq!(b1.offset(), -b2.offset());
        }
    }

    #[test]
    fn coincident_anchors_are_degenerate() {
        let m = euclidean(2);
        let p = Point::theta(vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            bisector(&m, &p, &p, DualCoordinate::Primal),
            Err(Error::DegenerateBisector)
        ));
    }
}
