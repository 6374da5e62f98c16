use super::Dissimilarity;
use crate::error::{Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::{DualCoordinate, Point};

/// Skew of the exponential-geodesic point equidistant from both inputs.
///
/// Returns α* ∈ (0,1) such that θ(α*) = α*θ₁ + (1−α*)θ₂ satisfies
/// B_F(θ₁ : θ(α*)) = B_F(θ₂ : θ(α*)), i.e. the geodesic point lies on the
/// dual bisector of the pair. Found by bisection; the sided difference is
/// continuous in α and changes sign across (0, 1).
pub fn chernoff_point(m: &BregmanManifold, p: &Point, q: &Point) -> Result<f64> {
    let theta1 = m.coords_in(p, DualCoordinate::Primal)?;
    let theta2 = m.coords_in(q, DualCoordinate::Primal)?;
    if theta1 == theta2 {
        return Err(Error::invalid("Chernoff point needs two distinct points"));
    }
    let pot = m.chart_potential(DualCoordinate::Primal);
    let sided_gap = |alpha: f64| -> Result<f64> {
        let mix: Vec<f64> =
            theta1.iter().zip(&theta2).map(|(a, b)| alpha * a + (1.0 - alpha) * b).collect();
        Ok(pot.bregman(&theta1, &mix)? - pot.bregman(&theta2, &mix)?)
    };

    let mut lo = 1e-9;
    let mut hi = 1.0 - 1e-9;
    let g_lo = sided_gap(lo)?;
    let g_hi = sided_gap(hi)?;
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::convergence(
            "Chernoff bisection bracket",
            0,
            g_lo.abs().min(g_hi.abs()),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sided_gap(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let residual = sided_gap(alpha)?.abs();
    if residual > 1e-10 {
        return Err(Error::convergence("Chernoff bisection", 200, residual));
    }
    Ok(alpha)
}

/// Divergence from either input to the Chernoff point: B_F(θ₁ : θ(α*)),
/// which equals the maximal skew Bhattacharyya divergence of the pair.
pub fn chernoff_information(m: &BregmanManifold, p: &Point, q: &Point) -> Result<f64> {
    let alpha = chernoff_point(m, p, q)?;
    let theta1 = m.coords_in(p, DualCoordinate::Primal)?;
    let theta2 = m.coords_in(q, DualCoordinate::Primal)?;
    let mix: Vec<f64> =
        theta1.iter().zip(&theta2).map(|(a, b)| alpha * a + (1.0 - alpha) * b).collect();
    m.chart_potential(DualCoordinate::Primal).bregman(&theta1, &mix)
}

/// [`chernoff_information`] as a bound value.
pub struct ChernoffInformation<'a> {
    m: &'a BregmanManifold,
}

impl<'a> ChernoffInformation<'a> {
    pub fn new(m: &'a BregmanManifold) -> Self {
        ChernoffInformation { m }
    }
}

impl Dissimilarity for ChernoffInformation<'_> {
    fn manifold(&self) -> &BregmanManifold {
        self.m
    }
    fn eval(&self, p: &Point, q: &Point) -> Result<f64> {
        chernoff_information(self.m, p, q)
    }
}
