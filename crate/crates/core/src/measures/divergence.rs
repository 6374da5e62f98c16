use super::Dissimilarity;
use crate::error::{Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::{DualCoordinate, Point};

/// B_G(x₁ : x₂) = G(x₁) − G(x₂) − ⟨x₁ − x₂, ∇G(x₂)⟩, where G is F on the
/// θ-chart or F* on the η-chart depending on `dc`.
pub fn bregman_divergence(
    m: &BregmanManifold,
    p: &Point,
    q: &Point,
    dc: DualCoordinate,
) -> Result<f64> {
    let x1 = m.coords_in(p, dc)?;
    let x2 = m.coords_in(q, dc)?;
    m.chart_potential(dc).bregman(&x1, &x2)
}

/// Y(θ₁, η₂) = F(θ₁) + F*(η₂) − ⟨θ₁, η₂⟩: the canonical divergence in mixed
/// coordinates. Equals B_F(θ₁:θ₂) when η₂ = ∇F(θ₂).
pub fn fenchel_young_divergence(m: &BregmanManifold, p: &Point, q: &Point) -> Result<f64> {
    let theta1 = m.coords_in(p, DualCoordinate::Primal)?;
    let eta2 = m.coords_in(q, DualCoordinate::Dual)?;
    let inner: f64 = theta1.iter().zip(&eta2).map(|(t, e)| t * e).sum();
    Ok(m.chart_potential(DualCoordinate::Primal).value(&theta1)? + m.conjugate_value(&eta2)?
        - inner)
}

/// Skew Jensen divergence with skew α ∈ [−1, 1].
///
/// The Jensen gap weights (1+α)/2 on the first argument, so the scaled form
/// 4/(1−α²)·J interpolates the sided Bregman divergences: at α = −1 it is
/// B(x₁:x₂) (the vanishing-weight argument moves into the first slot) and at
/// α = +1 it is B(x₂:x₁). `scaled = false` returns the raw Jensen gap.
pub fn skew_jensen_divergence(
    m: &BregmanManifold,
    p: &Point,
    q: &Point,
    alpha: f64,
    dc: DualCoordinate,
    scaled: bool,
) -> Result<f64> {
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("skew parameter {alpha} is outside [-1, 1]")));
    }
    let x1 = m.coords_in(p, dc)?;
    let x2 = m.coords_in(q, dc)?;
    let pot = m.chart_potential(dc);
    if scaled {
        if alpha == -1.0 {
            return pot.bregman(&x1, &x2);
        }
        if alpha == 1.0 {
            return pot.bregman(&x2, &x1);
        }
    }
    let w1 = (1.0 + alpha) / 2.0;
    let w2 = (1.0 - alpha) / 2.0;
    let mix: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| w1 * a + w2 * b).collect();
    let gap = w1 * pot.value(&x1)? + w2 * pot.value(&x2)? - pot.value(&mix)?;
    if scaled {
        Ok(4.0 / (1.0 - alpha * alpha) * gap)
    } else {
        Ok(gap)
    }
}

/// Jensen gap of F at the θ-midpoint: F(θ₁)/2 + F(θ₂)/2 − F((θ₁+θ₂)/2).
/// On an exponential-family cumulant this is the Bhattacharyya distance.
pub fn bhattacharyya_distance(m: &BregmanManifold, p: &Point, q: &Point) -> Result<f64> {
    skew_jensen_divergence(m, p, q, 0.0, DualCoordinate::Primal, false)
}

/// [`bregman_divergence`] as a bound value.
pub struct BregmanDivergence<'a> {
    m: &'a BregmanManifold,
    dc: DualCoordinate,
}

impl<'a> BregmanDivergence<'a> {
    pub fn new(m: &'a BregmanManifold, dc: DualCoordinate) -> Self {
        BregmanDivergence { m, dc }
    }
}

impl Dissimilarity for BregmanDivergence<'_> {
    fn manifold(&self) -> &BregmanManifold {
        self.m
    }
    fn eval(&self, p: &Point, q: &Point) -> Result<f64> {
        bregman_divergence(self.m, p, q, self.dc)
    }
}

/// [`fenchel_young_divergence`] as a bound value.
pub struct FenchelYoungDivergence<'a> {
    m: &'a BregmanManifold,
}

impl<'a> FenchelYoungDivergence<'a> {
    pub fn new(m: &'a BregmanManifold) -> Self {
        FenchelYoungDivergence { m }
    }
}

impl Dissimilarity for FenchelYoungDivergence<'_> {
    fn manifold(&self) -> &BregmanManifold {
        self.m
    }
    fn eval(&self, p: &Point, q: &Point) -> Result<f64> {
        fenchel_young_divergence(self.m, p, q)
    }
}

/// [`skew_jensen_divergence`] as a bound value.
pub struct SkewJensenDivergence<'a> {
    m: &'a BregmanManifold,
    pub alpha: f64,
    pub dc: DualCoordinate,
    pub scaled: bool,
}

impl<'a> SkewJensenDivergence<'a> {
    pub fn new(m: &'a BregmanManifold, alpha: f64, dc: DualCoordinate, scaled: bool) -> Self {
        SkewJensenDivergence { m, alpha, dc, scaled }
    }
}

impl Dissimilarity for SkewJensenDivergence<'_> {
    fn manifold(&self) -> &BregmanManifold {
        self.m
    }
    fn eval(&self, p: &Point, q: &Point) -> Result<f64> {
        skew_jensen_divergence(self.m, p, q, self.alpha, self.dc, self.scaled)
    }
}

/// [`bhattacharyya_distance`] as a bound value.
pub struct BhattacharyyaDistance<'a> {
    m: &'a BregmanManifold,
}

impl<'a> BhattacharyyaDistance<'a> {
    pub fn new(m: &'a BregmanManifold) -> Self {
        BhattacharyyaDistance { m }
    }
}

impl Dissimilarity for BhattacharyyaDistance<'_> {
    fn manifold(&self) -> &BregmanManifold {
        self.m
    }
    fn eval(&self, p: &Point, q: &Point) -> Result<f64> {
        bhattacharyya_distance(self.m, p, q)
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
    fn diagonal_vanishes() {
        let m = euclidean(2);
        let p = Point::theta(vec![0.4, -1.2]).unwrap();
        for dc in [DualCoordinate::Primal, DualCoordinate::Dual] {
            assert_eq!(bregman_divergence(&m, &p, &p, dc).unwrap(), 0.0);
            for alpha in [-1.0, -0.3, 0.0, 0.8, 1.0] {
                assert_relative_eq!(
                    skew_jensen_divergence(&m, &p, &p, alpha, dc, true).unwrap(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
        assert_relative_eq!(bhattacharyya_distance(&m, &p, &p).unwrap(), 0.0);
    }

    #[test]
    fn quadratic_divergence_is_half_squared_distance() {
        let m = euclidean(2);
        let p = Point::theta(vec![0.0, 0.0]).unwrap();
        let q = Point::theta(vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(
            bregman_divergence(&m, &p, &q, DualCoordinate::Primal).unwrap(),
            1.0
        );
    }

    #[test]
    fn fenchel_young_mixed_coordinates() {
        let m = euclidean(2);
        let p = Point::theta(vec![1.0, 0.0]).unwrap();
        let q_eta = Point::eta(vec![0.0, 1.0]).unwrap();
        assert_relative_eq!(fenchel_young_divergence(&m, &p, &q_eta).unwrap(), 1.0);
        // Matched pair: η = ∇F(θ) zeroes the gap.
        let matched = m.legendre_dual_coord(&p).unwrap();
        assert_relative_eq!(
            fenchel_young_divergence(&m, &p, &matched).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn skew_jensen_hits_the_sided_limits() {
        let m = euclidean(2);
        let p = Point::theta(vec![0.2, -0.5]).unwrap();
        let q = Point::theta(vec![1.3, 0.4]).unwrap();
        let dc = DualCoordinate::Primal;
        let left = bregman_divergence(&m, &p, &q, dc).unwrap();
        let right = bregman_divergence(&m, &q, &p, dc).unwrap();
        assert_eq!(skew_jensen_divergence(&m, &p, &q, -1.0, dc, true).unwrap(), left);
        assert_eq!(skew_jensen_divergence(&m, &p, &q, 1.0, dc, true).unwrap(), right);
    }

    #[test]
    fn quadratic_scaled_jensen_is_alpha_independent() {
        let m = euclidean(2);
        let p = Point::theta(vec![0.2, -0.5]).unwrap();
        let q = Point::theta(vec![1.3, 0.4]).unwrap();
        let want = 0.5 * ((1.3f64 - 0.2).powi(2) + (0.4f64 + 0.5).powi(2));
        for alpha in [-0.9, -0.25, 0.0, 0.5, 0.99] {
            let got =
                skew_jensen_divergence(&m, &p, &q, alpha, DualCoordinate::Primal, true).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-11);
        }
    }

    #[test]
    fn bhattacharyya_is_symmetric() {
        let m = euclidean(3);
        let p = Point::theta(vec![0.1, 0.2, 0.3]).unwrap();
        let q = Point::theta(vec![-0.4, 0.9, 0.0]).unwrap();
        assert_relative_eq!(
            bhattacharyya_distance(&m, &p, &q).unwrap(),
            bhattacharyya_distance(&m, &q, &p).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn out_of_range_alpha_is_rejected() {
        let m = euclidean(1);
        let p = Point::theta(vec![0.0]).unwrap();
        let q = Point::theta(vec![1.0]).unwrap();
        assert!(
            skew_jensen_divergence(&m, &p, &q, 1.5, DualCoordinate::Primal, true).is_err()
        );
    }
}
