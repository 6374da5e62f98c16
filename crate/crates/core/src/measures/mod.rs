//! Dissimilarity measures and point aggregators: Bregman / Fenchel-Young /
//! skew Jensen / Bhattacharyya / Chernoff divergences, sided dual-coordinate
//! barycenters, the CCCP skew Burbea-Rao barycenter, and the inductive
//! arithmetic-harmonic midpoint mean.

mod barycenter;
mod chernoff;
mod divergence;

pub use barycenter::{
    dual_barycenter, inductive_midpoint_mean, skew_burbea_rao_barycenter,
    skew_jensen_objective, DualBarycenter, SkewBurbeaRaoBarycenter,
};
pub use chernoff::{chernoff_information, chernoff_point, ChernoffInformation};
pub use divergence::{
    bhattacharyya_distance, bregman_divergence, fenchel_young_divergence,
    skew_jensen_divergence, BhattacharyyaDistance, BregmanDivergence, FenchelYoungDivergence,
    SkewJensenDivergence,
};

use crate::error::{Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::Point;

/// A two-point dissimilarity bound to a manifold. Asymmetric in general;
/// zero on the diagonal and non-negative for Legendre-type generators.
pub trait Dissimilarity {
    fn manifold(&self) -> &BregmanManifold;
    fn eval(&self, p: &Point, q: &Point) -> Result<f64>;
}

/// An aggregator mapping weighted point lists to a single point. Weights
/// may arrive unnormalized; implementations normalize internally.
pub trait Barycenter {
    fn manifold(&self) -> &BregmanManifold;
    fn aggregate(&self, points: &[Point], weights: &[f64]) -> Result<Point>;
}

/// Validates and normalizes barycenter weights to sum 1.
fn normalize_weights(points: &[Point], weights: &[f64]) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Err(Error::invalid("barycenter needs at least one point"));
    }
    if points.len() != weights.len() {
        return Err(Error::invalid(format!(
            "{} points but {} weights",
            points.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::invalid("weights must be finite and non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("weights must not all be zero"));
    }
    Ok(weights.iter().map(|w| w / total).collect())
}
