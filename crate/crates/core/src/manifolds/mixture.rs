use crate::atlas::ConvertFn;
use crate::error::{check_dim, Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::{CoordinateTag, Point};
use std::sync::Arc;

use super::categorical::{check_simplex, CategoricalManifold, MultinomialCumulant, MultinomialNegEntropy};

/// Family of mixtures of k fixed component distributions, parameterized by
/// the first k−1 mixing weights. The natural chart carries the weights
/// themselves with the negentropy generator, so the primal chart here is the
/// dual chart of [`CategoricalManifold`] and vice versa.
pub struct DiscreteMixtureManifold {
    k: usize,
    m: BregmanManifold,
}

impl DiscreteMixtureManifold {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("a mixture family needs at least two components"));
        }
        let mut m = BregmanManifold::new(
            Arc::new(MultinomialNegEntropy { k, n: 1.0 }),
            Some(Arc::new(MultinomialCumulant { k, n: 1.0 })),
        )?;

        m.register_coords(CoordinateTag::lambda(), k);
        let lambda_to_theta: ConvertFn = Arc::new(move |w: &[f64]| {
            check_simplex(w)?;
            Ok(w[..k - 1].to_vec())
        });
        m.register_conversion(&CoordinateTag::lambda(), &CoordinateTag::theta(), lambda_to_theta)?;
        let theta_to_lambda: ConvertFn = Arc::new(move |t: &[f64]| {
            let mut w = t.to_vec();
            w.push(1.0 - t.iter().sum::<f64>());
            check_simplex(&w)?;
            Ok(w)
        });
        m.register_conversion(&CoordinateTag::theta(), &CoordinateTag::lambda(), theta_to_lambda)?;

        Ok(DiscreteMixtureManifold { k, m })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn manifold(&self) -> &BregmanManifold {
        &self.m
    }

    /// Point in λ-coordinates from a full weight vector.
    pub fn point_from_weights(&self, w: &[f64]) -> Result<Point> {
        check_dim(self.k, w.len())?;
        check_simplex(w)?;
        Point::lambda(w.to_vec())
    }
}

/// Maps a categorical point to the mixture-manifold θ-point holding the same
/// distribution's first k−1 probabilities as mixing weights.
pub fn categorical_to_mixture(cat: &CategoricalManifold, p: &Point) -> Result<Point> {
    let lam = cat.manifold().atlas_convert(p, &CoordinateTag::lambda())?;
    Point::theta(lam.data[..cat.k() - 1].to_vec())
}

/// Inverse of [`categorical_to_mixture`]: reads a mixture point's weights and
/// returns the categorical λ-point with those probabilities.
pub fn mixture_to_categorical(mix: &DiscreteMixtureManifold, p: &Point) -> Result<Point> {
    mix.manifold().atlas_convert(p, &CoordinateTag::lambda())
}
