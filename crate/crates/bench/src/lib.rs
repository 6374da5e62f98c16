//! Deterministic fixtures shared by the criterion benchmarks.

use bregkern_core::manifolds::{DiscreteMixtureManifold, GaussianManifold, PSDManifold};
use bregkern_core::Point;
use nalgebra::DMatrix;

/// A bivariate normal pair with distinct means and covariances.
pub fn gaussian_pair() -> (GaussianManifold, Point, Point) {
    let g = GaussianManifold::new(2).unwrap();
    let c1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
    let c2 = DMatrix::from_row_slice(2, 2, &[1.2, -0.4, -0.4, 0.6]);
    let p = g.point_from_mean_cov(&[0.0, 0.0], &c1).unwrap();
    let q = g.point_from_mean_cov(&[3.0, 2.0], &c2).unwrap();
    (g, p, q)
}

/// A 3x3 SPD pair with visibly different spectra.
pub fn spd_pair() -> (PSDManifold, Point, Point) {
    let psd = PSDManifold::new(3).unwrap();
    let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 0.8]);
    let b = DMatrix::from_row_slice(3, 3, &[0.9, -0.1, 0.0, -0.1, 2.5, 0.4, 0.0, 0.4, 1.1]);
    let p = psd.point_from_matrix(&a).unwrap();
    let q = psd.point_from_matrix(&b).unwrap();
    (psd, p, q)
}

/// Smooth strictly positive histograms on `k` bins as mixture-family points.
pub fn histogram_points(k: usize, count: usize) -> (DiscreteMixtureManifold, Vec<Point>) {
    let mix = DiscreteMixtureManifold::new(k).unwrap();
    let mut points = Vec::with_capacity(count);
    for j in 0..count {
        let center = (j as f64 + 1.0) * k as f64 / (count as f64 + 1.0);
        let mut w: Vec<f64> = (0..k)
            .map(|i| (-((i as f64 - center) / (k as f64 / 6.0)).powi(2)).exp() + 1e-6)
            .collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        points.push(mix.point_from_weights(&w).unwrap());
    }
    (mix, points)
}
