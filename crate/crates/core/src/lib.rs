//! Numerical kernel for dually flat spaces.
//!
//! A Bregman manifold is described by a strictly convex potential F on a
//! flat θ-chart; its Legendre conjugate F* governs the dual η-chart, the
//! gradient maps ∇F/∇F* convert between the two, and the Hessians supply a
//! Riemannian metric. This crate provides that machinery (with forward-mode
//! AD when closed-form derivatives are not supplied), geometric primitives
//! (geodesics, bisectors, balls), divergences and barycenters, and a set of
//! concrete manifolds: categorical/multinomial families, discrete mixtures,
//! multivariate Gaussians, the SPD logdet cone, and a 2D extended-KL space.

pub mod ad;
pub mod atlas;
pub mod error;
pub mod generator;
pub mod geometry;
pub mod linalg;
pub mod manifold;
pub mod manifolds;
pub mod measures;
pub mod point;

pub use atlas::Atlas;
pub use error::{Error, Result};
pub use generator::{AutoDiffGenerator, Generator, QuadraticGenerator};
pub use geometry::{
    ball_is_in, bisector, dual_parallel_transport, ekl_ball_curve, geodesic, lambert_w,
    tangent_convert, BregmanBall, BregmanBisector, BregmanGeodesic, Curve, EklBallCurve,
    DEFAULT_CURVE_SAMPLES,
};
pub use manifold::{invert_gradient, BregmanManifold, ChartPotential};
pub use measures::{
    bhattacharyya_distance, bregman_divergence, chernoff_information, chernoff_point,
    dual_barycenter, fenchel_young_divergence, inductive_midpoint_mean,
    skew_burbea_rao_barycenter, skew_jensen_divergence, skew_jensen_objective, Barycenter,
    Dissimilarity,
};
pub use point::{CoordinateTag, DualCoordinate, Point};
