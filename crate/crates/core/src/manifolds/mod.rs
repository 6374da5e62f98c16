//! Ready-made Bregman manifolds for common statistical families.
//!
//! Each type wraps a [`BregmanManifold`](crate::BregmanManifold) whose
//! primal generator is the family's log-partition (or an equivalent convex
//! potential), registers the family's source parameterisation as the λ-chart,
//! and exposes typed constructors for points.

mod categorical;
mod ekl2d;
mod gaussian;
mod mixture;
mod psd;

pub use categorical::{
    CategoricalManifold, MultinomialCumulant, MultinomialManifold, MultinomialNegEntropy,
};
pub use ekl2d::{EKL2DManifold, ShiftedNegEntropy2, SumExp2};
pub use gaussian::{
    fisher_rao_curve_length, fisher_rao_distance_uni, fisher_rao_geodesic,
    fisher_rao_geodesic_with, gaussian_kl, FisherRaoGeodesic, FisherRaoMethod, GaussianCumulant,
    GaussianDualPotential, GaussianManifold,
};
pub use mixture::{categorical_to_mixture, mixture_to_categorical, DiscreteMixtureManifold};
pub use psd::{spd_geometric_mean, LogDetCumulant, LogDetDualPotential, PSDManifold};
