use crate::error::{check_finite, Error, Result};
use std::fmt;

/// Name of a coordinate system. Tags compare by name only.
///
/// `theta` and `eta` are the two flat systems every manifold carries;
/// application manifolds also register `lambda` for their ordinary
/// (source) parameters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordinateTag(String);

impl CoordinateTag {
    pub const THETA: &'static str = "theta";
    pub const ETA: &'static str = "eta";
    pub const LAMBDA: &'static str = "lambda";

    pub fn new(name: impl Into<String>) -> Self {
        CoordinateTag(name.into())
    }

    pub fn theta() -> Self {
        CoordinateTag(Self::THETA.to_string())
    }

    pub fn eta() -> Self {
        CoordinateTag(Self::ETA.to_string())
    }

    pub fn lambda() -> Self {
        CoordinateTag(Self::LAMBDA.to_string())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CoordinateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<DualCoordinate> for CoordinateTag {
    fn from(dc: DualCoordinate) -> Self {
        match dc {
            DualCoordinate::Primal => CoordinateTag::theta(),
            DualCoordinate::Dual => CoordinateTag::eta(),
        }
    }
}

/// Selector restricted to the two flat coordinate systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DualCoordinate {
    /// θ, the chart in which the primal connection is flat.
    Primal,
    /// η, the chart in which the dual connection is flat.
    Dual,
}

impl DualCoordinate {
    pub fn tag(self) -> CoordinateTag {
        self.into()
    }

    /// The opposite flat system.
    pub fn other(self) -> Self {
        match self {
            DualCoordinate::Primal => DualCoordinate::Dual,
            DualCoordinate::Dual => DualCoordinate::Primal,
        }
    }
}

impl fmt::Display for DualCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualCoordinate::Primal => f.write_str("theta"),
            DualCoordinate::Dual => f.write_str("eta"),
        }
    }
}

/// A coordinate vector annotated with the system it lives in.
///
/// Points carry no reference to a manifold; length and domain checks happen
/// when an operation receives them.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub coords: CoordinateTag,
    pub data: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting non-finite entries.
    pub fn new(coords: CoordinateTag, data: Vec<f64>) -> Result<Self> {
        check_finite(&data, "point data")?;
        Ok(Point { coords, data })
    }

    pub fn theta(data: Vec<f64>) -> Result<Self> {
        Point::new(CoordinateTag::theta(), data)
    }

    pub fn eta(data: Vec<f64>) -> Result<Self> {
        Point::new(CoordinateTag::eta(), data)
    }

    pub fn lambda(data: Vec<f64>) -> Result<Self> {
        Point::new(CoordinateTag::lambda(), data)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    /// Confirms this point is tagged with `expected`.
    pub fn expect_coords(&self, expected: &CoordinateTag) -> Result<()> {
        if &self.coords == expected {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "point is in `{}` coordinates, expected `{}`",
                self.coords, expected
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_compare_by_name() {
        assert_eq!(CoordinateTag::new("theta"), CoordinateTag::theta());
        assert_ne!(CoordinateTag::theta(), CoordinateTag::eta());
        assert_eq!(CoordinateTag::from(DualCoordinate::Primal).name(), "theta");
        assert_eq!(CoordinateTag::from(DualCoordinate::Dual).name(), "eta");
    }

    #[test]
    fn non_finite_data_is_rejected() {
        assert!(Point::theta(vec![1.0, f64::NAN]).is_err());
        assert!(Point::theta(vec![1.0, f64::INFINITY]).is_err());
        assert!(Point::theta(vec![1.0, -2.0]).is_ok());
    }
}
