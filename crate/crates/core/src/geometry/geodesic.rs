use super::{check_unit_interval, Curve};
use crate::error::Result;
use crate::manifold::BregmanManifold;
use crate::point::{DualCoordinate, Point};

/// Geodesic of one flat connection. In the chart where that connection is
/// flat the path is the straight segment between the endpoints; in the
/// other chart it is curved.
pub struct BregmanGeodesic<'a> {
    manifold: &'a BregmanManifold,
    source: Point,
    dest: Point,
    dcoords: DualCoordinate,
    src_dc: Vec<f64>,
    dst_dc: Vec<f64>,
}

/// Geodesic from `src` to `dst` under the `dc`-flat connection.
pub fn geodesic<'a>(
    m: &'a BregmanManifold,
    src: &Point,
    dst: &Point,
    dc: DualCoordinate,
) -> Result<BregmanGeodesic<'a>> {
    let src_dc = m.coords_in(src, dc)?;
    let dst_dc = m.coords_in(dst, dc)?;
    Ok(BregmanGeodesic {
        manifold: m,
        source: src.clone(),
        dest: dst.clone(),
        dcoords: dc,
        src_dc,
        dst_dc,
    })
}

impl BregmanGeodesic<'_> {
    pub fn manifold(&self) -> &BregmanManifold {
        self.manifold
    }

    pub fn source(&self) -> &Point {
        &self.source
    }

    pub fn dest(&self) -> &Point {
        &self.dest
    }

    pub fn dcoords(&self) -> DualCoordinate {
        self.dcoords
    }

    /// Affine interpolation in the flat chart; alias of [`Curve::point_at`].
    pub fn path(&self, t: f64) -> Result<Point> {
        self.point_at(t)
    }
}

impl Curve for BregmanGeodesic<'_> {
    fn point_at(&self, t: f64) -> Result<Point> {
        check_unit_interval(t)?;
        let data = self
            .src_dc
            .iter()
            .zip(&self.dst_dc)
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect();
        Point::new(self.dcoords.tag(), data)
    }
}
