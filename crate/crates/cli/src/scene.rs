use crate::error::{CliError, Result};
use bregkern_core::{BregmanBisector, BregmanManifold, CoordinateTag, Curve, DualCoordinate, Point};
use nalgebra::Matrix2;

/// Style attributes attached to every drawable.
#[derive(Clone)]
pub struct Style {
    pub color: String,
    pub opacity: f64,
    pub label: Option<String>,
}

impl Style {
    pub fn new(color: &str) -> Self {
        Style { color: color.to_string(), opacity: 1.0, label: None }
    }

    pub fn opacity(mut self, opacity: f64) -> Self {
        self.opacity = opacity;
        self
    }

    pub fn label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }
}

/// Metric ellipse at a point: boundary points v satisfy
/// (v - c)ᵀ G (v - c) = scale².
pub struct TissotEllipse {
    pub center: [f64; 2],
    pub shape: [[f64; 2]; 2],
    pub scale: f64,
}

impl TissotEllipse {
    /// Uniform boundary samples v = c + scale * G^{-1/2} (cos φ, sin φ).
    pub fn boundary(&self, samples: usize) -> Result<Vec<[f64; 2]>> {
        let g = Matrix2::new(
            self.shape[0][0],
            self.shape[0][1],
            self.shape[1][0],
            self.shape[1][1],
        );
        let eig = g.symmetric_eigen();
        if eig.eigenvalues.iter().any(|&v| v <= 0.0) {
            return Err(CliError::invalid("ellipse shape matrix is not positive definite"));
        }
        let inv_sqrt = Matrix2::from_columns(&[
            eig.eigenvectors.column(0) / eig.eigenvalues[0].sqrt(),
            eig.eigenvectors.column(1) / eig.eigenvalues[1].sqrt(),
        ]) * eig.eigenvectors.transpose();
        let mut out = Vec::with_capacity(samples);
        for i in 0..samples {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
            let dir = nalgebra::Vector2::new(phi.cos(), phi.sin());
            let v = inv_sqrt * dir * self.scale;
            out.push([self.center[0] + v[0], self.center[1] + v[1]]);
        }
        Ok(out)
    }
}

/// Geometry of one drawable, already projected to display coordinates.
pub enum DrawableKind {
    Point([f64; 2]),
    Curve(Vec<[f64; 2]>),
    /// Hyperplane ⟨v, normal⟩ = offset in the projected display plane.
    Segment { normal: [f64; 2], offset: f64 },
    Ellipse(TissotEllipse),
}

pub struct Drawable {
    pub kind: DrawableKind,
    pub style: Style,
}

/// A 2D figure: drawables expressed in one display chart, projected to a
/// pair of coordinate indices.
pub struct Scene {
    pub manifold_desc: String,
    pub display: CoordinateTag,
    pub proj: (usize, usize),
    pub items: Vec<Drawable>,
}

impl Scene {
    pub fn new(manifold_desc: &str, display: CoordinateTag, proj: (usize, usize)) -> Self {
        Scene { manifold_desc: manifold_desc.to_string(), display, proj, items: Vec::new() }
    }

    /// Converts a point into the display chart and keeps the projected pair.
    pub fn project(&self, m: &BregmanManifold, p: &Point) -> Result<[f64; 2]> {
        let disp = m.convert(p, &self.display)?;
        let mut coords = disp.data;
        // Univariate normals display as (mean, standard deviation) in the
        // source chart, so the variance coordinate is square-rooted.
        if self.manifold_desc == "gaussian:1"
            && self.display == CoordinateTag::lambda()
            && coords.len() == 2
        {
            coords[1] = coords[1].sqrt();
        }
        let coords = &coords;
        let n = coords.len();
        if self.proj.0 >= n || self.proj.1 >= n {
            return Err(CliError::invalid(format!(
                "projection indices ({}, {}) out of range for display dimension {n}",
                self.proj.0, self.proj.1
            )));
        }
        Ok([coords[self.proj.0], coords[self.proj.1]])
    }

    pub fn add_point(&mut self, m: &BregmanManifold, p: &Point, style: Style) -> Result<()> {
        let v = self.project(m, p)?;
        self.items.push(Drawable { kind: DrawableKind::Point(v), style });
        Ok(())
    }

    /// Samples a curve at `segments + 1` parameters and projects each point.
    pub fn add_curve(
        &mut self,
        m: &BregmanManifold,
        curve: &dyn Curve,
        segments: usize,
        style: Style,
    ) -> Result<()> {
        let pts = curve.sample(segments)?;
        let mut projected = Vec::with_capacity(pts.len());
        for p in &pts {
            projected.push(self.project(m, p)?);
        }
        self.items.push(Drawable { kind: DrawableKind::Curve(projected), style });
        Ok(())
    }

    /// Adds a bisector as a straight segment. The hyperplane is affine only
    /// in its own chart, so the display tag must match that chart and the
    /// projection must cover the full 2-dimensional chart.
    pub fn add_bisector_segment(&mut self, bis: &BregmanBisector, style: Style) -> Result<()> {
        let chart_tag = bis.dcoords().tag();
        if self.display != chart_tag {
            return Err(CliError::invalid(format!(
                "bisector lives in the '{}' chart but the display chart is '{}'",
                chart_tag.name(),
                self.display.name()
            )));
        }
        let normal = bis.normal();
        if normal.len() != 2 {
            return Err(CliError::invalid(format!(
                "bisector segments need a 2-dimensional chart, got dimension {}",
                normal.len()
            )));
        }
        let idx = [self.proj.0, self.proj.1];
        if !(idx.contains(&0) && idx.contains(&1)) {
            return Err(CliError::invalid(
                "bisector segments need the projection to cover both chart coordinates",
            ));
        }
        self.items.push(Drawable {
            kind: DrawableKind::Segment {
                normal: [normal[self.proj.0], normal[self.proj.1]],
                offset: bis.offset(),
            },
            style,
        });
        Ok(())
    }

    /// Adds the metric ellipse at `p`: the dual-chart Hessian metric
    /// restricted to the projection indices, drawn around the projected
    /// point with the given display radius.
    pub fn add_tissot(
        &mut self,
        m: &BregmanManifold,
        p: &Point,
        scale: f64,
        style: Style,
    ) -> Result<()> {
        let center = self.project(m, p)?;
        let g = m.metric_tensor(p, DualCoordinate::Dual)?;
        let (i, j) = self.proj;
        if i >= g.nrows() || j >= g.nrows() {
            return Err(CliError::invalid(
                "projection indices out of range for the metric tensor",
            ));
        }
        let shape = [[g[(i, i)], g[(i, j)]], [g[(j, i)], g[(j, j)]]];
        self.items.push(Drawable {
            kind: DrawableKind::Ellipse(TissotEllipse { center, shape, scale }),
            style,
        });
        Ok(())
    }
}
