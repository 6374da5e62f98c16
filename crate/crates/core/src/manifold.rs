use crate::atlas::{Atlas, ConvertFn};
use crate::error::{check_dim, Error, Result};
use crate::generator::Generator;
use crate::point::{CoordinateTag, DualCoordinate, Point};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// Inverts `∇F` by damped Newton iteration: max 100 steps, residual
/// tolerance `1e-12·max(1, ‖target‖)`, step halving whenever a full step
/// would leave the generator's domain.
pub fn invert_gradient(gen: &dyn Generator, target: &[f64]) -> Result<Vec<f64>> {
    check_dim(gen.dimension(), target.len())?;
    let mut x = gen.gradient_inverse_seed(target);
    if gen.domain_check(&x).is_err() {
        return Err(Error::invalid(
            "gradient inversion seed lies outside the generator domain",
        ));
    }
    let tol = 1e-12 * target.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    let mut residual = f64::INFINITY;
    for iter in 0..100 {
        let g = gen.gradient(&x)?;
        let r = DVector::from_iterator(target.len(), g.iter().zip(target).map(|(gi, ti)| gi - ti));
        residual = r.norm();
        if residual <= tol {
            return Ok(x);
        }
        let h = gen.hessian(&x)?;
        let step = h
            .lu()
            .solve(&r)
            .ok_or_else(|| Error::not_spd("Hessian solve failed during gradient inversion"))?;
        let mut t = 1.0;
        loop {
            let cand: Vec<f64> =
                x.iter().zip(step.iter()).map(|(xi, si)| xi - t * si).collect();
            if cand.iter().all(|v| v.is_finite()) && gen.domain_check(&cand).is_ok() {
                x = cand;
                break;
            }
            t *= 0.5;
            if t < 1e-16 {
                return Err(Error::convergence("gradient inversion", iter, residual));
            }
        }
    }
    Err(Error::convergence("gradient inversion", 100, residual))
}

/// A dually flat space: a convex potential F on the θ-chart, optionally its
/// conjugate F* on the η-chart, and an atlas of coordinate systems with the
/// θ↔η gradient maps installed automatically.
pub struct BregmanManifold {
    dimension: usize,
    theta_gen: Arc<dyn Generator>,
    eta_gen: Option<Arc<dyn Generator>>,
    atlas: Atlas,
}

impl BregmanManifold {
    pub fn new(
        theta_gen: Arc<dyn Generator>,
        eta_gen: Option<Arc<dyn Generator>>,
    ) -> Result<Self> {
        let dimension = theta_gen.dimension();
        if dimension == 0 {
            return Err(Error::invalid("manifold dimension must be positive"));
        }
        if let Some(eg) = &eta_gen {
            check_dim(dimension, eg.dimension())?;
        }

        let mut atlas = Atlas::new();
        atlas.register_tag(CoordinateTag::theta(), dimension);
        atlas.register_tag(CoordinateTag::eta(), dimension);

        let fwd = theta_gen.clone();
        let theta_to_eta: ConvertFn = Arc::new(move |x: &[f64]| fwd.gradient(x));
        atlas.register_edge(&CoordinateTag::theta(), &CoordinateTag::eta(), theta_to_eta)?;

        let eta_to_theta: ConvertFn = match &eta_gen {
            Some(eg) => {
                let back = eg.clone();
                Arc::new(move |x: &[f64]| back.gradient(x))
            }
            None => {
                let back = theta_gen.clone();
                Arc::new(move |x: &[f64]| invert_gradient(back.as_ref(), x))
            }
        };
        atlas.register_edge(&CoordinateTag::eta(), &CoordinateTag::theta(), eta_to_theta)?;

        Ok(BregmanManifold { dimension, theta_gen, eta_gen, atlas })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn theta_generator(&self) -> &dyn Generator {
        self.theta_gen.as_ref()
    }

    pub fn eta_generator(&self) -> Option<&dyn Generator> {
        self.eta_gen.as_deref()
    }

    pub fn atlas(&self) -> &Atlas {
        &self.atlas
    }

    /// Adds a coordinate system (e.g. an application manifold's ordinary
    /// parameters) whose vectors have `data_len` entries.
    pub fn register_coords(&mut self, tag: CoordinateTag, data_len: usize) {
        self.atlas.register_tag(tag, data_len);
    }

    /// Adds a one-step conversion between registered systems.
    pub fn register_conversion(
        &mut self,
        from: &CoordinateTag,
        to: &CoordinateTag,
        map: ConvertFn,
    ) -> Result<()> {
        self.atlas.register_edge(from, to, map)
    }

    /// Converts `p` to `target` coordinates along registered maps.
    pub fn atlas_convert(&self, p: &Point, target: &CoordinateTag) -> Result<Point> {
        self.atlas.convert(p, target)
    }

    /// Shorthand for [`BregmanManifold::atlas_convert`].
    pub fn convert(&self, p: &Point, target: &CoordinateTag) -> Result<Point> {
        self.atlas.convert(p, target)
    }

    /// Coordinates of `p` in the selected flat chart.
    pub fn coords_in(&self, p: &Point, dc: DualCoordinate) -> Result<Vec<f64>> {
        Ok(self.atlas.convert(p, &dc.tag())?.data)
    }

    /// η = ∇F(θ): the Legendre map into the dual chart.
    pub fn legendre_dual_coord(&self, p: &Point) -> Result<Point> {
        let theta = self.atlas.convert(p, &CoordinateTag::theta())?;
        let eta = self.theta_gen.gradient(&theta.data)?;
        Point::new(CoordinateTag::eta(), eta)
    }

    /// F*(η), evaluated directly when the dual generator exists and through
    /// the Legendre formula `⟨∇F⁻¹(η), η⟩ − F(∇F⁻¹(η))` otherwise.
    pub fn conjugate_value(&self, eta: &[f64]) -> Result<f64> {
        check_dim(self.dimension, eta.len())?;
        if let Some(eg) = &self.eta_gen {
            return eg.value(eta);
        }
        let theta = invert_gradient(self.theta_gen.as_ref(), eta)?;
        let inner: f64 = theta.iter().zip(eta).map(|(t, e)| t * e).sum();
        Ok(inner - self.theta_gen.value(&theta)?)
    }

    /// Hessian metric at `p` in the selected chart: ∇²F(θ) or ∇²F*(η).
    pub fn metric_tensor(&self, p: &Point, dc: DualCoordinate) -> Result<DMatrix<f64>> {
        let x = self.coords_in(p, dc)?;
        self.chart_potential(dc).hessian(&x)
    }

    /// The potential governing one flat chart (F for θ, F* for η), with
    /// every required derivative available even when F* has no closed form.
    pub fn chart_potential(&self, dc: DualCoordinate) -> ChartPotential<'_> {
        ChartPotential { m: self, dc }
    }
}

/// View of F or F* as a plain potential on its own chart. When the manifold
/// has no dual generator, the η-side falls back on Newton inversion of ∇F
/// and on inverting the primal Hessian.
pub struct ChartPotential<'a> {
    m: &'a BregmanManifold,
    dc: DualCoordinate,
}

impl ChartPotential<'_> {
    pub fn dim(&self) -> usize {
        self.m.dimension
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        match (self.dc, &self.m.eta_gen) {
            (DualCoordinate::Primal, _) => self.m.theta_gen.value(x),
            (DualCoordinate::Dual, Some(eg)) => eg.value(x),
            (DualCoordinate::Dual, None) => self.m.conjugate_value(x),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        match (self.dc, &self.m.eta_gen) {
            (DualCoordinate::Primal, _) => self.m.theta_gen.gradient(x),
            (DualCoordinate::Dual, Some(eg)) => eg.gradient(x),
            (DualCoordinate::Dual, None) => invert_gradient(self.m.theta_gen.as_ref(), x),
        }
    }

    pub fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        match (self.dc, &self.m.eta_gen) {
            (DualCoordinate::Primal, _) => self.m.theta_gen.hessian(x),
            (DualCoordinate::Dual, Some(eg)) => eg.hessian(x),
            (DualCoordinate::Dual, None) => {
                let theta = invert_gradient(self.m.theta_gen.as_ref(), x)?;
                let h = self.m.theta_gen.hessian(&theta)?;
                let sym = (&h + h.transpose()) * 0.5;
                crate::linalg::spd_inverse(&sym)
            }
        }
    }

    pub fn domain_check(&self, x: &[f64]) -> Result<()> {
        match (self.dc, &self.m.eta_gen) {
            (DualCoordinate::Primal, _) => self.m.theta_gen.domain_check(x),
            (DualCoordinate::Dual, Some(eg)) => eg.domain_check(x),
            (DualCoordinate::Dual, None) => {
                invert_gradient(self.m.theta_gen.as_ref(), x).map(|_| ())
            }
        }
    }

    /// B_G(a : b) = G(a) − G(b) − ⟨a − b, ∇G(b)⟩ for this chart's potential.
    pub fn bregman(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        check_dim(self.m.dimension, a.len())?;
        check_dim(self.m.dimension, b.len())?;
        let grad_b = self.gradient(b)?;
        let inner: f64 =
            a.iter().zip(b).zip(&grad_b).map(|((ai, bi), gi)| (ai - bi) * gi).sum();
        Ok(self.value(a)? - self.value(b)? - inner)
    }

    /// (∇G)⁻¹ for this chart's potential G. For the η-chart this is simply
    /// ∇F, since the two gradient maps are mutually inverse.
    pub fn invert_gradient(&self, target: &[f64]) -> Result<Vec<f64>> {
        match (self.dc, &self.m.eta_gen) {
            (DualCoordinate::Primal, Some(eg)) => eg.gradient(target),
            (DualCoordinate::Primal, None) => {
                invert_gradient(self.m.theta_gen.as_ref(), target)
            }
            (DualCoordinate::Dual, _) => self.m.theta_gen.gradient(target),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ad::{domain_err, Scalar, ScalarFn};
    use crate::generator::{AutoDiffGenerator, QuadraticGenerator};
    use approx::assert_relative_eq;

    fn quadratic(dim: usize) -> BregmanManifold {
        BregmanManifold::new(Arc::new(QuadraticGenerator { dim }), None).unwrap()
    }

    struct LogSumExp1p {
        k: usize,
    }

    impl ScalarFn for LogSumExp1p {
        fn dim(&self) -> usize {
            self.k
        }
        fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
            let mut s = S::constant(1.0);
            for &xi in x {
                s = s + xi.exp();
            }
            Ok(s.ln())
        }
    }

    struct NegEntropy1p {
        k: usize,
    }

    impl ScalarFn for NegEntropy1p {
        fn dim(&self) -> usize {
            self.k
        }
        fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
            let mut rest = S::constant(1.0);
            let mut acc = S::constant(0.0);
            for (i, &xi) in x.iter().enumerate() {
                if xi.primal() <= 0.0 {
                    return domain_err(i, "needs coordinates in the open simplex");
                }
                acc = acc + xi * xi.ln();
                rest = rest - xi;
            }
            if rest.primal() <= 0.0 {
                return domain_err(x.len() - 1, "coordinates must sum below one");
            }
            Ok(acc + rest * rest.ln())
        }
    }

    fn softmax_manifold(with_dual: bool) -> BregmanManifold {
        let theta = Arc::new(AutoDiffGenerator::new(LogSumExp1p { k: 2 }));
        let eta = if with_dual {
            Some(Arc::new(
                AutoDiffGenerator::new(NegEntropy1p { k: 2 }).with_seed(vec![0.25, 0.25]),
            ) as Arc<dyn Generator>)
        } else {
            None
        };
        BregmanManifold::new(theta, eta).unwrap()
    }

    #[test]
    fn quadratic_is_self_dual() {
        let m = quadratic(2);
        let p = Point::theta(vec![1.0, 2.0]).unwrap();
        let eta = m.legendre_dual_coord(&p).unwrap();
        assert_eq!(eta.data, vec![1.0, 2.0]);
        assert_eq!(eta.coords, CoordinateTag::eta());
        assert_relative_eq!(m.conjugate_value(&[1.0, 2.0]).unwrap(), 2.5);
    }

    #[test]
    fn conversions_roundtrip_without_dual_generator() {
        let m = softmax_manifold(false);
        let p = Point::theta(vec![0.3, -0.8]).unwrap();
        let eta = m.atlas_convert(&p, &CoordinateTag::eta()).unwrap();
        let back = m.atlas_convert(&eta, &CoordinateTag::theta()).unwrap();
        for i in 0..2 {
            assert_relative_eq!(back.data[i], p.data[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn softmax_at_origin_gives_uniform_dual_coordinates() {
        let m = softmax_manifold(true);
        let p = Point::theta(vec![0.0, 0.0]).unwrap();
        let eta = m.legendre_dual_coord(&p).unwrap();
        assert_relative_eq!(eta.data[0], 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(eta.data[1], 1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn conjugate_value_agrees_with_direct_dual_evaluation() {
        let with_dual = softmax_manifold(true);
        let without = softmax_manifold(false);
        let eta = [0.2, 0.35];
        let direct = with_dual.conjugate_value(&eta).unwrap();
        let inverted = without.conjugate_value(&eta).unwrap();
        assert_relative_eq!(direct, inverted, max_relative = 1e-9);
    }

    #[test]
    fn metric_tensors_are_mutually_inverse_even_without_dual_generator() {
        for m in [softmax_manifold(true), softmax_manifold(false)] {
            let p = Point::theta(vec![0.4, -0.2]).unwrap();
            let g_theta = m.metric_tensor(&p, DualCoordinate::Primal).unwrap();
            let g_eta = m.metric_tensor(&p, DualCoordinate::Dual).unwrap();
            let prod = &g_theta * &g_eta;
            let id = DMatrix::identity(2, 2);
            assert_relative_eq!((prod - id).abs().max(), 0.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn fenchel_young_identity_holds_at_matched_pairs() {
        let m = softmax_manifold(true);
        let theta = [0.7, -0.4];
        let eta = m.theta_generator().gradient(&theta).unwrap();
        let inner: f64 = theta.iter().zip(&eta).map(|(t, e)| t * e).sum();
        let gap =
            m.theta_generator().value(&theta).unwrap() + m.conjugate_value(&eta).unwrap() - inner;
        assert_relative_eq!(gap, 0.0, epsilon = 1e-9);
    }
}
