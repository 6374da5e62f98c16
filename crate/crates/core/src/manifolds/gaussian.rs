use crate::ad::{Scalar, ScalarFn};
use crate::atlas::ConvertFn;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::geometry::{check_unit_interval, Curve};
use crate::linalg::{
    grad_vec, is_spd, logdet_spd, solve_and_det_generic, spd_inv_sqrt, spd_inverse, spd_sqrt,
    sym_index, sym_len, sym_pairs, sym_vec, vec_grad, vec_sym,
};
use crate::manifold::BregmanManifold;
use crate::point::{CoordinateTag, DualCoordinate, Point};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;
use std::sync::Arc;

/// Splits a natural-chart vector into the mean block θ₁ and A = −Θ₂, the
/// (positive definite) matrix block with its sign flipped.
fn split_theta(d: usize, x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let th1 = DVector::from_column_slice(&x[..d]);
    let neg: Vec<f64> = x[d..].iter().map(|v| -v).collect();
    let a = vec_sym(&neg).expect("triangle length fixed by dimension");
    (th1, a)
}

/// Splits a dual-chart vector into the mean μ and the second moment matrix
/// M = Σ + μμᵀ (stored in gradient layout).
fn split_eta(d: usize, x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let mu = DVector::from_column_slice(&x[..d]);
    let m = vec_grad(&x[d..]).expect("triangle length fixed by dimension");
    (mu, m)
}

/// Mean and covariance recovered from a natural-chart vector:
/// Σ = ½A⁻¹ and μ = Σθ₁.
fn theta_to_mean_cov(d: usize, x: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let (th1, a) = split_theta(d, x);
    let sigma = spd_inverse(&a)? * 0.5;
    let mu = &sigma * th1;
    Ok((mu, sigma))
}

/// Log-partition of the d-variate normal family in its natural chart
/// θ = (Σ⁻¹μ, upper triangle of −½Σ⁻¹):
///
/// F(θ) = ¼·θ₁ᵀA⁻¹θ₁ + (d/2)·log π − ½·log det A,  A = −Θ₂.
///
/// Gradient and Hessian use the closed moment formulas; the generic
/// [`ScalarFn`] implementation recomputes F by elimination so automatic
/// differentiation can cross-check them.
#[derive(Clone, Debug)]
pub struct GaussianCumulant {
    pub d: usize,
}

impl GaussianCumulant {
    fn full_dim(&self) -> usize {
        self.d + sym_len(self.d)
    }
}

impl ScalarFn for GaussianCumulant {
    fn dim(&self) -> usize {
        self.full_dim()
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let d = self.d;
        let mut a = vec![vec![S::constant(0.0); d]; d];
        let mut k = d;
        for i in 0..d {
            for j in i..d {
                a[i][j] = -x[k];
                a[j][i] = -x[k];
                k += 1;
            }
        }
        let th1 = &x[..d];
        let (sol, det) = solve_and_det_generic(&a, th1)?;
        if det.primal() <= 0.0 {
            return Err(Error::not_spd("matrix block of θ is not negative definite"));
        }
        let mut quad = S::constant(0.0);
        for i in 0..d {
            quad = quad + th1[i] * sol[i];
        }
        Ok(quad.scale(0.25) + S::constant(0.5 * d as f64 * PI.ln()) - det.ln().scale(0.5))
    }
}

impl crate::generator::Generator for GaussianCumulant {
    fn dimension(&self) -> usize {
        self.full_dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.domain_check(x)?;
        let (th1, a) = split_theta(self.d, x);
        let a_inv = spd_inverse(&a)?;
        let quad = th1.dot(&(&a_inv * &th1));
        Ok(0.25 * quad + 0.5 * self.d as f64 * PI.ln() - 0.5 * logdet_spd(&a)?)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain_check(x)?;
        let (mu, sigma) = theta_to_mean_cov(self.d, x)?;
        let second = &sigma + &mu * mu.transpose();
        let mut out = Vec::with_capacity(self.full_dim());
        out.extend_from_slice(mu.as_slice());
        out.extend_from_slice(grad_vec(&second).as_slice());
        Ok(out)
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.domain_check(x)?;
        let d = self.d;
        let (mu, sigma) = theta_to_mean_cov(d, x)?;
        let pairs = sym_pairs(d);
        let n = self.full_dim();
        let mut h = DMatrix::zeros(n, n);
        h.view_mut((0, 0), (d, d)).copy_from(&sigma);
        // Covariance of the sufficient statistics (x, κ·x xᵀ): the moment
        // identities below are exact for normal distributions.
        for a in 0..d {
            for (col, &(c, e)) in pairs.iter().enumerate() {
                let kappa = if c == e { 1.0 } else { 2.0 };
                let v = kappa * (mu[c] * sigma[(a, e)] + mu[e] * sigma[(a, c)]);
                h[(a, d + col)] = v;
                h[(d + col, a)] = v;
            }
        }
        for (row, &(a, b)) in pairs.iter().enumerate() {
            let ka = if a == b { 1.0 } else { 2.0 };
            for (col, &(c, e)) in pairs.iter().enumerate() {
                let kc = if c == e { 1.0 } else { 2.0 };
                let v = sigma[(a, c)] * sigma[(b, e)]
                    + sigma[(a, e)] * sigma[(b, c)]
                    + mu[a] * mu[c] * sigma[(b, e)]
                    + mu[a] * mu[e] * sigma[(b, c)]
                    + mu[b] * mu[c] * sigma[(a, e)]
                    + mu[b] * mu[e] * sigma[(a, c)];
                h[(d + row, d + col)] = ka * kc * v;
            }
        }
        Ok(h)
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.full_dim(), x.len())?;
        check_finite(x, "generator input")?;
        let (_, a) = split_theta(self.d, x);
        if !is_spd(&a, 1e-9) {
            return Err(Error::not_spd("matrix block of θ is not negative definite"));
        }
        Ok(())
    }

    fn gradient_inverse_seed(&self, _target: &[f64]) -> Vec<f64> {
        // Natural coordinates of the standard normal.
        let d = self.d;
        let mut v = vec![0.0; self.full_dim()];
        for a in 0..d {
            v[d + sym_index(d, a, a)] = -0.5;
        }
        v
    }
}

/// Convex conjugate of [`GaussianCumulant`] on the dual chart
/// η = (μ, doubled triangle of Σ + μμᵀ):
///
/// F*(η) = −½·log det Σ − (d/2)·(1 + log 2π),  Σ = M − μμᵀ.
#[derive(Clone, Debug)]
pub struct GaussianDualPotential {
    pub d: usize,
}

impl GaussianDualPotential {
    fn full_dim(&self) -> usize {
        self.d + sym_len(self.d)
    }

    fn cov(&self, x: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let (mu, m) = split_eta(self.d, x);
        let sigma = &m - &mu * mu.transpose();
        if !is_spd(&sigma, 1e-9) {
            return Err(Error::not_spd("second moment block does not dominate μμᵀ"));
        }
        Ok((mu, sigma))
    }
}

impl ScalarFn for GaussianDualPotential {
    fn dim(&self) -> usize {
        self.full_dim()
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let d = self.d;
        let mu = &x[..d];
        let mut sigma = vec![vec![S::constant(0.0); d]; d];
        let mut k = d;
        for i in 0..d {
            for j in i..d {
                let m = if i == j { x[k] } else { x[k].scale(0.5) };
                sigma[i][j] = m - mu[i] * mu[j];
                sigma[j][i] = sigma[i][j];
                k += 1;
            }
        }
        let ld = crate::linalg::logdet_pd_generic(&sigma)?;
        Ok(ld.scale(-0.5) - S::constant(0.5 * d as f64 * (1.0 + (2.0 * PI).ln())))
    }
}

impl crate::generator::Generator for GaussianDualPotential {
    fn dimension(&self) -> usize {
        self.full_dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.full_dim(), x.len())?;
        check_finite(x, "generator input")?;
        let (_, sigma) = self.cov(x)?;
        Ok(-0.5 * logdet_spd(&sigma)? - 0.5 * self.d as f64 * (1.0 + (2.0 * PI).ln()))
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.full_dim(), x.len())?;
        check_finite(x, "generator input")?;
        let (mu, sigma) = self.cov(x)?;
        let p = spd_inverse(&sigma)?;
        let mut out = Vec::with_capacity(self.full_dim());
        out.extend_from_slice((&p * &mu).as_slice());
        out.extend_from_slice(sym_vec(&(-0.5 * &p)).as_slice());
        Ok(out)
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(self.full_dim(), x.len())?;
        check_finite(x, "generator input")?;
        let d = self.d;
        let (mu, sigma) = self.cov(x)?;
        let p = spd_inverse(&sigma)?;
        let pmu = &p * &mu;
        let pairs = sym_pairs(d);
        let n = self.full_dim();
        let mut h = DMatrix::zeros(n, n);
        let b11 = (1.0 + mu.dot(&pmu)) * &p + &pmu * pmu.transpose();
        h.view_mut((0, 0), (d, d)).copy_from(&b11);
        // Columns of P·S_cd·P with S_cd the symmetrised unit basis matching
        // the doubled triangle layout of η₂.
        let cols: Vec<DVector<f64>> = (0..d).map(|c| p.column(c).into_owned()).collect();
        for (idx, &(c, e)) in pairs.iter().enumerate() {
            let col = if c == e {
                -(&cols[c] * pmu[c])
            } else {
                -0.5 * (&cols[c] * pmu[e] + &cols[e] * pmu[c])
            };
            for a in 0..d {
                h[(a, d + idx)] = col[a];
                h[(d + idx, a)] = col[a];
            }
        }
        for (row, &(a, b)) in pairs.iter().enumerate() {
            for (col, &(c, e)) in pairs.iter().enumerate() {
                let psp = if c == e {
                    cols[c][a] * cols[c][b]
                } else {
                    0.5 * (cols[c][a] * cols[e][b] + cols[e][a] * cols[c][b])
                };
                h[(d + row, d + col)] = 0.5 * psp;
            }
        }
        Ok(h)
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.full_dim(), x.len())?;
        check_finite(x, "generator input")?;
        self.cov(x).map(|_| ())
    }

    fn gradient_inverse_seed(&self, _target: &[f64]) -> Vec<f64> {
        // Dual coordinates of the standard normal.
        let d = self.d;
        let mut v = vec![0.0; self.full_dim()];
        for a in 0..d {
            v[d + sym_index(d, a, a)] = 1.0;
        }
        v
    }
}

/// Family of d-variate normal distributions, dimension d + d(d+1)/2.
///
/// Charts: λ = (μ, upper triangle of Σ); θ = (Σ⁻¹μ, triangle of −½Σ⁻¹);
/// η = (μ, doubled triangle of Σ + μμᵀ). The Bregman divergence in
/// η-coordinates is the Kullback-Leibler divergence between the densities.
pub struct GaussianManifold {
    d: usize,
    m: BregmanManifold,
}

impl GaussianManifold {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("the sample space must have dimension at least 1"));
        }
        let mut m = BregmanManifold::new(
            Arc::new(GaussianCumulant { d }),
            Some(Arc::new(GaussianDualPotential { d })),
        )?;

        let full = d + sym_len(d);
        m.register_coords(CoordinateTag::lambda(), full);

        let lambda_to_theta: ConvertFn = Arc::new(move |lam: &[f64]| {
            let (mu, sigma) = parse_lambda(d, lam)?;
            let p = spd_inverse(&sigma)?;
            let mut out = Vec::with_capacity(full);
            out.extend_from_slice((&p * &mu).as_slice());
            out.extend_from_slice(sym_vec(&(-0.5 * &p)).as_slice());
            Ok(out)
        });
        m.register_conversion(&CoordinateTag::lambda(), &CoordinateTag::theta(), lambda_to_theta)?;

        let theta_to_lambda: ConvertFn = Arc::new(move |th: &[f64]| {
            let (mu, sigma) = theta_to_mean_cov(d, th)?;
            let mut out = Vec::with_capacity(full);
            out.extend_from_slice(mu.as_slice());
            out.extend_from_slice(sym_vec(&sigma).as_slice());
            Ok(out)
        });
        m.register_conversion(&CoordinateTag::theta(), &CoordinateTag::lambda(), theta_to_lambda)?;

        let lambda_to_eta: ConvertFn = Arc::new(move |lam: &[f64]| {
            let (mu, sigma) = parse_lambda(d, lam)?;
            let second = &sigma + &mu * mu.transpose();
            let mut out = Vec::with_capacity(full);
            out.extend_from_slice(mu.as_slice());
            out.extend_from_slice(grad_vec(&second).as_slice());
            Ok(out)
        });
        m.register_conversion(&CoordinateTag::lambda(), &CoordinateTag::eta(), lambda_to_eta)?;

        let eta_to_lambda: ConvertFn = Arc::new(move |e: &[f64]| {
            let (mu, m2) = split_eta(d, e);
            let sigma = &m2 - &mu * mu.transpose();
            if !is_spd(&sigma, 1e-9) {
                return Err(Error::not_spd("second moment block does not dominate μμᵀ"));
            }
            let mut out = Vec::with_capacity(full);
            out.extend_from_slice(mu.as_slice());
            out.extend_from_slice(sym_vec(&sigma).as_slice());
            Ok(out)
        });
        m.register_conversion(&CoordinateTag::eta(), &CoordinateTag::lambda(), eta_to_lambda)?;

        Ok(GaussianManifold { d, m })
    }

    /// Sample-space dimension d (the manifold itself has dimension
    /// d + d(d+1)/2).
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn manifold(&self) -> &BregmanManifold {
        &self.m
    }

    /// Point in λ-coordinates from a mean vector and SPD covariance.
    pub fn point_from_mean_cov(&self, mu: &[f64], cov: &DMatrix<f64>) -> Result<Point> {
        check_dim(self.d, mu.len())?;
        if cov.nrows() != self.d || cov.ncols() != self.d {
            return Err(Error::invalid(format!(
                "covariance must be {0}×{0}, got {1}×{2}",
                self.d,
                cov.nrows(),
                cov.ncols()
            )));
        }
        if !is_spd(cov, 1e-9) {
            return Err(Error::not_spd("covariance must be symmetric positive definite"));
        }
        let mut lam = Vec::with_capacity(self.d + sym_len(self.d));
        lam.extend_from_slice(mu);
        lam.extend_from_slice(sym_vec(cov).as_slice());
        Point::lambda(lam)
    }

    /// Mean and covariance of a point given in any registered chart.
    pub fn mean_cov(&self, p: &Point) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let lam = self.m.atlas_convert(p, &CoordinateTag::lambda())?;
        parse_lambda(self.d, &lam.data)
    }
}

fn parse_lambda(d: usize, lam: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
    check_dim(d + sym_len(d), lam.len())?;
    check_finite(lam, "source-chart coordinates")?;
    let mu = DVector::from_column_slice(&lam[..d]);
    let sigma = vec_sym(&lam[d..])?;
    if !is_spd(&sigma, 1e-9) {
        return Err(Error::not_spd("covariance must be symmetric positive definite"));
    }
    Ok((mu, sigma))
}

/// Kullback-Leibler divergence KL(p‖q) between two normal densities, by the
/// closed form in mean/covariance parameters.
pub fn gaussian_kl(g: &GaussianManifold, p: &Point, q: &Point) -> Result<f64> {
    let (mu1, s1) = g.mean_cov(p)?;
    let (mu2, s2) = g.mean_cov(q)?;
    let p2 = spd_inverse(&s2)?;
    let dmu = &mu2 - &mu1;
    let tr = (&p2 * &s1).trace();
    let quad = dmu.dot(&(&p2 * &dmu));
    let logratio = logdet_spd(&s2)? - logdet_spd(&s1)?;
    Ok(0.5 * (tr + quad - g.d() as f64 + logratio))
}

/// Rao distance between univariate normals: the hyperbolic metric of the
/// upper half-plane in coordinates (μ/√2, σ), scaled by √2.
pub fn fisher_rao_distance_uni(g: &GaussianManifold, p: &Point, q: &Point) -> Result<f64> {
    if g.d() != 1 {
        return Err(Error::invalid("closed-form Rao distance covers the univariate family only"));
    }
    let (mu1, s1) = g.mean_cov(p)?;
    let (mu2, s2) = g.mean_cov(q)?;
    let (x1, y1) = (mu1[0] / 2.0_f64.sqrt(), s1[(0, 0)].sqrt());
    let (x2, y2) = (mu2[0] / 2.0_f64.sqrt(), s2[(0, 0)].sqrt());
    let num = (x2 - x1).powi(2) + (y2 - y1).powi(2);
    Ok(2.0_f64.sqrt() * (1.0 + num / (2.0 * y1 * y2)).acosh())
}

/// How a Fisher-Rao geodesic between normal points is computed.
#[non_exhaustive]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FisherRaoMethod {
    /// Embed N(μ, Σ) as the SPD matrix [[Σ+μμᵀ, μ], [μᵀ, 1]], follow the
    /// affine-invariant geodesic there, and project back. Exact for
    /// same-mean endpoints, a tight approximation otherwise.
    #[default]
    SpdEmbedding,
}

/// Curve t ↦ N(μ(t), Σ(t)) approximating the Fisher-Rao geodesic, emitted in
/// λ-coordinates.
pub struct FisherRaoGeodesic {
    d: usize,
    basis: DMatrix<f64>,
    log_eigs: Vec<f64>,
    method: FisherRaoMethod,
}

impl FisherRaoGeodesic {
    pub fn method(&self) -> FisherRaoMethod {
        self.method
    }
}

fn embed(mu: &DVector<f64>, sigma: &DMatrix<f64>) -> DMatrix<f64> {
    let d = mu.len();
    let mut p = DMatrix::zeros(d + 1, d + 1);
    p.view_mut((0, 0), (d, d)).copy_from(&(sigma + mu * mu.transpose()));
    for i in 0..d {
        p[(i, d)] = mu[i];
        p[(d, i)] = mu[i];
    }
    p[(d, d)] = 1.0;
    p
}

impl Curve for FisherRaoGeodesic {
    fn point_at(&self, t: f64) -> Result<Point> {
        check_unit_interval(t)?;
        let k = self.d + 1;
        let scaled = DMatrix::from_fn(k, k, |i, j| {
            self.basis[(i, j)] * (t * self.log_eigs[j]).exp()
        });
        let mut p = &scaled * self.basis.transpose();
        // Projective normalisation: rescale so the corner entry returns to 1,
        // then read the mean and covariance blocks back off.
        let corner = p[(self.d, self.d)];
        if !(corner > 0.0) {
            return Err(Error::not_spd("embedded geodesic lost positivity"));
        }
        p /= corner;
        let mu = DVector::from_fn(self.d, |i, _| p[(i, self.d)]);
        let sigma = p.view((0, 0), (self.d, self.d)).into_owned() - &mu * mu.transpose();
        let mut lam = Vec::with_capacity(self.d + sym_len(self.d));
        lam.extend_from_slice(mu.as_slice());
        lam.extend_from_slice(sym_vec(&sigma).as_slice());
        Point::lambda(lam)
    }
}

/// Fisher-Rao geodesic with the default method.
pub fn fisher_rao_geodesic(g: &GaussianManifold, p: &Point, q: &Point) -> Result<FisherRaoGeodesic> {
    fisher_rao_geodesic_with(g, p, q, FisherRaoMethod::default())
}

/// Fisher-Rao geodesic with an explicit method selector.
pub fn fisher_rao_geodesic_with(
    g: &GaussianManifold,
    p: &Point,
    q: &Point,
    method: FisherRaoMethod,
) -> Result<FisherRaoGeodesic> {
    let (mu0, s0) = g.mean_cov(p)?;
    let (mu1, s1) = g.mean_cov(q)?;
    match method {
        FisherRaoMethod::SpdEmbedding => {
            let p0 = embed(&mu0, &s0);
            let p1 = embed(&mu1, &s1);
            let r = spd_sqrt(&p0)?;
            let ri = spd_inv_sqrt(&p0)?;
            let w = &ri * &p1 * &ri;
            let w = 0.5 * (&w + w.transpose());
            let eig = w.symmetric_eigen();
            let mut log_eigs = Vec::with_capacity(g.d() + 1);
            for (i, &v) in eig.eigenvalues.iter().enumerate() {
                if v <= 0.0 {
                    return Err(Error::not_spd(format!("eigenvalue {} = {:.3e}", i, v)));
                }
                log_eigs.push(v.ln());
            }
            Ok(FisherRaoGeodesic { d: g.d(), basis: &r * eig.eigenvectors, log_eigs, method })
        }
    }
}

/// Length of a curve under the Fisher metric, by midpoint quadrature in the
/// natural chart where the metric is the Hessian of the log-partition.
pub fn fisher_rao_curve_length(
    g: &GaussianManifold,
    curve: &dyn Curve,
    segments: usize,
) -> Result<f64> {
    if segments == 0 {
        return Err(Error::invalid("quadrature needs at least one segment"));
    }
    let pts = curve.sample(segments)?;
    let thetas: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| g.manifold().coords_in(p, DualCoordinate::Primal))
        .collect::<Result<_>>()?;
    let mut len = 0.0;
    for i in 0..segments {
        let mid = curve.point_at((i as f64 + 0.5) / segments as f64)?;
        let metric = g.manifold().metric_tensor(&mid, DualCoordinate::Primal)?;
        let dt = DVector::from_fn(thetas[i].len(), |j, _| thetas[i + 1][j] - thetas[i][j]);
        len += dt.dot(&(&metric * &dt)).sqrt();
    }
    Ok(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ad::{ad_gradient, ad_hessian};
    use crate::generator::Generator;
    use crate::linalg::rows_to_matrix;
    use crate::measures::bregman_divergence;
    use approx::assert_relative_eq;
    use nalgebra::dmatrix;

    fn sample_manifold() -> (GaussianManifold, Point, Point) {
        let g = GaussianManifold::new(2).unwrap();
        let p = g
            .point_from_mean_cov(&[0.5, -0.3], &dmatrix![1.2, 0.3; 0.3, 0.8])
            .unwrap();
        let q = g
            .point_from_mean_cov(&[-1.0, 0.4], &dmatrix![0.9, -0.2; -0.2, 1.5])
            .unwrap();
        (g, p, q)
    }

    #[test]
    fn standard_normal_has_known_charts() {
        let g = GaussianManifold::new(1).unwrap();
        let p = g.point_from_mean_cov(&[0.0], &dmatrix![1.0]).unwrap();
        let th = g.manifold().coords_in(&p, DualCoordinate::Primal).unwrap();
        assert_relative_eq!(th[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(th[1], -0.5, epsilon = 1e-15);
        let f = g.manifold().theta_generator().value(&th).unwrap();
        assert_relative_eq!(f, 0.5 * (2.0 * PI).ln(), epsilon = 1e-12);
        let eta = g.manifold().coords_in(&p, DualCoordinate::Dual).unwrap();
        assert_relative_eq!(eta[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(eta[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn chart_roundtrips_recover_mean_and_covariance() {
        let (g, p, _) = sample_manifold();
        for tag in [CoordinateTag::theta(), CoordinateTag::eta()] {
            let there = g.manifold().atlas_convert(&p, &tag).unwrap();
            let back = g.manifold().atlas_convert(&there, &CoordinateTag::lambda()).unwrap();
            for i in 0..p.data.len() {
                assert_relative_eq!(back.data[i], p.data[i], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn closed_form_derivatives_match_automatic_differentiation() {
        let (g, p, _) = sample_manifold();
        let th = g.manifold().coords_in(&p, DualCoordinate::Primal).unwrap();
        let eta = g.manifold().coords_in(&p, DualCoordinate::Dual).unwrap();

        let cum = GaussianCumulant { d: 2 };
        let grad = Generator::gradient(&cum, &th).unwrap();
        let ad_grad = ad_gradient(&cum, &th).unwrap();
        for i in 0..grad.len() {
            assert_relative_eq!(grad[i], ad_grad[i], max_relative = 1e-9, epsilon = 1e-12);
        }
        let hess = Generator::hessian(&cum, &th).unwrap();
        let ad_hess = rows_to_matrix(&ad_hessian(&cum, &th).unwrap());
        assert_relative_eq!((&hess - &ad_hess).abs().max(), 0.0, epsilon = 1e-8);

        let dual = GaussianDualPotential { d: 2 };
        let grad = Generator::gradient(&dual, &eta).unwrap();
        let ad_grad = ad_gradient(&dual, &eta).unwrap();
        for i in 0..grad.len() {
            assert_relative_eq!(grad[i], ad_grad[i], max_relative = 1e-9, epsilon = 1e-12);
        }
        let hess = Generator::hessian(&dual, &eta).unwrap();
        let ad_hess = rows_to_matrix(&ad_hessian(&dual, &eta).unwrap());
        assert_relative_eq!((&hess - &ad_hess).abs().max(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn chart_hessians_are_mutually_inverse() {
        let (g, p, _) = sample_manifold();
        let gp = g.manifold().metric_tensor(&p, DualCoordinate::Primal).unwrap();
        let gd = g.manifold().metric_tensor(&p, DualCoordinate::Dual).unwrap();
        let prod = &gp * &gd;
        let eye = DMatrix::identity(prod.nrows(), prod.ncols());
        assert_relative_eq!((&prod - &eye).abs().max(), 0.0, epsilon = 1e-7);
    }

    #[test]
    fn dual_divergence_is_kl_and_primal_is_reverse() {
        let (g, p, q) = sample_manifold();
        let kl = gaussian_kl(&g, &p, &q).unwrap();
        let dual = bregman_divergence(g.manifold(), &p, &q, DualCoordinate::Dual).unwrap();
        assert_relative_eq!(dual, kl, max_relative = 1e-9);
        let primal = bregman_divergence(g.manifold(), &p, &q, DualCoordinate::Primal).unwrap();
        let rev = gaussian_kl(&g, &q, &p).unwrap();
        assert_relative_eq!(primal, rev, max_relative = 1e-9);
    }

    #[test]
    fn kl_matches_hand_computed_value() {
        let g = GaussianManifold::new(2).unwrap();
        let p = g.point_from_mean_cov(&[0.0, 0.0], &DMatrix::identity(2, 2)).unwrap();
        let q = g.point_from_mean_cov(&[1.0, 1.0], &dmatrix![2.0, 0.0; 0.0, 0.5]).unwrap();
        assert_relative_eq!(gaussian_kl(&g, &p, &q).unwrap(), 1.5, epsilon = 1e-12);
        assert_relative_eq!(gaussian_kl(&g, &p, &p).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn univariate_rao_distance_closed_forms() {
        let g = GaussianManifold::new(1).unwrap();
        let p = g.point_from_mean_cov(&[0.0], &dmatrix![1.0]).unwrap();
        let q = g.point_from_mean_cov(&[0.0], &dmatrix![4.0]).unwrap();
        let dist = fisher_rao_distance_uni(&g, &p, &q).unwrap();
        assert_relative_eq!(dist, 2.0_f64.sqrt() * 2.0_f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(fisher_rao_distance_uni(&g, &q, &p).unwrap(), dist, epsilon = 1e-12);

        // Translation invariance in the mean.
        let a = g.point_from_mean_cov(&[0.0], &dmatrix![1.0]).unwrap();
        let b = g.point_from_mean_cov(&[1.0], &dmatrix![1.0]).unwrap();
        let c = g.point_from_mean_cov(&[5.0], &dmatrix![1.0]).unwrap();
        let d = g.point_from_mean_cov(&[6.0], &dmatrix![1.0]).unwrap();
        assert_relative_eq!(
            fisher_rao_distance_uni(&g, &a, &b).unwrap(),
            fisher_rao_distance_uni(&g, &c, &d).unwrap(),
            epsilon = 1e-12
        );

        let g2 = GaussianManifold::new(2).unwrap();
        let p2 = g2.point_from_mean_cov(&[0.0, 0.0], &DMatrix::identity(2, 2)).unwrap();
        assert!(fisher_rao_distance_uni(&g2, &p2, &p2).is_err());
    }

    #[test]
    fn embedding_geodesic_hits_both_endpoints() {
        let (g, p, q) = sample_manifold();
        let geo = fisher_rao_geodesic(&g, &p, &q).unwrap();
        let start = geo.point_at(0.0).unwrap();
        let end = geo.point_at(1.0).unwrap();
        for i in 0..p.data.len() {
            assert_relative_eq!(start.data[i], p.data[i], epsilon = 1e-9);
            assert_relative_eq!(end.data[i], q.data[i], epsilon = 1e-9);
        }
        assert_eq!(geo.method(), FisherRaoMethod::SpdEmbedding);
    }

    #[test]
    fn same_mean_geodesic_stays_on_the_variance_axis() {
        let g = GaussianManifold::new(1).unwrap();
        let p = g.point_from_mean_cov(&[0.0], &dmatrix![1.0]).unwrap();
        let q = g.point_from_mean_cov(&[0.0], &dmatrix![4.0]).unwrap();
        let geo = fisher_rao_geodesic(&g, &p, &q).unwrap();
        for i in 0..=8 {
            let pt = geo.point_at(i as f64 / 8.0).unwrap();
            assert_relative_eq!(pt.data[0], 0.0, epsilon = 1e-12);
        }
        let len = fisher_rao_curve_length(&g, &geo, 512).unwrap();
        let exact = fisher_rao_distance_uni(&g, &p, &q).unwrap();
        assert_relative_eq!(len, exact, max_relative = 1e-3);
    }

    #[test]
    fn invalid_covariances_are_rejected() {
        let g = GaussianManifold::new(2).unwrap();
        assert!(g.point_from_mean_cov(&[0.0, 0.0], &dmatrix![1.0, 2.0; 2.0, 1.0]).is_err());
        assert!(g.point_from_mean_cov(&[0.0], &DMatrix::identity(2, 2)).is_err());
        assert!(GaussianManifold::new(0).is_err());
    }
}
