use crate::ad::{Scalar, ScalarFn};
use crate::atlas::ConvertFn;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::{CoordinateTag, Point};
use nalgebra::DMatrix;
use std::sync::Arc;

/// Validates a strictly positive probability vector summing to 1 (1e-9).
pub(crate) fn check_simplex(p: &[f64]) -> Result<()> {
    for (i, &v) in p.iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::domain(i, "probabilities must be strictly positive"));
        }
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::domain(None, format!("probabilities sum to {sum}, expected 1")));
    }
    Ok(())
}

/// F(θ) = n·log(1 + Σᵢ e^{θᵢ}): the log-partition of n draws from a
/// (k−1)-dimensional family with the last category as reference. Evaluated
/// with a max shift so large natural parameters do not overflow.
#[derive(Clone, Debug)]
pub struct MultinomialCumulant {
    pub k: usize,
    pub n: f64,
}

impl MultinomialCumulant {
    /// Probabilities (p₁..p_{k−1}) of the explicit categories at θ.
    fn probs(&self, x: &[f64]) -> Vec<f64> {
        let shift = x.iter().cloned().fold(0.0_f64, f64::max);
        let z = (-shift).exp() + x.iter().map(|t| (t - shift).exp()).sum::<f64>();
        x.iter().map(|t| (t - shift).exp() / z).collect()
    }
}

impl ScalarFn for MultinomialCumulant {
    fn dim(&self) -> usize {
        self.k - 1
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let shift = x.iter().map(|v| v.primal()).fold(0.0_f64, f64::max);
        let mut z = S::constant((-shift).exp());
        for &xi in x {
            z = z + (xi - S::constant(shift)).exp();
        }
        Ok((z.ln() + S::constant(shift)).scale(self.n))
    }
}

impl crate::generator::Generator for MultinomialCumulant {
    fn dimension(&self) -> usize {
        self.k - 1
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.k - 1, x.len())?;
        check_finite(x, "generator input")?;
        let shift = x.iter().cloned().fold(0.0_f64, f64::max);
        let z = (-shift).exp() + x.iter().map(|t| (t - shift).exp()).sum::<f64>();
        Ok(self.n * (z.ln() + shift))
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.k - 1, x.len())?;
        check_finite(x, "generator input")?;
        Ok(self.probs(x).iter().map(|p| self.n * p).collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(self.k - 1, x.len())?;
        check_finite(x, "generator input")?;
        let p = self.probs(x);
        let m = self.k - 1;
        Ok(DMatrix::from_fn(m, m, |i, j| {
            let diag = if i == j { p[i] } else { 0.0 };
            self.n * (diag - p[i] * p[j])
        }))
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.k - 1, x.len())?;
        check_finite(x, "generator input")
    }
}

/// F*(η) = Σᵢ ηᵢ·log ηᵢ + (n−Σηᵢ)·log(n−Σηᵢ) − n·log n on the open scaled
/// simplex {η > 0, Ση < n}: the negentropy dual of [`MultinomialCumulant`].
#[derive(Clone, Debug)]
pub struct MultinomialNegEntropy {
    pub k: usize,
    pub n: f64,
}

impl MultinomialNegEntropy {
    fn rest(&self, x: &[f64]) -> f64 {
        self.n - x.iter().sum::<f64>()
    }
}

impl ScalarFn for MultinomialNegEntropy {
    fn dim(&self) -> usize {
        self.k - 1
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let mut rest = S::constant(self.n);
        let mut acc = S::constant(0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi.primal() <= 0.0 {
                return Err(Error::domain(i, "dual coordinates must be strictly positive"));
            }
            acc = acc + xi * xi.ln();
            rest = rest - xi;
        }
        if rest.primal() <= 0.0 {
            return Err(Error::domain(None, "dual coordinates must sum below the trial count"));
        }
        Ok(acc + rest * rest.ln() - S::constant(self.n * self.n.ln()))
    }
}

impl crate::generator::Generator for MultinomialNegEntropy {
    fn dimension(&self) -> usize {
        self.k - 1
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.domain_check(x)?;
        let rest = self.rest(x);
        let acc: f64 = x.iter().map(|v| v * v.ln()).sum();
        Ok(acc + rest * rest.ln() - self.n * self.n.ln())
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain_check(x)?;
        let log_rest = self.rest(x).ln();
        Ok(x.iter().map(|v| v.ln() - log_rest).collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.domain_check(x)?;
        let inv_rest = 1.0 / self.rest(x);
        let m = self.k - 1;
        Ok(DMatrix::from_fn(m, m, |i, j| {
            let diag = if i == j { 1.0 / x[i] } else { 0.0 };
            diag + inv_rest
        }))
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.k - 1, x.len())?;
        check_finite(x, "generator input")?;
        for (i, &v) in x.iter().enumerate() {
            if v <= 0.0 {
                return Err(Error::domain(i, "dual coordinates must be strictly positive"));
            }
        }
        if self.rest(x) <= 0.0 {
            return Err(Error::domain(None, "dual coordinates must sum below the trial count"));
        }
        Ok(())
    }

    fn gradient_inverse_seed(&self, _target: &[f64]) -> Vec<f64> {
        vec![self.n / self.k as f64; self.k - 1]
    }
}

fn build_family_manifold(k: usize, n: f64) -> Result<BregmanManifold> {
    if k < 2 {
        return Err(Error::invalid("a discrete family needs at least two categories"));
    }
    let mut m = BregmanManifold::new(
        Arc::new(MultinomialCumulant { k, n }),
        Some(Arc::new(MultinomialNegEntropy { k, n })),
    )?;

    m.register_coords(CoordinateTag::lambda(), k);
    let lambda_to_theta: ConvertFn = Arc::new(move |p: &[f64]| {
        check_simplex(p)?;
        let log_last = p[k - 1].ln();
        Ok(p[..k - 1].iter().map(|v| v.ln() - log_last).collect())
    });
    m.register_conversion(&CoordinateTag::lambda(), &CoordinateTag::theta(), lambda_to_theta)?;

    let theta_to_lambda: ConvertFn = Arc::new(move |t: &[f64]| {
        let shift = t.iter().cloned().fold(0.0_f64, f64::max);
        let z = (-shift).exp() + t.iter().map(|v| (v - shift).exp()).sum::<f64>();
        let mut p: Vec<f64> = t.iter().map(|v| (v - shift).exp() / z).collect();
        p.push((-shift).exp() / z);
        Ok(p)
    });
    m.register_conversion(&CoordinateTag::theta(), &CoordinateTag::lambda(), theta_to_lambda)?;

    // Direct λ↔η edges keep round trips exact: η is simply n·p.
    let lambda_to_eta: ConvertFn = Arc::new(move |p: &[f64]| {
        check_simplex(p)?;
        Ok(p[..k - 1].iter().map(|v| n * v).collect())
    });
    m.register_conversion(&CoordinateTag::lambda(), &CoordinateTag::eta(), lambda_to_eta)?;

    let eta_to_lambda: ConvertFn = Arc::new(move |e: &[f64]| {
        let mut p: Vec<f64> = e.iter().map(|v| v / n).collect();
        let rest = 1.0 - p.iter().sum::<f64>();
        p.push(rest);
        check_simplex(&p)?;
        Ok(p)
    });
    m.register_conversion(&CoordinateTag::eta(), &CoordinateTag::lambda(), eta_to_lambda)?;

    Ok(m)
}

/// Family of categorical distributions over k outcomes, dimension k−1.
///
/// Charts: λ = full probability vector (k entries, interior of the
/// simplex); θᵢ = log(pᵢ/p_k); ηᵢ = pᵢ for i < k. The Bregman divergence in
/// η-coordinates is the discrete Kullback-Leibler divergence.
pub struct CategoricalManifold {
    k: usize,
    m: BregmanManifold,
}

impl CategoricalManifold {
    pub fn new(k: usize) -> Result<Self> {
        Ok(CategoricalManifold { k, m: build_family_manifold(k, 1.0)? })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn manifold(&self) -> &BregmanManifold {
        &self.m
    }

    /// Point in λ-coordinates from a full probability vector.
    pub fn point_from_probs(&self, p: &[f64]) -> Result<Point> {
        check_dim(self.k, p.len())?;
        check_simplex(p)?;
        Point::lambda(p.to_vec())
    }
}

/// Family of multinomial counts: k categories, n trials. Same charts as the
/// categorical family scaled by n (η = n·p); at n = 1 every formula reduces
/// bit-for-bit to [`CategoricalManifold`] because the two share their code.
pub struct MultinomialManifold {
    k: usize,
    n: usize,
    m: BregmanManifold,
}

impl MultinomialManifold {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a multinomial family needs at least one trial"));
        }
        Ok(MultinomialManifold { k, n, m: build_family_manifold(k, n as f64)? })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn trials(&self) -> usize {
        self.n
    }

    pub fn manifold(&self) -> &BregmanManifold {
        &self.m
    }

    pub fn point_from_probs(&self, p: &[f64]) -> Result<Point> {
        check_dim(self.k, p.len())?;
        check_simplex(p)?;
        Point::lambda(p.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::bregman_divergence;
    use crate::point::DualCoordinate;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_point_has_zero_natural_coordinates() {
        let cat = CategoricalManifold::new(3).unwrap();
        let p = cat.point_from_probs(&[1.0 / 3.0; 3]).unwrap();
        let theta = cat.manifold().coords_in(&p, DualCoordinate::Primal).unwrap();
        for t in theta {
            assert_relative_eq!(t, 0.0, epsilon = 1e-15);
        }
        let eta = cat.manifold().coords_in(&p, DualCoordinate::Dual).unwrap();
        for e in eta {
            assert_relative_eq!(e, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn dual_divergence_is_discrete_kl() {
        let cat = CategoricalManifold::new(3).unwrap();
        let p = [0.7, 0.2, 0.1];
        let q = [0.2, 0.5, 0.3];
        let pp = cat.point_from_probs(&p).unwrap();
        let qq = cat.point_from_probs(&q).unwrap();
        let kl: f64 =
            p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();
        let div =
            bregman_divergence(cat.manifold(), &pp, &qq, DualCoordinate::Dual).unwrap();
        assert_relative_eq!(div, kl, epsilon = 1e-9);
    }

    #[test]
    fn conjugate_value_of_binary_midpoint() {
        let cat = CategoricalManifold::new(2).unwrap();
        let v = cat.manifold().conjugate_value(&[0.5]).unwrap();
        assert_relative_eq!(v, -(2.0_f64.ln()), epsilon = 1e-12);
    }

    #[test]
    fn multinomial_at_one_trial_is_bit_compatible_with_categorical() {
        let cat = CategoricalManifold::new(4).unwrap();
        let multi = MultinomialManifold::new(4, 1).unwrap();
        let p = [0.4, 0.3, 0.2, 0.1];
        let cp = cat.point_from_probs(&p).unwrap();
        let mp = multi.point_from_probs(&p).unwrap();
        for dc in [DualCoordinate::Primal, DualCoordinate::Dual] {
            let a = cat.manifold().coords_in(&cp, dc).unwrap();
            let b = multi.manifold().coords_in(&mp, dc).unwrap();
            assert_eq!(a, b);
        }
        let q = [0.1, 0.2, 0.3, 0.4];
        let cq = cat.point_from_probs(&q).unwrap();
        let mq = multi.point_from_probs(&q).unwrap();
        for dc in [DualCoordinate::Primal, DualCoordinate::Dual] {
            assert_eq!(
                bregman_divergence(cat.manifold(), &cp, &cq, dc).unwrap(),
                bregman_divergence(multi.manifold(), &mp, &mq, dc).unwrap()
            );
        }
    }

    #[test]
    fn multinomial_scales_dual_coordinates_by_trials() {
        let multi = MultinomialManifold::new(3, 10).unwrap();
        let p = multi.point_from_probs(&[0.5, 0.3, 0.2]).unwrap();
        let eta = multi.manifold().coords_in(&p, DualCoordinate::Dual).unwrap();
        assert_relative_eq!(eta[0], 5.0, epsilon = 1e-12);
        assert_relative_eq!(eta[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn simplex_violations_are_domain_errors() {
        let cat = CategoricalManifold::new(3).unwrap();
        assert!(cat.point_from_probs(&[0.5, 0.5, 0.0]).is_err());
        assert!(cat.point_from_probs(&[0.5, 0.4, 0.2]).is_err());
        assert!(CategoricalManifold::new(1).is_err());
        assert!(MultinomialManifold::new(3, 0).is_err());
    }

    #[test]
    fn lambda_roundtrip_through_both_flat_charts() {
        let cat = CategoricalManifold::new(3).unwrap();
        let p = cat.point_from_probs(&[0.6, 0.25, 0.15]).unwrap();
        for tag in [CoordinateTag::theta(), CoordinateTag::eta()] {
            let there = cat.manifold().atlas_convert(&p, &tag).unwrap();
            let back = cat.manifold().atlas_convert(&there, &CoordinateTag::lambda()).unwrap();
            for i in 0..3 {
                assert_relative_eq!(back.data[i], p.data[i], epsilon = 1e-12);
            }
        }
    }
}
