use crate::ad::{Scalar, ScalarFn};
use crate::atlas::ConvertFn;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::linalg::{
    grad_vec, is_spd, logdet_pd_generic, logdet_spd, spd_inv_sqrt, spd_inverse, spd_sqrt,
    sym_index, sym_len, sym_pairs, sym_vec, vec_grad, vec_sym,
};
use crate::manifold::BregmanManifold;
use crate::point::{CoordinateTag, Point};
use nalgebra::DMatrix;
use std::sync::Arc;

/// Log-determinant barrier F(θ) = −log det Θ on the SPD cone, with Θ stored
/// as its upper triangle. The dual coordinates are η = −Θ⁻¹ in doubled
/// triangle layout, so the flat pairing of θ with η equals tr(Θ·(−Θ⁻¹)).
#[derive(Clone, Debug)]
pub struct LogDetCumulant {
    pub d: usize,
}

impl ScalarFn for LogDetCumulant {
    fn dim(&self) -> usize {
        sym_len(self.d)
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let d = self.d;
        let mut m = vec![vec![S::constant(0.0); d]; d];
        let mut k = 0;
        for i in 0..d {
            for j in i..d {
                m[i][j] = x[k];
                m[j][i] = x[k];
                k += 1;
            }
        }
        Ok(-logdet_pd_generic(&m)?)
    }
}

impl crate::generator::Generator for LogDetCumulant {
    fn dimension(&self) -> usize {
        sym_len(self.d)
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.domain_check(x)?;
        Ok(-logdet_spd(&vec_sym(x)?)?)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain_check(x)?;
        let w = spd_inverse(&vec_sym(x)?)?;
        Ok(grad_vec(&(-&w)).as_slice().to_vec())
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.domain_check(x)?;
        let d = self.d;
        let w = spd_inverse(&vec_sym(x)?)?;
        let pairs = sym_pairs(d);
        let n = pairs.len();
        // tr(Θ⁻¹·E_ab·Θ⁻¹·E_cd) with E the unit symmetric basis matching the
        // plain-triangle chart (off-diagonal coordinates move two entries).
        Ok(DMatrix::from_fn(n, n, |row, col| {
            let (a, b) = pairs[row];
            let (c, e) = pairs[col];
            match (a == b, c == e) {
                (true, true) => w[(a, c)] * w[(a, c)],
                (true, false) => 2.0 * w[(a, c)] * w[(a, e)],
                (false, true) => 2.0 * w[(a, c)] * w[(b, c)],
                (false, false) => 2.0 * (w[(a, c)] * w[(b, e)] + w[(a, e)] * w[(b, c)]),
            }
        }))
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(sym_len(self.d), x.len())?;
        check_finite(x, "generator input")?;
        if !is_spd(&vec_sym(x)?, 1e-9) {
            return Err(Error::not_spd("natural coordinates must form an SPD matrix"));
        }
        Ok(())
    }

    fn gradient_inverse_seed(&self, _target: &[f64]) -> Vec<f64> {
        // Identity matrix, the centre of the cone.
        let d = self.d;
        let mut v = vec![0.0; sym_len(d)];
        for a in 0..d {
            v[sym_index(d, a, a)] = 1.0;
        }
        v
    }
}

/// Conjugate of [`LogDetCumulant`]: F*(η) = −log det(−H) − d with
/// H = the matrix stored by the doubled triangle η.
#[derive(Clone, Debug)]
pub struct LogDetDualPotential {
    pub d: usize,
}

impl LogDetDualPotential {
    fn neg_matrix(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let h = vec_grad(x)?;
        let neg = -&h;
        if !is_spd(&neg, 1e-9) {
            return Err(Error::not_spd("dual coordinates must form a negative definite matrix"));
        }
        Ok(neg)
    }
}

impl ScalarFn for LogDetDualPotential {
    fn dim(&self) -> usize {
        sym_len(self.d)
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let d = self.d;
        let mut m = vec![vec![S::constant(0.0); d]; d];
        let mut k = 0;
        for i in 0..d {
            for j in i..d {
                let v = if i == j { -x[k] } else { (-x[k]).scale(0.5) };
                m[i][j] = v;
                m[j][i] = v;
                k += 1;
            }
        }
        Ok(-logdet_pd_generic(&m)? - S::constant(d as f64))
    }
}

impl crate::generator::Generator for LogDetDualPotential {
    fn dimension(&self) -> usize {
        sym_len(self.d)
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(sym_len(self.d), x.len())?;
        check_finite(x, "generator input")?;
        Ok(-logdet_spd(&self.neg_matrix(x)?)? - self.d as f64)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(sym_len(self.d), x.len())?;
        check_finite(x, "generator input")?;
        let theta = spd_inverse(&self.neg_matrix(x)?)?;
        Ok(sym_vec(&theta).as_slice().to_vec())
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(sym_len(self.d), x.len())?;
        check_finite(x, "generator input")?;
        let d = self.d;
        let t = spd_inverse(&self.neg_matrix(x)?)?;
        let pairs = sym_pairs(d);
        let n = pairs.len();
        // tr(Θ·S_ab·Θ·S_cd) with S the halved symmetric basis matching the
        // doubled-triangle chart.
        Ok(DMatrix::from_fn(n, n, |row, col| {
            let (a, b) = pairs[row];
            let (c, e) = pairs[col];
            match (a == b, c == e) {
                (true, true) => t[(a, c)] * t[(a, c)],
                (true, false) => t[(a, c)] * t[(a, e)],
                (false, true) => t[(a, c)] * t[(b, c)],
                (false, false) => 0.5 * (t[(a, c)] * t[(b, e)] + t[(a, e)] * t[(b, c)]),
            }
        }))
    }

    fn domain_check(&self, x: &[f64]) -> Result<()> {
        check_dim(sym_len(self.d), x.len())?;
        check_finite(x, "generator input")?;
        self.neg_matrix(x).map(|_| ())
    }

    fn gradient_inverse_seed(&self, _target: &[f64]) -> Vec<f64> {
        // η-coordinates of the identity matrix.
        let d = self.d;
        let mut v = vec![0.0; sym_len(d)];
        for a in 0..d {
            v[sym_index(d, a, a)] = -1.0;
        }
        v
    }
}

/// Manifold of d×d symmetric positive definite matrices under the
/// log-determinant barrier, dimension d(d+1)/2. The λ-chart equals the
/// natural chart (the flattened matrix itself).
pub struct PSDManifold {
    d: usize,
    m: BregmanManifold,
}

impl PSDManifold {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("matrices must have side length at least 1"));
        }
        let mut m = BregmanManifold::new(
            Arc::new(LogDetCumulant { d }),
            Some(Arc::new(LogDetDualPotential { d })),
        )?;
        m.register_coords(CoordinateTag::lambda(), sym_len(d));
        let id: ConvertFn = Arc::new(|x: &[f64]| Ok(x.to_vec()));
        m.register_conversion(&CoordinateTag::lambda(), &CoordinateTag::theta(), id.clone())?;
        m.register_conversion(&CoordinateTag::theta(), &CoordinateTag::lambda(), id)?;
        Ok(PSDManifold { d, m })
    }

    /// Matrix side length d (the manifold itself has dimension d(d+1)/2).
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn manifold(&self) -> &BregmanManifold {
        &self.m
    }

    /// Point in the natural chart from an SPD matrix.
    pub fn point_from_matrix(&self, m: &DMatrix<f64>) -> Result<Point> {
        if m.nrows() != self.d || m.ncols() != self.d {
            return Err(Error::invalid(format!(
                "matrix must be {0}×{0}, got {1}×{2}",
                self.d,
                m.nrows(),
                m.ncols()
            )));
        }
        if !is_spd(m, 1e-9) {
            return Err(Error::not_spd("matrix must be symmetric positive definite"));
        }
        Point::theta(sym_vec(m).as_slice().to_vec())
    }

    /// Matrix recovered from a point in any registered chart.
    pub fn matrix_of(&self, p: &Point) -> Result<DMatrix<f64>> {
        let th = self.m.atlas_convert(p, &CoordinateTag::theta())?;
        vec_sym(&th.data)
    }
}

/// Matrix geometric mean A # B = A^{1/2}·(A^{−1/2}·B·A^{−1/2})^{1/2}·A^{1/2},
/// the midpoint of the affine-invariant geodesic between SPD matrices.
pub fn spd_geometric_mean(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if a.nrows() != a.ncols() || a.shape() != b.shape() {
        return Err(Error::invalid("geometric mean needs two square matrices of equal size"));
    }
    if !is_spd(a, 1e-9) || !is_spd(b, 1e-9) {
        return Err(Error::not_spd("geometric mean needs SPD operands"));
    }
    let r = spd_sqrt(a)?;
    let ri = spd_inv_sqrt(a)?;
    let mid = spd_sqrt(&(0.5 * ((&ri * b * &ri) + (&ri * b * &ri).transpose())))?;
    let out = &r * mid * &r;
    Ok(0.5 * (&out + out.transpose()))
}
