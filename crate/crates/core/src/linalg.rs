//! Matrix utilities shared across the kernel.
//!
//! Symmetric matrices travel through flat charts in two distinct layouts:
//!
//! * point layout ([`sym_vec`]): upper triangle, row-major, entries as-is;
//! * gradient layout ([`grad_vec`]): same order, off-diagonals doubled.
//!
//! The doubling makes the plain Euclidean dot product of a gradient-layout
//! vector with a point-layout vector equal the trace pairing `tr(G·X)`, so
//! divergence formulas written for vectors stay valid for matrix charts.

use crate::ad::Scalar;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Length of the flattened upper triangle of a `d`×`d` symmetric matrix.
pub fn sym_len(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Side length recovered from a flattened triangle length.
pub fn sym_side(len: usize) -> Result<usize> {
    let d = ((((8 * len + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
    if sym_len(d) == len {
        Ok(d)
    } else {
        Err(Error::invalid(format!("{len} is not a triangular number")))
    }
}

/// Flat position of entry `(a, b)` with `a <= b` in the triangle layout.
pub fn sym_index(d: usize, a: usize, b: usize) -> usize {
    debug_assert!(a <= b && b < d);
    a * d - a * (a + 1) / 2 + b
}

/// Index pairs `(a, b)` with `a <= b` in triangle-layout order.
pub fn sym_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(sym_len(d));
    for a in 0..d {
        for b in a..d {
            out.push((a, b));
        }
    }
    out
}

/// Upper triangle of a symmetric matrix, row-major, entries unchanged.
pub fn sym_vec(m: &DMatrix<f64>) -> DVector<f64> {
    let d = m.nrows();
    debug_assert_eq!(d, m.ncols());
    let mut out = DVector::zeros(sym_len(d));
    let mut k = 0;
    for a in 0..d {
        for b in a..d {
            out[k] = m[(a, b)];
            k += 1;
        }
    }
    out
}

/// Inverse of [`sym_vec`].
pub fn vec_sym(v: &[f64]) -> Result<DMatrix<f64>> {
    let d = sym_side(v.len())?;
    let mut m = DMatrix::zeros(d, d);
    let mut k = 0;
    for a in 0..d {
        for b in a..d {
            m[(a, b)] = v[k];
            m[(b, a)] = v[k];
            k += 1;
        }
    }
    Ok(m)
}

/// Triangle layout with off-diagonals doubled, for gradient-type quantities.
pub fn grad_vec(m: &DMatrix<f64>) -> DVector<f64> {
    let d = m.nrows();
    debug_assert_eq!(d, m.ncols());
    let mut out = DVector::zeros(sym_len(d));
    let mut k = 0;
    for a in 0..d {
        for b in a..d {
            out[k] = if a == b { m[(a, b)] } else { 2.0 * m[(a, b)] };
            k += 1;
        }
    }
    out
}

/// Inverse of [`grad_vec`].
pub fn vec_grad(v: &[f64]) -> Result<DMatrix<f64>> {
    let d = sym_side(v.len())?;
    let mut m = DMatrix::zeros(d, d);
    let mut k = 0;
    for a in 0..d {
        for b in a..d {
            let val = if a == b { v[k] } else { 0.5 * v[k] };
            m[(a, b)] = val;
            m[(b, a)] = val;
            k += 1;
        }
    }
    Ok(m)
}

/// Applies `f` to the eigenvalues of a symmetric matrix. Fails with
/// [`Error::NotSpd`] when `require_positive` is set and an eigenvalue is
/// not strictly positive.
pub fn sym_eigen_map(
    m: &DMatrix<f64>,
    require_positive: bool,
    f: impl Fn(f64) -> f64,
) -> Result<DMatrix<f64>> {
    let d = m.nrows();
    if d != m.ncols() {
        return Err(Error::invalid("eigen map needs a square matrix"));
    }
    let eig = m.clone().symmetric_eigen();
    let mut vals = eig.eigenvalues.clone();
    for i in 0..d {
        if require_positive && vals[i] <= 0.0 {
            return Err(Error::not_spd(format!("eigenvalue {} = {:.3e}", i, vals[i])));
        }
        vals[i] = f(vals[i]);
    }
    let q = eig.eigenvectors;
    Ok(&q * DMatrix::from_diagonal(&vals) * q.transpose())
}

/// Symmetric positive definite square root.
pub fn spd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    sym_eigen_map(m, true, f64::sqrt)
}

/// Inverse square root of an SPD matrix.
pub fn spd_inv_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    sym_eigen_map(m, true, |v| 1.0 / v.sqrt())
}

/// Real power `m^t` of an SPD matrix.
pub fn spd_power(m: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    sym_eigen_map(m, true, |v| v.powf(t))
}

/// True when the matrix is symmetric within `tol` and positive definite.
pub fn is_spd(m: &DMatrix<f64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let asym = (m - m.transpose()).abs().max();
    if asym > tol * (1.0 + m.abs().max()) {
        return false;
    }
    m.clone().symmetric_eigen().eigenvalues.iter().all(|&v| v > 0.0)
}

/// Inverse of an SPD matrix through its eigendecomposition.
pub fn spd_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    sym_eigen_map(m, true, |v| 1.0 / v)
}

/// Log-determinant of an SPD matrix; fails when an eigenvalue is not
/// strictly positive.
pub fn logdet_spd(m: &DMatrix<f64>) -> Result<f64> {
    let eig = m.clone().symmetric_eigen();
    let mut acc = 0.0;
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v <= 0.0 {
            return Err(Error::not_spd(format!("eigenvalue {} = {:.3e}", i, v)));
        }
        acc += v.ln();
    }
    Ok(acc)
}

/// Solves `A·x = b` by Gaussian elimination with partial pivoting, generic
/// over the differentiation level. Pivoting compares primal magnitudes so
/// the factorisation is identical at every order.
pub fn solve_generic<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<Vec<S>> {
    let (x, _) = eliminate(a, b)?;
    Ok(x)
}

/// Log-determinant of a positive definite matrix in a generic scalar field.
/// Fails when the determinant's primal part is not strictly positive.
pub fn logdet_pd_generic<S: Scalar>(a: &[Vec<S>]) -> Result<S> {
    let n = a.len();
    let zeros = vec![S::constant(0.0); n];
    let (_, det) = eliminate(a, &zeros)?;
    if det.primal() <= 0.0 {
        return Err(Error::not_spd(format!("determinant {:.3e} is not positive", det.primal())));
    }
    Ok(det.ln())
}

/// Combined solve + determinant for one elimination pass.
pub fn solve_and_det_generic<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<(Vec<S>, S)> {
    eliminate(a, b)
}

fn eliminate<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<(Vec<S>, S)> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) || b.len() != n {
        return Err(Error::invalid("elimination needs a square system"));
    }
    let mut m: Vec<Vec<S>> = a.to_vec();
    let mut rhs: Vec<S> = b.to_vec();
    let mut det = S::constant(1.0);
    for col in 0..n {
        let mut pivot = col;
        let mut best = m[col][col].primal().abs();
        for row in col + 1..n {
            let mag = m[row][col].primal().abs();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best < 1e-300 {
            return Err(Error::not_spd("singular matrix in elimination".to_string()));
        }
        if pivot != col {
            m.swap(pivot, col);
            rhs.swap(pivot, col);
            det = -det;
        }
        let diag = m[col][col];
        det = det * diag;
        for row in col + 1..n {
            let factor = m[row][col] / diag;
            for k in col..n {
                let upd = m[col][k];
                m[row][k] = m[row][k] - factor * upd;
            }
            let upd = rhs[col];
            rhs[row] = rhs[row] - factor * upd;
        }
    }
    let mut x = vec![S::constant(0.0); n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for k in col + 1..n {
            acc = acc - m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    Ok((x, det))
}

/// Hessian rows, as produced by forward AD, into a dense matrix.
pub fn rows_to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, m, |i, j| rows[i][j])
}
