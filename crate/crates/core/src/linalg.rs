//! Dense helpers on top of nalgebra's symmetric eigensolver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::units::SINGULAR_REL_TOL;

const EIGEN_MAX_ITER: usize = 10_000;

/// Eigendecomposition of a real symmetric matrix with eigenvalues in
/// ascending order and the columns of `vectors` permuted to match.
#[derive(Debug, Clone)]
pub(crate) struct SortedEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

pub(crate) fn sym_eigen(m: &DMatrix<f64>) -> Result<SortedEigen> {
    let eig =
        SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITER).ok_or_else(|| {
            Error::NumericalFailure {
                what: "symmetric eigensolver did not converge".into(),
                residual: f64::NAN,
            }
        })?;
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        fix_sign(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok(SortedEigen { values, vectors })
}

/// Flips `v` so that its first entry with non-negligible magnitude is positive.
fn fix_sign(v: &mut DVector<f64>) {
    let scale = v.amax();
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-10 * scale).copied() {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

/// Applies `f` to the spectrum of a symmetric matrix: `U f(D) U^T`.
pub(crate) fn sym_apply(eig: &SortedEigen, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let d = DMatrix::from_diagonal(&eig.values.map(f));
    let out = &eig.vectors * d * eig.vectors.transpose();
    symmetrize(&out)
}

/// Eigendecomposition of a symmetric positive-definite matrix; rejects
/// matrices whose smallest eigenvalue is at or below `1e-12` times the largest.
pub(crate) fn spd_eigen(m: &DMatrix<f64>) -> Result<SortedEigen> {
    let eig = sym_eigen(m)?;
    let lo = eig.values[0];
    let hi = eig.values[eig.values.len() - 1];
    if hi.is_nan() || hi <= 0.0 || lo <= SINGULAR_REL_TOL * hi {
        return Err(Error::InvalidState(format!(
            "matrix is not positive definite (eigenvalues in [{lo:e}, {hi:e}])"
        )));
    }
    Ok(eig)
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest absolute entry of `m - m^T`.
pub(crate) fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}
