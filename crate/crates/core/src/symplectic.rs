//! Symplectic form, symplectic membership, symplectic spectra and the
//! Williamson normal form of positive-definite covariance matrices.
//!
//! All matrices use qqpp ordering, so the symplectic form is the block matrix
//! `[[0, I], [-I, 0]]`. Spectra are computed from the Hermitian matrix
//! `i K Omega K` with `K = Gamma^{1/2}`, whose eigenvalues are `+-sigma_k`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, spd_eigen, sym_apply};
use crate::state::CovarianceMatrix;
use crate::units::DEFAULT_TOL;

const HERMITIAN_MAX_ITER: usize = 10_000;

/// The symplectic form `Omega` for `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(
                "mode count must be at least 1".into(),
            ));
        }
        Ok(Self {
            n,
            matrix: omega(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Builds `Omega = [[0, I_n], [-I_n, 0]]`.
pub fn symplectic_form(n: usize) -> Result<SymplecticForm> {
    SymplecticForm::new(n)
}

pub(crate) fn omega(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = 1.0;
        m[(n + i, i)] = -1.0;
    }
    m
}

fn mode_count(dim: usize, what: &str) -> Result<usize> {
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "{what} must have positive even dimension, got {dim}"
        )));
    }
    Ok(dim / 2)
}

/// Max-abs entry of `S Omega S^T - Omega`.
pub fn symplectic_residual(s: &DMatrix<f64>) -> Result<f64> {
    if !s.is_square() {
        return Err(Error::InvalidDimension(format!(
            "matrix must be square, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let n = mode_count(s.nrows(), "symplectic matrix")?;
    let w = omega(n);
    Ok(max_abs(&(s * &w * s.transpose() - w)))
}

/// True iff `S Omega S^T` matches `Omega` entrywise within `tol`.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(s)? <= tol)
}

/// A matrix known to satisfy `S Omega S^T = Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Wraps `matrix` after checking membership at tolerance `tol`.
    pub fn new(matrix: DMatrix<f64>, tol: f64) -> Result<Self> {
        let residual = symplectic_residual(&matrix)?;
        if residual > tol {
            return Err(Error::InvalidState(format!(
                "matrix is not symplectic (residual {residual:e} > {tol:e})"
            )));
        }
        Ok(Self {
            n: matrix.nrows() / 2,
            matrix,
        })
    }

    pub(crate) fn new_unchecked(matrix: DMatrix<f64>) -> Self {
        Self {
            n: matrix.nrows() / 2,
            matrix,
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        mode_count(2 * n, "symplectic matrix")?;
        Ok(Self::new_unchecked(DMatrix::identity(2 * n, 2 * n)))
    }

    /// `O (+) O` for an orthogonal `n x n` matrix `O` acting on both quadrature blocks.
    pub fn from_orthogonal(o: &DMatrix<f64>, tol: f64) -> Result<Self> {
        if !o.is_square() || o.nrows() == 0 {
            return Err(Error::InvalidDimension(
                "orthogonal block must be square".into(),
            ));
        }
        let n = o.nrows();
        let orth = max_abs(&(o * o.transpose() - DMatrix::identity(n, n)));
        if orth > tol {
            return Err(Error::InvalidState(format!(
                "block is not orthogonal (residual {orth:e})"
            )));
        }
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        s.view_mut((0, 0), (n, n)).copy_from(o);
        s.view_mut((n, n), (n, n)).copy_from(o);
        Ok(Self::new_unchecked(s))
    }

    /// Direct sum acting on the modes of `a` first, then those of `b`,
    /// laid out in qqpp order.
    pub fn direct_sum(a: &SymplecticMatrix, b: &SymplecticMatrix) -> Self {
        let (na, nb) = (a.n, b.n);
        let n = na + nb;
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        let place = |s: &mut DMatrix<f64>, src: &DMatrix<f64>, k: usize, off: usize| {
            for (bi, ri) in [(0, 0), (1, n)] {
                for (bj, cj) in [(0, 0), (1, n)] {
                    for i in 0..k {
                        for j in 0..k {
                            s[(ri + off + i, cj + off + j)] = src[(bi * k + i, bj * k + j)];
                        }
                    }
                }
            }
        };
        place(&mut s, &a.matrix, na, 0);
        place(&mut s, &b.matrix, nb, na);
        Self::new_unchecked(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn residual(&self) -> f64 {
        max_abs(&(&self.matrix * omega(self.n) * self.matrix.transpose() - omega(self.n)))
    }
}

/// Symplectic eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymplecticSpectrum(Vec<f64>);

impl SymplecticSpectrum {
    /// Sorts `values` descending.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.last().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.0.first().copied().unwrap_or(f64::NAN)
    }

    /// Largest elementwise difference to `other`; infinite on length mismatch.
    pub fn max_deviation(&self, other: &SymplecticSpectrum) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// Positive eigenpairs of the Hermitian matrix `i K Omega K`.
struct HermitianPairs {
    /// Descending.
    sigmas: Vec<f64>,
    /// Matching unit eigenvectors.
    vectors: Vec<Vec<Complex64>>,
    inv_sqrt: DMatrix<f64>,
}

fn hermitian_pairs(gamma: &DMatrix<f64>, want_vectors: bool) -> Result<HermitianPairs> {
    let dim = gamma.nrows();
    let n = dim / 2;
    let eig = spd_eigen(gamma)?;
    let sqrt = sym_apply(&eig, f64::sqrt);
    let inv_sqrt = if want_vectors {
        sym_apply(&eig, |x| 1.0 / x.sqrt())
    } else {
        DMatrix::zeros(0, 0)
    };
    let a = &sqrt * omega(n) * &sqrt;
    let a = (&a - a.transpose()) * 0.5;
    let h = a.map(|x| Complex64::new(0.0, x));
    let herm = SymmetricEigen::try_new(h, f64::EPSILON, HERMITIAN_MAX_ITER).ok_or_else(|| {
        Error::NumericalFailure {
            what: "Hermitian eigensolver did not converge".into(),
            residual: f64::NAN,
        }
    })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| herm.eigenvalues[j].total_cmp(&herm.eigenvalues[i]));
    order.truncate(n);
    let sigmas = order.iter().map(|&i| herm.eigenvalues[i]).collect();
    let vectors = if want_vectors {
        order
            .iter()
            .map(|&i| herm.eigenvectors.column(i).iter().copied().collect())
            .collect()
    } else {
        Vec::new()
    };
    Ok(HermitianPairs {
        sigmas,
        vectors,
        inv_sqrt,
    })
}

/// Symplectic eigenvalues of a positive-definite covariance matrix.
pub fn symplectic_spectrum(gamma: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    spectrum_of(gamma.matrix())
}

pub(crate) fn spectrum_of(gamma: &DMatrix<f64>) -> Result<SymplecticSpectrum> {
    let pairs = hermitian_pairs(gamma, false)?;
    Ok(SymplecticSpectrum::new(pairs.sigmas))
}

/// `S_w Gamma S_w^T = normal_form = diag(sigma, sigma)` with `S_w` symplectic.
#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    pub spectrum: SymplecticSpectrum,
    pub transform: SymplecticMatrix,
    pub normal_form: DMatrix<f64>,
    /// Max-abs entry of `S_w Gamma S_w^T - normal_form`.
    pub congruence_residual: f64,
    /// Max-abs entry of `S_w Omega S_w^T - Omega`.
    pub symplectic_residual: f64,
}

/// Williamson normal form at the default residual tolerance.
pub fn williamson(gamma: &CovarianceMatrix) -> Result<WilliamsonDecomposition> {
    williamson_with_tol(gamma, DEFAULT_TOL)
}

pub fn williamson_with_tol(gamma: &CovarianceMatrix, tol: f64) -> Result<WilliamsonDecomposition> {
    let g = gamma.matrix();
    let n = gamma.n();
    let pairs = hermitian_pairs(g, true)?;

    // For i A v = s v with v = x + i y: A x = s y and A y = -s x. The real and
    // imaginary parts of the n positive eigenvectors, scaled by sqrt(2), form
    // an orthonormal basis bringing A to [[0, D], [-D, 0]].
    let mut basis = DMatrix::zeros(2 * n, 2 * n);
    for (k, v) in pairs.vectors.iter().enumerate() {
        let v = fix_phase(v);
        for (row, z) in v.iter().enumerate() {
            basis[(row, k)] = std::f64::consts::SQRT_2 * z.im;
            basis[(row, n + k)] = std::f64::consts::SQRT_2 * z.re;
        }
    }

    let mut half = Vec::with_capacity(2 * n);
    half.extend(pairs.sigmas.iter().map(|s| s.sqrt()));
    half.extend(pairs.sigmas.iter().map(|s| s.sqrt()));
    let d_half = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(half));
    let s = d_half * basis.transpose() * &pairs.inv_sqrt;

    let mut diag = pairs.sigmas.clone();
    diag.extend_from_slice(&pairs.sigmas);
    let normal_form = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));

    let congruence_residual = max_abs(&(&s * g * s.transpose() - &normal_form));
    let transform = SymplecticMatrix::new_unchecked(s);
    let symplectic_residual = transform.residual();
    let worst = congruence_residual.max(symplectic_residual);
    if worst.is_nan() || worst > tol {
        return Err(Error::NumericalFailure {
            what: "Williamson transform does not reproduce the normal form".into(),
            residual: worst,
        });
    }
    Ok(WilliamsonDecomposition {
        spectrum: SymplecticSpectrum::new(pairs.sigmas),
        transform,
        normal_form,
        congruence_residual,
        symplectic_residual,
    })
}

/// Rotates the phase of `v` so that its leading dominant entry is `+i|v_j|`.
fn fix_phase(v: &[Complex64]) -> Vec<Complex64> {
    let peak = v.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let j = v
        .iter()
        .position(|z| z.norm() >= peak * (1.0 - 1e-6))
        .unwrap_or(0);
    let target = Complex64::new(0.0, 1.0);
    let phase = target * v[j].conj() / v[j].norm();
    v.iter().map(|z| z * phase).collect()
}

/// Deterministic random symplectic matrix `exp(Omega K)` with `K` symmetric
/// Gaussian, scaled so the result stays well conditioned.
pub fn random_symplectic(n: usize, seed: u64) -> Result<SymplecticMatrix> {
    let dim = 2 * mode_count(2 * n, "symplectic matrix")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 0.6 / (dim as f64).sqrt();
    let normal = Normal::new(0.0, scale).expect("finite scale");
    let mut k = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x = normal.sample(&mut rng);
            k[(i, j)] = x;
            k[(j, i)] = x;
        }
    }
    let s = (omega(n) * k).exp();
    Ok(SymplecticMatrix::new_unchecked(s))
}
