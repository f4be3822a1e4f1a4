//! Zero-mean Gaussian states represented by their covariance matrix.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{asymmetry, max_abs};
use crate::symplectic::{omega, spectrum_of, SymplecticMatrix};
use crate::units::{SYMMETRY_TOL, VACUUM_SIGMA};

/// Covariance matrix `Gamma_ij = Re tr[rho r_i r_j]` in qqpp ordering,
/// hbar = 1 (vacuum is `I / 2`).
///
/// Construction only checks shape and symmetry; physicality is reported by
/// [`CovarianceMatrix::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    matrix: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = check_shape(&matrix)?;
        check_symmetric(&matrix)?;
        Ok(Self { n, matrix })
    }

    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::MalformedInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// `n`-mode vacuum, `I / 2`.
    pub fn vacuum(n: usize) -> Result<Self> {
        Self::scaled_identity(n, VACUUM_SIGMA)
    }

    pub fn scaled_identity(n: usize, value: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(
                "mode count must be at least 1".into(),
            ));
        }
        Ok(Self {
            n,
            matrix: DMatrix::identity(2 * n, 2 * n) * value,
        })
    }

    /// `S diag(sigma, sigma) S^T`: the state with symplectic spectrum `sigmas`
    /// reached from its normal form by `transform`.
    pub fn from_normal_form(sigmas: &[f64], transform: &SymplecticMatrix) -> Result<Self> {
        if sigmas.len() != transform.n() {
            return Err(Error::InvalidDimension(format!(
                "{} eigenvalues for a {}-mode transform",
                sigmas.len(),
                transform.n()
            )));
        }
        let diag: Vec<f64> = sigmas.iter().chain(sigmas).copied().collect();
        let d = DMatrix::from_diagonal(&DVector::from_vec(diag));
        let s = transform.matrix();
        let g = s * d * s.transpose();
        Ok(Self {
            n: transform.n(),
            matrix: (&g + g.transpose()) * 0.5,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// `S Gamma S^T`.
    pub fn transformed(&self, s: &SymplecticMatrix) -> Result<Self> {
        if s.n() != self.n {
            return Err(Error::InvalidDimension(format!(
                "{}-mode transform applied to a {}-mode state",
                s.n(),
                self.n
            )));
        }
        let g = s.matrix() * &self.matrix * s.matrix().transpose();
        Ok(Self {
            n: self.n,
            matrix: (&g + g.transpose()) * 0.5,
        })
    }

    pub fn validate(&self, tol: f64) -> ValidityReport {
        validity_of(&self.matrix, tol)
    }

    /// Partial trace onto `keep` (0-based mode indices), preserving their order
    /// and the qqpp layout.
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidPartition("no modes to keep".into()));
        }
        let mut seen = vec![false; self.n];
        for &k in keep {
            if k >= self.n {
                return Err(Error::InvalidPartition(format!(
                    "mode {} out of range for {} modes",
                    k + 1,
                    self.n
                )));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidPartition(format!(
                    "mode {} listed twice",
                    k + 1
                )));
            }
        }
        let rows: Vec<usize> = keep
            .iter()
            .copied()
            .chain(keep.iter().map(|k| k + self.n))
            .collect();
        let dim = rows.len();
        let matrix = DMatrix::from_fn(dim, dim, |i, j| self.matrix[(rows[i], rows[j])]);
        Ok(Self {
            n: keep.len(),
            matrix,
        })
    }
}

fn check_shape(m: &DMatrix<f64>) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::InvalidDimension(format!(
            "covariance matrix must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "covariance matrix must have positive even dimension, got {}",
            m.nrows()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::MalformedInput(
            "covariance matrix has non-finite entries".into(),
        ));
    }
    Ok(m.nrows() / 2)
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let asym = asymmetry(m);
    if asym > SYMMETRY_TOL * max_abs(m).max(1.0) {
        return Err(Error::MalformedInput(format!(
            "covariance matrix is not symmetric (max |G - G^T| = {asym:e})"
        )));
    }
    Ok(())
}

/// Outcome of the uncertainty-principle check `Gamma + (i/2) Omega >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub n: usize,
    pub tol: f64,
    /// Smallest eigenvalue of the Hermitian matrix `Gamma + (i/2) Omega`.
    pub min_uncertainty_eigenvalue: f64,
    /// Smallest symplectic eigenvalue; absent when `Gamma` is not positive definite.
    pub min_sigma: Option<f64>,
}

/// Physicality check on a raw matrix. Shape problems and asymmetry are errors;
/// an unphysical but well-formed matrix yields `valid: false`.
pub fn validate(matrix: &DMatrix<f64>, tol: f64) -> Result<ValidityReport> {
    check_shape(matrix)?;
    check_symmetric(matrix)?;
    Ok(validity_of(matrix, tol))
}

fn validity_of(matrix: &DMatrix<f64>, tol: f64) -> ValidityReport {
    let n = matrix.nrows() / 2;
    let w = omega(n);
    let h = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        Complex64::new(0.5 * (matrix[(i, j)] + matrix[(j, i)]), 0.5 * w[(i, j)])
    });
    let min_eig = SymmetricEigen::try_new(h, f64::EPSILON, 10_000)
        .map(|e| e.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
        .unwrap_or(f64::NAN);
    let min_sigma = spectrum_of(matrix).ok().map(|s| s.min());
    ValidityReport {
        valid: min_eig >= -tol,
        n,
        tol,
        min_uncertainty_eigenvalue: min_eig,
        min_sigma,
    }
}

/// Disjoint split of the modes `0..n` into two nonempty sets.
///
/// Indices are 0-based in code; the textual form `"1,2|3,4"` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePartition {
    n: usize,
    set_a: Vec<usize>,
    set_b: Vec<usize>,
}

impl ModePartition {
    pub fn new(n: usize, mut set_a: Vec<usize>, mut set_b: Vec<usize>) -> Result<Self> {
        if set_a.is_empty() || set_b.is_empty() {
            return Err(Error::InvalidPartition(
                "both sides must be nonempty".into(),
            ));
        }
        set_a.sort_unstable();
        set_b.sort_unstable();
        let mut seen = vec![false; n];
        for &k in set_a.iter().chain(&set_b) {
            if k >= n {
                return Err(Error::InvalidPartition(format!(
                    "mode {} out of range for {n} modes",
                    k + 1
                )));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidPartition(format!(
                    "mode {} appears twice",
                    k + 1
                )));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "mode {} is in neither set",
                missing + 1
            )));
        }
        Ok(Self { n, set_a, set_b })
    }

    /// `set_a` against its complement.
    pub fn with_complement(n: usize, set_a: Vec<usize>) -> Result<Self> {
        let set_b = (0..n).filter(|k| !set_a.contains(k)).collect();
        Self::new(n, set_a, set_b)
    }

    /// Parses `"i,j,...|k,l,..."` with 1-based indices against `n` modes.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (a, b) = parse_sides(text)?;
        Self::new(n, a, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set_a(&self) -> &[usize] {
        &self.set_a
    }

    pub fn set_b(&self) -> &[usize] {
        &self.set_b
    }

    pub fn swapped(&self) -> Self {
        Self {
            n: self.n,
            set_a: self.set_b.clone(),
            set_b: self.set_a.clone(),
        }
    }
}

fn parse_sides(text: &str) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut parts = text.split('|');
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::InvalidPartition(format!(
            "expected 'i,j,...|k,l,...', got '{text}'"
        )));
    };
    let side = |s: &str| -> Result<Vec<usize>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Error::InvalidPartition(format!(
                    "bad mode index '{t}' (1-based)"
                ))),
            })
            .collect()
    };
    Ok((side(a)?, side(b)?))
}

impl fmt::Display for ModePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|k| (k + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(&self.set_a), join(&self.set_b))
    }
}

impl FromStr for ModePartition {
    type Err = Error;

    /// Mode count is taken as the largest index mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = parse_sides(s)?;
        let n = a.iter().chain(&b).max().map_or(0, |m| m + 1);
        Self::new(n, a, b)
    }
}

impl Serialize for ModePartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ModePartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_point(gamma: &CovarianceMatrix, x: &[f64]) -> Result<()> {
    if x.len() != gamma.dim() {
        return Err(Error::InvalidDimension(format!(
            "phase-space point has {} coordinates, state needs {}",
            x.len(),
            gamma.dim()
        )));
    }
    Ok(())
}

/// `chi(eta) = exp(-1/4 eta^T Omega Gamma Omega^T eta)` for a zero-mean state.
pub fn characteristic_function(gamma: &CovarianceMatrix, eta: &[f64]) -> Result<f64> {
    check_point(gamma, eta)?;
    let w = omega(gamma.n());
    let v = w.transpose() * DVector::from_column_slice(eta);
    let quad = v.dot(&(gamma.matrix() * &v));
    Ok((-0.25 * quad).exp())
}

/// Closed-form Gaussian Wigner function, precomputed for repeated evaluation.
///
/// `W(x) = (2 pi)^{-n} det(Gamma)^{-1/2} exp(-x^T Gamma^{-1} x / 2)`, which
/// integrates to one over phase space.
#[derive(Debug, Clone)]
pub struct GaussianWigner {
    dim: usize,
    inverse: DMatrix<f64>,
    prefactor: f64,
}

impl GaussianWigner {
    pub fn new(gamma: &CovarianceMatrix) -> Result<Self> {
        let chol =
            Cholesky::new(gamma.matrix().clone()).ok_or_else(|| Error::NumericalFailure {
                what: "covariance matrix is singular or indefinite".into(),
                residual: f64::NAN,
            })?;
        let det = chol.determinant();
        if det <= 0.0 || !det.is_finite() {
            return Err(Error::NumericalFailure {
                what: "covariance determinant is not positive".into(),
                residual: det,
            });
        }
        let n = gamma.n() as i32;
        let prefactor = (2.0 * std::f64::consts::PI).powi(-n) / det.sqrt();
        Ok(Self {
            dim: gamma.dim(),
            inverse: chol.inverse(),
            prefactor,
        })
    }

    pub fn peak(&self) -> f64 {
        self.prefactor
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let v = DVector::from_column_slice(x);
        self.prefactor * (-0.5 * v.dot(&(&self.inverse * &v))).exp()
    }
}

pub fn wigner_function(gamma: &CovarianceMatrix, x: &[f64]) -> Result<f64> {
    check_point(gamma, x)?;
    Ok(GaussianWigner::new(gamma)?.eval(x))
}
