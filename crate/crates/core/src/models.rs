//! Ground states of position-coupled harmonic oscillators.
//!
//! A model is `H = p^T p / (2m) + (m/2) q^T V q` with uniform mass `m` and a
//! symmetric positive-definite potential matrix `V` in units of frequency
//! squared. Its ground state is the pure Gaussian state
//! `Gamma = diag(W^{-1} / (2m), (m/2) W)` with `W = V^{1/2}`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{asymmetry, spd_eigen, sym_apply, sym_eigen};
use crate::state::CovarianceMatrix;
use crate::symplectic::SymplecticMatrix;
use crate::units::SYMMETRY_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticModel {
    n: usize,
    mass: f64,
    potential: DMatrix<f64>,
}

impl QuadraticModel {
    pub fn new(mass: f64, potential: DMatrix<f64>) -> Result<Self> {
        if mass <= 0.0 || !mass.is_finite() {
            return Err(Error::Parameter(format!(
                "mass must be positive, got {mass}"
            )));
        }
        if !potential.is_square() || potential.nrows() == 0 {
            return Err(Error::InvalidDimension(
                "potential must be a nonempty square matrix".into(),
            ));
        }
        if potential.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("potential has non-finite entries".into()));
        }
        let asym = asymmetry(&potential);
        if asym > SYMMETRY_TOL {
            return Err(Error::Parameter(format!(
                "potential is not symmetric ({asym:e})"
            )));
        }
        spd_eigen(&potential).map_err(|e| match e {
            Error::InvalidState(msg) => Error::NoGroundState(msg),
            other => other,
        })?;
        Ok(Self {
            n: potential.nrows(),
            mass,
            potential,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn potential(&self) -> &DMatrix<f64> {
        &self.potential
    }

    /// Normal-mode frequencies, ascending.
    pub fn normal_frequencies(&self) -> Result<Vec<f64>> {
        Ok(sym_eigen(&self.potential)?
            .values
            .iter()
            .map(|v| v.sqrt())
            .collect())
    }
}

fn check_common(m: f64, omega: f64, lambda: f64) -> Result<()> {
    if m <= 0.0 || !m.is_finite() {
        return Err(Error::Parameter(format!("mass must be positive, got {m}")));
    }
    if omega <= 0.0 || !omega.is_finite() {
        return Err(Error::Parameter(format!(
            "frequency must be positive, got {omega}"
        )));
    }
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::Parameter(format!(
            "coupling must be non-negative, got {lambda}"
        )));
    }
    Ok(())
}

/// Two oscillators coupled by `lambda (q1 - q2)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoOscillatorParams {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
}

impl TwoOscillatorParams {
    pub fn new(m: f64, omega: f64, lambda: f64) -> Result<Self> {
        check_common(m, omega, lambda)?;
        Ok(Self { m, omega, lambda })
    }

    /// `alpha = sqrt(1 + 4 lambda / (m omega^2))`; the stiff normal mode has frequency `omega alpha`.
    pub fn alpha(&self) -> f64 {
        (1.0 + 4.0 * self.lambda / (self.m * self.omega * self.omega)).sqrt()
    }

    /// Symplectic eigenvalue of either oscillator alone, `(1 + alpha) / (4 sqrt(alpha))`.
    pub fn reduced_sigma(&self) -> f64 {
        let a = self.alpha();
        (1.0 + a) / (4.0 * a.sqrt())
    }

    pub fn model(&self) -> Result<QuadraticModel> {
        two_oscillator_model(self.m, self.omega, self.lambda)
    }
}

pub fn two_oscillator_model(m: f64, omega: f64, lambda: f64) -> Result<QuadraticModel> {
    chain_model(2, m, omega, lambda, Boundary::Open)
}

/// `Open` couples `i` to `i + 1`; `Periodic` also couples the last site to the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::Parameter(format!("unknown boundary '{other}'"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

/// Nearest-neighbour chain: `V = omega^2 I + (2 lambda / m) L` with `L` the
/// graph Laplacian of the path (open) or ring (periodic).
pub fn chain_model(
    n: usize,
    m: f64,
    omega: f64,
    lambda: f64,
    boundary: Boundary,
) -> Result<QuadraticModel> {
    check_common(m, omega, lambda)?;
    if n < 2 {
        return Err(Error::Parameter(format!(
            "a chain needs at least 2 sites, got {n}"
        )));
    }
    if boundary == Boundary::Periodic && n < 3 {
        return Err(Error::Parameter(
            "a periodic chain needs at least 3 sites".into(),
        ));
    }
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic {
        edges.push((n - 1, 0));
    }
    let k = 2.0 * lambda / m;
    let mut v = DMatrix::identity(n, n) * (omega * omega);
    for (i, j) in edges {
        v[(i, i)] += k;
        v[(j, j)] += k;
        v[(i, j)] -= k;
        v[(j, i)] -= k;
    }
    QuadraticModel::new(m, v)
}

/// Ground-state covariance matrix; always pure.
pub fn ground_state_covariance(model: &QuadraticModel) -> Result<CovarianceMatrix> {
    let n = model.n;
    let eig = spd_eigen(&model.potential).map_err(|e| match e {
        Error::InvalidState(msg) => Error::NoGroundState(msg),
        other => other,
    })?;
    let w = sym_apply(&eig, f64::sqrt);
    let w_inv = sym_apply(&eig, |x| 1.0 / x.sqrt());
    let m = model.mass;
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(&(w_inv / (2.0 * m)));
    g.view_mut((n, n), (n, n)).copy_from(&(w * (m / 2.0)));
    CovarianceMatrix::new(g)
}

/// `S = O^T (+) O^T` with the columns of `O` the eigenvectors of `V`
/// (ascending frequency, first nonzero entry positive); `S Gamma S^T` is
/// diagonal for the ground state.
pub fn normal_mode_transform(model: &QuadraticModel) -> Result<SymplecticMatrix> {
    let eig = sym_eigen(&model.potential)?;
    SymplecticMatrix::from_orthogonal(&eig.vectors.transpose(), 1e-10)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    TwoOscillator,
    Chain,
}

/// Model file contents:
/// `{"type": "two_oscillator" | "chain", "n", "m", "omega", "lambda", "boundary"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(rename = "type")]
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
}

/// Scalar model parameter that a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Lambda,
    Omega,
    M,
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parameter::Lambda => "lambda",
            Parameter::Omega => "omega",
            Parameter::M => "m",
        })
    }
}

impl ModelSpec {
    pub fn two_oscillator(m: f64, omega: f64, lambda: f64) -> Self {
        Self {
            kind: ModelKind::TwoOscillator,
            n: None,
            m,
            omega,
            lambda,
            boundary: None,
        }
    }

    pub fn chain(n: usize, m: f64, omega: f64, lambda: f64, boundary: Boundary) -> Self {
        Self {
            kind: ModelKind::Chain,
            n: Some(n),
            m,
            omega,
            lambda,
            boundary: Some(boundary),
        }
    }

    pub fn mode_count(&self) -> Result<usize> {
        match (self.kind, self.n) {
            (ModelKind::TwoOscillator, None | Some(2)) => Ok(2),
            (ModelKind::TwoOscillator, Some(n)) => Err(Error::Parameter(format!(
                "two_oscillator model has 2 modes, file says n = {n}"
            ))),
            (ModelKind::Chain, Some(n)) => Ok(n),
            (ModelKind::Chain, None) => Err(Error::Parameter("chain model needs 'n'".into())),
        }
    }

    pub fn build(&self) -> Result<QuadraticModel> {
        let n = self.mode_count()?;
        match self.kind {
            ModelKind::TwoOscillator => {
                if self.boundary == Some(Boundary::Periodic) {
                    return Err(Error::Parameter("two_oscillator model is open".into()));
                }
                two_oscillator_model(self.m, self.omega, self.lambda)
            }
            ModelKind::Chain => chain_model(
                n,
                self.m,
                self.omega,
                self.lambda,
                self.boundary.unwrap_or_default(),
            ),
        }
    }

    pub fn get(&self, p: Parameter) -> f64 {
        match p {
            Parameter::Lambda => self.lambda,
            Parameter::Omega => self.omega,
            Parameter::M => self.m,
        }
    }

    pub fn with(&self, p: Parameter, value: f64) -> Self {
        let mut out = self.clone();
        match p {
            Parameter::Lambda => out.lambda = value,
            Parameter::Omega => out.omega = value,
            Parameter::M => out.m = value,
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("model file: {e}")))
    }
}
