//! Brute-force number-basis oracle.
//!
//! A thermal oscillator is diagonal in the number basis with geometric
//! weights `p_n = (1 - e^{-beta}) e^{-n beta}`, and the reduced state of a
//! two-mode squeezed state has the same weights as its Schmidt spectrum. This
//! module only materializes those probability vectors and sums them; it does
//! not touch covariance matrices or symplectic spectra.

use crate::error::{Error, Result};
use crate::units::{xlnx, LogBase};

/// Largest tail mass accepted by the entropy sums.
pub const MAX_TAIL_MASS: f64 = 1e-12;

/// Smallest truncation whose geometric tail is below [`MAX_TAIL_MASS`]:
/// `ceil(-ln(1e-12) / beta)`.
pub fn required_n_max(beta: f64) -> usize {
    (-(MAX_TAIL_MASS.ln()) / beta).ceil() as usize
}

/// `beta = ln((1 + n_bar) / n_bar)`, the inverse of the Bose occupation.
pub fn beta_from_mean_occupation(n_bar: f64) -> Result<f64> {
    if n_bar <= 0.0 || !n_bar.is_finite() {
        return Err(Error::Parameter(format!(
            "mean occupation must be positive and finite, got {n_bar}"
        )));
    }
    Ok((1.0 / n_bar).ln_1p())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Parameter(format!(
            "beta must be positive, got {beta}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSpectrumTruncated {
    pub beta: f64,
    pub n_max: usize,
    /// `p_0..=p_{n_max}`.
    pub probabilities: Vec<f64>,
    /// `e^{-(n_max + 1) beta}`, the weight beyond the truncation.
    pub tail_mass: f64,
}

impl ThermalSpectrumTruncated {
    /// `sum n p_n` over the truncated support.
    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        base.from_nats(-self.probabilities.iter().map(|&p| xlnx(p)).sum::<f64>())
    }

    fn ensure_converged(&self) -> Result<()> {
        if self.tail_mass >= MAX_TAIL_MASS {
            return Err(Error::Truncation {
                tail_mass: self.tail_mass,
                required_n_max: required_n_max(self.beta),
            });
        }
        Ok(())
    }
}

pub fn thermal_probabilities(beta: f64, n_max: usize) -> Result<ThermalSpectrumTruncated> {
    check_beta(beta)?;
    if n_max < 1 {
        return Err(Error::Parameter("n_max must be at least 1".into()));
    }
    let ground = -(-beta).exp_m1();
    let probabilities = (0..=n_max)
        .map(|n| ground * (-(n as f64) * beta).exp())
        .collect();
    let tail_mass = (-((n_max + 1) as f64) * beta).exp();
    Ok(ThermalSpectrumTruncated {
        beta,
        n_max,
        probabilities,
        tail_mass,
    })
}

/// `-sum p_n log p_n`; fails if the truncation leaves more than
/// [`MAX_TAIL_MASS`] of the distribution unaccounted for.
pub fn thermal_entropy_bruteforce(beta: f64, n_max: usize, base: LogBase) -> Result<f64> {
    let spec = thermal_probabilities(beta, n_max)?;
    spec.ensure_converged()?;
    Ok(spec.entropy(base))
}

/// `|phi> = Z^{-1/2} sum_n e^{-beta n / 2} |n>|n>`, truncated at `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeSqueezedState {
    pub beta: f64,
    pub n_max: usize,
    pub schmidt_coefficients: Vec<f64>,
    pub tail_mass: f64,
}

impl TwoModeSqueezedState {
    pub fn new(beta: f64, n_max: usize) -> Result<Self> {
        check_beta(beta)?;
        if n_max < 1 {
            return Err(Error::Parameter("n_max must be at least 1".into()));
        }
        let norm = (-(-beta).exp_m1()).sqrt();
        let schmidt_coefficients = (0..=n_max)
            .map(|n| norm * (-(n as f64) * beta / 2.0).exp())
            .collect();
        let tail_mass = (-((n_max + 1) as f64) * beta).exp();
        Ok(Self {
            beta,
            n_max,
            schmidt_coefficients,
            tail_mass,
        })
    }

    /// Squared Schmidt coefficients: the spectrum of either reduced state.
    pub fn reduced_spectrum(&self) -> Vec<f64> {
        self.schmidt_coefficients.iter().map(|c| c * c).collect()
    }

    pub fn norm_squared(&self) -> f64 {
        self.reduced_spectrum().iter().sum()
    }
}

/// Entanglement entropy of a two-mode squeezed state from its Schmidt spectrum.
pub fn two_mode_squeezed_entropy(beta: f64, n_max: usize, base: LogBase) -> Result<f64> {
    let state = TwoModeSqueezedState::new(beta, n_max)?;
    if state.tail_mass >= MAX_TAIL_MASS {
        return Err(Error::Truncation {
            tail_mass: state.tail_mass,
            required_n_max: required_n_max(beta),
        });
    }
    let nats = -state.reduced_spectrum().into_iter().map(xlnx).sum::<f64>();
    Ok(base.from_nats(nats))
}

/// Thermal quadrature variances with the mass and frequency scales divided
/// out: `(<q^2> 2 m w, <p^2> 2 / (m w)) = (coth(beta/2), coth(beta/2))`.
pub fn quadrature_variances_thermal(beta: f64) -> Result<(f64, f64)> {
    check_beta(beta)?;
    let c = 1.0 / (beta / 2.0).tanh();
    Ok((c, c))
}
