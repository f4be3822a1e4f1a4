//! From symplectic spectra to entropies, occupation numbers and thermal
//! parameters.
//!
//! Each symplectic eigenvalue `sigma` describes one decoupled oscillator in a
//! thermal state with mean occupation `sigma - 1/2`; the subsystem entropy is
//! the sum of the per-mode thermal entropies.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::state::{CovarianceMatrix, ModePartition};
use crate::symplectic::{symplectic_spectrum, SymplecticSpectrum};
use crate::units::{xlnx, LogBase, DEFAULT_TOL, PURE_MODE_TOL, THERMAL_TOL, VACUUM_SIGMA};

/// Snaps eigenvalues within [`PURE_MODE_TOL`] of 1/2 onto 1/2 and rejects
/// anything further below.
pub fn clamp_sigma(sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma < VACUUM_SIGMA - PURE_MODE_TOL {
        return Err(Error::UnphysicalEigenvalue { sigma });
    }
    if (sigma - VACUUM_SIGMA).abs() <= PURE_MODE_TOL {
        Ok(VACUUM_SIGMA)
    } else {
        Ok(sigma)
    }
}

fn entropy_nats(sigma: f64) -> f64 {
    xlnx(sigma + 0.5) - xlnx(sigma - 0.5)
}

/// `(s + 1/2) log(s + 1/2) - (s - 1/2) log(s - 1/2)` in the chosen base.
pub fn mode_entropy(sigma: f64, base: LogBase) -> Result<f64> {
    let sigma = clamp_sigma(sigma)?;
    Ok(base.from_nats(entropy_nats(sigma)))
}

/// `n_bar = sigma - 1/2`.
pub fn mean_occupation(sigma: f64) -> Result<f64> {
    Ok(clamp_sigma(sigma)? - VACUUM_SIGMA)
}

/// Dimensionless thermal parameter (frequency over temperature, bundled).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    /// Zero temperature: the mode is in its ground state.
    Infinite,
}

impl Beta {
    pub fn value(self) -> f64 {
        match self {
            Beta::Finite(b) => b,
            Beta::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Beta::Infinite)
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Beta::Finite(b) => serializer.serialize_f64(*b),
            Beta::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(b) => Ok(Beta::Finite(b)),
            Raw::Text(s) if s == "inf" => Ok(Beta::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("bad beta '{s}'"))),
        }
    }
}

/// `beta = ln((sigma + 1/2) / (sigma - 1/2))`, infinite for a pure mode.
pub fn thermal_parameter(sigma: f64) -> Result<Beta> {
    let n_bar = mean_occupation(sigma)?;
    if n_bar == 0.0 {
        Ok(Beta::Infinite)
    } else {
        Ok(Beta::Finite((1.0 / n_bar).ln_1p()))
    }
}

/// One decoupled oscillator of the normal-mode decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalMode {
    pub sigma: f64,
    pub n_bar: f64,
    pub beta: Beta,
    pub entropy_bits: f64,
}

impl ThermalMode {
    pub fn from_sigma(sigma: f64) -> Result<Self> {
        let sigma = clamp_sigma(sigma)?;
        Ok(Self {
            sigma,
            n_bar: sigma - VACUUM_SIGMA,
            beta: thermal_parameter(sigma)?,
            entropy_bits: LogBase::Bits.from_nats(entropy_nats(sigma)),
        })
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        base.from_nats(entropy_nats(self.sigma))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyOptions {
    pub base: LogBase,
    /// `sigma > 1/2 + thermal_tol` counts as a thermal (entangled) mode.
    pub thermal_tol: f64,
    /// Also reduce onto the complement and report its entropy.
    pub with_complement: bool,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        Self {
            base: LogBase::Bits,
            thermal_tol: THERMAL_TOL,
            with_complement: false,
        }
    }
}

/// The B side of a bipartition, for complementarity checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementReport {
    pub spectrum_b: SymplecticSpectrum,
    pub total_bits_b: f64,
    pub s_count_b: usize,
    /// `|S(A) - S(B)|` in bits.
    pub residual_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub partition: ModePartition,
    pub spectrum_a: SymplecticSpectrum,
    pub modes: Vec<ThermalMode>,
    pub total_bits: f64,
    pub s_count: usize,
    pub base: LogBase,
    /// Total entropy in `base`.
    pub total: f64,
    pub thermal_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub complement: Option<ComplementReport>,
}

impl EntropyReport {
    /// Eigenvalues counted as thermal, descending.
    pub fn thermal_sigmas(&self) -> Vec<f64> {
        thermal_part(&self.spectrum_a, self.thermal_tol)
    }
}

fn thermal_part(spectrum: &SymplecticSpectrum, tol: f64) -> Vec<f64> {
    spectrum
        .values()
        .iter()
        .copied()
        .filter(|s| *s > VACUUM_SIGMA + tol)
        .collect()
}

struct Side {
    spectrum: SymplecticSpectrum,
    modes: Vec<ThermalMode>,
    total_nats: f64,
    s_count: usize,
}

fn side(gamma: &CovarianceMatrix, keep: &[usize], thermal_tol: f64) -> Result<Side> {
    let reduced = gamma.reduce(keep)?;
    let spectrum = symplectic_spectrum(&reduced)?;
    let modes = spectrum
        .values()
        .iter()
        .map(|&s| ThermalMode::from_sigma(s))
        .collect::<Result<Vec<_>>>()?;
    let total_nats = modes.iter().map(|m| entropy_nats(m.sigma)).sum();
    let s_count = thermal_part(&spectrum, thermal_tol).len();
    Ok(Side {
        spectrum,
        modes,
        total_nats,
        s_count,
    })
}

/// Entropy of the reduced state on `partition.set_a()`.
///
/// For a pure global state this is the entanglement entropy; for a mixed
/// global state it is only the subsystem entropy.
pub fn entanglement_entropy(
    gamma: &CovarianceMatrix,
    partition: &ModePartition,
    options: &EntropyOptions,
) -> Result<EntropyReport> {
    if partition.n() != gamma.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} modes, state has {}",
            partition.n(),
            gamma.n()
        )));
    }
    let a = side(gamma, partition.set_a(), options.thermal_tol)?;
    let total_bits = LogBase::Bits.from_nats(a.total_nats);
    let complement = if options.with_complement {
        let b = side(gamma, partition.set_b(), options.thermal_tol)?;
        let total_bits_b = LogBase::Bits.from_nats(b.total_nats);
        Some(ComplementReport {
            spectrum_b: b.spectrum,
            total_bits_b,
            s_count_b: b.s_count,
            residual_bits: (total_bits - total_bits_b).abs(),
        })
    } else {
        None
    };
    Ok(EntropyReport {
        partition: partition.clone(),
        spectrum_a: a.spectrum,
        modes: a.modes,
        total_bits,
        s_count: a.s_count,
        base: options.base,
        total: options.base.from_nats(a.total_nats),
        thermal_tol: options.thermal_tol,
        complement,
    })
}

/// True iff every global symplectic eigenvalue lies within `tol` of 1/2.
pub fn purity_check(gamma: &CovarianceMatrix, tol: f64) -> Result<bool> {
    let spectrum = symplectic_spectrum(gamma)?;
    Ok(spectrum
        .values()
        .iter()
        .all(|s| (s - VACUUM_SIGMA).abs() <= tol))
}

/// [`purity_check`] at the default tolerance.
pub fn is_pure(gamma: &CovarianceMatrix) -> Result<bool> {
    purity_check(gamma, DEFAULT_TOL)
}
