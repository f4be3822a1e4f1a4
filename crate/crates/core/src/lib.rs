//! Bipartite entanglement entropy of multimode Gaussian states.
//!
//! States are zero-mean covariance matrices in qqpp ordering with hbar = 1.
//! The entropy of a subsystem follows from the symplectic spectrum of its
//! reduced covariance matrix; [`fock`] recomputes the same numbers by brute
//! force in a truncated number basis.

pub mod entropy;
pub mod error;
pub mod fock;
pub mod io;
mod linalg;
pub mod models;
pub mod state;
pub mod symplectic;
pub mod units;
pub mod verify;

pub use entropy::{
    entanglement_entropy, mean_occupation, mode_entropy, purity_check, thermal_parameter, Beta,
    EntropyOptions, EntropyReport, ThermalMode,
};
pub use error::{Error, Result};
pub use models::{
    chain_model, ground_state_covariance, normal_mode_transform, two_oscillator_model, Boundary,
    ModelSpec, Parameter, QuadraticModel, TwoOscillatorParams,
};
pub use state::{
    characteristic_function, validate, wigner_function, CovarianceMatrix, GaussianWigner,
    ModePartition, ValidityReport,
};
pub use symplectic::{
    is_symplectic, random_symplectic, symplectic_form, symplectic_spectrum, williamson,
    williamson_with_tol, SymplecticForm, SymplecticMatrix, SymplecticSpectrum,
    WilliamsonDecomposition,
};
pub use units::LogBase;

pub use nalgebra::DMatrix;
