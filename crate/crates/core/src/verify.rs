//! Side-by-side comparison of the closed-form mode entropy with the
//! number-basis oracle.

use serde::Serialize;

use crate::entropy::mode_entropy;
use crate::error::Result;
use crate::fock::{
    beta_from_mean_occupation, required_n_max, thermal_entropy_bruteforce,
    two_mode_squeezed_entropy,
};
use crate::units::{LogBase, VACUUM_SIGMA};

/// Deviation above which the two pipelines are considered to disagree.
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub sigma: f64,
    pub beta: f64,
    pub n_max: usize,
    pub closed_form: f64,
    pub thermal_sum: f64,
    pub squeezed_sum: f64,
    /// Largest disagreement between the closed form and either sum.
    pub deviation: f64,
}

impl OracleRow {
    pub fn passes(&self, tol: f64) -> bool {
        self.deviation < tol
    }
}

/// `{1/2 + 10^-k : k = 1..6}` plus `0.6, 1/sqrt(3), 1.5, 3, 10`.
pub fn coarse_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=6).map(|k| VACUUM_SIGMA + 10f64.powi(-k)).collect();
    grid.extend([0.6, 1.0 / 3f64.sqrt(), 1.5, 3.0, 10.0]);
    grid
}

/// Coarse grid plus a log-spaced sweep of occupations from 1e-8 to 1e3.
pub fn fine_grid() -> Vec<f64> {
    let mut grid = coarse_grid();
    let steps = 45;
    grid.extend((0..=steps).map(|i| {
        let exponent = -8.0 + 11.0 * i as f64 / steps as f64;
        VACUUM_SIGMA + 10f64.powf(exponent)
    }));
    grid
}

/// Compares both pipelines at one symplectic eigenvalue (`sigma > 1/2`).
pub fn compare(sigma: f64, base: LogBase) -> Result<OracleRow> {
    let closed_form = mode_entropy(sigma, base)?;
    let beta = beta_from_mean_occupation(sigma - VACUUM_SIGMA)?;
    let n_max = required_n_max(beta).max(1);
    let thermal_sum = thermal_entropy_bruteforce(beta, n_max, base)?;
    let squeezed_sum = two_mode_squeezed_entropy(beta, n_max, base)?;
    let deviation = (closed_form - thermal_sum)
        .abs()
        .max((closed_form - squeezed_sum).abs());
    Ok(OracleRow {
        sigma,
        beta,
        n_max,
        closed_form,
        thermal_sum,
        squeezed_sum,
        deviation,
    })
}

pub fn compare_grid(grid: &[f64], base: LogBase) -> Result<Vec<OracleRow>> {
    grid.iter().map(|&s| compare(s, base)).collect()
}
