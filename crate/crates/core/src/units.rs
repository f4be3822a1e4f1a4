//! Conventions shared by every module.
//!
//! Quadratures are ordered `(q_1..q_n, p_1..p_n)` ("qqpp"), units are fixed to
//! hbar = 1 and the vacuum covariance matrix is `I / 2`, so a pure mode has
//! symplectic eigenvalue exactly one half.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Name of the quadrature ordering written into every file.
pub const ORDERING: &str = "qqpp";

/// Symplectic eigenvalue of a pure (ground-state) mode.
pub const VACUUM_SIGMA: f64 = 0.5;

/// Default absolute tolerance for residual checks (max-abs entry).
pub const DEFAULT_TOL: f64 = 1e-8;

/// Maximum asymmetry tolerated before a matrix is rejected as malformed.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Relative eigenvalue floor below which a matrix counts as singular.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

/// Half-width of the band around 1/2 that is snapped to exactly 1/2.
pub const PURE_MODE_TOL: f64 = 1e-9;

/// Default margin above 1/2 for a mode to count as thermal.
pub const THERMAL_TOL: f64 = 1e-7;

/// Logarithm base for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    /// Converts a value in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Bits => nats / std::f64::consts::LN_2,
            LogBase::Nats => nats,
        }
    }

    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogBase::Bits => "bits",
            LogBase::Nats => "nats",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bits" | "2" => Ok(LogBase::Bits),
            "nats" | "e" => Ok(LogBase::Nats),
            other => Err(format!(
                "unknown log base '{other}' (expected bits or nats)"
            )),
        }
    }
}

/// `x ln x` with the `x -> 0` limit taken as 0.
pub(crate) fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}
