//! Loading covariance files and model files from disk.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use sympent_core::io::read_covariance;
use sympent_core::{ground_state_covariance, CovarianceMatrix, DMatrix, ModelSpec};

pub enum Source {
    Covariance(DMatrix<f64>),
    Model(ModelSpec),
}

pub struct Loaded {
    pub bytes: Vec<u8>,
    pub source: Source,
}

/// Model files are JSON objects with a `"type"` key; anything else is read
/// as a covariance file (JSON or CSV).
pub fn load(path: &Path) -> Result<Loaded> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = std::str::from_utf8(&bytes)
        .with_context(|| format!("{} is not UTF-8 text", path.display()))?;
    let is_model = text.trim_start().starts_with('{')
        && serde_json::from_str::<serde_json::Value>(text)
            .map(|v| v.get("type").is_some())
            .unwrap_or(false);
    let source = if is_model {
        Source::Model(ModelSpec::from_json(text)?)
    } else {
        Source::Covariance(read_covariance(text)?)
    };
    Ok(Loaded { bytes, source })
}

impl Loaded {
    pub fn state(&self) -> Result<CovarianceMatrix> {
        match &self.source {
            Source::Covariance(m) => Ok(CovarianceMatrix::new(m.clone())?),
            Source::Model(spec) => Ok(ground_state_covariance(&spec.build()?)?),
        }
    }

    pub fn raw_matrix(&self) -> Result<DMatrix<f64>> {
        match &self.source {
            Source::Covariance(m) => Ok(m.clone()),
            Source::Model(_) => Ok(self.state()?.into_matrix()),
        }
    }
}
