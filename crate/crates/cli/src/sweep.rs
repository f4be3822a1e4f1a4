//! Parameter sweeps over model families.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sympent_core::io::{convention_line, fmt_f64};
use sympent_core::{
    entanglement_entropy, ground_state_covariance, EntropyOptions, LogBase, ModePartition,
    ModelSpec, Parameter,
};

/// Sweep file: the base model, the parameter to vary, a linear grid and the
/// bipartition (1-based, `"1,2|3"`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: ModelSpec,
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub partition: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<LogBase>,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("sweep file")
    }

    /// `count` evenly spaced points; the last one is exactly `stop`.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            bail!("sweep bounds must be finite");
        }
        match self.count {
            0 => bail!("sweep count must be at least 1"),
            1 => Ok(vec![self.start]),
            c => Ok((0..c)
                .map(|i| {
                    if i == c - 1 {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * i as f64 / (c - 1) as f64
                    }
                })
                .collect()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub sigmas: Vec<f64>,
    pub total_bits: f64,
    pub total: f64,
    pub s_count: usize,
}

fn evaluate(
    spec: &SweepSpec,
    partition: &ModePartition,
    opts: &EntropyOptions,
    value: f64,
) -> Result<SweepRow> {
    let model = spec.model.with(spec.parameter, value).build()?;
    let gamma = ground_state_covariance(&model)?;
    let report = entanglement_entropy(&gamma, partition, opts)?;
    Ok(SweepRow {
        value,
        sigmas: report.spectrum_a.values().to_vec(),
        total_bits: report.total_bits,
        total: report.total,
        s_count: report.s_count,
    })
}

/// Evaluates every grid point in parallel; rows come back in grid order.
/// The first failing point aborts the sweep and is named in the error.
pub fn run(
    spec: &SweepSpec,
    partition_text: &str,
    base: LogBase,
    thermal_tol: f64,
) -> Result<Vec<SweepRow>> {
    let n = spec.model.mode_count()?;
    let partition = ModePartition::parse(partition_text, n)?;
    let opts = EntropyOptions {
        base,
        thermal_tol,
        with_complement: false,
    };
    let grid = spec.grid()?;
    let results: Vec<Result<SweepRow>> = grid
        .par_iter()
        .map(|&x| {
            evaluate(spec, &partition, &opts, x)
                .with_context(|| format!("grid point {}={}", spec.parameter, x))
        })
        .collect();
    // Collected in order first, so the reported failure is always the
    // earliest bad point regardless of thread scheduling.
    results.into_iter().collect()
}

pub fn to_csv(spec: &SweepSpec, partition: &str, base: LogBase, rows: &[SweepRow]) -> String {
    let width = rows.first().map_or(0, |r| r.sigmas.len());
    let mut out = String::new();
    out.push_str(&format!(
        "# sympent sweep model={} parameter={} start={} stop={} count={} partition={}\n",
        serde_json::to_string(&spec.model).unwrap_or_default(),
        spec.parameter,
        fmt_f64(spec.start),
        fmt_f64(spec.stop),
        spec.count,
        partition,
    ));
    out.push_str(&convention_line(base));
    out.push('\n');
    out.push_str(&format!(
        "# columns: {} in model units; sigma_k = symplectic eigenvalues of the reduced state (descending, vacuum = 1/2); total_{base} = entanglement entropy in {base}; s_count = modes with sigma > 1/2\n",
        spec.parameter
    ));
    let mut header = vec![spec.parameter.to_string()];
    header.extend((1..=width).map(|k| format!("sigma_{k}")));
    header.push(format!("total_{base}"));
    header.push("s_count".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let mut fields = vec![fmt_f64(row.value)];
        fields.extend(row.sigmas.iter().map(|&s| fmt_f64(s)));
        fields.push(fmt_f64(if base == LogBase::Bits {
            row.total_bits
        } else {
            row.total
        }));
        fields.push(row.s_count.to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
