//! Covariance-matrix file formats.
//!
//! JSON: `{"n": 2, "ordering": "qqpp", "hbar": 1, "matrix": [row-major 2n*2n]}`.
//!
//! CSV: one header line `# sympent covariance n=<n> ordering=qqpp`, then
//! `2n` rows of `2n` comma-separated entries. Numbers are written with 17
//! significant digits so doubles round-trip exactly.
//!
//! Readers return the raw matrix so that callers can tell malformed input
//! (an error here or in [`crate::validate`]) from an unphysical state.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::CovarianceMatrix;
use crate::units::{LogBase, ORDERING};

pub const CSV_MAGIC: &str = "# sympent covariance";

/// 17 significant digits, locale independent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comment line stating the conventions every emitted file follows.
pub fn convention_line(base: LogBase) -> String {
    format!("# conventions: ordering={ORDERING} hbar=1 vacuum_covariance=I/2 log_base={base}")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CovarianceFile {
    n: usize,
    ordering: String,
    hbar: f64,
    matrix: Vec<f64>,
}

pub fn covariance_to_json(gamma: &CovarianceMatrix) -> String {
    let dim = gamma.dim();
    let m = gamma.matrix();
    let file = CovarianceFile {
        n: gamma.n(),
        ordering: ORDERING.into(),
        hbar: 1.0,
        matrix: (0..dim * dim).map(|k| m[(k / dim, k % dim)]).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

fn check_ordering(tag: &str) -> Result<()> {
    if tag != ORDERING {
        return Err(Error::Format(format!(
            "unsupported quadrature ordering '{tag}' (only '{ORDERING}' is accepted)"
        )));
    }
    Ok(())
}

fn assemble(n: usize, entries: Vec<f64>) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::Format("mode count n must be at least 1".into()));
    }
    let dim = 2 * n;
    if entries.len() != dim * dim {
        return Err(Error::Format(format!(
            "n = {n} needs {} matrix entries, found {}",
            dim * dim,
            entries.len()
        )));
    }
    Ok(DMatrix::from_row_slice(dim, dim, &entries))
}

pub fn covariance_from_json(text: &str) -> Result<DMatrix<f64>> {
    let file: CovarianceFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("covariance JSON: {e}")))?;
    check_ordering(&file.ordering)?;
    if file.hbar != 1.0 {
        return Err(Error::Format(format!(
            "hbar must be 1, file says {}",
            file.hbar
        )));
    }
    assemble(file.n, file.matrix)
}

pub fn covariance_to_csv(gamma: &CovarianceMatrix) -> String {
    let mut out = format!("{CSV_MAGIC} n={} ordering={ORDERING}\n", gamma.n());
    for row in gamma.matrix().row_iter() {
        let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn covariance_from_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty covariance CSV".into()))?;
    let rest = header.strip_prefix(CSV_MAGIC).ok_or_else(|| {
        Error::Format(format!("missing header '{CSV_MAGIC} n=<n> ordering=qqpp'"))
    })?;
    let mut n = None;
    let mut ordering = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|_| Error::Format(format!("bad n '{v}'")))?,
                )
            }
            Some(("ordering", v)) => ordering = Some(v),
            _ => return Err(Error::Format(format!("unexpected header field '{field}'"))),
        }
    }
    check_ordering(ordering.ok_or_else(|| Error::Format("header lacks ordering tag".into()))?)?;
    let n = n.ok_or_else(|| Error::Format("header lacks n".into()))?;
    let dim = 2 * n;
    let mut entries = Vec::with_capacity(dim * dim);
    let mut rows = 0;
    for line in lines {
        if line.starts_with('#') {
            continue;
        }
        let cells = line
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("bad number '{}'", c.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        if cells.len() != dim {
            return Err(Error::Format(format!(
                "row {} has {} entries, expected {dim}",
                rows + 1,
                cells.len()
            )));
        }
        entries.extend(cells);
        rows += 1;
    }
    if rows != dim {
        return Err(Error::Format(format!("expected {dim} rows, found {rows}")));
    }
    assemble(n, entries)
}

/// Picks the reader from the first non-blank character: `#` for CSV, `{` for JSON.
pub fn read_covariance(text: &str) -> Result<DMatrix<f64>> {
    match text.trim_start().chars().next() {
        Some('#') => covariance_from_csv(text),
        Some('{') => covariance_from_json(text),
        _ => Err(Error::Format("unrecognized covariance file".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ground_state_covariance, two_oscillator_model};
    use proptest::prelude::*;

    #[test]
    fn json_layout() {
        let g = CovarianceMatrix::vacuum(1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&covariance_to_json(&g)).unwrap();
        assert_eq!(v["n"], 1);
        assert_eq!(v["ordering"], "qqpp");
        assert_eq!(v["hbar"], 1.0);
        assert_eq!(v["matrix"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn rejects_other_orderings() {
        let text = r#"{"n": 1, "ordering": "qpqp", "hbar": 1, "matrix": [0.5, 0, 0, 0.5]}"#;
        assert!(matches!(covariance_from_json(text), Err(Error::Format(_))));
        let csv = "# sympent covariance n=1 ordering=qpqp\n0.5,0\n0,0.5\n";
        assert!(matches!(covariance_from_csv(csv), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_truncated_input() {
        let text = r#"{"n": 2, "ordering": "qqpp", "hbar": 1, "matrix": [0.5, 0, 0, 0.5]}"#;
        assert!(covariance_from_json(text).is_err());
        let csv = "# sympent covariance n=1 ordering=qqpp\n0.5,0\n";
        assert!(covariance_from_csv(csv).is_err());
        assert!(read_covariance("garbage").is_err());
        assert!(read_covariance("{\"n\": 1, \"ordering\"").is_err());
    }

    #[test]
    fn csv_header() {
        let g = CovarianceMatrix::vacuum(2).unwrap();
        let csv = covariance_to_csv(&g);
        assert!(csv.starts_with("# sympent covariance n=2 ordering=qqpp\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn model_state_round_trips_exactly() {
        let g = ground_state_covariance(&two_oscillator_model(1.0, 1.0, 2.0).unwrap()).unwrap();
        assert_eq!(
            &read_covariance(&covariance_to_csv(&g)).unwrap(),
            g.matrix()
        );
        assert_eq!(
            &read_covariance(&covariance_to_json(&g)).unwrap(),
            g.matrix()
        );
    }

    proptest! {
        #[test]
        fn csv_and_json_round_trip(entries in proptest::collection::vec(-1e6f64..1e6, 10)) {
            // symmetric 4x4 from 10 upper-triangular entries
            let mut m = DMatrix::zeros(4, 4);
            let mut k = 0;
            for i in 0..4 {
                for j in i..4 {
                    m[(i, j)] = entries[k];
                    m[(j, i)] = entries[k];
                    k += 1;
                }
            }
            let g = CovarianceMatrix::new(m).unwrap();
            prop_assert_eq!(&read_covariance(&covariance_to_csv(&g)).unwrap(), g.matrix());
            prop_assert_eq!(&read_covariance(&covariance_to_json(&g)).unwrap(), g.matrix());
        }
    }
}
