//! Subcommand implementations. Each returns the primary output text and an
//! exit code; [`run`] handles emission and run records.

use std::collections::BTreeMap;
use std::fs;

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sympent_core::io::{convention_line, fmt_f64};
use sympent_core::units::{ORDERING, THERMAL_TOL, VACUUM_SIGMA};
use sympent_core::verify::{coarse_grid, compare_grid, fine_grid, OracleRow};
use sympent_core::{
    entanglement_entropy, purity_check, symplectic_spectrum, validate, williamson_with_tol,
    EntropyOptions, EntropyReport, GaussianWigner, LogBase, ModePartition, ValidityReport,
};

use crate::input;
use crate::output::{emit, sidecar, RunRecord};
use crate::sweep::{self, SweepSpec};
use crate::{Cli, Command, GridArg, EXIT_ORACLE, EXIT_UNPHYSICAL};

struct Outcome {
    text: String,
    code: u8,
    input: Option<Vec<u8>>,
    options: BTreeMap<String, String>,
}

pub fn run(cli: &Cli) -> Result<u8> {
    let (name, outcome) = match &cli.command {
        Command::Validate { input } => ("validate", validate_cmd(cli, input)?),
        Command::Spectrum {
            input,
            modes,
            williamson,
        } => (
            "spectrum",
            spectrum_cmd(cli, input, modes.as_deref(), *williamson)?,
        ),
        Command::Entropy { input, partition } => ("entropy", entropy_cmd(cli, input, partition)?),
        Command::Sweep { spec, partition } => {
            ("sweep", sweep_cmd(cli, spec, partition.as_deref())?)
        }
        Command::Verify { grid } => ("verify", verify_cmd(cli, *grid)?),
        Command::Wigner { input, mode, grid } => ("wigner", wigner_cmd(cli, input, *mode, grid)?),
    };
    emit(cli.out.as_deref(), &outcome.text)?;
    let record_path = cli
        .record
        .clone()
        .or_else(|| cli.out.as_deref().map(sidecar));
    if let Some(path) = record_path {
        let mut options = outcome.options;
        options.insert("tol".into(), format!("{:?}", cli.tol));
        options.insert("seed".into(), cli.seed.to_string());
        options
            .entry("base".into())
            .or_insert_with(|| base(cli).to_string());
        RunRecord::new(name, outcome.input.as_deref(), options)
            .finish(&outcome.text, cli.out.as_deref(), outcome.code.into())
            .save(&path)?;
    }
    Ok(outcome.code)
}

fn base(cli: &Cli) -> LogBase {
    cli.base.map(LogBase::from).unwrap_or_default()
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn opts<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn validate_cmd(cli: &Cli, path: &std::path::Path) -> Result<Outcome> {
    let loaded = input::load(path)?;
    let report: ValidityReport = validate(&loaded.raw_matrix()?, cli.tol)?;
    let code = if report.valid { 0 } else { EXIT_UNPHYSICAL };
    Ok(Outcome {
        text: json(&report)?,
        code,
        input: Some(loaded.bytes),
        options: opts([("input", path.display().to_string())]),
    })
}

#[derive(Serialize)]
struct WilliamsonOut {
    /// Row-major `2n x 2n`.
    transform: Vec<f64>,
    congruence_residual: f64,
    symplectic_residual: f64,
}

#[derive(Serialize)]
struct SpectrumOut {
    n: usize,
    ordering: &'static str,
    modes: Vec<usize>,
    spectrum: Vec<f64>,
    min_sigma: f64,
    max_sigma: f64,
    pure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    williamson: Option<WilliamsonOut>,
}

fn parse_modes(text: &str, n: usize) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            let k: usize = t
                .trim()
                .parse()
                .with_context(|| format!("bad mode index {t:?}"))?;
            if k == 0 || k > n {
                bail!("mode index {k} outside 1..={n}");
            }
            Ok(k - 1)
        })
        .collect()
}

fn spectrum_cmd(
    cli: &Cli,
    path: &std::path::Path,
    modes: Option<&str>,
    with_w: bool,
) -> Result<Outcome> {
    let loaded = input::load(path)?;
    let full = loaded.state()?;
    let keep = match modes {
        Some(text) => parse_modes(text, full.n())?,
        None => (0..full.n()).collect(),
    };
    let gamma = full.reduce(&keep)?;
    let spectrum = symplectic_spectrum(&gamma)?;
    let williamson = if with_w {
        let w = williamson_with_tol(&gamma, cli.tol)?;
        let m = w.transform.matrix();
        Some(WilliamsonOut {
            transform: (0..m.nrows())
                .flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)]))
                .collect(),
            congruence_residual: w.congruence_residual,
            symplectic_residual: w.symplectic_residual,
        })
    } else {
        None
    };
    let out = SpectrumOut {
        n: gamma.n(),
        ordering: ORDERING,
        modes: keep.iter().map(|k| k + 1).collect(),
        min_sigma: spectrum.min(),
        max_sigma: spectrum.max(),
        pure: spectrum
            .values()
            .iter()
            .all(|s| (s - VACUUM_SIGMA).abs() <= cli.tol),
        spectrum: spectrum.values().to_vec(),
        williamson,
    };
    let mut options = opts([("input", path.display().to_string())]);
    if let Some(m) = modes {
        options.insert("modes".into(), m.to_string());
    }
    Ok(Outcome {
        text: json(&out)?,
        code: 0,
        input: Some(loaded.bytes),
        options,
    })
}

#[derive(Serialize)]
struct EntropyOut {
    #[serde(flatten)]
    report: EntropyReport,
    /// Whether the global state is pure, in which case the entropy measures
    /// entanglement and the B side is reported too.
    global_pure: bool,
}

fn entropy_cmd(cli: &Cli, path: &std::path::Path, partition: &str) -> Result<Outcome> {
    let loaded = input::load(path)?;
    let gamma = loaded.state()?;
    let partition = ModePartition::parse(partition, gamma.n())?;
    let global_pure = purity_check(&gamma, cli.tol)?;
    let options = EntropyOptions {
        base: base(cli),
        thermal_tol: THERMAL_TOL,
        with_complement: global_pure,
    };
    let report = entanglement_entropy(&gamma, &partition, &options)?;
    Ok(Outcome {
        text: json(&EntropyOut {
            report,
            global_pure,
        })?,
        code: 0,
        input: Some(loaded.bytes),
        options: opts([
            ("input", path.display().to_string()),
            ("partition", partition.to_string()),
        ]),
    })
}

fn sweep_cmd(cli: &Cli, path: &std::path::Path, partition: Option<&str>) -> Result<Outcome> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let spec =
        SweepSpec::from_json(std::str::from_utf8(&bytes).context("sweep file is not UTF-8")?)?;
    // Flags win over the sweep file, which wins over defaults.
    let base = cli
        .base
        .map(LogBase::from)
        .or(spec.base)
        .unwrap_or_default();
    let partition = partition.unwrap_or(&spec.partition).to_string();
    let rows = sweep::run(&spec, &partition, base, THERMAL_TOL)?;
    Ok(Outcome {
        text: sweep::to_csv(&spec, &partition, base, &rows),
        code: 0,
        input: Some(bytes),
        options: opts([
            ("spec", path.display().to_string()),
            ("partition", partition.clone()),
            ("base", base.to_string()),
        ]),
    })
}

/// Extra oracle points for the fine grid: occupations log-uniform in
/// `[1e-6, 1e2]`, drawn from `seed`.
fn random_sigmas(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| VACUUM_SIGMA + 10f64.powf(rng.random_range(-6.0..2.0)))
        .collect()
}

fn verify_cmd(cli: &Cli, grid: GridArg) -> Result<Outcome> {
    let base = base(cli);
    let sigmas = match grid {
        GridArg::Coarse => coarse_grid(),
        GridArg::Fine => {
            let mut g = fine_grid();
            g.extend(random_sigmas(cli.seed, 16));
            g
        }
    };
    let rows: Vec<OracleRow> = compare_grid(&sigmas, base)?;
    let grid_name = match grid {
        GridArg::Coarse => "coarse",
        GridArg::Fine => "fine",
    };
    let mut text = format!(
        "# sympent verify grid={grid_name} points={} tol={}\n",
        rows.len(),
        fmt_f64(cli.tol)
    );
    text.push_str(&convention_line(base));
    text.push('\n');
    text.push_str("# closed_form = (s+1/2)log(s+1/2)-(s-1/2)log(s-1/2); thermal_sum and squeezed_sum are truncated at n_max with tail mass < 1e-12\n");
    text.push_str("sigma,beta,n_max,closed_form,thermal_sum,squeezed_sum,deviation,status\n");
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for r in &rows {
        let ok = r.passes(cli.tol);
        if !ok {
            failures.push(r.sigma);
        }
        worst = worst.max(r.deviation);
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.sigma),
            fmt_f64(r.beta),
            r.n_max,
            fmt_f64(r.closed_form),
            fmt_f64(r.thermal_sum),
            fmt_f64(r.squeezed_sum),
            fmt_f64(r.deviation),
            if ok { "ok" } else { "FAIL" },
        ));
    }
    text.push_str(&format!(
        "# max_deviation={} failures={}\n",
        fmt_f64(worst),
        failures.len()
    ));
    let code = if failures.is_empty() {
        0
    } else {
        for s in &failures {
            eprintln!("verify: deviation above tolerance at sigma={}", fmt_f64(*s));
        }
        EXIT_ORACLE
    };
    Ok(Outcome {
        text,
        code,
        input: None,
        options: opts([("grid", grid_name.to_string())]),
    })
}

fn parse_grid(text: &str) -> Result<(f64, usize)> {
    let (e, s) = text
        .split_once(',')
        .context("grid must be 'extent,steps'")?;
    let extent: f64 = e.trim().parse().context("grid extent")?;
    let steps: usize = s.trim().parse().context("grid steps")?;
    if extent <= 0.0 || !extent.is_finite() {
        bail!("grid extent must be positive");
    }
    if steps < 2 {
        bail!("grid needs at least 2 steps");
    }
    Ok((extent, steps))
}

fn wigner_cmd(cli: &Cli, path: &std::path::Path, mode: usize, grid: &str) -> Result<Outcome> {
    let loaded = input::load(path)?;
    let gamma = loaded.state()?;
    if mode == 0 || mode > gamma.n() {
        bail!("mode {mode} outside 1..={}", gamma.n());
    }
    let (extent, steps) = parse_grid(grid)?;
    let reduced = gamma.reduce(&[mode - 1])?;
    let w = GaussianWigner::new(&reduced)?;
    let h = 2.0 * extent / (steps - 1) as f64;
    let axis: Vec<f64> = (0..steps).map(|i| -extent + h * i as f64).collect();
    let mut body = String::with_capacity(steps * steps * 72);
    let mut sum = 0.0;
    for &q in &axis {
        for &p in &axis {
            let value = w.eval(&[q, p]);
            sum += value;
            body.push_str(&fmt_f64(q));
            body.push(',');
            body.push_str(&fmt_f64(p));
            body.push(',');
            body.push_str(&fmt_f64(value));
            body.push('\n');
        }
    }
    let g = reduced.matrix();
    let sigma = symplectic_spectrum(&reduced)?.max();
    let mut text = format!(
        "# sympent wigner mode={mode} extent={} steps={steps} spacing={}\n",
        fmt_f64(extent),
        fmt_f64(h)
    );
    text.push_str(&convention_line(base(cli)));
    text.push('\n');
    text.push_str(&format!(
        "# reduced_covariance=[{},{};{},{}] sigma={}\n",
        fmt_f64(g[(0, 0)]),
        fmt_f64(g[(0, 1)]),
        fmt_f64(g[(1, 0)]),
        fmt_f64(g[(1, 1)]),
        fmt_f64(sigma)
    ));
    text.push_str(&format!(
        "# peak={} grid_integral={}\n",
        fmt_f64(w.peak()),
        fmt_f64(sum * h * h)
    ));
    text.push_str("q,p,W\n");
    text.push_str(&body);
    Ok(Outcome {
        text,
        code: 0,
        input: Some(loaded.bytes),
        options: opts([
            ("input", path.display().to_string()),
            ("mode", mode.to_string()),
            ("grid", format!("{extent},{steps}")),
        ]),
    })
}
