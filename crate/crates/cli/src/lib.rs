//! Library side of the `imag` command-line tool: JSON/CSV rendering of
//! measures, parameter sweeps and property audits.
//!
//! Every number is written with 17 significant digits, so output files
//! round-trip to the exact doubles that were computed.

pub mod audit;
pub mod grid;
pub mod num;

use imaginarity::gaussian::{
    m_tsallis_gaussian, one_mode_from_params, williamson, GaussianState, OneModeParams,
};
use imaginarity::measures::{
    all_measures, m_fidelity, m_rel_entropy, m_trace, m_tsallis, MeasureValue,
};
use imaginarity::states::{BlochVector, DensityMatrix};
use imaginarity::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::grid::{find, parse_grid, Axis, GridError};
use crate::num::{g17, json_number};

pub const DEFAULT_GRID: &str = "y:0:1:101,mu:0.01:0.99:99";

/// Failure classes with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => CliError::Parse(format!("parse error: {msg}")),
            other => CliError::Validation(format!("validation failed: {other}")),
        }
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        CliError::Parse(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeasureChoice {
    Tsallis,
    Trace,
    Relent,
    Fidelity,
    All,
}

#[derive(Serialize)]
struct MeasureRecord {
    measure: &'static str,
    mu: Option<serde_json::Number>,
    value: Option<serde_json::Number>,
}

impl From<&MeasureValue> for MeasureRecord {
    fn from(v: &MeasureValue) -> Self {
        Self {
            measure: v.measure.name(),
            mu: v.parameter.and_then(json_number),
            value: json_number(v.value),
        }
    }
}

/// One JSON object per requested measure, in the order tsallis, trace,
/// relent, fidelity.
pub fn measure_json(
    rho: &DensityMatrix,
    which: MeasureChoice,
    mu: f64,
) -> Result<Vec<String>, CliError> {
    let values = match which {
        MeasureChoice::Tsallis => vec![m_tsallis(rho, mu)?],
        MeasureChoice::Trace => vec![m_trace(rho)?],
        MeasureChoice::Relent => vec![m_rel_entropy(rho)?],
        MeasureChoice::Fidelity => vec![m_fidelity(rho)?],
        MeasureChoice::All => all_measures(rho, mu)?,
    };
    Ok(values
        .iter()
        .map(|v| serde_json::to_string(&MeasureRecord::from(v)).expect("serializable record"))
        .collect())
}

#[derive(Serialize)]
struct GaussianRecord {
    measure: &'static str,
    mu: Option<serde_json::Number>,
    value: Option<serde_json::Number>,
    modes: usize,
    symplectic_eigenvalues: Vec<Option<serde_json::Number>>,
}

/// `M_T,mu` of a Gaussian state together with its symplectic eigenvalues.
pub fn gaussian_json(g: &GaussianState, mu: f64) -> Result<String, CliError> {
    let v = m_tsallis_gaussian(g, mu)?;
    let w = williamson(g.cov())?;
    let record = GaussianRecord {
        measure: v.measure.name(),
        mu: json_number(mu),
        value: json_number(v.value),
        modes: g.modes(),
        symplectic_eigenvalues: w.nu.iter().map(|&nu| json_number(nu)).collect(),
    };
    Ok(serde_json::to_string(&record).expect("serializable record"))
}

fn csv(header: &str, rows: Vec<Vec<f64>>) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(g17).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Evaluates `f` on every cell in parallel; rows keep the cell order.
fn evaluate<T: Sync, F>(cells: &[T], f: F) -> Result<Vec<Vec<f64>>, CliError>
where
    F: Fn(&T) -> Result<Vec<f64>, Error> + Sync,
{
    cells
        .par_iter()
        .map(|c| f(c).map_err(CliError::from))
        .collect()
}

/// `M_T,mu` of the qubit with Bloch vector `(0, y, 0)` over a `y` x `mu`
/// grid, evaluated through the general eigendecomposition path. Rows run
/// over `mu` fastest.
pub fn sweep_csv(spec: &str) -> Result<String, CliError> {
    let axes = parse_grid(spec, &["y", "mu"])?;
    let axis = |name| find(&axes, name).ok_or_else(|| GridError(format!("missing {name} axis")));
    let ys = axis("y")?.points();
    let mus = axis("mu")?.points();
    let cells: Vec<(f64, f64)> = ys
        .iter()
        .flat_map(|&y| mus.iter().map(move |&mu| (y, mu)))
        .collect();
    let rows = evaluate(&cells, |&(y, mu)| {
        let rho = DensityMatrix::from_bloch(BlochVector::new(0.0, y, 0.0)?);
        Ok(vec![y, mu, m_tsallis(&rho, mu)?.value])
    })?;
    Ok(csv("y,mu,value", rows))
}

const GAUSSIAN_AXES: [(&str, f64); 5] = [
    ("nu", 1.0),
    ("zeta", 0.0),
    ("theta", 0.0),
    ("x2", 0.0),
    ("mu", 0.5),
];

/// One-mode Gaussian sweep over any of `nu`, `zeta` (`|ζ|`), `theta`, `x2`
/// (mean of the `p` quadrature) and `mu`; omitted axes are held at
/// `1, 0, 0, 0, 0.5`. Values come from the covariance-matrix formula.
pub fn gaussian_sweep_csv(spec: &str) -> Result<String, CliError> {
    let names: Vec<&str> = GAUSSIAN_AXES.iter().map(|(n, _)| *n).collect();
    let axes = parse_grid(spec, &names)?;
    let points: Vec<Vec<f64>> = GAUSSIAN_AXES
        .iter()
        .map(|&(name, default)| find(&axes, name).map_or_else(|| vec![default], Axis::points))
        .collect();
    let mut cells: Vec<[f64; 5]> = vec![[0.0; 5]];
    for (k, values) in points.iter().enumerate() {
        cells = cells
            .iter()
            .flat_map(|c| {
                values.iter().map(move |&v| {
                    let mut next = *c;
                    next[k] = v;
                    next
                })
            })
            .collect();
    }
    let rows = evaluate(&cells, |&[nu, zeta, theta, x2, mu]| {
        let p = OneModeParams::from_mean(0.0, x2, zeta, theta, nu);
        let value = m_tsallis_gaussian(&one_mode_from_params(&p)?, mu)?.value;
        Ok(vec![nu, zeta, theta, x2, mu, value])
    })?;
    Ok(csv("nu,zeta,theta,x2,mu,value", rows))
}
