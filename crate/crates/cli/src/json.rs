//! JSON schemas for beliefs, channels, POVMs and evidence.
//!
//! ```json
//! {"dim_S": 2, "dim_R": 1, "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
//! {"dim_in": 2, "dim_out": 2, "kraus": [ <matrix>, ... ]}
//! {"effects": [ <matrix>, ... ]}
//! ```
//!
//! Evidence is a bare matrix or `{"matrix": <matrix>}`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qretro_core::model::measurement_channel;
use qretro_core::{Belief, ComplexMatrix, DensityOperator, Povm, QuantumChannel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, context: &str) -> Result<ComplexMatrix, CliError> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    if n_rows == 0 || n_cols == 0 {
        return Err(CliError::parse(context, "empty matrix"));
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != n_cols) {
        return Err(CliError::parse(
            context,
            format!("row {bad} has {} entries, expected {n_cols}", rows[bad].len()),
        ));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::parse(context, "non-finite entry"));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::new(n_rows, n_cols, data).map_err(|e| CliError::engine(context, e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeliefJson {
    #[serde(rename = "dim_S")]
    pub dim_s: usize,
    #[serde(rename = "dim_R")]
    pub dim_r: usize,
    pub matrix: MatrixJson,
}

impl BeliefJson {
    pub fn from_belief(b: &Belief) -> Self {
        Self {
            dim_s: b.dim_s(),
            dim_r: b.dim_r(),
            matrix: matrix_to_json(b.joint().matrix()),
        }
    }

    pub fn to_belief(&self) -> Result<Belief, CliError> {
        let m = matrix_from_json(&self.matrix, "belief matrix")?;
        Belief::new(m, self.dim_s, self.dim_r).map_err(|e| CliError::engine("belief", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixJson>,
}

impl ChannelJson {
    pub fn from_channel(c: &QuantumChannel) -> Self {
        Self {
            dim_in: c.dim_in(),
            dim_out: c.dim_out(),
            kraus: c.kraus().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<QuantumChannel, CliError> {
        let kraus = self
            .kraus
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(m, &format!("Kraus operator {k}")))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(k) = kraus.first() {
            if k.cols() != self.dim_in || k.rows() != self.dim_out {
                return Err(CliError::parse(
                    "channel",
                    format!(
                        "Kraus operators are {}x{}, but dim_out x dim_in is {}x{}",
                        k.rows(),
                        k.cols(),
                        self.dim_out,
                        self.dim_in
                    ),
                ));
            }
        }
        QuantumChannel::new(kraus).map_err(|e| CliError::engine("channel", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmJson {
    pub effects: Vec<MatrixJson>,
}

impl PovmJson {
    pub fn from_povm(p: &Povm) -> Self {
        Self {
            effects: p.effects().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_povm(&self) -> Result<Povm, CliError> {
        let effects = self
            .effects
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(m, &format!("effect {k}")))
            .collect::<Result<Vec<_>, _>>()?;
        Povm::new(effects).map_err(|e| CliError::engine("POVM", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateJson {
    Wrapped { matrix: MatrixJson },
    Bare(MatrixJson),
}

impl StateJson {
    pub fn from_state(rho: &DensityOperator) -> Self {
        StateJson::Wrapped {
            matrix: matrix_to_json(rho.matrix()),
        }
    }

    pub fn to_state(&self) -> Result<DensityOperator, CliError> {
        let rows = match self {
            StateJson::Wrapped { matrix } | StateJson::Bare(matrix) => matrix,
        };
        let m = matrix_from_json(rows, "evidence matrix")?;
        DensityOperator::new(m).map_err(|e| CliError::engine("evidence", e))
    }
}

/// A channel file may also hold a POVM, read as its measurement channel.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ChannelOrPovm {
    Channel(ChannelJson),
    Povm(PovmJson),
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, context: &Path) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|source| CliError::Json {
        context: context.display().to_string(),
        source,
    })
}

pub fn load_belief(path: &Path) -> Result<Belief, CliError> {
    parse::<BeliefJson>(&read_text(path)?, path)?.to_belief()
}

pub fn load_channel(path: &Path) -> Result<QuantumChannel, CliError> {
    match parse::<ChannelOrPovm>(&read_text(path)?, path)? {
        ChannelOrPovm::Channel(c) => c.to_channel(),
        ChannelOrPovm::Povm(p) => {
            measurement_channel(&p.to_povm()?).map_err(|e| CliError::engine("measurement channel", e))
        }
    }
}

pub fn load_povm(path: &Path) -> Result<Povm, CliError> {
    parse::<PovmJson>(&read_text(path)?, path)?.to_povm()
}

pub fn load_state(path: &Path) -> Result<DensityOperator, CliError> {
    parse::<StateJson>(&read_text(path)?, path)?.to_state()
}
