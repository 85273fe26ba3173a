//! Serializable scenario reports.

use qretro_core::checks::CheckOutcome;
use qretro_core::equivalence::{EquivalenceReport, OracleReport};
use qretro_core::retrodiction::RetrodictionResult;
use qretro_core::scenarios::Table1;
use serde::{Deserialize, Serialize};

use crate::json::{matrix_to_json, MatrixJson};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1CellReport {
    pub belief: String,
    pub channel: String,
    pub outcome: String,
    #[serde(rename = "updated_S")]
    pub updated_s: MatrixJson,
    pub expected: MatrixJson,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub scenario: String,
    pub cells: Vec<Table1CellReport>,
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Table1Report {
    pub fn new(t: &Table1, tol: f64) -> Self {
        let max_deviation = t.max_deviation();
        Self {
            scenario: "table1".into(),
            cells: t
                .cells
                .iter()
                .map(|c| Table1CellReport {
                    belief: c.belief.name().into(),
                    channel: c.channel.to_string(),
                    outcome: c.outcome.into(),
                    updated_s: matrix_to_json(c.updated_s.matrix()),
                    expected: matrix_to_json(&c.expected),
                    deviation: c.deviation,
                })
                .collect(),
            max_deviation,
            tol,
            passed: max_deviation <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetrodictInputs {
    pub belief: String,
    pub channel: String,
    pub evidence: String,
    pub project_support: bool,
    pub renormalize: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetrodictReport {
    pub scenario: String,
    pub inputs: RetrodictInputs,
    #[serde(rename = "updated_S")]
    pub updated_s: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub updated_joint: Option<MatrixJson>,
    pub trace: f64,
    pub norm_deficit: f64,
}

impl RetrodictReport {
    pub fn new(inputs: RetrodictInputs, r: &RetrodictionResult, joint: bool) -> Self {
        Self {
            scenario: "retrodict".into(),
            inputs,
            updated_s: matrix_to_json(r.updated_s.matrix()),
            updated_joint: if joint {
                Some(matrix_to_json(
                    r.updated_joint.as_ref().map_or(r.updated_s.matrix(), |j| j.matrix()),
                ))
            } else {
                None
            },
            trace: r.updated_s.trace(),
            norm_deficit: r.norm_deficit,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivReport {
    pub equivalent: bool,
    pub signature_distance: f64,
    pub marginal_distance: f64,
    pub tol: f64,
    /// Present when the channel oracle ran.
    pub seed: Option<u64>,
    pub channels_tested: Option<usize>,
    pub oracle_equivalent: Option<bool>,
    pub oracle_max_deviation: Option<f64>,
}

impl EquivReport {
    pub fn new(r: &EquivalenceReport, tol: f64, oracle: Option<&OracleReport>) -> Self {
        Self {
            equivalent: r.equivalent,
            signature_distance: r.signature_distance,
            marginal_distance: r.marginal_distance,
            tol,
            seed: oracle.map(|o| o.seed),
            channels_tested: oracle.map(|o| o.channels_tested),
            oracle_equivalent: oracle.map(|o| o.equivalent),
            oracle_max_deviation: oracle.map(|o| o.max_deviation),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl From<&CheckOutcome> for CheckReport {
    fn from(c: &CheckOutcome) -> Self {
        Self {
            name: c.name.into(),
            passed: c.passed,
            detail: c.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}
