//! Machine-readable run records.
//!
//! Every record starts with a [`RunManifest`] naming the command, the
//! digests of its inputs and every effective setting, so equal manifests
//! give equal bytes. Non-finite numbers are written as `null`; field names
//! are part of the file format.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::feasibility::Violation;
use crate::model::{OperatorId, StructuralViolation};
use crate::reference::ProfileKnobs;
use crate::sim::compare::ComparisonTable;
use crate::sim::trace::StreamConfig;
use crate::sim::{SimConfig, SimReport};
use crate::solver::{Solution, SolverConfig};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub name: String,
    /// File path as given, or `builtin:<name>` for bundled reference data.
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(name: &str, source: &str, bytes: &[u8]) -> Self {
        InputDigest {
            name: name.into(),
            source: source.into(),
            sha256: sha256_hex(bytes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<StreamConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimConfig>,
    /// Knobs used when the profile was generated rather than read.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_knobs: Option<ProfileKnobs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub treq_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    pub seed: u64,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.into(),
            inputs: Vec::new(),
            solver: None,
            stream: None,
            sim: None,
            profile_knobs: None,
            treq_slack: None,
            bandwidth: None,
            seed: 0,
            version: TOOL_VERSION.into(),
        }
    }
}

/// Record of `solve` and `baseline`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub manifest: RunManifest,
    /// `solve`, `co` or `eo`.
    pub strategy: String,
    pub t_req_s: Vec<OperatorBound>,
    #[serde(flatten)]
    pub solution: Solution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorBound {
    pub op: OperatorId,
    pub t_req_s: f64,
}

/// Record of `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRunReport {
    pub manifest: RunManifest,
    pub sim: SimReport,
}

/// Record of `validate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateReport {
    pub manifest: RunManifest,
    pub valid: bool,
    pub structural: Vec<StructuralViolation>,
    pub profile_problems: Vec<String>,
    /// Constraint check of the all-cloud assignment, when the inputs allow it.
    pub cloud_only_violations: Vec<Violation>,
}

/// Record of `compare`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub manifest: RunManifest,
    pub table: ComparisonTable,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(r: &T) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}
