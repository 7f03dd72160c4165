//! JSON file formats for finite metric spaces, rate distortion problems and
//! joint distributions.

use std::path::Path;

use mdim_core::info::{Distribution, Joint};
use mdim_core::metric::{validate_metric, FiniteMetricSpace};
use mdim_core::rd::{DistortionMatrix, RdProblem};
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

/// `{"points": [...], "matrix": [[...]]}` with a full symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<serde_json::Value>,
    pub matrix: Vec<Vec<f64>>,
}

/// `{"source": [...], "repro": [...], "matrix": [[...]]}`; `repro` labels
/// the columns and may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub source: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repro: Option<Vec<serde_json::Value>>,
    pub matrix: Vec<Vec<f64>>,
}

/// `{"matrix": [[...]]}`, rows indexed by `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointFile {
    pub matrix: Vec<Vec<f64>>,
}

fn label(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path, at: &str) -> Result<(T, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| usage(at, format!("{}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_slice(&bytes);
    let value = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| usage(at, format!("{}: {}: {}", path.display(), e.path(), e.inner())))?;
    Ok((value, bytes))
}

impl SpaceFile {
    pub fn into_space(self) -> mdim_core::Result<FiniteMetricSpace> {
        let labels = self.points.iter().map(label).collect();
        FiniteMetricSpace::from_matrix(self.matrix)?.with_labels(labels)
    }

    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        Self {
            points: space.labels().iter().cloned().map(serde_json::Value::String).collect(),
            matrix: space.to_rows(),
        }
    }
}

impl ProblemFile {
    pub fn into_problem(self) -> mdim_core::Result<RdProblem> {
        let d = DistortionMatrix::from_rows(&self.matrix)?;
        if let Some(r) = &self.repro {
            if r.len() != d.cols() {
                return Err(mdim_core::Error::Shape(format!(
                    "{} reproduction labels for {} matrix columns",
                    r.len(),
                    d.cols()
                )));
            }
        }
        RdProblem::new(Distribution::new(self.source)?, d)
    }
}

/// Loads a space and checks the metric axioms to within `1e-12`; the
/// bytes are returned for checksumming.
pub fn load_space(path: &Path, at: &str) -> Result<(FiniteMetricSpace, Vec<u8>)> {
    let (f, bytes): (SpaceFile, _) = read(path, at)?;
    let space = f.into_space().map_err(|e| usage(at, format!("{}: {e}", path.display())))?;
    let rep = validate_metric(&space, 1e-12);
    if let Some(v) = rep.violations.first() {
        return Err(usage(at, format!("{}: not a metric: {v:?}", path.display())));
    }
    Ok((space, bytes))
}

pub fn load_problem(path: &Path, at: &str) -> Result<(RdProblem, Vec<u8>)> {
    let (f, bytes): (ProblemFile, _) = read(path, at)?;
    let prob = f.into_problem().map_err(|e| usage(at, format!("{}: {e}", path.display())))?;
    Ok((prob, bytes))
}

pub fn load_joint(path: &Path, at: &str) -> Result<(Joint, Vec<u8>)> {
    let (f, bytes): (JointFile, _) = read(path, at)?;
    let j = Joint::from_rows(&f.matrix).map_err(|e| usage(at, format!("{}: {e}", path.display())))?;
    Ok((j, bytes))
}
