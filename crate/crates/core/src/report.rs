//! Deterministic outcome records.
//!
//! A report is the single currency for "what did the computation find":
//! dimensions, named check outcomes with witnesses, optional structure
//! constants, and truncation flags. Serialization order is fixed by the
//! struct layout and all collections are sorted, so identical runs produce
//! byte-identical output.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub dimensions: Vec<DimensionEntry>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub constants: Option<Vec<ConstantEntry>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain: Option<Vec<ChainEntry>>,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            dimensions: Vec::new(),
            checks: Vec::new(),
            constants: None,
            comparison: None,
            chain: None,
            truncated: false,
            notes: Vec::new(),
        }
    }

    pub fn with_dimensions(mut self, dims: Vec<(i64, usize)>) -> Self {
        self.dimensions = dims
            .into_iter()
            .map(|(degree, dim)| DimensionEntry { degree, dim })
            .collect();
        self
    }

    pub fn push_check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionEntry {
    pub degree: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    pub fn from_outcome(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }
}

/// One stored structure constant: [left basis vector at degrees.0,
/// right basis vector at degrees.1] expanded over the target basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub degrees: (i64, i64),
    pub left: usize,
    pub right: usize,
    pub value: Vec<(usize, String)>,
}

/// Side-by-side dimension tables for comparison reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub left_name: String,
    pub right_name: String,
    pub left: Vec<DimensionEntry>,
    pub right: Vec<DimensionEntry>,
    pub isomorphic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub degree: i64,
    pub dim: usize,
    /// Label of the chain map leaving this degree (toward degree - 1).
    pub map: String,
}
