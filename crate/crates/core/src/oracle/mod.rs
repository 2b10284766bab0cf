//! Ground truth: exact counting, exhaustive enumeration, bijectivity and
//! round-trip verification, and statistical uniformity tests.

mod count;
mod enumerate;
mod stats;
mod verify;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::bijections::BijectionError;
use crate::marks::MarkError;
use crate::sampler::SamplerError;
use crate::tree::TreeError;

pub use count::{binomial, count_trees, verify_counts, verify_growth_identity};
pub use enumerate::{
    count_inputs, enumerate_forests, enumerate_inputs, enumerate_leaf_marked, enumerate_trees,
};
pub use stats::{
    chi_square_uniformity, chi_square_uniformity_tampered, height_stats, ChiSquareReport,
    HeightSummary,
};
pub use verify::{
    verify_binary_variants, verify_enlarge_bijection, verify_forest_counts, verify_pushforward,
    verify_rotation_lemma,
};

/// Enumerations refuse to materialize more objects than this by default.
pub const DEFAULT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration would produce {objects} objects, above the limit {limit}")]
    GuardExceeded { objects: String, limit: u64 },
    #[error("{samples} samples over {classes} classes is below 10 per class")]
    Underpowered { samples: u64, classes: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Mark(#[from] MarkError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

/// Outcome of one check. Counts are exact decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, String>>,
}

impl Report {
    pub(crate) fn new(check: &str, params: &[(&str, Value)]) -> Self {
        Report {
            check: check.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            pass: true,
            counterexample: None,
            counts: None,
        }
    }

    pub(crate) fn count(&mut self, key: &str, value: impl ToString) {
        self.counts
            .get_or_insert_with(BTreeMap::new)
            .insert(key.to_string(), value.to_string());
    }

    /// Marks the report failed, keeping the first counterexample only.
    pub(crate) fn fail(&mut self, counterexample: Value) {
        self.pass = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample);
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}
