//! Machine-readable run summaries.

use serde::{Deserialize, Serialize};

/// Summary of one command run. Field names are stable; absent values are
/// `null`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub problem: Option<String>,
    pub n: Option<usize>,
    pub backend: String,
    /// Solutions written.
    pub solutions: Option<usize>,
    /// Size of the permutation (or pair) set in use.
    pub permutations: Option<usize>,
    /// Counterexamples added by the set computation.
    pub iterations: Option<usize>,
    /// Entries dropped by the redundancy pass.
    pub removed: Option<usize>,
    pub seconds: f64,
    /// False when a time budget cut the run short; counts are then bounds.
    pub complete: bool,
    pub fully_reduced: Option<bool>,
    pub verdict: Option<String>,
    pub crosscheck: Option<bool>,
    pub shards: Vec<ShardReport>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ShardReport {
    pub degree_sequence: String,
    /// `realizable`, `not-realizable` or `unknown`.
    pub realizable: String,
    pub permutations: usize,
    pub removed: usize,
    pub solutions: usize,
    pub seconds: f64,
    pub complete: bool,
}

impl RunReport {
    pub fn new(command: &str, backend: String) -> Self {
        RunReport {
            command: command.to_owned(),
            backend,
            complete: true,
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
