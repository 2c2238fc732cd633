//! Pass/fail bookkeeping shared by the axiom checkers and verification suites.

use serde::Serialize;
use serde_json::Value;

use crate::par::Strategy;

/// Outcome of checking one property over a batch of samples.
///
/// For universal properties `failed` counts violating samples and
/// `counterexample` holds the one with the smallest sample index. Existence
/// properties (names starting with `exists_`) record the first hit in
/// `witness` and count as failed only when nothing was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Checks `violation(i)` for every sample index `i < n`.
    pub fn for_all<F>(strategy: Strategy, name: impl Into<String>, n: usize, violation: F) -> Self
    where
        F: Fn(usize) -> Option<Value> + Sync + Send,
    {
        let outcomes = strategy.map(n, violation);
        let failed = outcomes.iter().filter(|o| o.is_some()).count();
        PropertyResult {
            name: name.into(),
            checked: n,
            failed,
            counterexample: outcomes.into_iter().flatten().next(),
            witness: None,
        }
    }

    /// Searches samples `i < n` for a witness, keeping the smallest index.
    pub fn exists<F>(strategy: Strategy, name: impl Into<String>, n: usize, witness: F) -> Self
    where
        F: Fn(usize) -> Option<Value> + Sync + Send,
    {
        let hit = strategy.find_first(n, witness);
        PropertyResult {
            name: name.into(),
            checked: n,
            failed: usize::from(hit.is_none()),
            counterexample: None,
            witness: hit,
        }
    }

    /// A property decided by a single computation.
    pub fn single(name: impl Into<String>, counterexample: Option<Value>) -> Self {
        PropertyResult {
            name: name.into(),
            checked: 1,
            failed: usize::from(counterexample.is_some()),
            counterexample,
            witness: None,
        }
    }
}
