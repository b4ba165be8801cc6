//! JSON certificates emitted by exhaustive checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one exhaustive or randomized check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub cases: u64,
    pub failures: u64,
    pub first_counterexample: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl Certificate {
    pub fn new(check: &str) -> Self {
        Certificate {
            schema: 1,
            check: check.to_string(),
            params: BTreeMap::new(),
            cases: 0,
            failures: 0,
            first_counterexample: None,
            details: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    /// Folds per-case outcomes (in input order) into the tallies.
    pub fn record_all(&mut self, outcomes: impl IntoIterator<Item = Option<String>>) {
        for o in outcomes {
            self.record(o);
        }
    }

    /// `None` is a pass, `Some(description)` a counterexample.
    pub fn record(&mut self, outcome: Option<String>) {
        self.cases += 1;
        if let Some(cx) = outcome {
            self.failures += 1;
            self.first_counterexample.get_or_insert(cx);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_first_counterexample() {
        let mut c = Certificate::new("demo").param("n", 3);
        c.record_all([None, Some("a".into()), Some("b".into())]);
        assert_eq!((c.cases, c.failures), (3, 2));
        assert_eq!(c.first_counterexample.as_deref(), Some("a"));
        assert!(!c.passed());
        let back: Certificate = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn empty_certificate_does_not_pass() {
        assert!(!Certificate::new("nothing").passed());
    }
}
