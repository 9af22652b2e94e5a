//! Check results shared by the verification routines and the CLI.
//!
//! Field order in the serialized form follows declaration order, and `params`
//! is a `serde_json::Value` object whose keys serialize sorted, so reports are
//! byte-stable for fixed inputs.

use serde::Serialize;
use serde_json::Value;

/// One named identity and whether it held.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// For failures: both reduced sides, or the offending residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), passed: true, detail: None }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), passed: false, detail: Some(detail.into()) }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, detail())
        }
    }

    /// Equality of two displayable values, recording both sides on failure.
    pub fn compare<T: PartialEq + std::fmt::Display>(name: impl Into<String>, lhs: &T, rhs: &T) -> Self {
        Self::from_bool(name, lhs == rhs, || format!("lhs = {lhs}; rhs = {rhs}"))
    }
}

/// A group of outcomes produced by one check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub passed: bool,
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, params: Value, outcomes: Vec<CheckOutcome>) -> Self {
        let passed = outcomes.iter().all(|o| o.passed);
        CheckReport { check: check.into(), params, passed, outcomes }
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }

    pub fn num_passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn aggregate_and_order() {
        let r = CheckReport::new(
            "demo",
            json!({"n": 2, "a": 1}),
            vec![CheckOutcome::pass("x"), CheckOutcome::compare("y", &1, &2)],
        );
        assert!(!r.passed);
        assert_eq!(r.first_failure().unwrap().name, "y");
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"check":"demo","params":{"a":1,"n":2},"passed":false,"outcomes":[{"name":"x","passed":true},{"name":"y","passed":false,"detail":"lhs = 1; rhs = 2"}]}"#
        );
    }
}
