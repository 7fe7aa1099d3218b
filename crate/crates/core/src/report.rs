//! Report types shared by the verification harnesses and the CLI.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

/// One named check. `witness` carries the offending point or set of a
/// failed check (or the exhibited object of a negative claim).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Check {
        Check {
            name: name.into(),
            status: Status::from_bool(ok),
            witness: None,
            details: Value::Null,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Check {
        self.witness = Some(witness);
        self
    }

    pub fn with_details(mut self, details: Value) -> Check {
        self.details = details;
        self
    }
}

/// A batch of checks. `overall` is the conjunction of the check statuses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub overall: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Command-specific payload (enumeration counts, search reports, ...).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, config: Value, checks: Vec<Check>) -> Self {
        let overall = Status::from_bool(checks.iter().all(|c| c.status.is_pass()));
        VerificationReport {
            command: command.into(),
            config,
            checks,
            overall,
            notes: Vec::new(),
            result: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall.is_pass()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
