//! Named pass/fail checks shared by every verification report.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One named check with a reproducible witness when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, witness: impl FnOnce() -> String) -> Check {
        let witness = if pass { None } else { Some(witness()) };
        Check { name: name.into(), pass, witness }
    }

    pub fn from_error(name: impl Into<String>, e: &Error) -> Check {
        Check { name: name.into(), pass: false, witness: Some(e.to_string()) }
    }
}

/// Version of the JSON report layout. Bumped on any field change.
pub const SCHEMA_VERSION: u32 = 1;

/// One result line of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    /// Acceptance property the entry belongs to, 0 for direct commands.
    pub criterion: u8,
    pub check: String,
    pub pass: bool,
    pub data: serde_json::Value,
    /// Present exactly when `pass` is false.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Entry {
    /// A direct-command entry whose pass/fail comes from `checks`.
    pub fn from_checks(check: impl Into<String>, checks: &[Check], data: serde_json::Value) -> Entry {
        let witness = checks
            .iter()
            .find(|c| !c.pass)
            .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()));
        Entry { criterion: 0, check: check.into(), pass: witness.is_none(), data, witness }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Wall-clock timing; only present on request, since it breaks byte-identical output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Timing {
    pub total_ms: u128,
}

/// The document every `floer-rings` command prints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// The validated options, echoed back.
    pub input: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prng: Option<String>,
    pub results: Vec<Entry>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: serde_json::Value, results: Vec<Entry>) -> Report {
        let passed = results.iter().filter(|e| e.pass).count();
        let summary = Summary { total: results.len(), passed, failed: results.len() - passed };
        Report { schema_version: SCHEMA_VERSION, command: command.into(), input, prng: None, results, summary, timing: None }
    }

    pub fn pass(&self) -> bool {
        self.summary.failed == 0
    }
}
