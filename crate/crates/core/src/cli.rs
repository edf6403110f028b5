//! Reports shared by the scenario runner and the property suites.

pub mod scenario;
pub mod suites;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Invalid,
}

/// One named postcondition and whether it held.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Check {
        Check { name: name.to_string(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub status: Status,
    pub witness: Value,
    pub checks: Vec<Check>,
}

impl Report {
    /// Status is `pass` exactly when every check passes.
    pub fn from_checks(witness: Value, checks: Vec<Check>) -> Report {
        let status = if checks.iter().all(|c| c.pass) { Status::Pass } else { Status::Fail };
        Report { status, witness, checks }
    }

    pub fn invalid(msg: impl Into<String>) -> Report {
        Report { status: Status::Invalid, witness: json!({ "error": msg.into() }), checks: Vec::new() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Invalid => 2,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
