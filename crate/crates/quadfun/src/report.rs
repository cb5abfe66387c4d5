//! Check reports shared by the axiom checkers and the command line.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub ok: bool,
    /// Concrete witness for a failing check (element or triple).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl RunReport {
    pub fn new(suite: impl Into<String>) -> Self {
        RunReport { suite: suite.into(), checks: Vec::new() }
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.checks.push(CheckResult { id: id.into(), ok: true, witness: None });
    }

    pub fn fail(&mut self, id: impl Into<String>, witness: impl Into<String>) {
        self.checks.push(CheckResult {
            id: id.into(),
            ok: false,
            witness: Some(witness.into()),
        });
    }

    pub fn record(&mut self, id: impl Into<String>, ok: bool, witness: impl Into<String>) {
        if ok {
            self.pass(id);
        } else {
            self.fail(id, witness);
        }
    }

    pub fn merge(&mut self, other: RunReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }
}
