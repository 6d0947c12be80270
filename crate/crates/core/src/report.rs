//! Pass/fail reports shared by every verification suite.

use serde::Serialize;

/// One checked case.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CaseResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CaseResult {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CaseResult { name: name.into(), pass, detail: detail.into() }
    }
}

/// The cases of one suite, in deterministic order.
#[derive(Clone, Debug, Serialize, Default)]
pub struct CheckReport {
    pub suite: String,
    pub results: Vec<CaseResult>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport { suite: suite.into(), results: Vec::new() }
    }

    pub fn push(&mut self, case: CaseResult) {
        self.results.push(case);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.results.extend(other.results);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.results.iter().filter(|c| !c.pass)
    }

    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }

    /// One line: suite name, pass count, and the first failure if any.
    pub fn summary(&self) -> String {
        let ok = self.results.iter().filter(|c| c.pass).count();
        let mut s = format!("{}: {}/{} passed", self.suite, ok, self.results.len());
        if let Some(f) = self.failures().next() {
            s.push_str(&format!("; first failure {}: {}", f.name, f.detail));
        }
        s
    }
}
