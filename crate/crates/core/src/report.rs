//! Check outcomes shared by the suites and the command-line reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// The measured quantity: a discrepancy for identities, a value for inequalities.
    pub residual: f64,
    /// Threshold the residual is compared against.
    pub bound: f64,
    /// Largest input level the check covers, when it depends on truncation.
    pub valid_degrees: Option<isize>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    /// Passes when `residual <= bound`.
    pub fn compare(name: impl Into<String>, residual: f64, bound: f64) -> Self {
        let status = if residual <= bound { Status::Pass } else { Status::Fail };
        CheckResult { name: name.into(), status, residual, bound, valid_degrees: None, elapsed_ms: 0, detail: None }
    }

    /// Identity check: exact equality in exact mode, `residual <= tol` otherwise.
    pub fn identity(name: impl Into<String>, exact_ok: Option<bool>, residual: f64, tol: f64) -> Self {
        match exact_ok {
            Some(ok) => {
                let mut c = Self::compare(name, residual, 0.0);
                c.status = if ok { Status::Pass } else { Status::Fail };
                c
            }
            None => Self::compare(name, residual, tol),
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Skipped,
            residual: 0.0,
            bound: 0.0,
            valid_degrees: None,
            elapsed_ms: 0,
            detail: Some(why.into()),
        }
    }

    pub fn failed(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Fail,
            residual: f64::NAN,
            bound: 0.0,
            valid_degrees: None,
            elapsed_ms: 0,
            detail: Some(why.into()),
        }
    }

    pub fn with_degrees(mut self, vd: isize) -> Self {
        self.valid_degrees = Some(vd);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

pub fn totals(checks: &[CheckResult]) -> Totals {
    let mut t = Totals::default();
    for c in checks {
        match c.status {
            Status::Pass => t.passed += 1,
            Status::Fail => t.failed += 1,
            Status::Skipped => t.skipped += 1,
        }
    }
    t
}
