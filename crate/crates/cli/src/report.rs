//! The `qfock/report-v1` output format.

use qfock_core::report::totals;
use qfock_core::{CheckResult, Model, Scalar, Totals};
use serde::{Deserialize, Serialize};

use crate::config::{BlockSpec, Config, ModeSpec};

pub const REPORT_SCHEMA: &str = "qfock/report-v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelEcho {
    pub mode: ModeSpec,
    pub tolerance: f64,
    pub components: Vec<String>,
    pub blocks: Vec<BlockSpec>,
    pub q: Vec<Vec<String>>,
    pub d: usize,
    pub eigenvalues: Vec<String>,
    pub covariance: Vec<Vec<String>>,
    pub truncation: usize,
    pub terms: usize,
}

impl ModelEcho {
    pub fn new<S: Scalar>(cfg: &Config, model: &Model<S>) -> Self {
        ModelEcho {
            mode: cfg.file.mode,
            tolerance: cfg.file.tolerance,
            components: cfg.file.components.clone(),
            blocks: cfg.file.blocks.clone(),
            q: cfg.model.q.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect(),
            d: model.d,
            eigenvalues: model.eigenvalues.iter().map(Scalar::render).collect(),
            covariance: model.k.iter().map(|row| row.iter().map(Scalar::render).collect()).collect(),
            truncation: cfg.run.truncation,
            terms: cfg.run.terms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub model: ModelEcho,
    pub checks: Vec<CheckResult>,
    pub totals: Totals,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn new(command: String, model: ModelEcho, checks: Vec<CheckResult>, data: Option<serde_json::Value>) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            model,
            totals: totals(&checks),
            checks,
            data,
        }
    }

    pub fn omit_timings(&mut self) {
        for c in &mut self.checks {
            c.elapsed_ms = 0;
        }
    }

    pub fn all_passed(&self) -> bool {
        self.totals.failed == 0
    }
}
