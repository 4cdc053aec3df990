//! Pass/fail records emitted by the relation checkers.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub relation: String,
    pub params: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Number of individual identities verified.
    pub instances: u64,
}

impl CheckReport {
    pub fn pass(relation: impl Into<String>, params: Value, instances: u64) -> Self {
        CheckReport { relation: relation.into(), params, status: Status::Pass, witness: None, instances }
    }

    pub fn fail(relation: impl Into<String>, params: Value, witness: impl Into<String>, instances: u64) -> Self {
        CheckReport { relation: relation.into(), params, status: Status::Fail, witness: Some(witness.into()), instances }
    }

    pub fn from_result(relation: impl Into<String>, params: Value, r: Result<u64, String>) -> Self {
        match r {
            Ok(n) => Self::pass(relation, params, n),
            Err(w) => Self::fail(relation, params, w, 0),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed())
}
