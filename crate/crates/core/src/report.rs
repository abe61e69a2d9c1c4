//! Check records shared by every verification module.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckVerdict {
    Pass,
    CorrectedPass,
    InconclusiveAtBound,
    Fail,
}

impl CheckVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckVerdict::Pass => "pass",
            CheckVerdict::CorrectedPass => "corrected-pass",
            CheckVerdict::InconclusiveAtBound => "inconclusive-at-bound",
            CheckVerdict::Fail => "fail",
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, CheckVerdict::Pass | CheckVerdict::CorrectedPass)
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            CheckVerdict::Pass
        } else {
            CheckVerdict::Fail
        }
    }
}

/// Outcome of one check. `certificates` holds certificate texts while the
/// check runs; the harness swaps them for content hashes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub tag: String,
    pub verdict: CheckVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_form: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, tag: impl Into<String>, verdict: CheckVerdict) -> Check {
        Check {
            id: id.into(),
            tag: tag.into(),
            verdict,
            details: None,
            paper_form: None,
            oracle_form: None,
            certificates: Vec::new(),
        }
    }

    pub fn details(mut self, d: impl Into<String>) -> Check {
        self.details = Some(d.into());
        self
    }

    pub fn forms(mut self, paper: impl Into<String>, oracle: impl Into<String>) -> Check {
        self.paper_form = Some(paper.into());
        self.oracle_form = Some(oracle.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_success()
    }
}
