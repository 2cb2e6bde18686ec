//! Reporting helpers for the acceptance suite in `tests/acceptance.rs`.
//!
//! The suite sits in its own package so that it runs after every other
//! test target of the workspace.

use std::fmt;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// One printed line: `criterion <id> <title>: PASS|FAIL (<detail>) [<secs>s]`.
pub struct Line<'a> {
    pub id: u32,
    pub title: &'a str,
    pub verdict: &'a Verdict,
    pub seconds: f64,
}

impl fmt::Display for Line<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.verdict.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {:>2} {}: {status} ({}) [{:.1}s]",
            self.id, self.title, self.verdict.detail, self.seconds
        )
    }
}
