//! Per-claim results as a text table or versioned JSON.

use std::fmt::Write;

use serde::Serialize;

use crate::claim::{ClaimKind, Status};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub claim_id: String,
    pub kind: ClaimKind,
    pub paper_ref: String,
    pub status: Status,
    pub millis: u64,
}

#[derive(Clone, Debug, Default)]
pub struct LedgerReport {
    pub results: Vec<ClaimResult>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Serialize)]
struct JsonClaim<'a> {
    claim_id: &'a str,
    kind: ClaimKind,
    paper_ref: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a str>,
    millis: u64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema: u32,
    claims: Vec<JsonClaim<'a>>,
    summary: Summary,
}

impl LedgerReport {
    pub fn summary(&self) -> Summary {
        let mut s = Summary {
            total: self.results.len(),
            ..Summary::default()
        };
        for r in &self.results {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail(_) => s.failed += 1,
                Status::Error(_) => s.errors += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status.is_pass())
    }

    pub fn get(&self, id: &str) -> Option<&ClaimResult> {
        self.results.iter().find(|r| r.claim_id == id)
    }

    pub fn total_millis(&self) -> u64 {
        self.results.iter().map(|r| r.millis).sum()
    }

    pub fn to_json(&self) -> String {
        let claims = self
            .results
            .iter()
            .map(|r| JsonClaim {
                claim_id: &r.claim_id,
                kind: r.kind,
                paper_ref: &r.paper_ref,
                status: r.status.label(),
                witness: r.status.witness(),
                millis: r.millis,
            })
            .collect();
        let report = JsonReport {
            schema: SCHEMA_VERSION,
            claims,
            summary: self.summary(),
        };
        serde_json::to_string_pretty(&report).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let idw = self.results.iter().map(|r| r.claim_id.len()).max().unwrap_or(2).max(2);
        let mut out = String::new();
        let _ = writeln!(out, "{:<6} {:<idw$} {:<13} {:>8}  reference", "status", "id", "kind", "ms");
        for r in &self.results {
            let _ = writeln!(
                out,
                "{:<6} {:<idw$} {:<13} {:>8}  {}",
                r.status.label().to_uppercase(),
                r.claim_id,
                r.kind.to_string(),
                r.millis,
                r.paper_ref
            );
        }
        for r in &self.results {
            if let Some(w) = r.status.witness() {
                let _ = writeln!(out, "\n{} {}: {}", r.status.label(), r.claim_id, w);
            }
        }
        let s = self.summary();
        let _ = writeln!(
            out,
            "\n{} claims: {} passed, {} failed, {} errors",
            s.total, s.passed, s.failed, s.errors
        );
        out
    }
}
