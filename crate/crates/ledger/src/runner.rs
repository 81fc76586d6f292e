use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;

use crate::claim::{Claim, Mode, Status};
use crate::report::{ClaimResult, LedgerReport};

/// Evaluates claims concurrently. Results keep input order; one claim's failure never stops the rest.
pub fn run(claims: &[Claim], mode: Mode) -> LedgerReport {
    let results = claims
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let status = catch_unwind(AssertUnwindSafe(|| c.evaluate(mode)))
                .unwrap_or_else(|_| Status::Error("evaluation panicked".into()));
            ClaimResult {
                claim_id: c.id.clone(),
                kind: c.kind,
                paper_ref: c.paper_ref.clone(),
                status,
                millis: start.elapsed().as_millis() as u64,
            }
        })
        .collect();
    LedgerReport { results }
}
