//! Assertion scripts over rational function fields, the built-in claim ledger and its runner.

pub mod claim;
pub mod dsl;
pub mod env;
pub mod ledger;
pub mod report;
pub mod runner;

use std::sync::Arc;

pub use claim::{Claim, ClaimKind, Mode, NumericVerdict, Status};
pub use dsl::{Diagnostic, Script};
pub use env::{Env, EvalError};
pub use ledger::{build_ledger, Section};
pub use report::{ClaimResult, LedgerReport};
pub use runner::run;

/// Binds a parsed script and turns its asserts into claims.
pub fn claims_of(script: &Script) -> Result<Vec<Claim>, Vec<Diagnostic>> {
    let (env, specs) = env::bind(script)?;
    let env = Arc::new(env);
    Ok(specs.into_iter().map(|s| Claim::new(s, env.clone())).collect())
}

/// Parses and binds source text.
pub fn compile(src: &str) -> Result<Vec<Claim>, Vec<Diagnostic>> {
    let (script, diags) = dsl::parse(src);
    if !diags.is_empty() {
        return Err(diags);
    }
    claims_of(&script)
}

pub fn execute(script: &Script, mode: Mode) -> Result<LedgerReport, Vec<Diagnostic>> {
    Ok(run(&claims_of(script)?, mode))
}
