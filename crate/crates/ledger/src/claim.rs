//! Claims and their exact and pointwise checks.

use std::fmt;
use std::sync::Arc;

use ivl_core::action::{check_representation, jacobian_rank_at, INDEPENDENCE_BOUND, INDEPENDENCE_RETRIES};
use ivl_core::matgroup::DEFAULT_CAP;
use ivl_core::ratfunc::{random_point, POLE_RETRIES};
use ivl_core::{close, matrix_order, Convention, RatFunc, RatMatrix, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dsl::ast::{ClaimExpr, Expr, ExprKind, MatFactor, Name};
use crate::dsl::render::{render_claim, render_expr};
use crate::dsl::Span;
use crate::env::{ClaimSpec, Env, EvalError, EvalResult};

/// Witness text longer than this is cut.
pub const WITNESS_CHARS: usize = 600;
/// Points sampled per obligation before the exact check in fast mode.
pub const FAST_TRIALS: usize = 4;
pub const SAMPLE_BOUND: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClaimKind {
    Identity,
    Invariance,
    GroupOrder,
    MatrixEq,
    Rank,
    ActionMatches,
}

impl fmt::Display for ClaimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl ClaimKind {
    pub fn of(c: &ClaimExpr) -> ClaimKind {
        match c {
            ClaimExpr::Identity(..) => ClaimKind::Identity,
            ClaimExpr::Invariant(..) => ClaimKind::Invariance,
            ClaimExpr::GroupOrder(..) | ClaimExpr::MatrixOrder(..) => ClaimKind::GroupOrder,
            ClaimExpr::MatrixEq(..) => ClaimKind::MatrixEq,
            ClaimExpr::Rank(..) => ClaimKind::Rank,
            ClaimExpr::Matches(..) | ClaimExpr::Agree(..) | ClaimExpr::Representation(..) => ClaimKind::ActionMatches,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact comparison only.
    Exact,
    /// Random evaluation first; exact comparison when every sample agrees.
    Fast,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    Error(String),
}

impl Status {
    pub fn is_pass(&self) -> bool {
        *self == Status::Pass
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail(_) => "fail",
            Status::Error(_) => "error",
        }
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Status::Pass => None,
            Status::Fail(w) | Status::Error(w) => Some(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumericVerdict {
    Agree,
    Disagree(String),
    /// No usable sample, or the claim has no pointwise form.
    Inconclusive(String),
}

/// Two expressions that must be equal for the claim to hold.
#[derive(Clone, Debug)]
pub struct Obligation {
    pub what: String,
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Clone)]
pub struct Claim {
    pub id: String,
    pub kind: ClaimKind,
    pub paper_ref: String,
    pub claim: ClaimExpr,
    pub env: Arc<Env>,
}

impl fmt::Debug for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.id, self.kind, render_claim(&self.claim))
    }
}

fn syn(kind: ExprKind) -> Expr {
    Expr::new(kind, Span::default())
}

fn ident(env: &Env, v: Var) -> Expr {
    syn(ExprKind::Ident(env.vars().name(v).to_string()))
}

fn apply(a: &Name, e: Expr) -> Expr {
    syn(ExprKind::Apply(a.clone(), Box::new(e)))
}

fn through(mut e: Expr, chain: &[Name]) -> Expr {
    for c in chain {
        e = syn(ExprKind::At(Box::new(e), c.clone()));
    }
    e
}

/// FNV-1a; stable across runs and platforms.
pub fn seed_for(id: &str) -> u64 {
    id.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn truncate(s: String) -> String {
    let n = s.chars().count();
    if n <= WITNESS_CHARS {
        return s;
    }
    let head: String = s.chars().take(WITNESS_CHARS).collect();
    format!("{head}... ({} more chars)", n - WITNESS_CHARS)
}

impl Claim {
    pub fn new(spec: ClaimSpec, env: Arc<Env>) -> Claim {
        let paper_ref = spec.cite.unwrap_or_else(|| render_claim(&spec.claim));
        Claim {
            id: spec.id,
            kind: ClaimKind::of(&spec.claim),
            paper_ref,
            claim: spec.claim,
            env,
        }
    }

    /// Equalities making up the claim, or `None` for matrix and rank claims.
    pub fn obligations(&self) -> EvalResult<Option<Vec<Obligation>>> {
        let env = &self.env;
        Ok(Some(match &self.claim {
            ClaimExpr::Identity(a, b) => vec![Obligation {
                what: "identity".into(),
                lhs: a.clone(),
                rhs: b.clone(),
            }],
            ClaimExpr::Invariant(autos, e) => autos
                .iter()
                .map(|a| Obligation {
                    what: format!("{} applied to {}", a.text, render_expr(e)),
                    lhs: apply(a, e.clone()),
                    rhs: e.clone(),
                })
                .collect(),
            ClaimExpr::Matches(a, b, chain) => env
                .chart_vars(&chain[0].text)?
                .into_iter()
                .map(|v| Obligation {
                    what: format!("image of {}", env.vars().name(v)),
                    lhs: apply(a, through(ident(env, v), chain)),
                    rhs: through(apply(b, ident(env, v)), chain),
                })
                .collect(),
            ClaimExpr::Agree(a, b) => env
                .vars()
                .vars()
                .map(|v| Obligation {
                    what: format!("image of {}", env.vars().name(v)),
                    lhs: apply(a, ident(env, v)),
                    rhs: apply(b, ident(env, v)),
                })
                .collect(),
            _ => return Ok(None),
        }))
    }

    fn sign_mismatch(&self) -> EvalResult<Option<String>> {
        if let ClaimExpr::Matches(a, b, _) = &self.claim {
            let (sa, sb) = (self.env.automorphism(&a.text)?.signs(), self.env.automorphism(&b.text)?.signs());
            if sa != sb {
                return Ok(Some(format!(
                    "{} and {} act differently on the coefficients",
                    a.text, b.text
                )));
            }
        }
        Ok(None)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed_for(&self.id))
    }

    pub fn evaluate(&self, mode: Mode) -> Status {
        let r = match mode {
            Mode::Exact => self.exact(),
            Mode::Fast => match self.check_numeric(FAST_TRIALS, SAMPLE_BOUND, &mut self.rng()) {
                NumericVerdict::Disagree(w) => Ok(Status::Fail(w)),
                _ => self.exact(),
            },
        };
        r.unwrap_or_else(|e| Status::Error(e.to_string()))
    }

    /// Authoritative verdict.
    pub fn exact(&self) -> EvalResult<Status> {
        let env = &self.env;
        if let Some(w) = self.sign_mismatch()? {
            return Ok(Status::Fail(w));
        }
        if let Some(obs) = self.obligations()? {
            for ob in obs {
                let l = env.eval(&ob.lhs)?;
                let r = env.eval(&ob.rhs)?;
                if !l.eq_exact(&r) {
                    let d = l.sub(&r);
                    return Ok(Status::Fail(truncate(format!(
                        "{}: difference {}",
                        ob.what,
                        d.display(env.vars())
                    ))));
                }
            }
            return Ok(Status::Pass);
        }
        match &self.claim {
            ClaimExpr::GroupOrder(ms, n) => {
                let gens = ms
                    .iter()
                    .map(|m| env.matrix(&m.text).cloned())
                    .collect::<EvalResult<Vec<_>>>()?;
                let k = close(&gens, DEFAULT_CAP)?.order();
                Ok(expect_count("group order", k, *n))
            }
            ClaimExpr::MatrixOrder(m, n) => {
                let k = matrix_order(env.matrix(&m.text)?, DEFAULT_CAP)?;
                Ok(expect_count("matrix order", k, *n))
            }
            ClaimExpr::MatrixEq(l, r) => {
                let (a, b) = (self.product(l)?, self.product(r)?);
                Ok(if a == b {
                    Status::Pass
                } else {
                    Status::Fail(format!("left side {a}, right side {b}"))
                })
            }
            ClaimExpr::Representation(ms) => {
                let gens = ms
                    .iter()
                    .map(|m| env.matrix(&m.text).cloned())
                    .collect::<EvalResult<Vec<_>>>()?;
                Ok(if check_representation(&gens, Convention::Column)? {
                    Status::Pass
                } else {
                    Status::Fail("some product of matrices is not sent to the composite map".into())
                })
            }
            ClaimExpr::Rank(es, k) => self.rank(es, *k as usize),
            _ => unreachable!("symbolic claims have obligations"),
        }
    }

    fn product(&self, fs: &[MatFactor]) -> EvalResult<RatMatrix> {
        let mut acc: Option<RatMatrix> = None;
        for f in fs {
            let m = self.env.matrix(&f.name.text)?.pow(f.exp)?;
            acc = Some(match acc {
                None => m,
                Some(a) => a.mul(&m)?,
            });
        }
        Ok(acc.expect("nonempty product"))
    }

    fn rank(&self, es: &[Expr], k: usize) -> EvalResult<Status> {
        let fs = es.iter().map(|e| self.env.eval(e)).collect::<EvalResult<Vec<RatFunc>>>()?;
        let vars: Vec<Var> = fs
            .iter()
            .flat_map(|f| f.vars())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut rng = self.rng();
        let mut best = 0;
        for _ in 0..INDEPENDENCE_RETRIES {
            let pt = random_point(&mut rng, self.env.field(), vars.iter().copied(), INDEPENDENCE_BOUND);
            if let Ok(r) = jacobian_rank_at(&fs, &vars, &pt) {
                best = best.max(r);
            }
            if best == fs.len() {
                break;
            }
        }
        Ok(if best == k {
            Status::Pass
        } else {
            Status::Fail(format!(
                "largest Jacobian rank found is {best} over {} variables, expected {k}",
                vars.len()
            ))
        })
    }

    /// Compares both sides of every obligation at random points of every declared variable.
    pub fn check_numeric<R: Rng + ?Sized>(&self, trials: usize, bound: u64, rng: &mut R) -> NumericVerdict {
        let obs = match self.obligations() {
            Ok(Some(o)) => o,
            Ok(None) => return NumericVerdict::Inconclusive("no pointwise form".into()),
            Err(e) => return NumericVerdict::Inconclusive(e.to_string()),
        };
        match self.sign_mismatch() {
            Ok(Some(w)) => return NumericVerdict::Disagree(w),
            Ok(None) => {}
            Err(e) => return NumericVerdict::Inconclusive(e.to_string()),
        }
        let env = &self.env;
        let field = env.field();
        for ob in &obs {
            let mut used = 0;
            for t in 0..trials {
                for _ in 0..POLE_RETRIES {
                    let pt = random_point(rng, field, env.vars().vars(), bound);
                    let l = env.eval_at(&ob.lhs, &pt);
                    let r = env.eval_at(&ob.rhs, &pt);
                    match (l, r) {
                        (Ok(a), Ok(b)) => {
                            if a != b {
                                return NumericVerdict::Disagree(truncate(format!(
                                    "{}: sample {t} gives {a} and {b}",
                                    ob.what
                                )));
                            }
                            used += 1;
                            break;
                        }
                        (Err(e), _) | (_, Err(e)) if e.is_pole() => continue,
                        (Err(e), _) | (_, Err(e)) => return NumericVerdict::Inconclusive(e.to_string()),
                    }
                }
            }
            if used == 0 {
                return NumericVerdict::Inconclusive(format!("{}: every sample hit a pole", ob.what));
            }
        }
        NumericVerdict::Agree
    }
}

fn expect_count(what: &str, got: usize, want: u64) -> Status {
    if got as u64 == want {
        Status::Pass
    } else {
        Status::Fail(format!("{what} is {got}, expected {want}"))
    }
}

impl From<EvalError> for Status {
    fn from(e: EvalError) -> Self {
        Status::Error(e.to_string())
    }
}
