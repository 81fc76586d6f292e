//! Syntax tree. Equality ignores spans so rendered and reparsed scripts compare equal.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::Span;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Stmt {}

#[derive(Clone, Debug)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

impl Name {
    pub fn new(text: impl Into<String>, span: Span) -> Self {
        Name {
            text: text.into(),
            span,
        }
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Name {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    /// Radicands adjoined to the rationals.
    Field(Vec<i64>),
    Vars(Vec<Name>),
    Matrix { name: Name, rows: Vec<Vec<BigRational>> },
    Auto { name: Name, def: AutoDef },
    Let { name: Name, expr: Expr },
    /// Named substitution `var = expr, ...`; new variable names are declared by it.
    Chart { name: Name, defs: Vec<(Name, Expr)> },
    Assert { label: Option<String>, claim: ClaimExpr, cite: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutoDef {
    /// Column action of a declared matrix; empty `vars` means the leading declared variables.
    Linear { matrix: Name, vars: Vec<Name> },
    Monomial { vars: Vec<Name>, exps: Vec<Vec<i64>>, coeffs: Vec<Expr> },
    Galois { signs: Vec<(i64, i8)>, maps: Vec<(Name, Expr)> },
    Map { maps: Vec<(Name, Expr)> },
    /// `compose(a, b)` applies `b` first.
    Compose(Vec<Name>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Sqrt(i64),
    Ident(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Apply(Name, Box<Expr>),
    /// `e @ chart`: substitute the chart's definitions into `e`.
    At(Box<Expr>, Name),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Identifiers referenced outside `apply` and chart names.
    pub fn idents(&self, out: &mut Vec<(String, Span)>) {
        match &self.kind {
            ExprKind::Int(_) | ExprKind::Sqrt(_) => {}
            ExprKind::Ident(s) => out.push((s.clone(), self.span)),
            ExprKind::Neg(e) | ExprKind::Pow(e, _) | ExprKind::Apply(_, e) | ExprKind::At(e, _) => e.idents(out),
            ExprKind::Bin(_, a, b) => {
                a.idents(out);
                b.idents(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatFactor {
    pub name: Name,
    pub exp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimExpr {
    Identity(Expr, Expr),
    Invariant(Vec<Name>, Expr),
    GroupOrder(Vec<Name>, u64),
    MatrixOrder(Name, u64),
    Rank(Vec<Expr>, u64),
    MatrixEq(Vec<MatFactor>, Vec<MatFactor>),
    /// `matches(a, b, c1 @ c2 ...)`: `a` applied to each chart definition equals `b`'s image pulled through the charts.
    Matches(Name, Name, Vec<Name>),
    /// Equal variable images; Galois signs are not compared.
    Agree(Name, Name),
    Representation(Vec<Name>),
}
