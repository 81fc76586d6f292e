//! Name binding, memoized symbolic evaluation and pointwise numeric evaluation.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use ivl_core::{
    sqrt_symbol, Error as CoreError, FieldAutomorphism, FieldDescriptor, FieldElem, FieldError, GaloisSigns, Point,
    RatFunc, RatMatrix, Substitution, Var, VarSet,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::dsl::ast::*;
use crate::dsl::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("coefficient `{0}` is not a constant")]
    NotConstant(String),
    #[error("unknown name `{0}`")]
    Unknown(String),
}

impl From<FieldError> for EvalError {
    fn from(e: FieldError) -> Self {
        EvalError::Core(CoreError::Field(e))
    }
}

impl EvalError {
    /// Division by zero or a pole hit while evaluating at a point.
    pub fn is_pole(&self) -> bool {
        matches!(
            self,
            EvalError::Core(
                CoreError::PoleAtPoint
                    | CoreError::DivisionByZero
                    | CoreError::ZeroToNegativePower
                    | CoreError::Field(FieldError::DivisionByZero)
            )
        )
    }
}

pub type EvalResult<T> = Result<T, EvalError>;

enum AutoSpec {
    Linear { matrix: RatMatrix, vars: Vec<Var> },
    Monomial { vars: Vec<Var>, exps: Vec<Vec<i64>>, coeffs: Vec<Expr> },
    Subst { signs: GaloisSigns, maps: Vec<(Var, Expr)> },
    Compose(Vec<String>),
}

struct LetItem {
    expr: Expr,
    value: OnceLock<EvalResult<RatFunc>>,
}

struct AutoItem {
    spec: AutoSpec,
    value: OnceLock<EvalResult<FieldAutomorphism>>,
}

struct ChartItem {
    defs: Vec<(Var, Expr)>,
    value: OnceLock<EvalResult<Substitution>>,
}

enum Item {
    Var(Var),
    Let(LetItem),
    Matrix(RatMatrix),
    Auto(AutoItem),
    Chart(ChartItem),
}

impl Item {
    fn describe(&self) -> &'static str {
        match self {
            Item::Var(_) => "a variable",
            Item::Let(_) => "a let binding",
            Item::Matrix(_) => "a matrix",
            Item::Auto(_) => "a map",
            Item::Chart(_) => "a chart",
        }
    }
}

/// Bound names of a script. Immutable after binding; values are computed on first use.
pub struct Env {
    field: FieldDescriptor,
    vars: VarSet,
    items: HashMap<String, Item>,
}

/// An assert statement after name resolution.
#[derive(Clone, Debug)]
pub struct ClaimSpec {
    pub id: String,
    pub claim: ClaimExpr,
    pub cite: Option<String>,
    pub span: Span,
}

const RESERVED: &[&str] = &["sqrt", "apply"];

/// Resolves every name in `script`. All resolution errors are collected.
pub fn bind(script: &Script) -> Result<(Env, Vec<ClaimSpec>), Vec<Diagnostic>> {
    let mut b = Binder {
        field: None,
        env: Env {
            field: FieldDescriptor::RATIONALS,
            vars: VarSet::new(),
            items: HashMap::new(),
        },
        claims: Vec::new(),
        ids: HashSet::new(),
        diags: Vec::new(),
        started: false,
    };
    for s in &script.stmts {
        b.stmt(s);
    }
    if b.diags.is_empty() {
        Ok((b.env, b.claims))
    } else {
        b.diags.sort_by_key(|d| d.span);
        Err(b.diags)
    }
}

struct Binder {
    field: Option<FieldDescriptor>,
    env: Env,
    claims: Vec<ClaimSpec>,
    ids: HashSet<String>,
    diags: Vec<Diagnostic>,
    started: bool,
}

impl Binder {
    fn err(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(span, msg));
    }

    fn fresh(&mut self, n: &Name) -> bool {
        if RESERVED.contains(&n.text.as_str()) {
            self.err(n.span, format!("`{}` is reserved", n.text));
            return false;
        }
        if self.env.items.contains_key(&n.text) {
            self.err(n.span, format!("`{}` is already bound", n.text));
            return false;
        }
        true
    }

    fn var(&mut self, n: &Name) -> Option<Var> {
        match self.env.items.get(&n.text) {
            Some(Item::Var(v)) => Some(*v),
            Some(other) => {
                let d = other.describe();
                self.err(n.span, format!("`{}` is {d}, not a variable", n.text));
                None
            }
            None => {
                self.err(n.span, format!("unknown variable `{}`", n.text));
                None
            }
        }
    }

    fn expect_kind(&mut self, n: &Name, want: &str, ok: fn(&Item) -> bool) -> bool {
        match self.env.items.get(&n.text) {
            Some(it) if ok(it) => true,
            Some(it) => {
                let d = it.describe();
                self.err(n.span, format!("`{}` is {d}, expected {want}", n.text));
                false
            }
            None => {
                self.err(n.span, format!("unknown {want} `{}`", n.text));
                false
            }
        }
    }

    fn auto_name(&mut self, n: &Name) -> bool {
        self.expect_kind(n, "a map", |i| matches!(i, Item::Auto(_)))
    }

    fn matrix_name(&mut self, n: &Name) -> Option<RatMatrix> {
        if self.expect_kind(n, "a matrix", |i| matches!(i, Item::Matrix(_))) {
            if let Some(Item::Matrix(m)) = self.env.items.get(&n.text) {
                return Some(m.clone());
            }
        }
        None
    }

    fn chart_name(&mut self, n: &Name) -> bool {
        self.expect_kind(n, "a chart", |i| matches!(i, Item::Chart(_)))
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Int(_) => {}
            ExprKind::Sqrt(d) => {
                if let Err(err) = sqrt_symbol(*d, self.env.field) {
                    self.err(e.span, err.to_string());
                }
            }
            ExprKind::Ident(s) => match self.env.items.get(s) {
                Some(Item::Var(_) | Item::Let(_)) => {}
                Some(it) => {
                    let d = it.describe();
                    self.err(e.span, format!("`{s}` is {d}, not a value"));
                }
                None => self.err(e.span, format!("unknown name `{s}`")),
            },
            ExprKind::Neg(x) | ExprKind::Pow(x, _) => self.expr(x),
            ExprKind::Bin(_, a, b) => {
                self.expr(a);
                self.expr(b);
            }
            ExprKind::Apply(a, x) => {
                self.auto_name(a);
                self.expr(x);
            }
            ExprKind::At(x, c) => {
                self.chart_name(c);
                self.expr(x);
            }
        }
    }

    fn maps(&mut self, maps: &[(Name, Expr)]) -> Vec<(Var, Expr)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (n, e) in maps {
            self.expr(e);
            if !seen.insert(n.text.clone()) {
                self.err(n.span, format!("`{}` is mapped twice", n.text));
            }
            if let Some(v) = self.var(n) {
                out.push((v, e.clone()));
            }
        }
        out
    }

    fn auto(&mut self, def: &AutoDef, span: Span) -> Option<AutoSpec> {
        let before = self.diags.len();
        let spec = match def {
            AutoDef::Linear { matrix, vars } => {
                let m = self.matrix_name(matrix)?;
                let vs: Vec<Var> = if vars.is_empty() {
                    self.env.vars.vars().take(m.dim()).collect()
                } else {
                    vars.iter().filter_map(|n| self.var(n)).collect()
                };
                if self.diags.len() == before && vs.len() != m.dim() {
                    self.err(span, format!("matrix `{}` needs {} variables, got {}", matrix.text, m.dim(), vs.len()));
                }
                if m.det().is_zero() {
                    self.err(matrix.span, format!("matrix `{}` is not invertible", matrix.text));
                }
                AutoSpec::Linear { matrix: m, vars: vs }
            }
            AutoDef::Monomial { vars, exps, coeffs } => {
                let vs: Vec<Var> = vars.iter().filter_map(|n| self.var(n)).collect();
                for c in coeffs {
                    self.expr(c);
                }
                let n = vars.len();
                if exps.len() != n || exps.iter().any(|r| r.len() != n) || coeffs.len() != n {
                    self.err(span, format!("monomial map over {n} variables needs a {n}x{n} exponent matrix and {n} coefficients"));
                } else {
                    let rows = exps
                        .iter()
                        .map(|r| r.iter().map(|&k| BigRational::from_integer(k.into())).collect())
                        .collect();
                    match RatMatrix::from_rows(rows) {
                        Ok(m) if m.det().abs() == BigRational::from_integer(1.into()) => {}
                        _ => self.err(span, "exponent matrix is not unimodular"),
                    }
                }
                AutoSpec::Monomial {
                    vars: vs,
                    exps: exps.clone(),
                    coeffs: coeffs.clone(),
                }
            }
            AutoDef::Galois { signs, maps } => {
                let s = match GaloisSigns::from_pairs(&self.env.field, signs) {
                    Ok(s) => s,
                    Err(e) => {
                        self.err(span, e.to_string());
                        GaloisSigns::IDENTITY
                    }
                };
                AutoSpec::Subst {
                    signs: s,
                    maps: self.maps(maps),
                }
            }
            AutoDef::Map { maps } => AutoSpec::Subst {
                signs: GaloisSigns::IDENTITY,
                maps: self.maps(maps),
            },
            AutoDef::Compose(parts) => {
                for p in parts {
                    self.auto_name(p);
                }
                AutoSpec::Compose(parts.iter().map(|p| p.text.clone()).collect())
            }
        };
        (self.diags.len() == before).then_some(spec)
    }

    fn claim(&mut self, c: &ClaimExpr) {
        match c {
            ClaimExpr::Identity(a, b) => {
                self.expr(a);
                self.expr(b);
            }
            ClaimExpr::Invariant(autos, e) => {
                for a in autos {
                    self.auto_name(a);
                }
                self.expr(e);
            }
            ClaimExpr::GroupOrder(ms, _) | ClaimExpr::Representation(ms) => self.same_dim(ms.iter()),
            ClaimExpr::MatrixOrder(m, _) => {
                self.matrix_name(m);
            }
            ClaimExpr::Rank(es, _) => {
                for e in es {
                    self.expr(e);
                }
            }
            ClaimExpr::MatrixEq(l, r) => self.same_dim(l.iter().chain(r).map(|f| &f.name)),
            ClaimExpr::Matches(a, b, chain) => {
                self.auto_name(a);
                self.auto_name(b);
                for c in chain {
                    self.chart_name(c);
                }
            }
            ClaimExpr::Agree(a, b) => {
                self.auto_name(a);
                self.auto_name(b);
            }
        }
    }

    fn same_dim<'a>(&mut self, ms: impl Iterator<Item = &'a Name>) {
        let mut dim = None;
        for m in ms {
            if let Some(mat) = self.matrix_name(m) {
                if *dim.get_or_insert(mat.dim()) != mat.dim() {
                    self.err(m.span, "matrices of different dimensions");
                }
            }
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Field(rads) => {
                if self.field.is_some() {
                    self.err(s.span, "the field is already declared");
                } else if self.started {
                    self.err(s.span, "the field must be declared before anything else");
                } else {
                    match FieldDescriptor::new(rads) {
                        Ok(f) => {
                            self.field = Some(f);
                            self.env.field = f;
                        }
                        Err(e) => self.err(s.span, e.to_string()),
                    }
                }
            }
            StmtKind::Vars(names) => {
                for n in names {
                    if self.fresh(n) {
                        let v = self.env.vars.insert(&n.text);
                        self.env.items.insert(n.text.clone(), Item::Var(v));
                    }
                }
            }
            StmtKind::Matrix { name, rows } => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    self.err(name.span, format!("matrix `{}` is not square", name.text));
                } else if self.fresh(name) {
                    let m = RatMatrix::from_rows(rows.clone()).expect("square rows");
                    self.env.items.insert(name.text.clone(), Item::Matrix(m));
                }
            }
            StmtKind::Auto { name, def } => {
                if let Some(spec) = self.auto(def, s.span) {
                    if self.fresh(name) {
                        let item = AutoItem {
                            spec,
                            value: OnceLock::new(),
                        };
                        self.env.items.insert(name.text.clone(), Item::Auto(item));
                    }
                }
            }
            StmtKind::Let { name, expr } => {
                self.expr(expr);
                if self.fresh(name) {
                    let item = LetItem {
                        expr: expr.clone(),
                        value: OnceLock::new(),
                    };
                    self.env.items.insert(name.text.clone(), Item::Let(item));
                }
            }
            StmtKind::Chart { name, defs } => {
                for (_, e) in defs {
                    self.expr(e);
                }
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for (n, e) in defs {
                    if !seen.insert(n.text.clone()) {
                        self.err(n.span, format!("`{}` is defined twice in this chart", n.text));
                        continue;
                    }
                    let v = match self.env.items.get(&n.text) {
                        Some(Item::Var(v)) => *v,
                        None if !RESERVED.contains(&n.text.as_str()) => {
                            let v = self.env.vars.insert(&n.text);
                            self.env.items.insert(n.text.clone(), Item::Var(v));
                            v
                        }
                        _ => {
                            self.err(n.span, format!("`{}` cannot be a chart variable", n.text));
                            continue;
                        }
                    };
                    out.push((v, e.clone()));
                }
                if self.fresh(name) {
                    let item = ChartItem {
                        defs: out,
                        value: OnceLock::new(),
                    };
                    self.env.items.insert(name.text.clone(), Item::Chart(item));
                }
            }
            StmtKind::Assert { label, claim, cite } => {
                self.claim(claim);
                let id = label.clone().unwrap_or_else(|| format!("claim-{}", self.claims.len() + 1));
                if !self.ids.insert(id.clone()) {
                    self.err(s.span, format!("duplicate claim id `{id}`"));
                }
                self.claims.push(ClaimSpec {
                    id,
                    claim: claim.clone(),
                    cite: cite.clone(),
                    span: s.span,
                });
            }
        }
        if !matches!(s.kind, StmtKind::Field(_)) {
            self.started = true;
        }
    }
}

/// Let-binding values already computed at one point.
struct NumCtx<'p> {
    point: &'p Point,
    lets: HashMap<String, FieldElem>,
}

impl<'p> NumCtx<'p> {
    fn new(point: &'p Point) -> Self {
        NumCtx {
            point,
            lets: HashMap::new(),
        }
    }
}

type PointFn<'a> = dyn Fn(&Point) -> EvalResult<FieldElem> + 'a;

impl Env {
    /// An environment with the given variables and nothing else bound.
    pub fn standalone(field: FieldDescriptor, names: &[&str]) -> Env {
        let mut env = Env {
            field,
            vars: VarSet::new(),
            items: HashMap::new(),
        };
        for n in names {
            let v = env.vars.insert(n);
            env.items.insert(n.to_string(), Item::Var(v));
        }
        env
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn matrix(&self, name: &str) -> EvalResult<&RatMatrix> {
        match self.items.get(name) {
            Some(Item::Matrix(m)) => Ok(m),
            _ => Err(EvalError::Unknown(name.to_string())),
        }
    }

    /// Variables defined by a chart, in definition order.
    pub fn chart_vars(&self, name: &str) -> EvalResult<Vec<Var>> {
        match self.items.get(name) {
            Some(Item::Chart(c)) => Ok(c.defs.iter().map(|(v, _)| *v).collect()),
            _ => Err(EvalError::Unknown(name.to_string())),
        }
    }

    fn constant(&self, c: FieldElem) -> RatFunc {
        RatFunc::constant(c)
    }

    pub fn eval(&self, e: &Expr) -> EvalResult<RatFunc> {
        let f = self.field;
        Ok(match &e.kind {
            ExprKind::Int(n) => self.constant(FieldElem::from_rational(f, BigRational::from_integer(n.clone()))),
            ExprKind::Sqrt(d) => self.constant(sqrt_symbol(*d, f)?),
            ExprKind::Ident(s) => match self.items.get(s) {
                Some(Item::Var(v)) => RatFunc::var(f, *v),
                Some(Item::Let(l)) => l.value.get_or_init(|| self.eval(&l.expr)).clone()?,
                _ => return Err(EvalError::Unknown(s.clone())),
            },
            ExprKind::Neg(x) => self.eval(x)?.neg(),
            ExprKind::Bin(op, a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => a.div(&b)?,
                }
            }
            ExprKind::Pow(x, k) => self.eval(x)?.pow(*k)?,
            ExprKind::Apply(a, x) => self.automorphism(&a.text)?.apply(&self.eval(x)?)?,
            ExprKind::At(x, c) => self.eval(x)?.substitute(self.chart(&c.text)?)?,
        })
    }

    pub fn chart(&self, name: &str) -> EvalResult<&Substitution> {
        let Some(Item::Chart(c)) = self.items.get(name) else {
            return Err(EvalError::Unknown(name.to_string()));
        };
        c.value
            .get_or_init(|| {
                c.defs
                    .iter()
                    .map(|(v, e)| Ok((*v, self.eval(e)?)))
                    .collect::<EvalResult<Substitution>>()
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn automorphism(&self, name: &str) -> EvalResult<&FieldAutomorphism> {
        let Some(Item::Auto(a)) = self.items.get(name) else {
            return Err(EvalError::Unknown(name.to_string()));
        };
        a.value
            .get_or_init(|| self.build_auto(&a.spec))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build_auto(&self, spec: &AutoSpec) -> EvalResult<FieldAutomorphism> {
        let f = self.field;
        Ok(match spec {
            AutoSpec::Linear { matrix, vars } => FieldAutomorphism::from_matrix(matrix, vars, f)?,
            AutoSpec::Monomial { vars, exps, coeffs } => {
                let cs = coeffs
                    .iter()
                    .map(|c| {
                        self.eval(c)?
                            .as_constant()
                            .ok_or_else(|| EvalError::NotConstant(crate::dsl::render::render_expr(c)))
                    })
                    .collect::<EvalResult<Vec<_>>>()?;
                FieldAutomorphism::monomial(exps, &cs, vars)?
            }
            AutoSpec::Subst { signs, maps } => {
                let subst = maps
                    .iter()
                    .map(|(v, e)| Ok((*v, self.eval(e)?)))
                    .collect::<EvalResult<Substitution>>()?;
                FieldAutomorphism::new(f, *signs, subst)?
            }
            AutoSpec::Compose(parts) => {
                let mut acc = self.automorphism(parts.last().expect("nonempty"))?.clone();
                for p in parts.iter().rev().skip(1) {
                    acc = self.automorphism(p)?.compose(&acc)?;
                }
                acc
            }
        })
    }

    /// Value of `e` at a point assigning every variable it reaches.
    pub fn eval_at(&self, e: &Expr, point: &Point) -> EvalResult<FieldElem> {
        self.num(e, &mut NumCtx::new(point))
    }

    fn num(&self, e: &Expr, cx: &mut NumCtx) -> EvalResult<FieldElem> {
        let f = self.field;
        Ok(match &e.kind {
            ExprKind::Int(n) => FieldElem::from_rational(f, BigRational::from_integer(n.clone())),
            ExprKind::Sqrt(d) => sqrt_symbol(*d, f)?,
            ExprKind::Ident(s) => match self.items.get(s) {
                Some(Item::Var(v)) => cx
                    .point
                    .get(v)
                    .cloned()
                    .ok_or_else(|| CoreError::Unassigned(s.clone()))?,
                Some(Item::Let(l)) => {
                    if let Some(x) = cx.lets.get(s) {
                        return Ok(x.clone());
                    }
                    let x = self.num(&l.expr, cx)?;
                    cx.lets.insert(s.clone(), x.clone());
                    x
                }
                _ => return Err(EvalError::Unknown(s.clone())),
            },
            ExprKind::Neg(x) => -self.num(x, cx)?,
            ExprKind::Bin(op, a, b) => {
                let (a, b) = (self.num(a, cx)?, self.num(b, cx)?);
                match op {
                    BinOp::Add => &a + &b,
                    BinOp::Sub => &a - &b,
                    BinOp::Mul => &a * &b,
                    BinOp::Div => {
                        if b.is_zero() {
                            return Err(CoreError::PoleAtPoint.into());
                        }
                        &a * &b.inverse()?
                    }
                }
            }
            ExprKind::Pow(x, k) => power(&self.num(x, cx)?, *k)?,
            ExprKind::Apply(a, x) => self.apply_num(&a.text, &|q| self.eval_at(x, q), cx.point)?,
            ExprKind::At(x, c) => {
                let q = self.chart_point(&c.text, cx)?;
                self.eval_at(x, &q)?
            }
        })
    }

    fn chart_point(&self, chart: &str, cx: &mut NumCtx) -> EvalResult<Point> {
        let Some(Item::Chart(c)) = self.items.get(chart) else {
            return Err(EvalError::Unknown(chart.to_string()));
        };
        let mut q = cx.point.clone();
        for (v, e) in &c.defs {
            q.insert(*v, self.num(e, cx)?);
        }
        Ok(q)
    }

    /// `apply(name, inner)` evaluated at `p`, where `inner` is a function of points.
    fn apply_num(&self, name: &str, inner: &PointFn, p: &Point) -> EvalResult<FieldElem> {
        let Some(Item::Auto(a)) = self.items.get(name) else {
            return Err(EvalError::Unknown(name.to_string()));
        };
        match &a.spec {
            AutoSpec::Linear { matrix, vars } => {
                let mut q = p.clone();
                for (j, xj) in vars.iter().enumerate() {
                    let mut s = FieldElem::zero(self.field);
                    for (i, xi) in vars.iter().enumerate() {
                        let a = matrix.get(i, j);
                        if !a.is_zero() {
                            s += &value(p, *xi, &self.vars)?.scale(a);
                        }
                    }
                    q.insert(*xj, s);
                }
                inner(&q)
            }
            AutoSpec::Monomial { vars, exps, coeffs } => {
                let mut q = p.clone();
                let mut cx = NumCtx::new(p);
                for (j, xj) in vars.iter().enumerate() {
                    let mut s = self.num(&coeffs[j], &mut cx)?;
                    for (i, xi) in vars.iter().enumerate() {
                        if exps[i][j] != 0 {
                            s = &s * &power(&value(p, *xi, &self.vars)?, exps[i][j])?;
                        }
                    }
                    q.insert(*xj, s);
                }
                inner(&q)
            }
            AutoSpec::Subst { signs, maps } => {
                let mut q = p.clone();
                let mut cx = NumCtx::new(p);
                for (v, e) in maps {
                    q.insert(*v, self.num(e, &mut cx)?);
                }
                if signs.is_identity() {
                    return inner(&q);
                }
                // f^s(q) = conj(f(conj(q)))
                for x in q.values_mut() {
                    *x = x.galois(*signs);
                }
                Ok(inner(&q)?.galois(*signs))
            }
            AutoSpec::Compose(parts) => self.apply_chain(parts, inner, p),
        }
    }

    fn apply_chain(&self, parts: &[String], inner: &PointFn, p: &Point) -> EvalResult<FieldElem> {
        match parts.split_first() {
            None => inner(p),
            Some((first, rest)) => self.apply_num(first, &|q| self.apply_chain(rest, inner, q), p),
        }
    }
}

fn value(p: &Point, v: Var, vars: &VarSet) -> EvalResult<FieldElem> {
    p.get(&v)
        .cloned()
        .ok_or_else(|| CoreError::Unassigned(vars.name(v).to_string()).into())
}

fn power(x: &FieldElem, k: i64) -> EvalResult<FieldElem> {
    if k >= 0 {
        return Ok(x.pow(k as u32));
    }
    if x.is_zero() {
        return Err(CoreError::PoleAtPoint.into());
    }
    Ok(x.inverse()?.pow(k.unsigned_abs() as u32))
}
