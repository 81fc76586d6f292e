//! Recursive descent with precedence climbing. Loosest to tightest:
//! `@`, `+ -`, `* /`, unary `-`, `^`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, Span};

const MAX_DEPTH: usize = 200;

type PResult<T> = Result<T, Diagnostic>;

/// Parses a whole script. Statements with errors are dropped and reported.
pub fn parse(src: &str) -> (Script, Vec<Diagnostic>) {
    let (toks, mut diags) = lex(src);
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let mut script = Script::default();
    while !p.at(&Tok::Eof) {
        match p.stmt() {
            Ok(s) => script.stmts.push(s),
            Err(d) => {
                diags.push(d);
                p.recover();
            }
        }
    }
    (script, diags)
}

/// Parses a single expression spanning the whole input.
pub fn parse_expr(src: &str) -> Result<Expr, Vec<Diagnostic>> {
    let (toks, diags) = lex(src);
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let e = p.expr().map_err(|d| vec![d])?;
    if !p.at(&Tok::Eof) {
        return Err(vec![p.unexpected("end of input")]);
    }
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.peek().span
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn advance(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, what: &str) -> Diagnostic {
        Diagnostic::error(self.span(), format!("expected {what}, found {}", self.peek().tok))
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if self.at(&t) {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Span> {
        if self.at_kw(kw) {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let n = Name::new(s.clone(), self.span());
                self.advance();
                Ok(n)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn names(&mut self) -> PResult<Vec<Name>> {
        let mut out = vec![self.name()?];
        while self.eat(&Tok::Comma) {
            out.push(self.name()?);
        }
        Ok(out)
    }

    fn int(&mut self) -> PResult<BigInt> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.advance();
                Ok(n)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn small_int(&mut self) -> PResult<i64> {
        let span = self.span();
        let neg = self.eat(&Tok::Minus);
        let n = self.int()?;
        let n = if neg { -n } else { n };
        n.to_i64()
            .ok_or_else(|| Diagnostic::error(span, "integer out of range"))
    }

    fn count(&mut self) -> PResult<u64> {
        let span = self.span();
        self.int()?
            .to_u64()
            .ok_or_else(|| Diagnostic::error(span, "integer out of range"))
    }

    fn string(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected("a string literal")),
        }
    }

    /// Skips past the next `;`.
    fn recover(&mut self) {
        while !self.at(&Tok::Eof) {
            if self.advance().tok == Tok::Semi {
                break;
            }
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let span = self.span();
        let kw = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected("a statement")),
        };
        let kind = match kw.as_str() {
            "field" => {
                self.advance();
                self.expect_kw("Q")?;
                let mut rads = Vec::new();
                if self.at_kw("adjoin") {
                    self.advance();
                    rads.push(self.sqrt_lit()?);
                    while self.eat(&Tok::Comma) {
                        rads.push(self.sqrt_lit()?);
                    }
                }
                StmtKind::Field(rads)
            }
            "vars" => {
                self.advance();
                let mut vs = vec![self.name()?];
                while !self.at(&Tok::Semi) {
                    self.eat(&Tok::Comma);
                    vs.push(self.name()?);
                }
                StmtKind::Vars(vs)
            }
            "matrix" => {
                self.advance();
                let name = self.name()?;
                self.expect(Tok::Assign)?;
                let rows = self.rat_rows()?;
                StmtKind::Matrix { name, rows }
            }
            "auto" => {
                self.advance();
                let name = self.name()?;
                self.expect(Tok::Assign)?;
                let def = self.auto_def()?;
                StmtKind::Auto { name, def }
            }
            "let" => {
                self.advance();
                let name = self.name()?;
                self.expect(Tok::Assign)?;
                let expr = self.expr()?;
                StmtKind::Let { name, expr }
            }
            "chart" => {
                self.advance();
                let name = self.name()?;
                self.expect(Tok::Colon)?;
                let mut defs = Vec::new();
                loop {
                    let v = self.name()?;
                    self.expect(Tok::Assign)?;
                    defs.push((v, self.expr()?));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                StmtKind::Chart { name, defs }
            }
            "assert" => {
                self.advance();
                let label = match self.peek().tok {
                    Tok::Str(_) => Some(self.string()?),
                    _ => None,
                };
                let claim = self.claim()?;
                let cite = if self.at_kw("cite") {
                    self.advance();
                    Some(self.string()?)
                } else {
                    None
                };
                StmtKind::Assert { label, claim, cite }
            }
            _ => return Err(self.unexpected("a statement")),
        };
        self.expect(Tok::Semi)?;
        Ok(Stmt { kind, span })
    }

    fn sqrt_lit(&mut self) -> PResult<i64> {
        self.expect_kw("sqrt")?;
        self.expect(Tok::LParen)?;
        let d = self.small_int()?;
        self.expect(Tok::RParen)?;
        Ok(d)
    }

    fn rat(&mut self) -> PResult<BigRational> {
        let neg = self.eat(&Tok::Minus);
        let n = self.int()?;
        let d = if self.eat(&Tok::Slash) {
            let span = self.span();
            let d = self.int()?;
            if d.is_zero() {
                return Err(Diagnostic::error(span, "zero denominator"));
            }
            d
        } else {
            BigInt::from(1)
        };
        let q = BigRational::new(n, d);
        Ok(if neg { -q } else { q })
    }

    fn rat_rows(&mut self) -> PResult<Vec<Vec<BigRational>>> {
        self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        loop {
            self.expect(Tok::LBracket)?;
            let mut row = vec![self.rat()?];
            while self.eat(&Tok::Comma) {
                row.push(self.rat()?);
            }
            self.expect(Tok::RBracket)?;
            rows.push(row);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(rows)
    }

    fn int_rows(&mut self) -> PResult<Vec<Vec<i64>>> {
        self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        loop {
            self.expect(Tok::LBracket)?;
            let mut row = vec![self.small_int()?];
            while self.eat(&Tok::Comma) {
                row.push(self.small_int()?);
            }
            self.expect(Tok::RBracket)?;
            rows.push(row);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(rows)
    }

    fn maps(&mut self) -> PResult<Vec<(Name, Expr)>> {
        let mut out = Vec::new();
        loop {
            let v = self.name()?;
            self.expect(Tok::Arrow)?;
            out.push((v, self.expr()?));
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn auto_def(&mut self) -> PResult<AutoDef> {
        let head = self.name()?;
        self.expect(Tok::LParen)?;
        let def = match head.text.as_str() {
            "linear" => {
                let matrix = self.name()?;
                let vars = if self.eat(&Tok::Semi) { self.names()? } else { Vec::new() };
                AutoDef::Linear { matrix, vars }
            }
            "monomial" => {
                let vars = self.names()?;
                self.expect(Tok::Semi)?;
                let exps = self.int_rows()?;
                self.expect(Tok::Semi)?;
                let mut coeffs = vec![self.expr()?];
                while self.eat(&Tok::Comma) {
                    coeffs.push(self.expr()?);
                }
                AutoDef::Monomial { vars, exps, coeffs }
            }
            "galois" => {
                let mut signs = Vec::new();
                if !self.at(&Tok::RParen) {
                    loop {
                        let d = self.sqrt_lit()?;
                        self.expect(Tok::Arrow)?;
                        signs.push((d, self.sign()?));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen)?;
                let maps = if self.at_kw("with") {
                    self.advance();
                    self.maps()?
                } else {
                    Vec::new()
                };
                return Ok(AutoDef::Galois { signs, maps });
            }
            "map" => AutoDef::Map { maps: self.maps()? },
            "compose" => {
                let parts = self.names()?;
                if parts.len() < 2 {
                    return Err(Diagnostic::error(head.span, "compose needs at least two maps"));
                }
                AutoDef::Compose(parts)
            }
            other => {
                return Err(Diagnostic::error(
                    head.span,
                    format!("unknown map form `{other}`; expected linear, monomial, galois, map or compose"),
                ))
            }
        };
        self.expect(Tok::RParen)?;
        Ok(def)
    }

    fn sign(&mut self) -> PResult<i8> {
        let span = self.span();
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let n = self.int()?;
        if n != BigInt::from(1) {
            return Err(Diagnostic::error(span, "sign must be 1 or -1"));
        }
        Ok(if neg { -1 } else { 1 })
    }

    fn mat_product(&mut self) -> PResult<Vec<MatFactor>> {
        let mut out = Vec::new();
        loop {
            let name = self.name()?;
            let exp = if self.eat(&Tok::Caret) { self.exponent()? } else { 1 };
            out.push(MatFactor { name, exp });
            if !self.eat(&Tok::Star) {
                return Ok(out);
            }
        }
    }

    fn claim(&mut self) -> PResult<ClaimExpr> {
        let head = self.name()?;
        self.expect(Tok::LParen)?;
        let claim = match head.text.as_str() {
            "identity" => {
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                ClaimExpr::Identity(a, self.expr()?)
            }
            "invariant" => {
                let autos = if self.eat(&Tok::LBrace) {
                    let ns = self.names()?;
                    self.expect(Tok::RBrace)?;
                    ns
                } else {
                    vec![self.name()?]
                };
                self.expect(Tok::Comma)?;
                ClaimExpr::Invariant(autos, self.expr()?)
            }
            "order" => {
                let group = if self.at_kw("group") && self.peek_at(1) == &Tok::LParen {
                    self.advance();
                    self.advance();
                    let ns = self.names()?;
                    self.expect(Tok::RParen)?;
                    Some(ns)
                } else {
                    None
                };
                let single = match group {
                    Some(_) => None,
                    None => Some(self.name()?),
                };
                self.expect(Tok::RParen)?;
                self.expect(Tok::EqEq)?;
                let n = self.count()?;
                return Ok(match (group, single) {
                    (Some(g), _) => ClaimExpr::GroupOrder(g, n),
                    (None, Some(m)) => ClaimExpr::MatrixOrder(m, n),
                    (None, None) => unreachable!(),
                });
            }
            "rank" => {
                let mut es = vec![self.expr()?];
                while self.eat(&Tok::Comma) {
                    es.push(self.expr()?);
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::EqEq)?;
                return Ok(ClaimExpr::Rank(es, self.count()?));
            }
            "matrix" => {
                let l = self.mat_product()?;
                self.expect(Tok::EqEq)?;
                ClaimExpr::MatrixEq(l, self.mat_product()?)
            }
            "matches" => {
                let a = self.name()?;
                self.expect(Tok::Comma)?;
                let b = self.name()?;
                self.expect(Tok::Comma)?;
                let mut chain = vec![self.name()?];
                while self.eat(&Tok::At) {
                    chain.push(self.name()?);
                }
                ClaimExpr::Matches(a, b, chain)
            }
            "agree" => {
                let a = self.name()?;
                self.expect(Tok::Comma)?;
                ClaimExpr::Agree(a, self.name()?)
            }
            "representation" => ClaimExpr::Representation(self.names()?),
            other => {
                return Err(Diagnostic::error(
                    head.span,
                    format!(
                        "unknown claim `{other}`; expected identity, invariant, order, rank, matrix, matches, agree or representation"
                    ),
                ))
            }
        };
        self.expect(Tok::RParen)?;
        Ok(claim)
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Diagnostic::error(self.span(), "expression nested too deeply"));
        }
        Ok(())
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let r = self.at_expr();
        self.depth -= 1;
        r
    }

    fn at_expr(&mut self) -> PResult<Expr> {
        let mut e = self.additive()?;
        while self.at(&Tok::At) {
            let span = self.advance().span;
            let chart = self.name()?;
            e = Expr::new(ExprKind::At(Box::new(e), chart), span);
        }
        Ok(e)
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut e = self.multiplicative()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(e),
            };
            let span = self.advance().span;
            let r = self.multiplicative()?;
            e = Expr::new(ExprKind::Bin(op, Box::new(e), Box::new(r)), span);
        }
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let mut e = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(e),
            };
            let span = self.advance().span;
            let r = self.unary()?;
            e = Expr::new(ExprKind::Bin(op, Box::new(e), Box::new(r)), span);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.at(&Tok::Minus) {
            let span = self.advance().span;
            self.enter()?;
            let inner = self.unary();
            self.depth -= 1;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner?)), span));
        }
        self.power()
    }

    fn exponent(&mut self) -> PResult<i64> {
        if self.eat(&Tok::LParen) {
            let k = self.small_int()?;
            self.expect(Tok::RParen)?;
            Ok(k)
        } else {
            self.small_int()
        }
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.primary()?;
        if self.at(&Tok::Caret) {
            let span = self.advance().span;
            let k = self.exponent()?;
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), k), span));
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(Expr::new(ExprKind::Int(n), span))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "sqrt" && self.peek_at(1) == &Tok::LParen => {
                let d = self.sqrt_lit()?;
                Ok(Expr::new(ExprKind::Sqrt(d), span))
            }
            Tok::Ident(s) if s == "apply" && self.peek_at(1) == &Tok::LParen => {
                self.advance();
                self.advance();
                let a = self.name()?;
                self.expect(Tok::Comma)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::new(ExprKind::Apply(a, Box::new(e)), span))
            }
            Tok::Ident(s) => {
                self.advance();
                Ok(Expr::new(ExprKind::Ident(s), span))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
