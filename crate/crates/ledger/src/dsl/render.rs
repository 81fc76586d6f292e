//! Text form of a [`Script`] that parses back to an equal tree.

use std::fmt::Write;

use super::ast::*;

pub fn render(script: &Script) -> String {
    let mut out = String::new();
    for s in &script.stmts {
        out.push_str(&render_stmt(&s.kind));
        out.push('\n');
    }
    out
}

pub fn render_stmt(s: &StmtKind) -> String {
    match s {
        StmtKind::Field(rads) if rads.is_empty() => "field Q;".to_string(),
        StmtKind::Field(rads) => {
            let r: Vec<String> = rads.iter().map(|d| format!("sqrt({d})")).collect();
            format!("field Q adjoin {};", r.join(", "))
        }
        StmtKind::Vars(vs) => format!("vars {};", join_names(vs, " ")),
        StmtKind::Matrix { name, rows } => {
            let rows: Vec<String> = rows
                .iter()
                .map(|r| format!("[{}]", r.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            format!("matrix {} = [{}];", name.text, rows.join(","))
        }
        StmtKind::Auto { name, def } => format!("auto {} = {};", name.text, render_auto(def)),
        StmtKind::Let { name, expr } => format!("let {} = {};", name.text, render_expr(expr)),
        StmtKind::Chart { name, defs } => {
            let d: Vec<String> = defs
                .iter()
                .map(|(v, e)| format!("{} = {}", v.text, render_expr(e)))
                .collect();
            format!("chart {}: {};", name.text, d.join(", "))
        }
        StmtKind::Assert { label, claim, cite } => {
            let mut out = "assert ".to_string();
            if let Some(l) = label {
                let _ = write!(out, "\"{l}\" ");
            }
            out.push_str(&render_claim(claim));
            if let Some(c) = cite {
                let _ = write!(out, " cite \"{c}\"");
            }
            out.push(';');
            out
        }
    }
}

fn join_names(ns: &[Name], sep: &str) -> String {
    ns.iter().map(|n| n.text.as_str()).collect::<Vec<_>>().join(sep)
}

fn render_maps(maps: &[(Name, Expr)]) -> String {
    maps.iter()
        .map(|(v, e)| format!("{} -> {}", v.text, render_expr(e)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn render_auto(def: &AutoDef) -> String {
    match def {
        AutoDef::Linear { matrix, vars } if vars.is_empty() => format!("linear({})", matrix.text),
        AutoDef::Linear { matrix, vars } => format!("linear({}; {})", matrix.text, join_names(vars, ", ")),
        AutoDef::Monomial { vars, exps, coeffs } => {
            let rows: Vec<String> = exps
                .iter()
                .map(|r| format!("[{}]", r.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            let cs: Vec<String> = coeffs.iter().map(render_expr).collect();
            format!("monomial({}; [{}]; {})", join_names(vars, ", "), rows.join(","), cs.join(", "))
        }
        AutoDef::Galois { signs, maps } => {
            let s: Vec<String> = signs.iter().map(|(d, s)| format!("sqrt({d}) -> {s}")).collect();
            let mut out = format!("galois({})", s.join(", "));
            if !maps.is_empty() {
                let _ = write!(out, " with {}", render_maps(maps));
            }
            out
        }
        AutoDef::Map { maps } => format!("map({})", render_maps(maps)),
        AutoDef::Compose(parts) => format!("compose({})", join_names(parts, ", ")),
    }
}

fn render_factors(fs: &[MatFactor]) -> String {
    fs.iter()
        .map(|f| {
            if f.exp == 1 {
                f.name.text.clone()
            } else {
                format!("{}^{}", f.name.text, f.exp)
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn render_exprs(es: &[Expr]) -> String {
    es.iter().map(render_expr).collect::<Vec<_>>().join(", ")
}

pub fn render_claim(c: &ClaimExpr) -> String {
    match c {
        ClaimExpr::Identity(a, b) => format!("identity({}, {})", render_expr(a), render_expr(b)),
        ClaimExpr::Invariant(autos, e) if autos.len() == 1 => {
            format!("invariant({}, {})", autos[0].text, render_expr(e))
        }
        ClaimExpr::Invariant(autos, e) => format!("invariant({{{}}}, {})", join_names(autos, ", "), render_expr(e)),
        ClaimExpr::GroupOrder(ms, n) => format!("order(group({})) == {n}", join_names(ms, ", ")),
        ClaimExpr::MatrixOrder(m, n) => format!("order({}) == {n}", m.text),
        ClaimExpr::Rank(es, n) => format!("rank({}) == {n}", render_exprs(es)),
        ClaimExpr::MatrixEq(l, r) => format!("matrix({} == {})", render_factors(l), render_factors(r)),
        ClaimExpr::Matches(a, b, chain) => {
            format!("matches({}, {}, {})", a.text, b.text, join_names(chain, " @ "))
        }
        ClaimExpr::Agree(a, b) => format!("agree({}, {})", a.text, b.text),
        ClaimExpr::Representation(ms) => format!("representation({})", join_names(ms, ", ")),
    }
}

const AT: u8 = 0;
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::At(..) => AT,
        ExprKind::Bin(BinOp::Add | BinOp::Sub, ..) => SUM,
        ExprKind::Bin(..) => PRODUCT,
        ExprKind::Neg(_) => UNARY,
        ExprKind::Pow(..) => POWER,
        _ => ATOM,
    }
}

pub fn render_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, AT);
    out
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    if level(e) < min {
        out.push('(');
        write_expr(out, e, AT);
        out.push(')');
        return;
    }
    match &e.kind {
        ExprKind::Int(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Sqrt(d) => {
            let _ = write!(out, "sqrt({d})");
        }
        ExprKind::Ident(s) => out.push_str(s),
        ExprKind::Neg(x) => {
            out.push('-');
            write_expr(out, x, UNARY);
        }
        ExprKind::Bin(op, a, b) => {
            let (sym, lmin, rmin) = match op {
                BinOp::Add => (" + ", SUM, PRODUCT),
                BinOp::Sub => (" - ", SUM, PRODUCT),
                BinOp::Mul => ("*", PRODUCT, UNARY),
                BinOp::Div => ("/", PRODUCT, UNARY),
            };
            write_expr(out, a, lmin);
            out.push_str(sym);
            write_expr(out, b, rmin);
        }
        ExprKind::Pow(b, k) => {
            write_expr(out, b, ATOM);
            let _ = write!(out, "^{k}");
        }
        ExprKind::Apply(a, x) => {
            let _ = write!(out, "apply({}, ", a.text);
            write_expr(out, x, AT);
            out.push(')');
        }
        ExprKind::At(x, c) => {
            write_expr(out, x, AT);
            let _ = write!(out, " @ {}", c.text);
        }
    }
}
