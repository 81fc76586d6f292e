use ivl_ledger::dsl::render::render;
use ivl_ledger::dsl::{parse, parse_expr};
use ivl_ledger::{compile, Mode, Section};

const PRELUDE: &str = "field Q adjoin sqrt(-1); vars x y z;";

fn accepts(body: &str) {
    let src = format!("{PRELUDE}\n{body}");
    if let Err(d) = compile(&src) {
        panic!("rejected `{body}`: {d:?}");
    }
}

/// Asserts that `body` is rejected with a diagnostic mentioning `needle`.
fn rejects(body: &str, needle: &str) {
    let src = format!("{PRELUDE}\n{body}");
    match compile(&src) {
        Ok(_) => panic!("accepted `{body}`"),
        Err(d) => assert!(
            d.iter().any(|d| d.message.contains(needle)),
            "`{body}` rejected without `{needle}`: {d:?}"
        ),
    }
}

#[test]
fn field_declaration() {
    compile("field Q; vars x; assert identity(x, x);").unwrap();
    compile("field Q adjoin sqrt(2), sqrt(-3); vars x; assert identity(sqrt(2)^2, 2);").unwrap();
    assert!(compile("vars x; field Q;").is_err());
    assert!(compile("field Q; field Q;").is_err());
    assert!(compile("field Q adjoin sqrt(4);").is_err());
}

#[test]
fn vars_declaration() {
    accepts("vars w; assert identity(w, w);");
    rejects("vars x;", "already bound");
    rejects("vars sqrt;", "reserved");
}

#[test]
fn matrix_declaration() {
    accepts("matrix M = [[0,1],[1,0]]; assert order(M) == 2;");
    accepts("matrix H = [[1/2,0],[0,2]]; assert matrix(H * H^-1 == H^-1 * H);");
    rejects("matrix M = [[0,1]];", "not square");
    rejects("matrix M = [[1,0],[0,1/0]];", "zero denominator");
}

#[test]
fn linear_auto() {
    accepts("matrix M = [[0,1],[1,0]]; auto s = linear(M; x, y); assert invariant(s, x + y);");
    rejects("matrix M = [[1,1],[1,1]]; auto s = linear(M; x, y);", "not invertible");
    rejects("matrix M = [[0,1],[1,0]]; auto s = linear(M; x, y, z);", "needs 2 variables");
}

#[test]
fn monomial_auto() {
    accepts("auto m = monomial(x, y; [[0,1],[1,0]]; 1, 1); assert invariant(m, x*y);");
    rejects("auto m = monomial(x, y; [[1,1],[1,1]]; 1, 1);", "unimodular");
    rejects("auto m = monomial(x, y; [[1,0],[0,1]]; 1);", "exponent matrix");
}

#[test]
fn galois_auto() {
    accepts("auto g = galois(sqrt(-1) -> -1) with x -> y, y -> x; assert invariant(g, x + y);");
    accepts("auto c = galois(sqrt(-1) -> -1); assert invariant(c, x);");
    let p = parse("auto g = galois(sqrt(-1) -> 2);").1;
    assert!(p.iter().any(|d| d.message.contains("sign must be")));
}

#[test]
fn map_auto() {
    accepts("auto t = map(x -> 1/x); assert invariant(t, x + 1/x);");
    rejects("auto t = map(x -> y, x -> z);", "mapped twice");
    rejects("auto t = map(q -> x);", "unknown variable");
}

#[test]
fn compose_auto() {
    accepts("auto a = map(x -> -x); auto b = map(y -> -y); auto ab = compose(a, b); assert invariant(ab, x*y);");
    let p = parse("auto a = map(x -> -x); auto c = compose(a);").1;
    assert!(p.iter().any(|d| d.message.contains("at least two")));
    rejects("auto c = compose(u, v);", "unknown");
}

#[test]
fn let_binding() {
    accepts("let s = x + y; assert identity(s^2, x^2 + 2*x*y + y^2);");
    rejects("let s = x + q;", "unknown name");
    rejects("let s = x; let s = y;", "already bound");
}

#[test]
fn chart_binding() {
    accepts("chart C: u = x + y, v = x - y; assert identity((u*v) @ C, x^2 - y^2);");
    accepts("chart C: u = x + y; chart Ci: x = u - y; assert identity(x @ Ci @ C, x);");
    rejects("chart C: u = x, u = y;", "defined twice");
}

#[test]
fn claim_forms() {
    accepts("assert \"i\" identity(x*(y + z), x*y + x*z) cite \"distributivity\";");
    accepts("auto n = map(x -> -x); auto m = map(y -> -y); assert invariant({n, m}, x^2*y^2);");
    accepts("matrix A = [[0,-1],[1,0]]; assert order(group(A)) == 4;");
    accepts("assert rank(x, y, x*y*z) == 3;");
    accepts("auto a = map(x -> y, y -> x); auto b = map(y -> x, x -> y); assert agree(a, b);");
    accepts("chart C: u = x*y; auto a = map(x -> y, y -> x); auto b = map(u -> u); assert matches(a, b, C);");
    accepts("matrix A = [[0,-1],[1,0]]; assert representation(A);");
    rejects("assert \"k\" identity(x, x); assert \"k\" identity(y, y);", "duplicate claim id");
    rejects("matrix A = [[1]]; matrix B = [[1,0],[0,1]]; assert matrix(A == B);", "different dimensions");
    rejects("let s = x; assert order(s) == 2;", "expected a matrix");
}

#[test]
fn expression_syntax() {
    for ok in ["x", "-x^2", "(x + 1)/(y - 2)", "sqrt(-1)*x", "x^-2", "(x + y) @ C", "apply(s, x)"] {
        assert!(parse_expr(ok).is_ok(), "{ok}");
    }
    for bad in ["x +", "(x", "x ^ y", "sqrt(x)", "x y", "1/"] {
        assert!(parse_expr(bad).is_err(), "{bad}");
    }
}

#[test]
fn diagnostics_carry_positions() {
    let d = compile("field Q;\nvars x;\nlet s = x + q;").unwrap_err();
    assert_eq!((d[0].span.line, d[0].span.col), (3, 13));
}

#[test]
fn unlabelled_claims_get_sequential_ids() {
    let c = compile("field Q; vars x; assert identity(x, x); assert identity(x, x);").unwrap();
    assert_eq!(c[0].id, "claim-1");
    assert_eq!(c[1].id, "claim-2");
}

#[test]
fn apply_uses_auto() {
    let c = compile("field Q; vars x y; auto s = map(x -> y, y -> x); assert identity(apply(s, x - y), y - x);").unwrap();
    assert!(c[0].evaluate(Mode::Exact).is_pass());
}

#[test]
fn builtin_scripts_round_trip() {
    for section in Section::PARTS {
        for src in section.sources() {
            let (script, d) = parse(src);
            assert!(d.is_empty(), "{}: {d:?}", section.name());
            let text = render(&script);
            let (again, d) = parse(&text);
            assert!(d.is_empty(), "{}: rendered text fails to parse: {d:?}", section.name());
            assert_eq!(again, script, "{}", section.name());
            assert_eq!(render(&again), text);
        }
    }
}

#[test]
fn rendered_script_yields_same_claims() {
    let src = Section::Theorems.sources()[0];
    let rendered = render(&parse(src).0);
    let a = compile(src).unwrap();
    let b = compile(&rendered).unwrap();
    let ids = |cs: &[ivl_ledger::Claim]| cs.iter().map(|c| c.id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&a), ids(&b));
    assert!(b.iter().all(|c| c.evaluate(Mode::Exact).is_pass()));
}
