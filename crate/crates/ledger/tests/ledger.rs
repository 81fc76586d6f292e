use ivl_ledger::{build_ledger, compile, run, ClaimKind, Mode, Section, Status};

fn ids(section: Section) -> Vec<String> {
    build_ledger(section).into_iter().map(|c| c.id).collect()
}

#[test]
fn section_sizes() {
    let sizes: Vec<(&str, usize)> = Section::PARTS.iter().map(|s| (s.name(), ids(*s).len())).collect();
    assert_eq!(
        sizes,
        [("theorems", 8), ("s3", 21), ("s4", 47), ("s5", 41), ("s6", 81), ("appendix", 15)]
    );
}

#[test]
fn all_is_concatenation_of_parts() {
    let parts: Vec<String> = Section::PARTS.iter().flat_map(|s| ids(*s)).collect();
    assert_eq!(ids(Section::All), parts);
}

#[test]
fn ids_are_unique() {
    let all = ids(Section::All);
    let set: std::collections::HashSet<&String> = all.iter().collect();
    assert_eq!(set.len(), all.len());
}

#[test]
fn named_relations_present() {
    let s4 = ids(Section::S4);
    for id in ["rel-4.4a", "rel-4.5", "rel-4.6", "rel-4.7", "s4.step5.rank-X"] {
        assert!(s4.iter().any(|i| i == id), "{id}");
    }
    let s6 = ids(Section::S6);
    assert!(s6.iter().any(|i| i == "rel-6.8.lambda4"));
}

#[test]
fn every_claim_carries_a_reference() {
    assert!(build_ledger(Section::All).iter().all(|c| !c.paper_ref.is_empty()));
}

#[test]
fn section_names_parse() {
    for s in Section::PARTS.into_iter().chain([Section::All]) {
        assert_eq!(s.name().parse::<Section>().unwrap(), s);
    }
    assert!("s9".parse::<Section>().is_err());
}

#[test]
fn theorems_pass_in_both_modes() {
    let claims = build_ledger(Section::Theorems);
    assert!(run(&claims, Mode::Exact).all_passed());
    assert!(run(&claims, Mode::Fast).all_passed());
}

#[test]
fn empty_run() {
    let r = run(&[], Mode::Exact);
    assert!(r.results.is_empty());
    assert!(r.all_passed());
    assert_eq!(r.summary().total, 0);
}

#[test]
fn results_keep_claim_order() {
    let claims = build_ledger(Section::S3);
    let r = run(&claims, Mode::Exact);
    let got: Vec<&str> = r.results.iter().map(|r| r.claim_id.as_str()).collect();
    let want: Vec<&str> = claims.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(got, want);
}

#[test]
fn failure_reports_witness() {
    let claims = compile("field Q; vars x y; assert \"bad\" identity((x + y)^2, x^2 + y^2);").unwrap();
    let r = run(&claims, Mode::Exact);
    let res = r.get("bad").unwrap();
    assert!(matches!(res.status, Status::Fail(_)));
    assert!(res.status.witness().is_some_and(|w| !w.is_empty()));
    assert!(!r.all_passed());
    assert_eq!(r.summary().failed, 1);
}

#[test]
fn pole_is_an_error_not_a_failure() {
    let claims = compile("field Q; vars x; assert \"p\" identity(1/(x - x), 1);").unwrap();
    let r = run(&claims, Mode::Exact);
    assert!(matches!(r.get("p").unwrap().status, Status::Error(_)));
    assert_eq!(r.summary().errors, 1);
}

#[test]
fn json_report_schema() {
    let claims = compile(
        "field Q; vars x; assert \"ok\" identity(x, x) cite \"trivial\"; assert \"no\" identity(x, 2*x);",
    )
    .unwrap();
    let r = run(&claims, Mode::Exact);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["schema"], 1);
    let cs = v["claims"].as_array().unwrap();
    assert_eq!(cs.len(), 2);
    assert_eq!(cs[0]["claim_id"], "ok");
    assert_eq!(cs[0]["kind"], "Identity");
    assert_eq!(cs[0]["paper_ref"], "trivial");
    assert_eq!(cs[0]["status"], "pass");
    assert!(cs[0].get("witness").is_none());
    assert!(cs[0]["millis"].is_u64());
    assert_eq!(cs[1]["status"], "fail");
    assert!(cs[1]["witness"].is_string());
    assert_eq!(v["summary"]["total"], 2);
    assert_eq!(v["summary"]["passed"], 1);
    assert_eq!(v["summary"]["failed"], 1);
    assert_eq!(v["summary"]["errors"], 0);
}

#[test]
fn text_report_lists_every_claim() {
    let claims = build_ledger(Section::Appendix);
    let text = run(&claims, Mode::Exact).to_text();
    for c in &claims {
        assert!(text.contains(&c.id), "{}", c.id);
    }
    assert!(text.contains("15 claims: 15 passed, 0 failed, 0 errors"));
}

#[test]
fn kinds_cover_every_variant() {
    let kinds: std::collections::HashSet<ClaimKind> = build_ledger(Section::All).iter().map(|c| c.kind).collect();
    assert_eq!(kinds.len(), 6);
}
