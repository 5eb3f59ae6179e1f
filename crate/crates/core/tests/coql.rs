mod support;

use conceptdb::coql::ast::*;
use conceptdb::coql::{parse_query, parse_script, parse_statement, render_expr, render_statement, ParseError, Pos, StatementReader};
use proptest::prelude::*;
use support::ast_gen::{expr, node, statement};

fn roundtrip_statement(text: &str) -> Statement {
    let first = parse_statement(text).unwrap_or_else(|e| panic!("corpus statement does not parse: {e}\n{text}"));
    let rendered = render_statement(&first);
    let second = parse_statement(&rendered).unwrap_or_else(|e| panic!("rendering does not parse: {e}\n{rendered}"));
    assert_eq!(first.kind, second.kind, "render changed the tree:\n{text}\n=>\n{rendered}");
    assert_eq!(render_statement(&second), rendered, "render is not stable for\n{text}");
    first
}

#[test]
fn corpus_parses_and_renders_to_a_fixpoint() {
    let corpus = support::corpus();
    assert!(corpus.len() >= 50, "corpus has {} statements", corpus.len());
    for text in &corpus {
        roundtrip_statement(text);
    }
}

#[test]
fn corpus_as_one_script() {
    let corpus = support::corpus();
    let script = corpus.join(";\n");
    let stmts = parse_script(&script).expect("script");
    assert_eq!(stmts.len(), corpus.len());
}

#[test]
fn spelling_variants_of_inference_agree() {
    let base = parse_query("(Coaches | name == 'Klinsmann') <-*-> Players").unwrap();
    for arrow in ["<--*->", "<*->", "<-*>"] {
        let e = parse_query(&format!("(Coaches | name == 'Klinsmann') {arrow} Players")).unwrap();
        assert_eq!(e, base, "{arrow}");
    }
    let a = parse_query("X <-*(Trains t | t.season > 1)*-> Y").unwrap();
    let b = parse_query("X <--*(Trains t | t.season > 1)*-> Y").unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_equals_is_equality_inside_predicates() {
    let a = parse_query("(Addresses | city = 'Berlin')").unwrap();
    let b = parse_query("(Addresses | city == 'Berlin')").unwrap();
    assert_eq!(a, b);
}

#[test]
fn assignment_versus_comparison() {
    let s = parse_statement("x = Persons -> address").unwrap();
    assert!(matches!(s.kind, StatementKind::Assign { ref name, .. } if name == "x"));
    let s = parse_statement("x == 3").unwrap();
    assert!(matches!(s.kind, StatementKind::Query(_)));
}

#[test]
fn comments_and_semicolons_separate_statements() {
    let stmts = parse_script("// leading comment\nA;\n\nB -> c // trailing\n;;C").unwrap();
    assert_eq!(stmts.len(), 3);
}

// ---- positions ----

#[test]
fn node_positions_point_at_the_source() {
    let text = "(Persons | age > 20)\n  -> address\n  AND Banks";
    let e = parse_query(text).unwrap();
    assert_eq!(e.pos, Pos::new(3, 3), "AND operator");
    let ExprKind::Binary { lhs, rhs, .. } = &e.kind else { panic!() };
    assert_eq!(lhs.pos, Pos::new(1, 1));
    assert_eq!(rhs.pos, Pos::new(3, 7));
    let ExprKind::Chain { source, .. } = &lhs.kind else { panic!() };
    let ExprKind::Filter { pred, .. } = &source.kind else { panic!() };
    assert_eq!(pred.pos, Pos::new(1, 16), "comparison operator");
    let ExprKind::Cmp { lhs, rhs, .. } = &pred.kind else { panic!() };
    assert_eq!(lhs.pos, Pos::new(1, 12));
    assert_eq!(rhs.pos, Pos::new(1, 18));
}

#[test]
fn statement_positions_in_a_script() {
    let stmts = parse_script("A;\n  B -> c;\n\n\tCUBE (X)").unwrap();
    let pos: Vec<Pos> = stmts.iter().map(|s| s.pos).collect();
    assert_eq!(pos, vec![Pos::new(1, 1), Pos::new(2, 3), Pos::new(4, 2)]);
}

#[test]
fn error_positions() {
    let err = parse_query("Persons -> -> address").unwrap_err();
    assert_eq!(err.pos(), Pos::new(1, 12));
    let err = parse_query("(Persons | age >\n  ) -> x").unwrap_err();
    assert_eq!(err.pos(), Pos::new(2, 3));
    let err = parse_query("x == 'never closed").unwrap_err();
    assert!(matches!(err, ParseError::Lex(_)));
    assert_eq!(err.pos(), Pos::new(1, 6));
    let mut r = StatementReader::new("A;\nB;\nC ->");
    assert!(r.next().unwrap().is_ok());
    assert!(r.next().unwrap().is_ok());
    let err = r.next().unwrap().unwrap_err();
    assert_eq!(err.pos().line, 3);
}

// ---- generated trees ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_expressions_round_trip(e in expr()) {
        let text = render_expr(&e);
        let back = parse_query(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(render_expr(&back), text);
    }

    #[test]
    fn generated_statements_round_trip(s in statement()) {
        let text = render_statement(&s);
        let back = parse_statement(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
        prop_assert_eq!(&back.kind, &s.kind, "{}", text);
    }
}

#[test]
fn awkward_trees_round_trip() {
    let lit = |l| Box::new(node(ExprKind::Lit(l)));
    let name = |n: &str| Box::new(node(ExprKind::Name(n.into())));
    let cases = vec![
        node(ExprKind::Attr(lit(Literal::Int(5)), "x".into())),
        node(ExprKind::Attr(lit(Literal::Double(-2.5)), "x".into())),
        node(ExprKind::Binary {
            op: BinOp::Sub,
            lhs: name("a"),
            rhs: lit(Literal::Int(i64::MIN)),
        }),
        node(ExprKind::Chain {
            source: Box::new(node(ExprKind::Chain {
                source: name("a"),
                steps: vec![Step { dir: Dir::Up, item: StepItem::Name("b".into()) }],
            })),
            steps: vec![Step { dir: Dir::Down, item: StepItem::Super }],
        }),
        node(ExprKind::Attr(
            Box::new(node(ExprKind::Chain {
                source: name("a"),
                steps: vec![Step { dir: Dir::Up, item: StepItem::Name("b".into()) }],
            })),
            "c".into(),
        )),
    ];
    for e in cases {
        let text = render_expr(&e);
        assert_eq!(parse_query(&text).unwrap_or_else(|err| panic!("{text}: {err}")), e, "{text}");
    }
}
