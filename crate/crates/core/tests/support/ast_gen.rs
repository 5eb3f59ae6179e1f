//! Proptest strategies for random COQL syntax trees. Positions are all
//! zero, since equality ignores them.

use conceptdb::coql::ast::*;
use conceptdb::coql::lexer::is_keyword;
use conceptdb::coql::Pos;
use conceptdb::PrimitiveType;
use proptest::prelude::*;

pub fn ident() -> impl Strategy<Value = String> {
    "[a-z][a-zA-Z0-9_]{0,5}".prop_filter("not a keyword", |s| !is_keyword(s))
}

pub fn coll_name() -> impl Strategy<Value = String> {
    "[A-Z][a-z]{0,6}".prop_filter("reserved", |s| !is_keyword(s) && s != "Bottom")
}

pub fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        Just(Literal::Null),
        any::<bool>().prop_map(Literal::Bool),
        any::<i64>().prop_map(Literal::Int),
        (-1000i64..1000).prop_map(Literal::Int),
        any::<f64>().prop_filter("finite", |d| d.is_finite()).prop_map(Literal::Double),
        "[ -~äß€]{0,8}".prop_map(Literal::Str),
    ]
}

pub fn node(kind: ExprKind) -> Expr {
    Expr::at0(kind)
}

pub fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        literal().prop_map(|l| node(ExprKind::Lit(l))),
        ident().prop_map(|n| node(ExprKind::Name(n))),
        coll_name().prop_map(|n| node(ExprKind::Name(n))),
        Just(node(ExprKind::This)),
        Just(node(ExprKind::Super)),
    ]
}

pub fn filter(pred: BoxedStrategy<Expr>) -> impl Strategy<Value = Expr> {
    (coll_name(), proptest::option::of(ident()), pred).prop_map(|(collection, var, pred)| {
        node(ExprKind::Filter {
            collection,
            var,
            pred: Box::new(pred),
        })
    })
}

/// A collection term: what may follow an inference arrow or start a cube source.
pub fn term(e: BoxedStrategy<Expr>) -> impl Strategy<Value = Expr> {
    prop_oneof![coll_name().prop_map(|n| node(ExprKind::Name(n))), filter(e)]
}

pub fn step(e: BoxedStrategy<Expr>) -> impl Strategy<Value = Step> {
    let item = prop_oneof![
        Just(StepItem::Super),
        ident().prop_map(StepItem::Name),
        coll_name().prop_map(StepItem::Name),
        filter(e).prop_map(StepItem::Term),
    ];
    (prop_oneof![Just(Dir::Up), Just(Dir::Down)], item).prop_map(|(dir, item)| Step { dir, item })
}

pub fn cube(e: BoxedStrategy<Expr>) -> impl Strategy<Value = Expr> {
    let source = (term(e.clone()), proptest::option::of(ident())).prop_map(|(term, var)| CubeSource { term, var });
    let ret_item = (proptest::option::of(ident()), e.clone()).prop_map(|(name, expr)| ReturnItem { name, expr });
    (
        prop::collection::vec(source, 1..4),
        proptest::option::of(e.clone()),
        proptest::option::of(e.clone()),
        prop::collection::vec((ident(), e), 0..3),
        proptest::option::of(prop::collection::vec(ret_item, 1..4)),
    )
        .prop_map(|(sources, source_filter, where_, body, ret)| {
            node(ExprKind::Cube(Box::new(CubeExpr {
                sources,
                source_filter,
                where_,
                body,
                ret,
            })))
        })
}

pub fn via(e: BoxedStrategy<Expr>) -> impl Strategy<Value = Option<Via>> {
    prop_oneof![
        Just(None),
        (coll_name(), proptest::option::of(ident()), proptest::option::of(e.clone())).prop_map(|(name, var, f)| Some(
            Via::Collection {
                name,
                var,
                filter: f.map(Box::new),
            }
        )),
        proptest::option::of(e).prop_map(|f| Some(Via::Bottom { filter: f.map(Box::new) })),
    ]
}

pub fn bin_op() -> impl Strategy<Value = BinOp> {
    prop_oneof![
        Just(BinOp::Or),
        Just(BinOp::And),
        Just(BinOp::Add),
        Just(BinOp::Sub),
        Just(BinOp::Mul),
        Just(BinOp::Div)
    ]
}

pub fn cmp_op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Gt),
        Just(CmpOp::Ge),
        Just(CmpOp::StartsWith)
    ]
}

pub fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 4, |inner| {
        let e = inner.boxed();
        prop_oneof![
            (e.clone(), prop_oneof![ident(), Just("super".to_string())])
                .prop_map(|(x, n)| node(ExprKind::Attr(Box::new(x), n))),
            (e.clone(), prop::collection::vec(step(e.clone()), 1..4)).prop_map(|(s, steps)| node(ExprKind::Chain {
                source: Box::new(s),
                steps
            })),
            filter(e.clone()),
            (bin_op(), e.clone(), e.clone()).prop_map(|(op, l, r)| node(ExprKind::Binary {
                op,
                lhs: Box::new(l),
                rhs: Box::new(r)
            })),
            e.clone().prop_map(|x| node(ExprKind::Not(Box::new(x)))),
            (cmp_op(), e.clone(), e.clone()).prop_map(|(op, l, r)| node(ExprKind::Cmp {
                op,
                lhs: Box::new(l),
                rhs: Box::new(r)
            })),
            (e.clone(), prop::collection::vec(literal(), 0..4)).prop_map(|(l, items)| node(ExprKind::In {
                lhs: Box::new(l),
                items
            })),
            (prop_oneof![Just(AggFunc::Sum), Just(AggFunc::Count)], e.clone())
                .prop_map(|(func, arg)| node(ExprKind::Agg { func, arg: Box::new(arg) })),
            cube(e.clone()),
            (e.clone(), via(e.clone()), term(e)).prop_map(|(s, via, t)| node(ExprKind::Infer {
                source: Box::new(s),
                via,
                target: Box::new(t)
            })),
        ]
    })
}

pub fn type_ref() -> impl Strategy<Value = TypeRef> {
    prop_oneof![
        Just(TypeRef::Primitive(PrimitiveType::Int)),
        Just(TypeRef::Primitive(PrimitiveType::Double)),
        Just(TypeRef::Primitive(PrimitiveType::Bool)),
        (1u32..300).prop_map(|n| TypeRef::Primitive(PrimitiveType::Char(n))),
        coll_name().prop_map(TypeRef::Concept),
    ]
}

pub fn groups() -> impl Strategy<Value = Vec<FieldGroup>> {
    prop::collection::vec(
        (type_ref(), prop::collection::vec(ident(), 1..3)).prop_map(|(ty, names)| FieldGroup { ty, names }),
        0..4,
    )
}

pub fn statement() -> impl Strategy<Value = Statement> {
    let kind = prop_oneof![
        (coll_name(), proptest::option::of(coll_name()), groups(), groups()).prop_map(
            |(name, super_name, identity, entity)| StatementKind::Concept(ConceptDecl {
                name,
                super_name,
                identity,
                entity
            })
        ),
        (
            coll_name(),
            coll_name(),
            proptest::option::of(coll_name()),
            prop::collection::vec((ident(), coll_name()), 0..3)
        )
            .prop_map(|(name, concept, parent, bindings)| StatementKind::CreateTable(CreateTable {
                name,
                concept,
                parent,
                bindings
            })),
        (ident(), expr()).prop_map(|(name, expr)| StatementKind::Assign { name, expr }),
        (
            prop::collection::vec(expr(), 1..3),
            coll_name(),
            proptest::option::of(ident()),
            proptest::option::of(expr())
        )
            .prop_map(|(items, collection, var, where_)| StatementKind::Select(Select {
                items,
                collection,
                var,
                where_
            })),
        expr().prop_map(StatementKind::Query),
    ];
    kind.prop_map(|kind| Statement {
        kind,
        pos: Pos::default(),
    })
}
