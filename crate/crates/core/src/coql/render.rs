//! Canonical text form of COQL trees.
//!
//! Output always uses `==` for equality and `RETURN ( ... )`, and adds
//! brackets only where precedence requires them.

use crate::coql::ast::*;
use crate::value::PrimitiveType;

// Precedence levels; a sub-expression below the required level is bracketed.
const TOP: i32 = -1;
const INFER: i32 = 0;
const OR: i32 = 1;
const AND: i32 = 2;
const NOT: i32 = 3;
const CMP: i32 = 4;
const ADD: i32 = 5;
const MUL: i32 = 6;
const CHAIN: i32 = 7;
const POSTFIX: i32 = 8;
const PRIMARY: i32 = 9;

fn precedence(e: &Expr) -> i32 {
    match &e.kind {
        // A CUBE swallows trailing clauses, so it is bracketed in any operand position.
        ExprKind::Cube(_) => TOP,
        ExprKind::Infer { .. } => INFER,
        ExprKind::Binary { op, .. } => match op {
            BinOp::Or => OR,
            BinOp::And => AND,
            BinOp::Add | BinOp::Sub => ADD,
            BinOp::Mul | BinOp::Div => MUL,
        },
        ExprKind::Not(_) => NOT,
        ExprKind::Cmp { .. } | ExprKind::In { .. } => CMP,
        ExprKind::Chain { .. } => CHAIN,
        ExprKind::Attr(..) => POSTFIX,
        _ => PRIMARY,
    }
}

pub fn render_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, TOP);
    out
}

pub fn render_statement(s: &Statement) -> String {
    let mut out = String::new();
    match &s.kind {
        StatementKind::Concept(c) => write_concept(&mut out, c),
        StatementKind::CreateTable(t) => {
            out.push_str(&format!("CREATE TABLE {} CONCEPT {}", t.name, t.concept));
            if let Some(p) = &t.parent {
                out.push_str(&format!(" IN {p}"));
            }
            for (dim, coll) in &t.bindings {
                out.push_str(&format!(", {dim} = {coll}"));
            }
        }
        StatementKind::Assign { name, expr } => {
            out.push_str(name);
            out.push_str(" = ");
            write_expr(&mut out, expr, TOP);
        }
        StatementKind::Select(sel) => {
            out.push_str("SELECT ");
            for (i, item) in sel.items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(&mut out, item, INFER);
            }
            out.push_str(" FROM ");
            out.push_str(&sel.collection);
            if let Some(v) = &sel.var {
                out.push(' ');
                out.push_str(v);
            }
            if let Some(w) = &sel.where_ {
                out.push_str(" WHERE ");
                write_expr(&mut out, w, INFER);
            }
        }
        StatementKind::Query(e) => write_expr(&mut out, e, TOP),
    }
    out
}

pub fn render_type(t: &TypeRef) -> String {
    match t {
        TypeRef::Primitive(p) => render_primitive(*p),
        TypeRef::Concept(c) => c.clone(),
    }
}

fn render_primitive(p: PrimitiveType) -> String {
    p.to_string()
}

fn write_concept(out: &mut String, c: &ConceptDecl) {
    out.push_str("CONCEPT ");
    out.push_str(&c.name);
    if let Some(s) = &c.super_name {
        out.push_str(" IN ");
        out.push_str(s);
    }
    for (kw, groups) in [("IDENTITY", &c.identity), ("ENTITY", &c.entity)] {
        out.push('\n');
        out.push_str(kw);
        for g in groups {
            out.push_str("\n  ");
            out.push_str(&render_type(&g.ty));
            out.push(' ');
            out.push_str(&g.names.join(", "));
        }
    }
}

pub fn render_literal(l: &Literal) -> String {
    match l {
        Literal::Null => "NULL".to_string(),
        Literal::Bool(true) => "TRUE".to_string(),
        Literal::Bool(false) => "FALSE".to_string(),
        Literal::Int(i) => i.to_string(),
        // Debug formatting of f64 is the shortest text that parses back exactly.
        Literal::Double(d) => format!("{d:?}"),
        Literal::Str(s) => format!("'{}'", s.replace('\'', "''")),
    }
}

fn write_expr(out: &mut String, e: &Expr, min: i32) {
    let bracket = precedence(e) < min;
    if bracket {
        out.push('(');
    }
    write_raw(out, e);
    if bracket {
        out.push(')');
    }
}

fn write_filter(out: &mut String, collection: &str, var: &Option<String>, pred: &Expr) {
    out.push('(');
    out.push_str(collection);
    if let Some(v) = var {
        out.push(' ');
        out.push_str(v);
    }
    out.push_str(" | ");
    write_expr(out, pred, INFER);
    out.push(')');
}

fn write_raw(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Lit(l) => out.push_str(&render_literal(l)),
        ExprKind::Name(n) => out.push_str(n),
        ExprKind::This => out.push_str("this"),
        ExprKind::Super => out.push_str("super"),
        ExprKind::Attr(inner, name) => {
            if matches!(inner.kind, ExprKind::Chain { .. }) {
                // `a -> b.c` reads the attribute off the whole chain
                write_raw(out, inner);
            } else {
                write_expr(out, inner, POSTFIX);
            }
            out.push('.');
            out.push_str(name);
        }
        ExprKind::Chain { source, steps } => {
            write_expr(out, source, POSTFIX);
            for s in steps {
                out.push_str(match s.dir {
                    Dir::Up => " -> ",
                    Dir::Down => " <- ",
                });
                match &s.item {
                    StepItem::Super => out.push_str("super"),
                    StepItem::Name(n) => out.push_str(n),
                    StepItem::Term(t) => write_raw(out, t),
                }
            }
        }
        ExprKind::Filter {
            collection,
            var,
            pred,
        } => write_filter(out, collection, var, pred),
        ExprKind::Binary { op, lhs, rhs } => {
            let p = precedence(e);
            write_expr(out, lhs, p);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_expr(out, rhs, p + 1);
        }
        ExprKind::Not(inner) => {
            out.push_str("NOT ");
            write_expr(out, inner, NOT);
        }
        ExprKind::Cmp { op, lhs, rhs } => {
            write_expr(out, lhs, ADD);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_expr(out, rhs, ADD);
        }
        ExprKind::In { lhs, items } => {
            write_expr(out, lhs, ADD);
            out.push_str(" IN {");
            let lits: Vec<String> = items.iter().map(render_literal).collect();
            out.push_str(&lits.join(", "));
            out.push('}');
        }
        ExprKind::Agg { func, arg } => {
            out.push_str(match func {
                AggFunc::Sum => "SUM(",
                AggFunc::Count => "COUNT(",
            });
            write_expr(out, arg, INFER);
            out.push(')');
        }
        ExprKind::Cube(c) => write_cube(out, c),
        ExprKind::Infer { source, via, target } => {
            write_expr(out, source, INFER);
            match via {
                None => out.push_str(" <-*-> "),
                Some(v) => {
                    out.push_str(" <-*(");
                    let (head, var, filter) = match v {
                        Via::Collection { name, var, filter } => (name.as_str(), var, filter),
                        Via::Bottom { filter } => ("Bottom", &None, filter),
                    };
                    out.push_str(head);
                    if let Some(v) = var {
                        out.push(' ');
                        out.push_str(v);
                    }
                    if let Some(f) = filter {
                        out.push_str(" | ");
                        write_expr(out, f, INFER);
                    }
                    out.push_str(")*-> ");
                }
            }
            write_raw(out, target);
        }
    }
}

fn write_cube(out: &mut String, c: &CubeExpr) {
    out.push_str("CUBE (");
    for (i, s) in c.sources.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_raw(out, &s.term);
        if let Some(v) = &s.var {
            out.push(' ');
            out.push_str(v);
        }
    }
    if let Some(f) = &c.source_filter {
        out.push_str(" | ");
        write_expr(out, f, INFER);
    }
    out.push(')');
    if let Some(w) = &c.where_ {
        out.push_str(" WHERE ");
        write_expr(out, w, INFER);
    }
    if !c.body.is_empty() {
        out.push_str(" BODY (");
        for (i, (name, e)) in c.body.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(name);
            out.push_str(" = ");
            write_expr(out, e, INFER);
        }
        out.push(')');
    }
    if let Some(items) = &c.ret {
        out.push_str(" RETURN (");
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            if let Some(n) = &item.name {
                out.push_str(n);
                out.push_str(" = ");
            }
            write_expr(out, &item.expr, INFER);
        }
        out.push(')');
    }
}
