//! Syntax tree for COQL statements and expressions.
//!
//! Every node records the position where it starts. Equality ignores
//! positions so that re-parsed text compares equal to the original tree.

use crate::coql::lexer::Pos;
use crate::value::PrimitiveType;

#[derive(Debug, Clone)]
pub enum Literal {
    Null,
    Bool(bool),
    Int(i64),
    Double(f64),
    Str(String),
}

impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Literal::Null, Literal::Null) => true,
            (Literal::Bool(a), Literal::Bool(b)) => a == b,
            (Literal::Int(a), Literal::Int(b)) => a == b,
            (Literal::Double(a), Literal::Double(b)) => a.to_bits() == b.to_bits(),
            (Literal::Str(a), Literal::Str(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Or,
    And,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "OR",
            BinOp::And => "AND",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    StartsWith,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::StartsWith => "STARTSWITH",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggFunc {
    Sum,
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    /// `->`, towards greater elements or the parent.
    Up,
    /// `<-`, towards lesser elements or children.
    Down,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepItem {
    Super,
    /// A dimension, collection or variable name; classified during evaluation.
    Name(String),
    /// A filtered collection term.
    Term(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub dir: Dir,
    pub item: StepItem,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Via {
    Collection {
        name: String,
        var: Option<String>,
        filter: Option<Box<Expr>>,
    },
    Bottom {
        filter: Option<Box<Expr>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeSource {
    /// A collection or variable name, or a filtered term.
    pub term: Expr,
    pub var: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnItem {
    pub name: Option<String>,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeExpr {
    pub sources: Vec<CubeSource>,
    /// Condition written after a bar inside the source list.
    pub source_filter: Option<Expr>,
    pub where_: Option<Expr>,
    pub body: Vec<(String, Expr)>,
    pub ret: Option<Vec<ReturnItem>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Lit(Literal),
    Name(String),
    This,
    Super,
    Attr(Box<Expr>, String),
    Chain {
        source: Box<Expr>,
        steps: Vec<Step>,
    },
    /// `(Collection [var] | predicate)`
    Filter {
        collection: String,
        var: Option<String>,
        pred: Box<Expr>,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Not(Box<Expr>),
    Cmp {
        op: CmpOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    In {
        lhs: Box<Expr>,
        items: Vec<Literal>,
    },
    Agg {
        func: AggFunc,
        arg: Box<Expr>,
    },
    Cube(Box<CubeExpr>),
    Infer {
        source: Box<Expr>,
        via: Option<Via>,
        target: Box<Expr>,
    },
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Expr {
        Expr { kind, pos }
    }

    /// Builds an expression at a dummy position; handy for generated trees.
    pub fn at0(kind: ExprKind) -> Expr {
        Expr {
            kind,
            pos: Pos::default(),
        }
    }

    /// Top-level `AND` operands, left to right.
    pub fn conjuncts(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Binary {
                op: BinOp::And,
                lhs,
                rhs,
            } => {
                let mut out = lhs.conjuncts();
                out.extend(rhs.conjuncts());
                out
            }
            _ => vec![self],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypeRef {
    Primitive(PrimitiveType),
    Concept(String),
}

/// A type followed by one or more field names, e.g. `INT x, y`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGroup {
    pub ty: TypeRef,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConceptDecl {
    pub name: String,
    pub super_name: Option<String>,
    pub identity: Vec<FieldGroup>,
    pub entity: Vec<FieldGroup>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CreateTable {
    pub name: String,
    pub concept: String,
    pub parent: Option<String>,
    pub bindings: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Select {
    pub items: Vec<Expr>,
    pub collection: String,
    pub var: Option<String>,
    pub where_: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    Concept(ConceptDecl),
    CreateTable(CreateTable),
    Assign { name: String, expr: Expr },
    Select(Select),
    Query(Expr),
}

#[derive(Debug, Clone)]
pub struct Statement {
    pub kind: StatementKind,
    pub pos: Pos,
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
