//! Expression evaluator.

use std::cmp::Ordering;
use std::fmt;

use indexmap::IndexMap;

use crate::algebra::path::{eval_access_path, greater_of, AccessPath, PathDim, PathStep};
use crate::algebra::{combine, NumAcc, QueryError, Result};
use crate::coql::ast::{AggFunc, BinOp, CmpOp, Dir, Expr, ExprKind, Literal, Step, StepItem};
use crate::coql::parse_query;
use crate::cube::{eval_cube, CubeResult};
use crate::inference::eval_infer;
use crate::store::{Database, ElementSet, Resolved, StoreError};
use crate::value::{ComplexIdentity, Value};

/// A runtime value.
#[derive(Debug, Clone, PartialEq)]
pub enum Val {
    Null,
    Int(i64),
    Double(f64),
    Str(String),
    Bool(bool),
    Elem {
        collection: String,
        identity: ComplexIdentity,
    },
    Set(ElementSet),
    /// Attribute values read off every member of a set.
    Bag(Vec<Val>),
    Table(CubeResult),
}

impl Val {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Val::Null => "NULL",
            Val::Int(_) => "INT",
            Val::Double(_) => "DOUBLE",
            Val::Str(_) => "CHAR",
            Val::Bool(_) => "BOOL",
            Val::Elem { .. } => "element",
            Val::Set(_) => "set",
            Val::Bag(_) => "value list",
            Val::Table(_) => "table",
        }
    }

    pub fn from_literal(l: &Literal) -> Val {
        match l {
            Literal::Null => Val::Null,
            Literal::Bool(b) => Val::Bool(*b),
            Literal::Int(i) => Val::Int(*i),
            Literal::Double(d) => Val::Double(*d),
            Literal::Str(s) => Val::Str(s.clone()),
        }
    }

    /// Converts a stored primitive. References need a collection and are
    /// rejected here.
    pub fn from_value(v: &Value) -> Result<Val> {
        Ok(match v {
            Value::Null => Val::Null,
            Value::Int(i) => Val::Int(*i),
            Value::Double(d) => Val::Double(*d),
            Value::Str(s) => Val::Str(s.clone()),
            Value::Bool(b) => Val::Bool(*b),
            Value::Ref(id) => return Err(QueryError::TypeError(format!("unresolved reference {id}"))),
        })
    }

    /// The cell value of a table; sets and lists cannot be cells.
    pub fn to_value(&self) -> Result<Value> {
        Ok(match self {
            Val::Null => Value::Null,
            Val::Int(i) => Value::Int(*i),
            Val::Double(d) => Value::Double(*d),
            Val::Str(s) => Value::Str(s.clone()),
            Val::Bool(b) => Value::Bool(*b),
            Val::Elem { identity, .. } => Value::Ref(identity.clone()),
            other => {
                return Err(QueryError::TypeError(format!(
                    "a {} cannot be a table cell",
                    other.kind_name()
                )))
            }
        })
    }

    pub fn as_set(&self) -> Option<ElementSet> {
        match self {
            Val::Set(s) => Some(s.clone()),
            Val::Elem { collection, identity } => Some(ElementSet::new(collection.clone(), [identity.clone()])),
            _ => None,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Null => f.write_str("NULL"),
            Val::Int(i) => write!(f, "{i}"),
            Val::Double(d) => write!(f, "{}", Value::Double(*d)),
            Val::Str(s) => f.write_str(s),
            Val::Bool(b) => write!(f, "{}", Value::Bool(*b)),
            Val::Elem { identity, .. } => write!(f, "{identity}"),
            Val::Set(s) => write!(f, "{} element(s) of {}", s.len(), s.collection),
            Val::Bag(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            Val::Table(t) => write!(f, "table ({} rows)", t.rows.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    /// Upper bound on materialised cells of a constrained bottom extension.
    pub max_bottom_cells: usize,
}

impl Default for EvalConfig {
    fn default() -> EvalConfig {
        EvalConfig {
            max_bottom_cells: 100_000,
        }
    }
}

/// Lexical bindings: filter and cube variables plus the current `this`.
#[derive(Debug, Default)]
pub struct Scope<'p> {
    parent: Option<&'p Scope<'p>>,
    vars: Vec<(String, Val)>,
    this: Option<(String, ComplexIdentity)>,
}

impl<'p> Scope<'p> {
    pub fn root() -> Scope<'static> {
        Scope::default()
    }

    pub fn child<'a>(&'a self) -> Scope<'a>
    where
        'p: 'a,
    {
        Scope {
            parent: Some(self),
            vars: Vec::new(),
            this: None,
        }
    }

    pub fn bind(&mut self, name: impl Into<String>, value: Val) {
        self.vars.push((name.into(), value));
    }

    pub fn set_this(&mut self, collection: impl Into<String>, identity: ComplexIdentity) {
        self.this = Some((collection.into(), identity));
    }

    pub fn var(&self, name: &str) -> Option<&Val> {
        let mut cur = Some(self);
        while let Some(s) = cur {
            if let Some((_, v)) = s.vars.iter().rev().find(|(n, _)| n == name) {
                return Some(v);
            }
            cur = s.parent;
        }
        None
    }

    pub fn this(&self) -> Option<(&str, &ComplexIdentity)> {
        let mut cur = Some(self);
        while let Some(s) = cur {
            if let Some((c, id)) = &s.this {
                return Some((c.as_str(), id));
            }
            cur = s.parent;
        }
        None
    }
}

/// Evaluates a query text against a database with no session variables.
pub fn eval_query(db: &Database, text: &str) -> Result<Val> {
    let e = parse_query(text)?;
    Evaluator::new(db).eval(&e, &Scope::root())
}

pub struct Evaluator<'a> {
    pub db: &'a Database,
    pub vars: Option<&'a IndexMap<String, Val>>,
    pub config: EvalConfig,
}

/// A chain step target: the collection and an optional member restriction.
struct Target {
    collection: String,
    restrict: Option<ElementSet>,
}

impl<'a> Evaluator<'a> {
    pub fn new(db: &'a Database) -> Evaluator<'a> {
        Evaluator {
            db,
            vars: None,
            config: EvalConfig::default(),
        }
    }

    pub fn with_vars(mut self, vars: &'a IndexMap<String, Val>) -> Evaluator<'a> {
        self.vars = Some(vars);
        self
    }

    pub fn with_config(mut self, config: EvalConfig) -> Evaluator<'a> {
        self.config = config;
        self
    }

    fn session_var(&self, name: &str) -> Option<&Val> {
        self.vars.and_then(|v| v.get(name))
    }

    pub fn eval(&self, e: &Expr, scope: &Scope<'_>) -> Result<Val> {
        match &e.kind {
            ExprKind::Lit(l) => Ok(Val::from_literal(l)),
            ExprKind::Name(n) => self.lookup(n, scope),
            ExprKind::This => match scope.this() {
                Some((c, id)) => Ok(Val::Elem {
                    collection: c.to_string(),
                    identity: id.clone(),
                }),
                None => Err(QueryError::UnknownVariable("this".to_string())),
            },
            ExprKind::Super => match scope.this() {
                Some((c, id)) => {
                    let (pc, el) = self.db.super_of(c, id)?;
                    Ok(Val::Elem {
                        collection: pc.to_string(),
                        identity: el.identity.clone(),
                    })
                }
                None => Err(QueryError::UnknownVariable("super".to_string())),
            },
            ExprKind::Attr(inner, name) => {
                let v = self.eval(inner, scope)?;
                self.attr(&v, name)
            }
            ExprKind::Chain { source, steps } => {
                let src = self.eval(source, scope)?;
                self.chain(src, steps, scope)
            }
            ExprKind::Filter { collection, var, pred } => {
                let base = self.term_set(collection, scope)?;
                Ok(Val::Set(self.filter(&base, var.as_deref(), pred, scope)?))
            }
            ExprKind::Binary { op, lhs, rhs } => match op {
                BinOp::And | BinOp::Or => self.logic(*op == BinOp::And, lhs, rhs, scope),
                _ => {
                    let l = self.eval(lhs, scope)?;
                    let r = self.eval(rhs, scope)?;
                    arith(*op, &l, &r)
                }
            },
            ExprKind::Not(inner) => match self.eval(inner, scope)? {
                Val::Bool(b) => Ok(Val::Bool(!b)),
                Val::Null => Ok(Val::Null),
                other => Err(QueryError::TypeError(format!("NOT needs a BOOL, found {}", other.kind_name()))),
            },
            ExprKind::Cmp { op, lhs, rhs } => {
                let l = self.eval(lhs, scope)?;
                let r = self.eval(rhs, scope)?;
                compare(*op, &l, &r)
            }
            ExprKind::In { lhs, items } => {
                let l = self.eval(lhs, scope)?;
                let mut result = Val::Bool(false);
                for item in items {
                    match compare(CmpOp::Eq, &l, &Val::from_literal(item))? {
                        Val::Bool(true) => return Ok(Val::Bool(true)),
                        Val::Null => result = Val::Null,
                        _ => {}
                    }
                }
                Ok(result)
            }
            ExprKind::Agg { func, arg } => {
                let v = self.eval(arg, scope)?;
                aggregate(*func, &v)
            }
            ExprKind::Cube(c) => eval_cube(self, c, scope),
            ExprKind::Infer { source, via, target } => eval_infer(self, source, via.as_ref(), target, scope),
        }
    }

    /// Name lookup: lexical variables, then fields of `this`, then session
    /// variables, then collections.
    pub fn lookup(&self, name: &str, scope: &Scope<'_>) -> Result<Val> {
        if let Some(v) = scope.var(name) {
            return Ok(v.clone());
        }
        if let Some((c, id)) = scope.this() {
            let el = self.element(c, id)?;
            if self.db.locate_field(c, el, name).is_some() {
                return self.attr(
                    &Val::Elem {
                        collection: c.to_string(),
                        identity: id.clone(),
                    },
                    name,
                );
            }
            if name == "parent" && id.parent().is_some() {
                let (pc, pel) = self.db.super_of(c, id)?;
                return Ok(Val::Elem {
                    collection: pc.to_string(),
                    identity: pel.identity.clone(),
                });
            }
        }
        if let Some(v) = self.session_var(name) {
            return Ok(v.clone());
        }
        if self.db.has_collection(name) {
            return Ok(Val::Set(self.db.all(name)?));
        }
        Err(QueryError::UnknownVariable(name.to_string()))
    }

    fn element(&self, collection: &str, id: &ComplexIdentity) -> Result<&'a crate::store::Element> {
        self.db
            .collection(collection)?
            .get(id)
            .ok_or_else(|| {
                QueryError::Store(StoreError::ElementNotFound {
                    collection: collection.to_string(),
                    identity: id.to_string(),
                })
            })
    }

    /// Reads one field (or `super`) off an element, or off every member of
    /// a set.
    pub fn attr(&self, v: &Val, name: &str) -> Result<Val> {
        match v {
            Val::Null => Ok(Val::Null),
            Val::Elem { collection, identity } => {
                let el = self.element(collection, identity)?;
                match self.db.resolve_path(collection, el, &[name])? {
                    Resolved::Null => Ok(Val::Null),
                    Resolved::Value(v) => Val::from_value(&v),
                    Resolved::Element { collection, element } => Ok(Val::Elem {
                        collection: collection.to_string(),
                        identity: element.identity.clone(),
                    }),
                }
            }
            Val::Set(s) => {
                let mut out = Vec::with_capacity(s.len());
                for id in s.iter() {
                    out.push(self.attr(
                        &Val::Elem {
                            collection: s.collection.clone(),
                            identity: id.clone(),
                        },
                        name,
                    )?);
                }
                Ok(Val::Bag(out))
            }
            Val::Bag(items) => Ok(Val::Bag(
                items.iter().map(|i| self.attr(i, name)).collect::<Result<Vec<_>>>()?,
            )),
            other => Err(QueryError::TypeError(format!(
                "cannot read field {name} of a {}",
                other.kind_name()
            ))),
        }
    }

    /// Resolves a name used as a collection term: a set-valued variable or a
    /// collection.
    pub fn term_set(&self, name: &str, scope: &Scope<'_>) -> Result<ElementSet> {
        let v = if let Some(v) = scope.var(name) {
            v.clone()
        } else if let Some(v) = self.session_var(name) {
            v.clone()
        } else if self.db.has_collection(name) {
            return Ok(self.db.all(name)?);
        } else {
            return Err(QueryError::UnknownVariable(name.to_string()));
        };
        v.as_set()
            .ok_or_else(|| QueryError::TypeError(format!("{name} is a {}, not a set", v.kind_name())))
    }

    fn is_term_name(&self, name: &str, scope: &Scope<'_>) -> bool {
        let is_set = |v: &Val| matches!(v, Val::Set(_) | Val::Elem { .. });
        if let Some(v) = scope.var(name) {
            return is_set(v);
        }
        if let Some(v) = self.session_var(name) {
            return is_set(v);
        }
        self.db.has_collection(name)
    }

    /// Members of `base` for which `pred` holds, with `this` (and `var`)
    /// bound to each member in turn.
    pub fn filter(&self, base: &ElementSet, var: Option<&str>, pred: &Expr, scope: &Scope<'_>) -> Result<ElementSet> {
        let mut out = ElementSet::empty(base.collection.clone());
        for id in base.iter() {
            let mut inner = scope.child();
            inner.set_this(base.collection.clone(), id.clone());
            if let Some(v) = var {
                inner.bind(
                    v,
                    Val::Elem {
                        collection: base.collection.clone(),
                        identity: id.clone(),
                    },
                );
            }
            if truth(&self.eval(pred, &inner)?)? {
                out.members.insert(id.clone());
            }
        }
        Ok(out)
    }

    fn logic(&self, and: bool, lhs: &Expr, rhs: &Expr, scope: &Scope<'_>) -> Result<Val> {
        let l = self.eval(lhs, scope)?;
        if let Val::Set(a) = &l {
            return match self.eval(rhs, scope)? {
                Val::Set(b) => Ok(Val::Set(combine(a, &b, and)?)),
                other => Err(QueryError::TypeError(format!(
                    "{} combines a set with a {}",
                    if and { "AND" } else { "OR" },
                    other.kind_name()
                ))),
            };
        }
        let l = logic_operand(&l)?;
        // false AND x, true OR x
        if l == Some(!and) {
            return Ok(Val::Bool(!and));
        }
        let r = logic_operand(&self.eval(rhs, scope)?)?;
        Ok(match (l, r) {
            (_, Some(b)) if b != and => Val::Bool(b),
            (Some(_), Some(b)) => Val::Bool(b),
            _ => Val::Null,
        })
    }

    fn chain(&self, src: Val, steps: &[Step], scope: &Scope<'_>) -> Result<Val> {
        let source = match src {
            Val::Null => return Ok(Val::Null),
            other => other.as_set().ok_or_else(|| {
                QueryError::TypeError(format!("an access path starts at a set, not a {}", other.kind_name()))
            })?,
        };
        let mut path = AccessPath {
            source,
            steps: Vec::new(),
        };
        let mut current = path.source.collection.clone();
        let mut pending: Vec<(Dir, PathDim)> = Vec::new();
        for step in steps {
            let term = match &step.item {
                StepItem::Super => {
                    pending.push((step.dir, PathDim::Super));
                    continue;
                }
                StepItem::Name(n) if !self.is_term_name(n, scope) => {
                    pending.push((step.dir, PathDim::Named(n.clone())));
                    continue;
                }
                StepItem::Name(n) => {
                    let set = self.term_set(n, scope)?;
                    let restrict = (!self.db.has_collection(n) || scope.var(n).is_some() || self.session_var(n).is_some())
                        .then(|| set.clone());
                    Target {
                        collection: set.collection,
                        restrict,
                    }
                }
                StepItem::Term(t) => match self.eval(t, scope)? {
                    Val::Set(s) => Target {
                        collection: s.collection.clone(),
                        restrict: Some(s),
                    },
                    other => {
                        return Err(QueryError::TypeError(format!(
                            "path step must be a collection, found {}",
                            other.kind_name()
                        )))
                    }
                },
            };
            let dims = std::mem::take(&mut pending);
            self.plan_group(&mut path.steps, &mut current, step.dir, dims, Some(term))?;
        }
        if !pending.is_empty() {
            let dir = pending[0].0;
            self.plan_group(&mut path.steps, &mut current, dir, pending, None)?;
        }
        Ok(Val::Set(eval_access_path(self.db, &path)?))
    }

    /// Appends the steps for a run of dimension names ending at an optional
    /// collection term.
    fn plan_group(
        &self,
        out: &mut Vec<PathStep>,
        current: &mut String,
        dir: Dir,
        dims: Vec<(Dir, PathDim)>,
        term: Option<Target>,
    ) -> Result<()> {
        if dims.iter().any(|(d, _)| *d != dir) {
            return Err(QueryError::TypeError(
                "path changes direction between a dimension and its collection".to_string(),
            ));
        }
        let mut dims: Vec<PathDim> = dims.into_iter().map(|(_, d)| d).collect();
        let (term_coll, mut restrict) = match term {
            Some(t) => (Some(t.collection), t.restrict),
            None => (None, None),
        };
        if dims.is_empty() {
            dims.push(PathDim::Inferred);
        }
        let m = dims.len();
        match dir {
            Dir::Up => {
                for (i, d) in dims.into_iter().enumerate() {
                    let last = i + 1 == m;
                    let target = match (&term_coll, last) {
                        (Some(t), true) => t.clone(),
                        _ => greater_of(self.db, current, &d)?,
                    };
                    *current = target.clone();
                    out.push(PathStep {
                        dir,
                        dim: d,
                        target,
                        restrict: if last { restrict.take() } else { None },
                    });
                }
            }
            Dir::Down => {
                let Some(lowest) = term_coll else {
                    return Err(QueryError::TypeError(
                        "a de-projection needs the lesser collection to land in".to_string(),
                    ));
                };
                // Intermediate collections are found right to left through bindings.
                let mut colls = vec![String::new(); m];
                colls[m - 1] = lowest;
                for i in (1..m).rev() {
                    colls[i - 1] = greater_of(self.db, &colls[i], &dims[i])?;
                }
                for (i, (d, target)) in dims.into_iter().zip(colls).enumerate() {
                    *current = target.clone();
                    out.push(PathStep {
                        dir,
                        dim: d,
                        target,
                        restrict: if i + 1 == m { restrict.take() } else { None },
                    });
                }
            }
        }
        Ok(())
    }
}

/// Whether a filter condition holds; NULL counts as not satisfied.
pub fn truth(v: &Val) -> Result<bool> {
    match v {
        Val::Bool(b) => Ok(*b),
        Val::Null => Ok(false),
        other => Err(QueryError::TypeError(format!(
            "a condition must be BOOL, found {}",
            other.kind_name()
        ))),
    }
}

fn logic_operand(v: &Val) -> Result<Option<bool>> {
    match v {
        Val::Bool(b) => Ok(Some(*b)),
        Val::Null => Ok(None),
        other => Err(QueryError::TypeError(format!(
            "AND/OR needs BOOL operands or two sets, found {}",
            other.kind_name()
        ))),
    }
}

fn number(v: &Val) -> Option<f64> {
    match v {
        Val::Int(i) => Some(*i as f64),
        Val::Double(d) => Some(*d),
        _ => None,
    }
}

/// First primitive identity value of an element, following references.
fn leading_primitive(id: &ComplexIdentity) -> Val {
    let mut cur = id.clone();
    // identities are finite trees, so this terminates
    loop {
        match cur.leading_value() {
            Some(Value::Ref(r)) => cur = r.clone(),
            Some(v) => return Val::from_value(v).unwrap_or(Val::Null),
            None => return Val::Null,
        }
    }
}

pub fn compare(op: CmpOp, l: &Val, r: &Val) -> Result<Val> {
    use Val::*;
    let eq_only = |eq: bool| -> Result<Val> {
        match op {
            CmpOp::Eq => Ok(Bool(eq)),
            CmpOp::Ne => Ok(Bool(!eq)),
            _ => Err(QueryError::TypeError(format!(
                "{} cannot order a {} and a {}",
                op.symbol(),
                l.kind_name(),
                r.kind_name()
            ))),
        }
    };
    match (l, r) {
        (Null, _) | (_, Null) => Ok(Null),
        (Set(a), Set(b)) => eq_only(a == b),
        (Set(s), Elem { identity, collection }) | (Elem { identity, collection }, Set(s)) => {
            eq_only(&s.collection == collection && s.contains(identity))
        }
        (Set(s), other) if number(other).is_some() => compare(op, &Int(s.len() as i64), other),
        (other, Set(s)) if number(other).is_some() => compare(op, other, &Int(s.len() as i64)),
        (Elem { identity: a, .. }, Elem { identity: b, .. }) => eq_only(a == b),
        (Elem { identity, .. }, other) => compare(op, &leading_primitive(identity), other),
        (other, Elem { identity, .. }) => compare(op, other, &leading_primitive(identity)),
        (Str(a), Str(b)) => Ok(Bool(match op {
            CmpOp::StartsWith => a.starts_with(b.as_str()),
            _ => ordering_holds(op, a.cmp(b)),
        })),
        (Bool(a), Bool(b)) if op != CmpOp::StartsWith => Ok(Bool(ordering_holds(op, a.cmp(b)))),
        (Int(a), Int(b)) if op != CmpOp::StartsWith => Ok(Bool(ordering_holds(op, a.cmp(b)))),
        (a, b) if op != CmpOp::StartsWith && number(a).is_some() && number(b).is_some() => {
            let (x, y) = (number(a).unwrap(), number(b).unwrap());
            Ok(match x.partial_cmp(&y) {
                Some(o) => Bool(ordering_holds(op, o)),
                None => Null,
            })
        }
        _ => Err(QueryError::TypeError(format!(
            "cannot compare a {} with a {} using {}",
            l.kind_name(),
            r.kind_name(),
            op.symbol()
        ))),
    }
}

fn ordering_holds(op: CmpOp, o: Ordering) -> bool {
    match op {
        CmpOp::Eq => o == Ordering::Equal,
        CmpOp::Ne => o != Ordering::Equal,
        CmpOp::Lt => o == Ordering::Less,
        CmpOp::Le => o != Ordering::Greater,
        CmpOp::Gt => o == Ordering::Greater,
        CmpOp::Ge => o != Ordering::Less,
        CmpOp::StartsWith => false,
    }
}

pub fn arith(op: BinOp, l: &Val, r: &Val) -> Result<Val> {
    let count = |v: &Val| match v {
        Val::Set(s) => Val::Int(s.len() as i64),
        other => other.clone(),
    };
    let (l, r) = (count(l), count(r));
    if matches!(l, Val::Null) || matches!(r, Val::Null) {
        return Ok(Val::Null);
    }
    if let (Val::Int(a), Val::Int(b)) = (&l, &r) {
        let v = match op {
            BinOp::Add => a.checked_add(*b),
            BinOp::Sub => a.checked_sub(*b),
            BinOp::Mul => a.checked_mul(*b),
            // integer division promotes to DOUBLE
            BinOp::Div => {
                return Ok(if *b == 0 {
                    Val::Null
                } else {
                    Val::Double(*a as f64 / *b as f64)
                })
            }
            _ => unreachable!("logic operators are handled separately"),
        };
        return v
            .map(Val::Int)
            .ok_or_else(|| QueryError::TypeError(format!("integer overflow in {a} {} {b}", op.symbol())));
    }
    match (number(&l), number(&r)) {
        (Some(a), Some(b)) => Ok(match op {
            BinOp::Add => Val::Double(a + b),
            BinOp::Sub => Val::Double(a - b),
            BinOp::Mul => Val::Double(a * b),
            BinOp::Div if b == 0.0 => Val::Null,
            BinOp::Div => Val::Double(a / b),
            _ => unreachable!("logic operators are handled separately"),
        }),
        _ => Err(QueryError::TypeError(format!(
            "{} needs numbers, found {} and {}",
            op.symbol(),
            l.kind_name(),
            r.kind_name()
        ))),
    }
}

pub fn aggregate(func: AggFunc, v: &Val) -> Result<Val> {
    match func {
        AggFunc::Count => match v {
            Val::Set(s) => Ok(Val::Int(s.len() as i64)),
            Val::Bag(items) => Ok(Val::Int(items.iter().filter(|i| !matches!(i, Val::Null)).count() as i64)),
            Val::Elem { .. } => Ok(Val::Int(1)),
            Val::Null => Ok(Val::Int(0)),
            other => Err(QueryError::TypeError(format!("COUNT of a {}", other.kind_name()))),
        },
        AggFunc::Sum => {
            let mut acc = NumAcc::default();
            let items: &[Val] = match v {
                Val::Bag(items) => items,
                Val::Null => &[],
                Val::Int(_) | Val::Double(_) => std::slice::from_ref(v),
                other => {
                    return Err(QueryError::TypeError(format!(
                        "SUM needs numeric values, found a {}",
                        other.kind_name()
                    )))
                }
            };
            for item in items {
                let value = match item {
                    Val::Null => Value::Null,
                    Val::Int(i) => Value::Int(*i),
                    Val::Double(d) => Value::Double(*d),
                    other => {
                        return Err(QueryError::TypeError(format!(
                            "SUM needs numeric values, found a {}",
                            other.kind_name()
                        )))
                    }
                };
                acc.add(&value)?;
            }
            Ok(match acc.finish() {
                Value::Int(i) => Val::Int(i),
                Value::Double(d) => Val::Double(d),
                _ => Val::Null,
            })
        }
    }
}
