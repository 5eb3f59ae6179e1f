//! Multidimensional grouping: `CUBE` expressions and the fixed OLAP
//! procedure (levels, per-cell groups, measures).

use std::collections::HashSet;

use crate::algebra::path::greater_of;
use crate::algebra::{
    deproject, project, sum_path, truth, DimRef, Evaluator, PathDim, QueryError, Result, Scope, Val,
};
use crate::coql::ast::{CubeExpr, Expr, ExprKind};
use crate::coql::render_expr;
use crate::store::{Database, ElementSet};
use crate::value::{ComplexIdentity, Value};

/// A table of rows in canonical cell order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CubeResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl CubeResult {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

fn source_name(term: &Expr, var: &Option<String>) -> Result<String> {
    if let Some(v) = var {
        return Ok(v.clone());
    }
    match &term.kind {
        ExprKind::Name(n) => Ok(n.clone()),
        ExprKind::Filter { collection, var, .. } => Ok(var.clone().unwrap_or_else(|| collection.clone())),
        _ => Err(QueryError::TypeError(format!(
            "cube source {} needs a variable name",
            render_expr(term)
        ))),
    }
}

pub fn eval_cube(ev: &Evaluator<'_>, cube: &CubeExpr, scope: &Scope<'_>) -> Result<Val> {
    let mut names: Vec<String> = Vec::new();
    let mut sets: Vec<ElementSet> = Vec::new();
    for s in &cube.sources {
        let name = source_name(&s.term, &s.var)?;
        let v = ev.eval(&s.term, scope)?;
        let set = v.as_set().ok_or_else(|| {
            QueryError::TypeError(format!("cube source {name} is a {}, not a set", v.kind_name()))
        })?;
        names.push(name);
        sets.push(set);
    }
    let mut seen: HashSet<&str> = HashSet::new();
    for n in names.iter().chain(cube.body.iter().map(|(n, _)| n)) {
        if !seen.insert(n) {
            return Err(QueryError::TypeError(format!("variable {n} is defined twice in one CUBE")));
        }
    }
    let conditions: Vec<&Expr> = cube.source_filter.iter().chain(cube.where_.iter()).collect();

    if sets.len() == 1 && cube.body.is_empty() && cube.ret.is_none() {
        let set = &sets[0];
        let mut out = ElementSet::empty(set.collection.clone());
        for id in set.iter() {
            let cell = cell_scope(scope, &names, &sets, std::slice::from_ref(id));
            if holds(ev, &conditions, &cell)? {
                out.members.insert(id.clone());
            }
        }
        return Ok(Val::Set(out));
    }

    let returns: Vec<(String, Expr)> = match &cube.ret {
        Some(items) => items
            .iter()
            .map(|it| {
                let col = match (&it.name, &it.expr.kind) {
                    (Some(n), _) => n.clone(),
                    (None, ExprKind::Name(n)) => n.clone(),
                    (None, _) => render_expr(&it.expr),
                };
                (col, it.expr.clone())
            })
            .collect(),
        None => names
            .iter()
            .map(|n| (n.clone(), Expr::at0(ExprKind::Name(n.clone()))))
            .collect(),
    };
    let mut result = CubeResult {
        columns: returns.iter().map(|(c, _)| c.clone()).collect(),
        rows: Vec::new(),
    };
    let members: Vec<Vec<ComplexIdentity>> = sets.iter().map(|s| s.iter().cloned().collect()).collect();
    for cell in Odometer::new(&members) {
        let mut cs = cell_scope(scope, &names, &sets, &cell);
        if !holds(ev, &conditions, &cs)? {
            continue;
        }
        for (name, e) in &cube.body {
            let v = ev.eval(e, &cs)?;
            cs.bind(name.clone(), v);
        }
        let mut row = Vec::with_capacity(returns.len());
        for (col, e) in &returns {
            let v = ev.eval(e, &cs)?;
            row.push(v.to_value().map_err(|_| {
                QueryError::TypeError(format!(
                    "RETURN column {col} is a {}; only single values can be returned",
                    v.kind_name()
                ))
            })?);
        }
        result.rows.push(row);
    }
    Ok(Val::Table(result))
}

fn cell_scope<'p>(parent: &'p Scope<'p>, names: &[String], sets: &[ElementSet], cell: &[ComplexIdentity]) -> Scope<'p> {
    let mut s = parent.child();
    for ((n, set), id) in names.iter().zip(sets).zip(cell) {
        s.bind(
            n.clone(),
            Val::Elem {
                collection: set.collection.clone(),
                identity: id.clone(),
            },
        );
    }
    if sets.len() == 1 {
        s.set_this(sets[0].collection.clone(), cell[0].clone());
    }
    s
}

fn holds(ev: &Evaluator<'_>, conditions: &[&Expr], scope: &Scope<'_>) -> Result<bool> {
    for c in conditions {
        if !truth(&ev.eval(c, scope)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cartesian product in lexicographic order, last position fastest.
pub(crate) struct Odometer<'a, T> {
    lists: &'a [Vec<T>],
    idx: Vec<usize>,
    done: bool,
}

impl<'a, T> Odometer<'a, T> {
    pub(crate) fn new(lists: &'a [Vec<T>]) -> Odometer<'a, T> {
        Odometer {
            lists,
            idx: vec![0; lists.len()],
            done: lists.is_empty() || lists.iter().any(|l| l.is_empty()),
        }
    }
}

impl<T: Clone> Iterator for Odometer<'_, T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        let item = self.idx.iter().zip(self.lists).map(|(&i, l)| l[i].clone()).collect();
        let mut k = self.lists.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            if self.idx[k] < self.lists[k].len() {
                break;
            }
            self.idx[k] = 0;
        }
        Some(item)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    /// Sum of a primitive reached by an attribute path from each fact.
    Sum(Vec<String>),
    Count,
    /// Number of distinct greater elements the group projects to along a dimension.
    CountProject(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub collection: String,
    pub filter: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlapSpec {
    pub fact: String,
    /// One upward dimension path per axis, starting at the fact collection.
    pub dimension_paths: Vec<Vec<String>>,
    /// One level per path; it must be a collection on that path.
    pub levels: Vec<Level>,
    pub fact_filter: Option<Expr>,
    pub measures: Vec<(String, Measure)>,
}

/// Runs the OLAP procedure: filter levels and facts, form one cell per
/// combination of level elements, group the facts that de-project to the
/// cell along every path, and evaluate the measures per group.
pub fn olap_run(db: &Database, spec: &OlapSpec) -> Result<CubeResult> {
    if spec.dimension_paths.len() != spec.levels.len() {
        return Err(QueryError::TypeError(format!(
            "{} dimension paths but {} levels",
            spec.dimension_paths.len(),
            spec.levels.len()
        )));
    }
    let ev = Evaluator::new(db);
    let root = Scope::root();
    // collections along each path; position j is reached after j dimensions
    let mut axes: Vec<(Vec<String>, usize)> = Vec::new();
    for (path, level) in spec.dimension_paths.iter().zip(&spec.levels) {
        let mut colls = vec![spec.fact.clone()];
        for d in path {
            let next = greater_of(db, colls.last().expect("non-empty"), &PathDim::Named(d.clone()))?;
            colls.push(next);
        }
        let pos = colls
            .iter()
            .skip(1)
            .position(|c| *c == level.collection)
            .map(|p| p + 1)
            .ok_or_else(|| QueryError::LevelNotOnPath {
                level: level.collection.clone(),
                path: format!("{} -> {}", spec.fact, path.join(" -> ")),
            })?;
        axes.push((colls, pos));
    }
    let mut level_members: Vec<Vec<ComplexIdentity>> = Vec::new();
    for level in &spec.levels {
        let all = db.all(&level.collection)?;
        let set = match &level.filter {
            Some(f) => ev.filter(&all, None, f, &root)?,
            None => all,
        };
        level_members.push(set.members.into_iter().collect());
    }
    let facts = {
        let all = db.all(&spec.fact)?;
        match &spec.fact_filter {
            Some(f) => ev.filter(&all, None, f, &root)?,
            None => all,
        }
    };
    let mut result = CubeResult {
        columns: spec
            .levels
            .iter()
            .map(|l| l.collection.clone())
            .chain(spec.measures.iter().map(|(n, _)| n.clone()))
            .collect(),
        rows: Vec::new(),
    };
    for cell in Odometer::new(&level_members) {
        let mut group = facts.clone();
        for (((colls, pos), path), id) in axes.iter().zip(&spec.dimension_paths).zip(&cell) {
            let mut set = ElementSet::new(colls[*pos].clone(), [id.clone()]);
            for t in (0..*pos).rev() {
                set = deproject(db, &set, DimRef::Named(&path[t]), &colls[t])?;
            }
            group.members.retain(|m| set.contains(m));
        }
        let mut row: Vec<Value> = cell.iter().cloned().map(Value::Ref).collect();
        for (_, m) in &spec.measures {
            row.push(match m {
                Measure::Count => Value::Int(group.len() as i64),
                Measure::Sum(path) => {
                    let p: Vec<&str> = path.iter().map(String::as_str).collect();
                    sum_path(db, &group, &p)?
                }
                Measure::CountProject(d) => {
                    let target = greater_of(db, &spec.fact, &PathDim::Named(d.clone()))?;
                    Value::Int(project(db, &group, DimRef::Named(d), &target)?.len() as i64)
                }
            });
        }
        result.rows.push(row);
    }
    Ok(result)
}
