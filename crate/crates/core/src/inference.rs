//! Inference: constraint propagation from source selections down to a
//! common lesser collection and back up to a target.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::path::greater_of;
use crate::algebra::{deproject, project, truth, DimRef, Evaluator, PathDim, QueryError, Result, Scope, Val};
use crate::coql::ast::{CmpOp, Expr, ExprKind, StepItem, Via};
use crate::store::{Database, ElementSet};
use crate::value::ComplexIdentity;

pub fn eval_infer(
    ev: &Evaluator<'_>,
    source: &Expr,
    via: Option<&Via>,
    target: &Expr,
    scope: &Scope<'_>,
) -> Result<Val> {
    let mut sources = Vec::new();
    for c in source.conjuncts() {
        let v = ev.eval(c, scope)?;
        sources.push(v.as_set().ok_or_else(|| {
            QueryError::TypeError(format!("inference source is a {}, not a set", v.kind_name()))
        })?);
    }
    let (target_coll, restrict) = match &target.kind {
        ExprKind::Name(n) => {
            let set = ev.term_set(n, scope)?;
            let restrict = (!ev.db.has_collection(n) || scope.var(n).is_some()).then(|| set.clone());
            (set.collection, restrict)
        }
        _ => match ev.eval(target, scope)? {
            Val::Set(s) => (s.collection.clone(), Some(s)),
            other => {
                return Err(QueryError::TypeError(format!(
                    "inference target is a {}, not a collection",
                    other.kind_name()
                )))
            }
        },
    };
    let mut out = match via {
        None => infer(ev.db, &sources, &target_coll)?,
        Some(Via::Collection { name, var, filter }) => {
            let base = ev.term_set(name, scope)?;
            let x = match filter {
                Some(f) => ev.filter(&base, var.as_deref(), f, scope)?,
                None => base,
            };
            infer_via(ev.db, &sources, &x, &target_coll)?
        }
        Some(Via::Bottom { filter }) => infer_bottom(ev, &sources, filter.as_deref(), &target_coll, scope)?,
    };
    if let Some(r) = restrict {
        out.members.retain(|m| r.contains(m));
    }
    Ok(Val::Set(out))
}

/// The collection constraints propagate through: the one collection of the
/// unique maximal common lesser concept of all sources and the target.
pub fn propagation_collection(db: &Database, sources: &[ElementSet], target: &str) -> Result<String> {
    let mut concepts: Vec<&str> = Vec::new();
    let mut colls: Vec<&str> = vec![target];
    colls.extend(sources.iter().map(|s| s.collection.as_str()));
    for c in &colls {
        let concept = db.collection(c)?.concept.as_str();
        if !concepts.contains(&concept) {
            concepts.push(concept);
        }
    }
    let common = db.schema().common_lesser(&concepts)?;
    let concept = match common.as_slice() {
        [] => {
            return Err(QueryError::NoPropagationPath(format!(
                "{} have no common lesser concept",
                concepts.join(", ")
            )))
        }
        [one] => one,
        _ => return Err(QueryError::AmbiguousPropagation(common)),
    };
    // a participating collection of that concept wins over any other
    if let Some(c) = colls.iter().find(|c| db.concept_of(c).is_ok_and(|k| &k.name == concept)) {
        return Ok(c.to_string());
    }
    let found: Vec<String> = db.collections_of_concept(concept).map(|c| c.name.clone()).collect();
    match found.len() {
        0 => Err(QueryError::NoPropagationPath(format!("no collection holds {concept}"))),
        1 => Ok(found.into_iter().next().expect("one")),
        _ => Err(QueryError::AmbiguousBinding {
            concept: concept.clone(),
            collections: found,
        }),
    }
}

/// Collection-level dimension paths from `lesser` up to `greater`: each
/// entry pairs the dimension names with the collections visited, starting
/// at `lesser` and ending at the binding the last dimension points to.
fn collection_paths(db: &Database, lesser: &str, greater: &str) -> Result<Vec<(Vec<String>, Vec<String>)>> {
    let lc = db.concept_of(lesser)?.name.clone();
    let gc = db.concept_of(greater)?.name.clone();
    let mut out = Vec::new();
    'paths: for dims in db.schema().dimension_paths(&lc, &gc)? {
        let mut colls = vec![lesser.to_string()];
        for d in &dims {
            match greater_of(db, colls.last().expect("non-empty"), &PathDim::Named(d.clone())) {
                Ok(c) => colls.push(c),
                Err(_) => continue 'paths,
            }
        }
        let end = colls.last().expect("non-empty");
        let fits = if dims.is_empty() {
            end == greater
        } else {
            db.is_under(greater, end)
        };
        if fits {
            out.push((dims, colls));
        }
    }
    Ok(out)
}

/// Union over all dimension paths of the chained de-projection of `set`
/// into `lesser`; `None` when no path connects them.
fn down_to(db: &Database, set: &ElementSet, lesser: &str) -> Result<Option<ElementSet>> {
    let paths = collection_paths(db, lesser, &set.collection)?;
    if paths.is_empty() {
        return Ok(None);
    }
    let mut out = ElementSet::empty(lesser);
    for (dims, colls) in paths {
        let mut cur = set.clone();
        for t in (0..dims.len()).rev() {
            cur = deproject(db, &cur, DimRef::Named(&dims[t]), &colls[t])?;
        }
        out.members.extend(cur.members);
    }
    Ok(Some(out))
}

/// Union over all dimension paths of the chained projection of `set` up to
/// `target`; `None` when no path connects them.
fn up_to(db: &Database, set: &ElementSet, target: &str) -> Result<Option<ElementSet>> {
    let paths = collection_paths(db, &set.collection, target)?;
    if paths.is_empty() {
        return Ok(None);
    }
    let mut out = ElementSet::empty(target);
    for (dims, colls) in paths {
        let mut cur = set.clone();
        for (t, d) in dims.iter().enumerate() {
            let to = if t + 1 == dims.len() { target } else { &colls[t + 1] };
            cur = project(db, &cur, DimRef::Named(d), to)?;
        }
        out.members.extend(cur.members);
    }
    Ok(Some(out))
}

fn no_path(from: &str, to: &str) -> QueryError {
    QueryError::NoPropagationPath(format!("no dimension path between {from} and {to}"))
}

fn propagate(db: &Database, sources: &[ElementSet], through: &ElementSet, target: &str) -> Result<ElementSet> {
    let mut r = through.clone();
    for s in sources {
        let down = down_to(db, s, &through.collection)?.ok_or_else(|| no_path(&s.collection, &through.collection))?;
        r.members.retain(|m| down.contains(m));
    }
    up_to(db, &r, target)?.ok_or_else(|| no_path(&through.collection, target))
}

/// Plain inference: propagate through the automatically chosen collection.
pub fn infer(db: &Database, sources: &[ElementSet], target: &str) -> Result<ElementSet> {
    let through = propagation_collection(db, sources, target)?;
    propagate(db, sources, &db.all(&through)?, target)
}

/// Inference through an explicitly chosen (and possibly filtered) set.
pub fn infer_via(db: &Database, sources: &[ElementSet], via: &ElementSet, target: &str) -> Result<ElementSet> {
    propagate(db, sources, via, target)
}

fn collect_names(e: &Expr, out: &mut Vec<String>) {
    match &e.kind {
        ExprKind::Name(n) => out.push(n.clone()),
        ExprKind::Attr(inner, _) | ExprKind::Not(inner) => collect_names(inner, out),
        ExprKind::Chain { source, steps } => {
            collect_names(source, out);
            for s in steps {
                if let StepItem::Term(t) = &s.item {
                    collect_names(t, out);
                }
            }
        }
        ExprKind::Filter { pred, .. } => collect_names(pred, out),
        ExprKind::Binary { lhs, rhs, .. } | ExprKind::Cmp { lhs, rhs, .. } => {
            collect_names(lhs, out);
            collect_names(rhs, out);
        }
        ExprKind::In { lhs, .. } => collect_names(lhs, out),
        ExprKind::Agg { arg, .. } => collect_names(arg, out),
        ExprKind::Infer { source, target, .. } => {
            collect_names(source, out);
            collect_names(target, out);
        }
        ExprKind::Lit(_) | ExprKind::This | ExprKind::Super | ExprKind::Cube(_) => {}
    }
}

/// One component of the bottom concept: a collection plus the names the
/// constraint uses for it.
struct Component {
    collection: String,
    aliases: Vec<String>,
    members: Vec<ComplexIdentity>,
}

/// Hashable form of a join key. Elements and primitives are kept apart;
/// mixed comparisons fall back to evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Num(u64),
    Str(String),
    Bool(bool),
    Elem(ComplexIdentity),
}

fn key_of(v: &Val) -> Option<Key> {
    match v {
        Val::Int(i) => Some(Key::Num((*i as f64).to_bits())),
        Val::Double(d) if d.is_nan() => None,
        Val::Double(d) => Some(Key::Num((d + 0.0).to_bits())),
        Val::Str(s) => Some(Key::Str(s.clone())),
        Val::Bool(b) => Some(Key::Bool(*b)),
        Val::Elem { identity, .. } => Some(Key::Elem(identity.clone())),
        _ => None,
    }
}

/// An equality conjunct between two components, with per-member key values.
struct Join {
    earlier: usize,
    later: usize,
    earlier_keys: Vec<Option<Key>>,
    index: HashMap<Key, Vec<usize>>,
}

/// Inference through the formal bottom concept whose components are the
/// collections a constraint mentions (or the sources and target when
/// there is no constraint). Each source restricts every component it is
/// reachable from; the target is reached from every component that leads
/// to it. Without a constraint the extent is the full product of the
/// restricted components and is never enumerated. With one, satisfying
/// combinations are found by hash joins on equality conjuncts and counted
/// against the cell budget.
pub fn infer_bottom(
    ev: &Evaluator<'_>,
    sources: &[ElementSet],
    constraint: Option<&Expr>,
    target: &str,
    scope: &Scope<'_>,
) -> Result<ElementSet> {
    let db = ev.db;
    let mut comps: Vec<Component> = Vec::new();
    let add = |coll: &str, alias: &str, comps: &mut Vec<Component>| -> Result<()> {
        match comps.iter_mut().find(|c| c.collection == coll) {
            Some(c) => {
                if !c.aliases.iter().any(|a| a == alias) {
                    c.aliases.push(alias.to_string());
                }
            }
            None => comps.push(Component {
                collection: coll.to_string(),
                aliases: if alias == coll {
                    vec![coll.to_string()]
                } else {
                    vec![coll.to_string(), alias.to_string()]
                },
                members: db.all(coll)?.members.into_iter().collect(),
            }),
        }
        Ok(())
    };
    match constraint {
        Some(c) => {
            let mut names = Vec::new();
            collect_names(c, &mut names);
            for n in names {
                if scope.var(&n).is_some() {
                    continue;
                }
                if let Some(coll) = db.collections().find(|k| k.name.eq_ignore_ascii_case(&n)) {
                    let coll = coll.name.clone();
                    add(&coll, &n, &mut comps)?;
                }
            }
            if comps.is_empty() {
                return Err(QueryError::ConstraintTypeError(
                    "the bottom constraint names no collection".to_string(),
                ));
            }
        }
        None => {
            for s in sources {
                add(&s.collection, &s.collection, &mut comps)?;
            }
            add(target, target, &mut comps)?;
        }
    }

    for s in sources {
        let mut reached = false;
        for comp in comps.iter_mut() {
            if let Some(down) = down_to(db, s, &comp.collection)? {
                reached = true;
                comp.members.retain(|m| down.contains(m));
            }
        }
        if !reached {
            return Err(no_path(&s.collection, "the bottom components"));
        }
    }
    let leads: Vec<usize> = (0..comps.len())
        .filter(|&i| {
            let c = db.concept_of(&comps[i].collection).map(|c| c.name.clone());
            let t = db.concept_of(target).map(|c| c.name.clone());
            matches!((c, t), (Ok(c), Ok(t)) if db.schema().reaches(&c, &t))
        })
        .collect();
    if leads.is_empty() {
        return Err(no_path("the bottom components", target));
    }

    let mut used: Vec<BTreeSet<ComplexIdentity>> = vec![BTreeSet::new(); comps.len()];
    match constraint {
        None => {
            if comps.iter().all(|c| !c.members.is_empty()) {
                for &k in &leads {
                    used[k] = comps[k].members.iter().cloned().collect();
                }
            }
        }
        Some(c) => enumerate(ev, &comps, c, scope, &mut used)?,
    }

    let mut out = ElementSet::empty(target);
    for &k in &leads {
        let set = ElementSet::new(comps[k].collection.clone(), std::mem::take(&mut used[k]));
        if let Some(up) = up_to(db, &set, target)? {
            out.members.extend(up.members);
        }
    }
    Ok(out)
}

fn bind_component(scope: &mut Scope<'_>, comp: &Component, id: &ComplexIdentity) {
    for a in &comp.aliases {
        scope.bind(
            a.clone(),
            Val::Elem {
                collection: comp.collection.clone(),
                identity: id.clone(),
            },
        );
    }
}

fn component_of(comps: &[Component], name: &str) -> Option<usize> {
    comps.iter().position(|c| c.aliases.iter().any(|a| a == name))
}

fn components_in(comps: &[Component], e: &Expr) -> BTreeSet<usize> {
    let mut names = Vec::new();
    collect_names(e, &mut names);
    names.iter().filter_map(|n| component_of(comps, n)).collect()
}

fn enumerate(
    ev: &Evaluator<'_>,
    comps: &[Component],
    constraint: &Expr,
    scope: &Scope<'_>,
    used: &mut [BTreeSet<ComplexIdentity>],
) -> Result<()> {
    let n = comps.len();
    let eval_one = |e: &Expr, i: usize, m: usize| -> Result<Val> {
        let mut s = scope.child();
        bind_component(&mut s, &comps[i], &comps[i].members[m]);
        ev.eval(e, &s).map_err(|e| match e {
            QueryError::TypeError(msg) => QueryError::ConstraintTypeError(msg),
            other => other,
        })
    };
    // each conjunct is checked once all components it mentions are assigned
    let mut checks: Vec<Vec<&Expr>> = vec![Vec::new(); n];
    let mut joins: Vec<Join> = Vec::new();
    for c in constraint.conjuncts() {
        let comps_used = components_in(comps, c);
        let last = comps_used.iter().next_back().copied().unwrap_or(0);
        if let ExprKind::Cmp {
            op: CmpOp::Eq,
            lhs,
            rhs,
        } = &c.kind
        {
            let (l, r) = (components_in(comps, lhs), components_in(comps, rhs));
            if l.len() == 1 && r.len() == 1 && l != r {
                let (a, b) = (*l.iter().next().unwrap(), *r.iter().next().unwrap());
                let (ea, eb) = if a < b { (lhs, rhs) } else { (rhs, lhs) };
                let (earlier, later) = (a.min(b), a.max(b));
                let mut earlier_keys = Vec::with_capacity(comps[earlier].members.len());
                for m in 0..comps[earlier].members.len() {
                    earlier_keys.push(key_of(&eval_one(ea, earlier, m)?));
                }
                let mut index: HashMap<Key, Vec<usize>> = HashMap::new();
                for m in 0..comps[later].members.len() {
                    if let Some(k) = key_of(&eval_one(eb, later, m)?) {
                        index.entry(k).or_default().push(m);
                    }
                }
                let kinds = |it: &mut dyn Iterator<Item = &Key>| -> (bool, bool) {
                    let mut e = false;
                    let mut p = false;
                    for k in it {
                        if matches!(k, Key::Elem(_)) {
                            e = true;
                        } else {
                            p = true;
                        }
                    }
                    (e, p)
                };
                let (ee, ep) = kinds(&mut earlier_keys.iter().flatten());
                let (le, lp) = kinds(&mut index.keys());
                // an element compared with a primitive uses its leading value,
                // which hashing would miss
                if !((ee || le) && (ep || lp)) {
                    joins.push(Join {
                        earlier,
                        later,
                        earlier_keys,
                        index,
                    });
                }
            }
        }
        checks[last].push(c);
    }

    let budget = ev.config.max_bottom_cells;
    let mut found = 0usize;
    let mut assign: Vec<usize> = Vec::with_capacity(n);
    search(ev, comps, scope, &checks, &joins, &mut assign, &mut found, budget, used)
}

#[allow(clippy::too_many_arguments)]
fn search(
    ev: &Evaluator<'_>,
    comps: &[Component],
    scope: &Scope<'_>,
    checks: &[Vec<&Expr>],
    joins: &[Join],
    assign: &mut Vec<usize>,
    found: &mut usize,
    budget: usize,
    used: &mut [BTreeSet<ComplexIdentity>],
) -> Result<()> {
    let i = assign.len();
    if i == comps.len() {
        *found += 1;
        if *found > budget {
            return Err(QueryError::BudgetExceeded { budget });
        }
        for (j, &m) in assign.iter().enumerate() {
            used[j].insert(comps[j].members[m].clone());
        }
        return Ok(());
    }
    let join = joins.iter().find(|j| j.later == i);
    let candidates: Vec<usize> = match join {
        Some(j) => match &j.earlier_keys[assign[j.earlier]] {
            Some(k) => j.index.get(k).cloned().unwrap_or_default(),
            None => Vec::new(),
        },
        None => (0..comps[i].members.len()).collect(),
    };
    for m in candidates {
        assign.push(m);
        let ok = if checks[i].is_empty() {
            true
        } else {
            let mut s = scope.child();
            for (j, &mm) in assign.iter().enumerate() {
                bind_component(&mut s, &comps[j], &comps[j].members[mm]);
            }
            let mut ok = true;
            for c in &checks[i] {
                let v = ev.eval(c, &s).map_err(|e| match e {
                    QueryError::TypeError(msg) => QueryError::ConstraintTypeError(msg),
                    other => other,
                })?;
                if !truth(&v).map_err(|e| QueryError::ConstraintTypeError(e.to_string()))? {
                    ok = false;
                    break;
                }
            }
            ok
        };
        if ok {
            search(ev, comps, scope, checks, joins, assign, found, budget, used)?;
        }
        assign.pop();
    }
    Ok(())
}
