//! Set-level operations over element sets: projection, de-projection,
//! combination and aggregation, plus dimension inference for omitted names.

pub mod expr;
pub mod path;

use thiserror::Error;

use crate::coql::ParseError;
use crate::schema::{Domain, SchemaError};
use crate::store::{Database, ElementSet, Resolved, StoreError};
use crate::value::Value;

pub use expr::{eval_query, truth, EvalConfig, Evaluator, Scope, Val};
pub use path::{eval_access_path, AccessPath, PathDim, PathStep};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("type error: {0}")]
    TypeError(String),
    #[error("unknown name {0}")]
    UnknownVariable(String),
    #[error("concept {concept} has no dimension {dimension}")]
    UnknownDimension { concept: String, dimension: String },
    #[error("cannot infer a dimension between {from} and {to}: {candidates} candidates")]
    AmbiguousDimension {
        from: String,
        to: String,
        candidates: usize,
    },
    #[error("target mismatch: {0}")]
    TargetMismatch(String),
    #[error("sets from different collections: {left} and {right}")]
    CollectionMismatch { left: String, right: String },
    #[error("level {level} is not on dimension path {path}")]
    LevelNotOnPath { level: String, path: String },
    #[error("no propagation path: {0}")]
    NoPropagationPath(String),
    #[error("ambiguous propagation: several common lesser concepts {0:?}")]
    AmbiguousPropagation(Vec<String>),
    #[error("concept {concept} has several collections {collections:?}")]
    AmbiguousBinding {
        concept: String,
        collections: Vec<String>,
    },
    #[error("constraint type error: {0}")]
    ConstraintTypeError(String),
    #[error("bottom extension exceeds the budget of {budget} cells")]
    BudgetExceeded { budget: usize },
}

pub type Result<T> = std::result::Result<T, QueryError>;

/// A dimension reference in a projection or de-projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimRef<'a> {
    Named(&'a str),
    Super,
}

/// Greater elements referenced along `dim` by members of `set`, restricted
/// to those stored in `target`.
pub fn project(db: &Database, set: &ElementSet, dim: DimRef<'_>, target: &str) -> Result<ElementSet> {
    let source = db.collection(&set.collection)?;
    let target_coll = db.collection(target)?;
    let mut out = ElementSet::empty(target);
    match dim {
        DimRef::Super => {
            if source.parent.as_deref() != Some(target) {
                return Err(QueryError::TargetMismatch(format!(
                    "{target} is not the parent collection of {}",
                    set.collection
                )));
            }
            for id in set.iter() {
                if let Some(p) = id.parent() {
                    if target_coll.contains(&p) {
                        out.members.insert(p);
                    }
                }
            }
        }
        DimRef::Named(d) => {
            let concept = db.schema().get(&source.concept)?;
            let dimension = concept.dimension(d).ok_or_else(|| QueryError::UnknownDimension {
                concept: concept.name.clone(),
                dimension: d.to_string(),
            })?;
            let Domain::Concept(domain) = &dimension.domain else {
                return Err(QueryError::TypeError(format!(
                    "dimension {d} of {} is primitive and cannot be projected",
                    concept.name
                )));
            };
            if !db.schema().is_included_in(&target_coll.concept, domain) {
                return Err(QueryError::TargetMismatch(format!(
                    "{target} holds {} but dimension {d} has domain {domain}",
                    target_coll.concept
                )));
            }
            for id in set.iter() {
                let Some(el) = source.get(id) else { continue };
                if let Some((_, Value::Ref(r))) = db.field(el, d) {
                    if target_coll.contains(r) {
                        out.members.insert(r.clone());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Elements of `lesser` whose `dim` references a member of `set`.
pub fn deproject(db: &Database, set: &ElementSet, dim: DimRef<'_>, lesser: &str) -> Result<ElementSet> {
    let source = db.collection(&set.collection)?;
    let lesser_coll = db.collection(lesser)?;
    let mut out = ElementSet::empty(lesser);
    match dim {
        DimRef::Super => {
            if lesser_coll.parent.as_deref() != Some(set.collection.as_str()) {
                return Err(QueryError::TargetMismatch(format!(
                    "{} is not the parent collection of {lesser}",
                    set.collection
                )));
            }
            for el in lesser_coll.elements() {
                if el.identity.parent().is_some_and(|p| set.contains(&p)) {
                    out.members.insert(el.identity.clone());
                }
            }
        }
        DimRef::Named(d) => {
            let concept = db.schema().get(&lesser_coll.concept)?;
            let dimension = concept.dimension(d).ok_or_else(|| QueryError::UnknownDimension {
                concept: concept.name.clone(),
                dimension: d.to_string(),
            })?;
            let Domain::Concept(domain) = &dimension.domain else {
                return Err(QueryError::TypeError(format!(
                    "dimension {d} of {} is primitive and cannot be de-projected",
                    concept.name
                )));
            };
            if !db.schema().is_included_in(&source.concept, domain) {
                return Err(QueryError::TargetMismatch(format!(
                    "{} holds {} but dimension {d} of {lesser} has domain {domain}",
                    set.collection, source.concept
                )));
            }
            match lesser_coll.binding(d) {
                Some(b) if db.is_under(&set.collection, b) => {}
                Some(b) => {
                    return Err(QueryError::TargetMismatch(format!(
                        "dimension {d} of {lesser} is bound to {b}, not {}",
                        set.collection
                    )))
                }
                None => {
                    return Err(QueryError::TargetMismatch(format!(
                        "dimension {d} of {lesser} is not bound"
                    )))
                }
            }
            let idx = concept.entity_index(d);
            let id_idx = concept.identity_index(d);
            for el in lesser_coll.elements() {
                let v = match (idx, id_idx) {
                    (Some(i), _) => &el.entity[i],
                    (None, Some(i)) => &el.identity.last().values[i],
                    (None, None) => continue,
                };
                if let Value::Ref(r) = v {
                    if set.contains(r) {
                        out.members.insert(el.identity.clone());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Set intersection (`AND`) or union (`OR`) of two sets of one collection.
pub fn combine(a: &ElementSet, b: &ElementSet, and: bool) -> Result<ElementSet> {
    if a.collection != b.collection {
        return Err(QueryError::CollectionMismatch {
            left: a.collection.clone(),
            right: b.collection.clone(),
        });
    }
    let members = if and {
        a.members.intersection(&b.members).cloned().collect()
    } else {
        a.members.union(&b.members).cloned().collect()
    };
    Ok(ElementSet {
        collection: a.collection.clone(),
        members,
    })
}

/// Sum of the values reached by `path` from each member; NULLs are skipped
/// and the empty sum is `0`.
pub fn sum_path(db: &Database, set: &ElementSet, path: &[&str]) -> Result<Value> {
    let coll = db.collection(&set.collection)?;
    let mut acc = NumAcc::default();
    for id in set.iter() {
        let Some(el) = coll.get(id) else { continue };
        match db.resolve_path(&set.collection, el, path)? {
            Resolved::Null => {}
            Resolved::Value(v) => acc.add(&v)?,
            Resolved::Element { .. } => {
                return Err(QueryError::TypeError(format!(
                    "SUM over {} reaches elements, not numbers",
                    path.join(".")
                )))
            }
        }
    }
    Ok(acc.finish())
}

pub fn count(set: &ElementSet) -> Value {
    Value::Int(set.len() as i64)
}

/// Running numeric sum that stays integral until a DOUBLE is seen.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NumAcc {
    int: i64,
    float: f64,
    is_float: bool,
}

impl NumAcc {
    pub(crate) fn add(&mut self, v: &Value) -> Result<()> {
        match v {
            Value::Null => {}
            Value::Int(i) => {
                if self.is_float {
                    self.float += *i as f64;
                } else {
                    match self.int.checked_add(*i) {
                        Some(s) => self.int = s,
                        None => {
                            self.is_float = true;
                            self.float = self.int as f64 + *i as f64;
                        }
                    }
                }
            }
            Value::Double(d) => {
                if !self.is_float {
                    self.is_float = true;
                    self.float = self.int as f64;
                }
                self.float += d;
            }
            other => {
                return Err(QueryError::TypeError(format!(
                    "SUM needs numbers, found {}",
                    other.kind_name()
                )))
            }
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> Value {
        if self.is_float {
            Value::Double(self.float)
        } else {
            Value::Int(self.int)
        }
    }
}

/// Resolves an omitted dimension name.
///
/// For an upward step from `from` to the greater collection `to`, the
/// candidates are dimensions of `from`'s concept whose domain includes
/// `to`'s concept; for a downward step from `from` to the lesser collection
/// `to`, dimensions of `to`'s concept whose domain includes `from`'s
/// concept. `super` is a candidate when the collections are parent and
/// child. Several typed candidates are narrowed by collection binding; the
/// rule never guesses.
pub fn infer_dimension(db: &Database, from: &str, to: &str, upward: bool) -> Result<PathDim> {
    let (lesser, greater) = if upward { (from, to) } else { (to, from) };
    let lesser_coll = db.collection(lesser)?;
    let greater_coll = db.collection(greater)?;
    let concept = db.schema().get(&lesser_coll.concept)?;
    let mut typed: Vec<&str> = concept
        .dimensions()
        .filter(|d| d.is_order_edge())
        .filter(|d| {
            d.domain
                .concept()
                .is_some_and(|dom| db.schema().is_included_in(&greater_coll.concept, dom))
        })
        .map(|d| d.name.as_str())
        .collect();
    if typed.len() > 1 {
        typed.retain(|d| lesser_coll.binding(d).is_some_and(|b| db.is_under(greater, b)));
    }
    let mut candidates: Vec<PathDim> = typed.into_iter().map(|d| PathDim::Named(d.to_string())).collect();
    if lesser_coll.parent.as_deref() == Some(greater) {
        candidates.push(PathDim::Super);
    }
    if candidates.len() == 1 {
        Ok(candidates.pop().expect("one candidate"))
    } else {
        Err(QueryError::AmbiguousDimension {
            from: from.to_string(),
            to: to.to_string(),
            candidates: candidates.len(),
        })
    }
}
