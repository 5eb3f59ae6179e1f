//! Resolved access paths: a source set followed by projection and
//! de-projection steps with known target collections.

use crate::algebra::{deproject, infer_dimension, project, DimRef, QueryError, Result};
use crate::coql::ast::Dir;
use crate::store::{Database, ElementSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathDim {
    Named(String),
    Super,
    /// Left out in the query text; resolved when the step runs.
    Inferred,
}

impl PathDim {
    fn as_ref(&self) -> Option<DimRef<'_>> {
        match self {
            PathDim::Named(n) => Some(DimRef::Named(n)),
            PathDim::Super => Some(DimRef::Super),
            PathDim::Inferred => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathStep {
    pub dir: Dir,
    pub dim: PathDim,
    /// Collection the step lands in.
    pub target: String,
    /// Members of `target` the step result is restricted to.
    pub restrict: Option<ElementSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccessPath {
    pub source: ElementSet,
    pub steps: Vec<PathStep>,
}

pub fn eval_access_path(db: &Database, path: &AccessPath) -> Result<ElementSet> {
    let mut cur = path.source.clone();
    for step in &path.steps {
        cur = run_step(db, &cur, step)?;
    }
    Ok(cur)
}

pub(crate) fn run_step(db: &Database, cur: &ElementSet, step: &PathStep) -> Result<ElementSet> {
    let upward = step.dir == Dir::Up;
    let inferred;
    let dim = match step.dim.as_ref() {
        Some(d) => d,
        None => {
            inferred = infer_dimension(db, &cur.collection, &step.target, upward)?;
            inferred.as_ref().expect("inference yields a concrete dimension")
        }
    };
    let mut out = if upward {
        project(db, cur, dim, &step.target)?
    } else {
        deproject(db, cur, dim, &step.target)?
    };
    if let Some(r) = &step.restrict {
        if r.collection != out.collection {
            return Err(QueryError::CollectionMismatch {
                left: out.collection,
                right: r.collection.clone(),
            });
        }
        out.members.retain(|m| r.contains(m));
    }
    Ok(out)
}

/// The collection a dimension of `collection` points to: its binding, or
/// the parent collection for `super`.
pub(crate) fn greater_of(db: &Database, collection: &str, dim: &PathDim) -> Result<String> {
    let coll = db.collection(collection)?;
    match dim {
        PathDim::Super => coll
            .parent
            .clone()
            .ok_or_else(|| QueryError::TargetMismatch(format!("{collection} has no parent collection"))),
        PathDim::Named(d) => {
            let concept = db.schema().get(&coll.concept)?;
            if concept.dimension(d).is_none() {
                return Err(QueryError::UnknownDimension {
                    concept: concept.name.clone(),
                    dimension: d.clone(),
                });
            }
            coll.binding(d)
                .map(str::to_string)
                .ok_or_else(|| QueryError::TargetMismatch(format!("dimension {d} of {collection} is not bound")))
        }
        PathDim::Inferred => Err(QueryError::TargetMismatch(
            "an omitted dimension needs an explicit target".to_string(),
        )),
    }
}
