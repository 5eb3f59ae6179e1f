//! Shared helpers for the integration tests: fixture loading and a random
//! database generator that keeps its own copy of the data, so oracles can
//! be computed without going through the engine.

#![allow(dead_code)]

pub mod ast_gen;
pub mod preds;

use std::collections::BTreeSet;
use std::path::PathBuf;

use conceptdb::algebra::Val;
use conceptdb::store::Resolved;
use conceptdb::{
    ComplexIdentity, Concept, Database, Domain, ElementSet, Evaluator, PrimitiveType, Scope, Segment, Session, Value,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// A session with the named fixture script (`fixtures/<name>/<name>.coql`) run.
pub fn fixture_session(name: &str) -> Session {
    let mut s = Session::new();
    let path = fixtures_dir().join(name).join(format!("{name}.coql"));
    let report = s.run_script_file(&path).expect("fixture script is readable");
    assert!(report.is_ok(), "fixture {name} failed:\n{}", report.render());
    s
}

pub fn eval(s: &Session, text: &str) -> Val {
    let stmt = conceptdb::coql::parse_query(text).unwrap_or_else(|e| panic!("{text}: {e}"));
    Evaluator::new(&s.db)
        .with_vars(&s.vars)
        .with_config(s.config)
        .eval(&stmt, &Scope::root())
        .unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn eval_set(s: &Session, text: &str) -> ElementSet {
    match eval(s, text) {
        Val::Set(set) => set,
        other => panic!("{text}: expected a set, got {other}"),
    }
}

/// Values of a primitive field over the members of a set.
pub fn field_values(db: &Database, set: &ElementSet, field: &str) -> BTreeSet<Value> {
    let coll = db.collection(&set.collection).expect("collection");
    set.iter()
        .map(|id| {
            let el = coll.get(id).expect("member is stored");
            match db.resolve_path(&set.collection, el, &[field]).expect("field resolves") {
                Resolved::Value(v) => v,
                Resolved::Null => Value::Null,
                Resolved::Element { element, .. } => Value::Ref(element.identity.clone()),
            }
        })
        .collect()
}

pub fn ints(values: &[i64]) -> BTreeSet<Value> {
    values.iter().map(|v| Value::Int(*v)).collect()
}

pub fn strs(values: &[&str]) -> BTreeSet<Value> {
    values.iter().map(|v| Value::Str(v.to_string())).collect()
}

/// Statements of the checked-in parser corpus.
pub fn corpus() -> Vec<String> {
    let text = std::fs::read_to_string(fixtures_dir().join("coql_corpus.txt")).expect("corpus");
    text.split("\n---\n")
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn root_id(concept: &str, id: i64) -> ComplexIdentity {
    ComplexIdentity::root(Segment::new(concept, vec![Value::Int(id)]))
}

/// One concept of a random flat schema, its collection and a shadow copy
/// of its rows.
#[derive(Debug, Clone)]
pub struct FlatConcept {
    pub name: String,
    pub coll: String,
    /// Dimension name and the index of the concept it points to (always lower).
    pub dims: Vec<(String, usize)>,
    pub rows: Vec<FlatRow>,
}

#[derive(Debug, Clone)]
pub struct FlatRow {
    pub id: i64,
    pub refs: Vec<Option<i64>>,
    pub v: Option<i64>,
}

/// A random database whose concepts are ordered by index: concept `i`
/// only references concepts `j < i`, so the order graph is acyclic.
#[derive(Debug, Clone)]
pub struct Flat {
    pub db: Database,
    pub concepts: Vec<FlatConcept>,
}

pub struct FlatParams {
    pub concepts: usize,
    pub max_rows: usize,
    pub edge_p: f64,
    pub null_p: f64,
}

impl Default for FlatParams {
    fn default() -> Self {
        FlatParams {
            concepts: 5,
            max_rows: 12,
            edge_p: 0.5,
            null_p: 0.1,
        }
    }
}

pub fn random_flat(rng: &mut ChaCha8Rng, p: &FlatParams) -> Flat {
    let mut concepts: Vec<FlatConcept> = Vec::new();
    for i in 0..p.concepts {
        let mut dims = Vec::new();
        for j in 0..i {
            if rng.gen_bool(p.edge_p) {
                dims.push((format!("d{}", dims.len()), j));
                // occasionally a second dimension to the same concept
                if rng.gen_bool(0.15) {
                    dims.push((format!("d{}", dims.len()), j));
                }
            }
        }
        concepts.push(FlatConcept {
            name: format!("K{i}"),
            coll: format!("C{i}"),
            dims,
            rows: Vec::new(),
        });
    }
    for i in 0..concepts.len() {
        let n = rng.gen_range(0..=p.max_rows);
        let mut rows = Vec::with_capacity(n);
        for id in 0..n as i64 {
            let refs = concepts[i]
                .dims
                .iter()
                .map(|(_, j)| {
                    let targets = concepts[*j].rows.len();
                    if targets == 0 || rng.gen_bool(p.null_p) {
                        None
                    } else {
                        Some(rng.gen_range(0..targets) as i64)
                    }
                })
                .collect();
            let v = if rng.gen_bool(p.null_p) {
                None
            } else {
                Some(rng.gen_range(-50..=100))
            };
            rows.push(FlatRow { id, refs, v });
        }
        concepts[i].rows = rows;
    }
    let db = build_flat(&concepts);
    Flat { db, concepts }
}

fn build_flat(concepts: &[FlatConcept]) -> Database {
    let mut db = Database::new();
    for c in concepts {
        let mut k = Concept::new(&c.name).identity("id", Domain::Primitive(PrimitiveType::Int));
        for (d, j) in &c.dims {
            k = k.entity(d, Domain::Concept(concepts[*j].name.clone()));
        }
        k = k.entity("v", Domain::Primitive(PrimitiveType::Int));
        db.define_concept(k).expect("define");
    }
    assert!(db.validate().expect("validate").is_valid());
    for c in concepts {
        let bindings: Vec<(String, String)> = c
            .dims
            .iter()
            .map(|(d, j)| (d.clone(), concepts[*j].coll.clone()))
            .collect();
        db.create_collection(&c.coll, &c.name, None, &bindings).expect("collection");
    }
    for c in concepts {
        for r in &c.rows {
            let mut entity: Vec<(String, Value)> = c
                .dims
                .iter()
                .zip(&r.refs)
                .map(|((d, j), x)| {
                    let v = match x {
                        Some(t) => Value::Ref(root_id(&concepts[*j].name, *t)),
                        None => Value::Null,
                    };
                    (d.clone(), v)
                })
                .collect();
            entity.push(("v".to_string(), r.v.map(Value::Int).unwrap_or(Value::Null)));
            db.insert(&c.coll, None, vec![Value::Int(r.id)], entity).expect("insert");
        }
    }
    db
}

impl Flat {
    pub fn ident(&self, c: usize, id: i64) -> ComplexIdentity {
        root_id(&self.concepts[c].name, id)
    }

    pub fn set(&self, c: usize, ids: impl IntoIterator<Item = i64>) -> ElementSet {
        ElementSet::new(self.concepts[c].coll.clone(), ids.into_iter().map(|i| self.ident(c, i)))
    }

    pub fn ids(&self, c: usize) -> Vec<i64> {
        self.concepts[c].rows.iter().map(|r| r.id).collect()
    }

    pub fn row(&self, c: usize, id: i64) -> &FlatRow {
        &self.concepts[c].rows[id as usize]
    }

    /// The ids of a set, assuming it belongs to concept `c`.
    pub fn ids_of(&self, c: usize, set: &ElementSet) -> BTreeSet<i64> {
        assert_eq!(set.collection, self.concepts[c].coll);
        set.iter()
            .map(|id| match id.last().values[0] {
                Value::Int(i) => i,
                ref other => panic!("unexpected identity value {other}"),
            })
            .collect()
    }

    /// Every simple upward path from `from` to `to`, found by exhaustive
    /// search over the shadow schema. Each step is (concept, dimension index).
    pub fn up_paths(&self, from: usize, to: usize) -> Vec<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.walk(from, to, &mut stack, &mut out);
        out
    }

    fn walk(&self, at: usize, to: usize, stack: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if at == to {
            out.push(stack.clone());
            return;
        }
        for (k, (_, j)) in self.concepts[at].dims.iter().enumerate() {
            stack.push((at, k));
            self.walk(*j, to, stack, out);
            stack.pop();
        }
    }

    pub fn path_names(&self, path: &[(usize, usize)]) -> Vec<String> {
        path.iter().map(|(c, k)| self.concepts[*c].dims[*k].0.clone()).collect()
    }

    /// Where an element ends up after following a path, or `None` at a NULL.
    pub fn follow(&self, mut id: i64, path: &[(usize, usize)]) -> Option<i64> {
        for (c, k) in path {
            id = self.row(*c, id).refs[*k]?;
        }
        Some(id)
    }

    /// Does concept `a` reach concept `b` (reflexive)?
    pub fn reaches(&self, a: usize, b: usize) -> bool {
        !self.up_paths(a, b).is_empty()
    }

    /// Maximal concepts that reach every concept in `targets`.
    pub fn common_lesser(&self, targets: &[usize]) -> Vec<usize> {
        let n = self.concepts.len();
        let cands: Vec<usize> = (0..n).filter(|c| targets.iter().all(|t| self.reaches(*c, *t))).collect();
        cands
            .iter()
            .copied()
            .filter(|c| !cands.iter().any(|d| d != c && self.reaches(*c, *d)))
            .collect()
    }
}

/// A random subset of `items`.
pub fn subset<T: Clone>(rng: &mut ChaCha8Rng, items: &[T], p: f64) -> Vec<T> {
    items.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}
