//! Collections, elements and navigation over stored data.
//!
//! Every collection stores elements of one concept. A collection whose
//! concept has a super-concept is bound to a parent collection holding the
//! parent elements, and each concept-typed dimension may be bound to the
//! collection holding the referenced greater elements.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use thiserror::Error;

use crate::schema::{Concept, Dimension, Domain, Schema, SchemaError, Section, ValidationReport};
use crate::value::{ComplexIdentity, Segment, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StoreError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("schema must be validated before collections are used")]
    SchemaNotValidated,
    #[error("collection {0} already exists")]
    DuplicateCollection(String),
    #[error("unknown collection {0}")]
    UnknownCollection(String),
    #[error("unknown concept {0}")]
    UnknownConcept(String),
    #[error("collection {collection}: concept {concept} is included in {super_name}, a parent collection is required")]
    MissingParentBinding {
        collection: String,
        concept: String,
        super_name: String,
    },
    #[error("collection {collection}: {detail}")]
    BindingTypeMismatch { collection: String, detail: String },
    #[error("concept {concept} has no dimension {dimension}")]
    UnknownDimension { concept: String, dimension: String },
    #[error("collection {collection}: identity {identity} already exists")]
    DuplicateIdentity { collection: String, identity: String },
    #[error("collection {collection}: parent {parent} not found")]
    UnknownParent { collection: String, parent: String },
    #[error("collection {collection}, dimension {dimension}: {identity} does not resolve to a stored element")]
    DanglingReference {
        collection: String,
        dimension: String,
        identity: String,
    },
    #[error("collection {collection}, dimension {dimension}: {identity} is stored in more than one collection")]
    AmbiguousReference {
        collection: String,
        dimension: String,
        identity: String,
    },
    #[error("collection {collection}, dimension {dimension}: dimension is not bound to a collection")]
    UnboundDimension { collection: String, dimension: String },
    #[error("{context}: {detail}")]
    TypeMismatch { context: String, detail: String },
    #[error("collection {collection}: {parent} already has a {concept} extension")]
    SecondChildOfInheritanceConcept {
        collection: String,
        concept: String,
        parent: String,
    },
    #[error("concept {0} is included directly in ROOT and has no parent")]
    NoParent(String),
    #[error("concept {concept} has no field {field}")]
    UnknownField { concept: String, field: String },
    #[error("path step {step} passes through a primitive value")]
    PathThroughPrimitive { step: String },
    #[error("collection {collection}: element {identity} not found")]
    ElementNotFound { collection: String, identity: String },
    #[error("collection {collection}: element {identity} is still {reason}")]
    ElementInUse {
        collection: String,
        identity: String,
        reason: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, StoreError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub identity: ComplexIdentity,
    /// Entity values aligned with the concept's entity dimensions.
    pub entity: Vec<Value>,
}

#[derive(Debug, Clone)]
pub struct Collection {
    pub name: String,
    pub concept: String,
    pub parent: Option<String>,
    /// Dimension name to bound collection, in declaration order.
    pub bindings: IndexMap<String, String>,
    elements: IndexMap<ComplexIdentity, Element>,
}

impl Collection {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in insertion order.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.elements.values()
    }

    pub fn get(&self, identity: &ComplexIdentity) -> Option<&Element> {
        self.elements.get(identity)
    }

    pub fn contains(&self, identity: &ComplexIdentity) -> bool {
        self.elements.contains_key(identity)
    }

    pub fn binding(&self, dimension: &str) -> Option<&str> {
        self.bindings.get(dimension).map(String::as_str)
    }
}

/// A deduplicated set of element identities drawn from one collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementSet {
    pub collection: String,
    pub members: BTreeSet<ComplexIdentity>,
}

impl ElementSet {
    pub fn empty(collection: impl Into<String>) -> ElementSet {
        ElementSet {
            collection: collection.into(),
            members: BTreeSet::new(),
        }
    }

    pub fn new(collection: impl Into<String>, members: impl IntoIterator<Item = ComplexIdentity>) -> ElementSet {
        ElementSet {
            collection: collection.into(),
            members: members.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, identity: &ComplexIdentity) -> bool {
        self.members.contains(identity)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexIdentity> {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.collection == other.collection && self.members.is_subset(&other.members)
    }
}

/// What an attribute path ends at.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolved<'a> {
    Null,
    Value(Value),
    Element { collection: &'a str, element: &'a Element },
}

/// An in-memory concept-oriented database: a schema plus collections.
#[derive(Debug, Clone, Default)]
pub struct Database {
    schema: Schema,
    collections: IndexMap<String, Collection>,
}

impl Database {
    pub fn new() -> Database {
        Database::default()
    }

    pub fn with_schema(schema: Schema) -> Database {
        Database {
            schema,
            collections: IndexMap::new(),
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn define_concept(&mut self, concept: Concept) -> Result<()> {
        Ok(self.schema.define_concept(concept)?)
    }

    pub fn validate(&mut self) -> Result<ValidationReport> {
        Ok(self.schema.validate()?)
    }

    /// Collections in creation order.
    pub fn collections(&self) -> impl Iterator<Item = &Collection> {
        self.collections.values()
    }

    pub fn collection(&self, name: &str) -> Result<&Collection> {
        self.collections
            .get(name)
            .ok_or_else(|| StoreError::UnknownCollection(name.to_string()))
    }

    pub fn has_collection(&self, name: &str) -> bool {
        self.collections.contains_key(name)
    }

    pub fn concept_of(&self, collection: &str) -> Result<&Concept> {
        let c = self.collection(collection)?;
        Ok(self.schema.get(&c.concept)?)
    }

    pub fn collections_of_concept<'a>(&'a self, concept: &'a str) -> impl Iterator<Item = &'a Collection> + 'a {
        self.collections.values().filter(move |c| c.concept == concept)
    }

    /// Reflexive: `collection` is `ancestor` or bound beneath it through parent links.
    pub fn is_under(&self, collection: &str, ancestor: &str) -> bool {
        let mut cur = Some(collection);
        while let Some(name) = cur {
            if name == ancestor {
                return true;
            }
            cur = self.collections.get(name).and_then(|c| c.parent.as_deref());
        }
        false
    }

    pub fn create_collection(
        &mut self,
        name: &str,
        concept: &str,
        parent: Option<&str>,
        bindings: &[(String, String)],
    ) -> Result<&Collection> {
        if !self.schema.is_validated() {
            return Err(StoreError::SchemaNotValidated);
        }
        if self.collections.contains_key(name) {
            return Err(StoreError::DuplicateCollection(name.to_string()));
        }
        let c = self
            .schema
            .concept(concept)
            .ok_or_else(|| StoreError::UnknownConcept(concept.to_string()))?;
        match (&c.super_name, parent) {
            (None, None) => {}
            (None, Some(p)) => {
                return Err(StoreError::BindingTypeMismatch {
                    collection: name.to_string(),
                    detail: format!("concept {concept} is included in ROOT, but parent {p} was given"),
                })
            }
            (Some(s), None) => {
                return Err(StoreError::MissingParentBinding {
                    collection: name.to_string(),
                    concept: concept.to_string(),
                    super_name: s.clone(),
                })
            }
            (Some(s), Some(p)) => {
                let pc = self.collection(p)?;
                if &pc.concept != s {
                    return Err(StoreError::BindingTypeMismatch {
                        collection: name.to_string(),
                        detail: format!("parent {p} holds {} but {concept} is included in {s}", pc.concept),
                    });
                }
            }
        }
        let mut bound = IndexMap::new();
        for (dim, target) in bindings {
            let d = c.dimension(dim).ok_or_else(|| StoreError::UnknownDimension {
                concept: concept.to_string(),
                dimension: dim.clone(),
            })?;
            let Domain::Concept(domain) = &d.domain else {
                return Err(StoreError::BindingTypeMismatch {
                    collection: name.to_string(),
                    detail: format!("dimension {dim} is primitive and cannot be bound"),
                });
            };
            let target_concept = if target == name {
                concept
            } else {
                self.collection(target)?.concept.as_str()
            };
            if target_concept != domain {
                return Err(StoreError::BindingTypeMismatch {
                    collection: name.to_string(),
                    detail: format!("dimension {dim} has domain {domain} but {target} holds {target_concept}"),
                });
            }
            if bound.insert(dim.clone(), target.clone()).is_some() {
                return Err(StoreError::BindingTypeMismatch {
                    collection: name.to_string(),
                    detail: format!("dimension {dim} is bound twice"),
                });
            }
        }
        let collection = Collection {
            name: name.to_string(),
            concept: concept.to_string(),
            parent: parent.map(str::to_string),
            bindings: bound,
            elements: IndexMap::new(),
        };
        self.collections.insert(name.to_string(), collection);
        Ok(&self.collections[name])
    }

    /// Inserts an element and returns its complex identity (the parent
    /// identity extended by `segment`).
    pub fn insert(
        &mut self,
        collection: &str,
        parent: Option<&ComplexIdentity>,
        segment: Vec<Value>,
        entity: Vec<(String, Value)>,
    ) -> Result<ComplexIdentity> {
        self.insert_inner(collection, parent, segment, entity, true)
    }

    /// Inserts without checking references to greater elements. Used by bulk
    /// loaders that verify integrity afterwards with [`Database::check_integrity`].
    pub(crate) fn insert_deferred(
        &mut self,
        collection: &str,
        parent: Option<&ComplexIdentity>,
        segment: Vec<Value>,
        entity: Vec<(String, Value)>,
    ) -> Result<ComplexIdentity> {
        self.insert_inner(collection, parent, segment, entity, false)
    }

    fn insert_inner(
        &mut self,
        collection: &str,
        parent: Option<&ComplexIdentity>,
        segment: Vec<Value>,
        entity: Vec<(String, Value)>,
        check_refs: bool,
    ) -> Result<ComplexIdentity> {
        let coll = self.collection(collection)?;
        let concept = self.schema.get(&coll.concept)?;

        let identity = match (&coll.parent, parent) {
            (None, None) => None,
            (Some(pc), Some(pid)) => {
                if !self.collection(pc)?.contains(pid) {
                    return Err(StoreError::UnknownParent {
                        collection: collection.to_string(),
                        parent: pid.to_string(),
                    });
                }
                Some(pid.clone())
            }
            (Some(_), None) => {
                return Err(StoreError::UnknownParent {
                    collection: collection.to_string(),
                    parent: "(none given)".to_string(),
                })
            }
            (None, Some(pid)) => {
                return Err(StoreError::UnknownParent {
                    collection: collection.to_string(),
                    parent: pid.to_string(),
                })
            }
        };

        if segment.len() != concept.identity_dims.len() {
            return Err(StoreError::TypeMismatch {
                context: format!("{collection} identity"),
                detail: format!(
                    "expected {} identity values, found {}",
                    concept.identity_dims.len(),
                    segment.len()
                ),
            });
        }
        let mut seg_values = Vec::with_capacity(segment.len());
        for (dim, v) in concept.identity_dims.iter().zip(segment) {
            if v.is_null() {
                return Err(StoreError::TypeMismatch {
                    context: format!("{collection}.{}", dim.name),
                    detail: "identity values cannot be NULL".to_string(),
                });
            }
            seg_values.push(self.check_value(coll, dim, v, check_refs)?);
        }

        let mut entity_values = vec![Value::Null; concept.entity_dims.len()];
        for (name, v) in entity {
            let idx = concept.entity_index(&name).ok_or_else(|| StoreError::UnknownField {
                concept: concept.name.clone(),
                field: name.clone(),
            })?;
            entity_values[idx] = self.check_value(coll, &concept.entity_dims[idx], v, check_refs)?;
        }

        let seg = Segment::new(concept.name.clone(), seg_values);
        let identity = match identity {
            Some(pid) => pid.child(seg),
            None => ComplexIdentity::root(seg),
        };

        if concept.is_extension() {
            if let Some(pid) = identity.parent() {
                let taken = self
                    .collections
                    .values()
                    .filter(|c| c.concept == concept.name && c.parent == coll.parent)
                    .any(|c| c.elements.keys().any(|k| k.parent().as_ref() == Some(&pid)));
                if taken {
                    return Err(StoreError::SecondChildOfInheritanceConcept {
                        collection: collection.to_string(),
                        concept: concept.name.clone(),
                        parent: pid.to_string(),
                    });
                }
            }
        }
        if coll.contains(&identity) {
            return Err(StoreError::DuplicateIdentity {
                collection: collection.to_string(),
                identity: identity.to_string(),
            });
        }

        let element = Element {
            identity: identity.clone(),
            entity: entity_values,
        };
        self.collections
            .get_mut(collection)
            .expect("collection checked above")
            .elements
            .insert(identity.clone(), element);
        Ok(identity)
    }

    fn check_value(&self, coll: &Collection, dim: &Dimension, value: Value, check_refs: bool) -> Result<Value> {
        let context = || format!("{}.{}", coll.name, dim.name);
        match &dim.domain {
            Domain::Primitive(p) => p.coerce(value).map_err(|detail| StoreError::TypeMismatch {
                context: context(),
                detail,
            }),
            Domain::Concept(domain) => match value {
                Value::Null => Ok(Value::Null),
                Value::Ref(id) => {
                    self.check_identity_shape(&id).map_err(|detail| StoreError::TypeMismatch {
                        context: context(),
                        detail,
                    })?;
                    if !self.schema.is_included_in(id.concept(), domain) {
                        return Err(StoreError::TypeMismatch {
                            context: context(),
                            detail: format!("{} is not a {domain}", id.concept()),
                        });
                    }
                    if coll.binding(&dim.name).is_none() {
                        return Err(StoreError::UnboundDimension {
                            collection: coll.name.clone(),
                            dimension: dim.name.clone(),
                        });
                    }
                    if check_refs {
                        self.locate_reference(coll, &dim.name, &id)?;
                    }
                    Ok(Value::Ref(id))
                }
                other => Err(StoreError::TypeMismatch {
                    context: context(),
                    detail: format!("expected a {domain} reference, found {}", other.kind_name()),
                }),
            },
        }
    }

    /// Checks that segment concepts follow the inclusion chain of the final concept.
    fn check_identity_shape(&self, id: &ComplexIdentity) -> std::result::Result<(), String> {
        let chain = self
            .schema
            .inclusion_chain(id.concept())
            .map_err(|e| e.to_string())?;
        if chain.len() != id.depth() {
            return Err(format!(
                "identity {id} has {} segments but {} needs {}",
                id.depth(),
                id.concept(),
                chain.len()
            ));
        }
        for (c, seg) in chain.iter().zip(id.segments()) {
            if c.name != seg.concept || c.identity_dims.len() != seg.values.len() {
                return Err(format!("identity {id} does not match concept {}", c.name));
            }
        }
        Ok(())
    }

    /// Finds the collection holding the element referenced by `dimension`
    /// of an element of `coll`. References of sub-concepts are looked up in
    /// collections bound beneath the dimension's collection.
    fn locate_reference<'a>(&'a self, coll: &Collection, dimension: &str, id: &ComplexIdentity) -> Result<&'a Collection> {
        let binding = coll.binding(dimension).ok_or_else(|| StoreError::UnboundDimension {
            collection: coll.name.clone(),
            dimension: dimension.to_string(),
        })?;
        let mut found = self
            .collections
            .values()
            .filter(|c| c.concept == id.concept() && self.is_under(&c.name, binding))
            .filter(|c| c.contains(id));
        let first = found.next();
        match (first, found.next()) {
            (Some(c), None) => Ok(c),
            (None, _) => Err(StoreError::DanglingReference {
                collection: coll.name.clone(),
                dimension: dimension.to_string(),
                identity: id.to_string(),
            }),
            (Some(_), Some(_)) => Err(StoreError::AmbiguousReference {
                collection: coll.name.clone(),
                dimension: dimension.to_string(),
                identity: id.to_string(),
            }),
        }
    }

    /// Resolves a reference stored in `dimension` of an element of `collection`.
    pub fn dereference<'a>(
        &'a self,
        collection: &str,
        dimension: &str,
        id: &ComplexIdentity,
    ) -> Result<(&'a str, &'a Element)> {
        let coll = self.collection(collection)?;
        let target = self.locate_reference(coll, dimension, id)?;
        let el = target.get(id).expect("located collection contains the identity");
        Ok((target.name.as_str(), el))
    }

    pub fn lookup(&self, collection: &str, identity: &ComplexIdentity) -> Result<Option<&Element>> {
        Ok(self.collection(collection)?.get(identity))
    }

    /// The parent element of `identity`, from the collection's parent collection.
    pub fn super_of(&self, collection: &str, identity: &ComplexIdentity) -> Result<(&str, &Element)> {
        let coll = self.collection(collection)?;
        let parent_coll = coll
            .parent
            .as_deref()
            .ok_or_else(|| StoreError::NoParent(coll.concept.clone()))?;
        let pid = identity.parent().ok_or_else(|| StoreError::NoParent(coll.concept.clone()))?;
        let pc = self.collection(parent_coll)?;
        let el = pc.get(&pid).ok_or_else(|| StoreError::ElementNotFound {
            collection: parent_coll.to_string(),
            identity: pid.to_string(),
        })?;
        Ok((pc.name.as_str(), el))
    }

    /// Value of a named identity or entity field of `element`.
    pub fn field<'a>(&'a self, element: &'a Element, name: &str) -> Option<(&'a Dimension, &'a Value)> {
        let concept = self.schema.concept(element.identity.concept())?;
        if let Some(i) = concept.identity_index(name) {
            return Some((&concept.identity_dims[i], &element.identity.last().values[i]));
        }
        concept
            .entity_index(name)
            .map(|i| (&concept.entity_dims[i], &element.entity[i]))
    }

    /// Like [`Database::field`], but a name the element's own concept lacks
    /// is looked up on its parent, grandparent and so on. Returns the
    /// collection and element that own the field.
    pub fn locate_field<'a>(
        &'a self,
        collection: &'a str,
        element: &'a Element,
        name: &str,
    ) -> Option<(&'a str, &'a Element, &'a Dimension, &'a Value)> {
        let mut coll = collection;
        let mut el = element;
        loop {
            if let Some((d, v)) = self.field(el, name) {
                return Some((coll, el, d, v));
            }
            el.identity.parent()?;
            let (c, p) = self.super_of(coll, &el.identity).ok()?;
            coll = c;
            el = p;
        }
    }

    /// Follows `path` from an element: `super` (or its alias `parent`) steps
    /// to the parent element, concept-typed dimensions step to the
    /// referenced greater element, and a primitive field may end the path.
    /// Fields missing from an element are inherited from its ancestors.
    pub fn resolve_path<'a>(&'a self, collection: &'a str, element: &'a Element, path: &[&str]) -> Result<Resolved<'a>> {
        let mut cur_coll = collection;
        let mut cur = element;
        for (i, step) in path.iter().enumerate() {
            let last = i + 1 == path.len();
            let found = if *step == "super" || *step == "parent" {
                self.field(cur, step).map(|(d, v)| (cur_coll, d, v))
            } else {
                self.locate_field(cur_coll, cur, step).map(|(c, _, d, v)| (c, d, v))
            };
            match found {
                Some((owner, dim, value)) => match (&dim.domain, value) {
                    (_, Value::Null) => return Ok(Resolved::Null),
                    (Domain::Concept(_), Value::Ref(id)) => {
                        let (c, el) = self.dereference(owner, &dim.name, id)?;
                        cur_coll = c;
                        cur = el;
                    }
                    (_, v) => {
                        if last {
                            return Ok(Resolved::Value(v.clone()));
                        }
                        return Err(StoreError::PathThroughPrimitive {
                            step: step.to_string(),
                        });
                    }
                },
                None if *step == "super" || *step == "parent" => {
                    let (c, el) = self.super_of(cur_coll, &cur.identity)?;
                    cur_coll = c;
                    cur = el;
                }
                None => {
                    return Err(StoreError::UnknownField {
                        concept: cur.identity.concept().to_string(),
                        field: step.to_string(),
                    })
                }
            }
        }
        Ok(Resolved::Element {
            collection: cur_coll,
            element: cur,
        })
    }

    /// Replaces entity values of an existing element, with insert-time checks.
    pub fn update_entity(&mut self, collection: &str, identity: &ComplexIdentity, values: Vec<(String, Value)>) -> Result<()> {
        let coll = self.collection(collection)?;
        let concept = self.schema.get(&coll.concept)?;
        let current = coll.get(identity).ok_or_else(|| StoreError::ElementNotFound {
            collection: collection.to_string(),
            identity: identity.to_string(),
        })?;
        let mut entity = current.entity.clone();
        for (name, v) in values {
            let idx = concept.entity_index(&name).ok_or_else(|| StoreError::UnknownField {
                concept: concept.name.clone(),
                field: name.clone(),
            })?;
            entity[idx] = self.check_value(coll, &concept.entity_dims[idx], v, true)?;
        }
        self.collections
            .get_mut(collection)
            .expect("checked")
            .elements
            .get_mut(identity)
            .expect("checked")
            .entity = entity;
        Ok(())
    }

    /// Removes an element that has no children and is referenced by no other element.
    pub fn delete(&mut self, collection: &str, identity: &ComplexIdentity) -> Result<Element> {
        let coll = self.collection(collection)?;
        if !coll.contains(identity) {
            return Err(StoreError::ElementNotFound {
                collection: collection.to_string(),
                identity: identity.to_string(),
            });
        }
        let in_use = |reason| StoreError::ElementInUse {
            collection: collection.to_string(),
            identity: identity.to_string(),
            reason,
        };
        for other in self.collections.values() {
            if other.parent.as_deref() == Some(collection)
                && other.elements.keys().any(|k| k.parent().as_ref() == Some(identity))
            {
                return Err(in_use("a parent of other elements"));
            }
            for el in other.elements.values() {
                if self.references(other, el, collection, identity) {
                    return Err(in_use("referenced"));
                }
            }
        }
        let el = self
            .collections
            .get_mut(collection)
            .expect("checked")
            .elements
            .shift_remove(identity)
            .expect("checked");
        Ok(el)
    }

    fn references(&self, coll: &Collection, el: &Element, target_coll: &str, target: &ComplexIdentity) -> bool {
        let Some(concept) = self.schema.concept(&coll.concept) else {
            return false;
        };
        let seg = &el.identity.last().values;
        concept
            .identity_dims
            .iter()
            .zip(seg.iter())
            .chain(concept.entity_dims.iter().zip(el.entity.iter()))
            .any(|(dim, v)| match v {
                Value::Ref(id) if id == target => coll
                    .binding(&dim.name)
                    .is_some_and(|b| self.is_under(target_coll, b)),
                _ => false,
            })
    }

    /// Verifies parent presence and reference resolution for every element.
    /// Returns the first offending element and its error.
    pub fn check_integrity(&self) -> std::result::Result<(), Box<(String, ComplexIdentity, StoreError)>> {
        for coll in self.collections.values() {
            let Some(concept) = self.schema.concept(&coll.concept) else {
                continue;
            };
            for el in coll.elements.values() {
                let fail = |e| Err(Box::new((coll.name.clone(), el.identity.clone(), e)));
                if let (Some(pc), Some(pid)) = (&coll.parent, el.identity.parent()) {
                    if !self.collections.get(pc).is_some_and(|p| p.contains(&pid)) {
                        return fail(StoreError::UnknownParent {
                            collection: coll.name.clone(),
                            parent: pid.to_string(),
                        });
                    }
                }
                let seg = &el.identity.last().values;
                let pairs = concept
                    .identity_dims
                    .iter()
                    .zip(seg.iter())
                    .chain(concept.entity_dims.iter().zip(el.entity.iter()));
                for (dim, v) in pairs {
                    if let Value::Ref(id) = v {
                        if let Err(e) = self.locate_reference(coll, &dim.name, id) {
                            return fail(e);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// All members of a collection as a set.
    pub fn all(&self, collection: &str) -> Result<ElementSet> {
        let coll = self.collection(collection)?;
        Ok(ElementSet::new(collection, coll.elements.keys().cloned()))
    }

    pub(crate) fn remove_for_rollback(&mut self, collection: &str, identity: &ComplexIdentity) {
        if let Some(c) = self.collections.get_mut(collection) {
            c.elements.shift_remove(identity);
        }
    }

    /// Identity dimension names of every segment, then entity dimension names.
    pub fn column_names(&self, collection: &str) -> Result<Vec<String>> {
        let concept = self.concept_of(collection)?;
        let mut cols: Vec<String> = self
            .schema
            .inclusion_chain(&concept.name)?
            .iter()
            .flat_map(|c| c.identity_dims.iter().map(|d| d.name.clone()))
            .collect();
        cols.extend(concept.entity_dims.iter().map(|d| d.name.clone()));
        Ok(cols)
    }

    /// Section of a named field, if the concept declares it.
    pub fn field_section(&self, concept: &str, name: &str) -> Option<Section> {
        self.schema.concept(concept)?.dimension(name).map(|d| d.section)
    }
}
