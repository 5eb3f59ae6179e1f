//! Concepts, the inclusion hierarchy and the dimension-induced partial order.
//!
//! A concept pairs an identity class with an entity class. Every concept has
//! one super-concept (or the implicit `ROOT`), and every concept-typed
//! dimension makes its domain a *greater* concept. Self-referencing
//! dimensions are permitted but never take part in order-based operations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::value::PrimitiveType;

/// Maximum number of concepts on one inclusion chain (root included).
pub const MAX_INCLUSION_DEPTH: usize = 32;

/// Names reserved by the engine. Matching is case-insensitive.
pub const RESERVED_NAMES: [&str; 3] = ["ROOT", "TOP", "BOTTOM"];

pub fn is_reserved_name(name: &str) -> bool {
    RESERVED_NAMES.iter().any(|r| r.eq_ignore_ascii_case(name))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("concept {0} is already defined")]
    DuplicateConcept(String),
    #[error("concept {concept}: unknown super-concept {super_name}")]
    UnknownSuperConcept { concept: String, super_name: String },
    #[error("concept {concept}: dimension {dimension} is declared twice")]
    DuplicateDimensionName { concept: String, dimension: String },
    #[error("{0} is a reserved name")]
    ReservedName(String),
    #[error("concept {concept}: inclusion depth {depth} exceeds the limit of {MAX_INCLUSION_DEPTH}")]
    InclusionTooDeep { concept: String, depth: usize },
    #[error("concept {concept}: unresolved name {name}")]
    UnresolvedName { concept: String, name: String },
    #[error("unknown concept {0}")]
    UnknownConcept(String),
    #[error("schema has not been validated")]
    NotValidated,
}

pub type Result<T> = std::result::Result<T, SchemaError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    Identity,
    Entity,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Domain {
    Primitive(PrimitiveType),
    Concept(String),
}

impl Domain {
    pub fn concept(&self) -> Option<&str> {
        match self {
            Domain::Concept(c) => Some(c),
            Domain::Primitive(_) => None,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Primitive(p) => write!(f, "{p}"),
            Domain::Concept(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimension {
    pub name: String,
    pub domain: Domain,
    pub section: Section,
    /// Set when the domain names the owning concept.
    pub self_reference: bool,
}

impl Dimension {
    pub fn new(name: impl Into<String>, domain: Domain, section: Section) -> Dimension {
        Dimension {
            name: name.into(),
            domain,
            section,
            self_reference: false,
        }
    }

    /// Concept-typed and not a self-reference: contributes an order edge.
    pub fn is_order_edge(&self) -> bool {
        !self.self_reference && matches!(self.domain, Domain::Concept(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub name: String,
    /// `None` means the concept is included directly in `ROOT`.
    pub super_name: Option<String>,
    pub identity_dims: Vec<Dimension>,
    pub entity_dims: Vec<Dimension>,
}

impl Concept {
    pub fn new(name: impl Into<String>) -> Concept {
        Concept {
            name: name.into(),
            super_name: None,
            identity_dims: Vec::new(),
            entity_dims: Vec::new(),
        }
    }

    pub fn within(mut self, super_name: impl Into<String>) -> Concept {
        self.super_name = Some(super_name.into());
        self
    }

    pub fn identity(mut self, name: impl Into<String>, domain: Domain) -> Concept {
        self.identity_dims
            .push(Dimension::new(name, domain, Section::Identity));
        self
    }

    pub fn entity(mut self, name: impl Into<String>, domain: Domain) -> Concept {
        self.entity_dims.push(Dimension::new(name, domain, Section::Entity));
        self
    }

    /// Identity dimensions first, then entity dimensions.
    pub fn dimensions(&self) -> impl Iterator<Item = &Dimension> {
        self.identity_dims.iter().chain(self.entity_dims.iter())
    }

    pub fn dimension(&self, name: &str) -> Option<&Dimension> {
        self.dimensions().find(|d| d.name == name)
    }

    pub fn entity_index(&self, name: &str) -> Option<usize> {
        self.entity_dims.iter().position(|d| d.name == name)
    }

    pub fn identity_index(&self, name: &str) -> Option<usize> {
        self.identity_dims.iter().position(|d| d.name == name)
    }

    /// An empty identity class turns inclusion into plain extension.
    pub fn is_extension(&self) -> bool {
        self.identity_dims.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Greater,
    Lesser,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An elementary cycle of the order graph, listed from its
    /// lexicographically smallest concept.
    OrderCycle(Vec<String>),
    InclusionCycle(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OrderCycle(c) => write!(f, "order cycle: {}", c.join(" -> ")),
            Violation::InclusionCycle(c) => write!(f, "inclusion cycle: {}", c.join(" -> ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Note {
    SelfReference { concept: String, dimension: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<Note>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A set of concepts related by inclusion and by dimension types.
#[derive(Debug, Clone, Default)]
pub struct Schema {
    concepts: IndexMap<String, Concept>,
    validated: bool,
}

impl Schema {
    pub fn new() -> Schema {
        Schema::default()
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn concept(&self, name: &str) -> Option<&Concept> {
        self.concepts.get(name)
    }

    pub fn get(&self, name: &str) -> Result<&Concept> {
        self.concepts
            .get(name)
            .ok_or_else(|| SchemaError::UnknownConcept(name.to_string()))
    }

    /// Concepts in declaration order.
    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// Registers a concept. Dimension domains may name concepts that are
    /// declared later; they are checked by [`Schema::validate`].
    pub fn define_concept(&mut self, mut concept: Concept) -> Result<()> {
        if is_reserved_name(&concept.name) {
            return Err(SchemaError::ReservedName(concept.name));
        }
        if self.concepts.contains_key(&concept.name) {
            return Err(SchemaError::DuplicateConcept(concept.name));
        }
        let depth = match &concept.super_name {
            None => 1,
            Some(s) => {
                if !self.concepts.contains_key(s) {
                    return Err(SchemaError::UnknownSuperConcept {
                        concept: concept.name,
                        super_name: s.clone(),
                    });
                }
                self.depth(s).unwrap_or(0) + 1
            }
        };
        if depth > MAX_INCLUSION_DEPTH {
            return Err(SchemaError::InclusionTooDeep {
                concept: concept.name,
                depth,
            });
        }
        let mut seen = BTreeSet::new();
        let owner = concept.name.clone();
        for dim in concept
            .identity_dims
            .iter_mut()
            .chain(concept.entity_dims.iter_mut())
        {
            if !seen.insert(dim.name.clone()) {
                return Err(SchemaError::DuplicateDimensionName {
                    concept: owner,
                    dimension: dim.name.clone(),
                });
            }
            if let Domain::Concept(c) = &dim.domain {
                if is_reserved_name(c) {
                    return Err(SchemaError::ReservedName(c.clone()));
                }
            }
            dim.self_reference = dim.domain.concept() == Some(owner.as_str());
        }
        self.concepts.insert(owner, concept);
        self.validated = false;
        Ok(())
    }

    /// Checks name resolution, inclusion acyclicity and order acyclicity.
    ///
    /// Unresolvable names are an error; cycles are reported as violations.
    /// Self-references are reported as notes only.
    pub fn validate(&mut self) -> Result<ValidationReport> {
        for c in self.concepts.values() {
            if let Some(s) = &c.super_name {
                if !self.concepts.contains_key(s) {
                    return Err(SchemaError::UnresolvedName {
                        concept: c.name.clone(),
                        name: s.clone(),
                    });
                }
            }
            for d in c.dimensions() {
                if let Domain::Concept(target) = &d.domain {
                    if !self.concepts.contains_key(target) {
                        return Err(SchemaError::UnresolvedName {
                            concept: c.name.clone(),
                            name: target.clone(),
                        });
                    }
                }
            }
        }

        let mut report = ValidationReport::default();
        report.violations.extend(self.inclusion_cycles());
        report
            .violations
            .extend(self.order_cycles().into_iter().map(Violation::OrderCycle));
        for c in self.concepts.values() {
            for d in c.dimensions().filter(|d| d.self_reference) {
                report.notes.push(Note::SelfReference {
                    concept: c.name.clone(),
                    dimension: d.name.clone(),
                });
            }
        }
        self.validated = report.is_valid();
        Ok(report)
    }

    fn inclusion_cycles(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut reported = BTreeSet::new();
        for start in self.concepts.keys() {
            let mut chain = vec![start.clone()];
            let mut cur = start.clone();
            while let Some(next) = self.concepts.get(&cur).and_then(|c| c.super_name.clone()) {
                if let Some(pos) = chain.iter().position(|n| *n == next) {
                    let mut cycle = chain[pos..].to_vec();
                    let min = cycle
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.cmp(b.1))
                        .map(|(i, _)| i)
                        .unwrap_or(0);
                    cycle.rotate_left(min);
                    if reported.insert(cycle.clone()) {
                        out.push(Violation::InclusionCycle(cycle));
                    }
                    break;
                }
                chain.push(next.clone());
                cur = next;
            }
        }
        out
    }

    fn order_graph(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut graph: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for c in self.concepts.values() {
            let entry = graph.entry(c.name.as_str()).or_default();
            for d in c.dimensions().filter(|d| d.is_order_edge()) {
                if let Some(t) = d.domain.concept() {
                    entry.insert(t);
                }
            }
        }
        graph
    }

    /// Elementary cycles of length ≥ 2, each once, starting from its smallest node.
    fn order_cycles(&self) -> Vec<Vec<String>> {
        let graph = self.order_graph();
        let mut cycles = Vec::new();
        for &start in graph.keys() {
            let mut path = vec![start];
            let mut on_path = BTreeSet::from([start]);
            cycle_dfs(&graph, start, start, &mut path, &mut on_path, &mut cycles);
        }
        cycles
    }

    /// Number of concepts on the inclusion chain ending at `name` (root = 1).
    pub fn depth(&self, name: &str) -> Option<usize> {
        let mut depth = 0;
        let mut cur = Some(name);
        while let Some(n) = cur {
            let c = self.concepts.get(n)?;
            depth += 1;
            if depth > MAX_INCLUSION_DEPTH + 1 {
                return None;
            }
            cur = c.super_name.as_deref();
        }
        Some(depth)
    }

    /// Concepts from the inclusion root down to `name`.
    pub fn inclusion_chain(&self, name: &str) -> Result<Vec<&Concept>> {
        let mut chain = Vec::new();
        let mut cur = Some(name);
        while let Some(n) = cur {
            let c = self.get(n)?;
            chain.push(c);
            if chain.len() > MAX_INCLUSION_DEPTH {
                break;
            }
            cur = c.super_name.as_deref();
        }
        chain.reverse();
        Ok(chain)
    }

    /// Reflexive inclusion test: `descendant` is `ancestor` or included in it.
    pub fn is_included_in(&self, descendant: &str, ancestor: &str) -> bool {
        let mut cur = Some(descendant);
        let mut steps = 0;
        while let Some(n) = cur {
            if n == ancestor {
                return true;
            }
            steps += 1;
            if steps > MAX_INCLUSION_DEPTH {
                return false;
            }
            cur = self.concepts.get(n).and_then(|c| c.super_name.as_deref());
        }
        false
    }

    /// Primitive concepts have no greater concepts.
    pub fn is_primitive(&self, name: &str) -> Result<bool> {
        Ok(!self.get(name)?.dimensions().any(|d| d.is_order_edge()))
    }

    fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(SchemaError::NotValidated)
        }
    }

    /// Direct neighbours in the order: `(concept, dimension)` pairs.
    ///
    /// For `Greater` the dimension belongs to `concept`; for `Lesser` it
    /// belongs to the returned concept.
    pub fn order_neighbors(&self, concept: &str, direction: Direction) -> Result<Vec<(String, String)>> {
        self.require_validated()?;
        let c = self.get(concept)?;
        let out = match direction {
            Direction::Greater => c
                .dimensions()
                .filter(|d| d.is_order_edge())
                .filter_map(|d| d.domain.concept().map(|t| (t.to_string(), d.name.clone())))
                .collect(),
            Direction::Lesser => self
                .concepts
                .values()
                .flat_map(|other| {
                    other
                        .dimensions()
                        .filter(|d| d.is_order_edge() && d.domain.concept() == Some(concept))
                        .map(move |d| (other.name.clone(), d.name.clone()))
                })
                .collect(),
        };
        Ok(out)
    }

    /// All upward paths from `from` to `to`, as dimension-name sequences.
    /// `from == to` yields the single empty path.
    pub fn dimension_paths(&self, from: &str, to: &str) -> Result<Vec<Vec<String>>> {
        self.require_validated()?;
        self.get(from)?;
        self.get(to)?;
        let mut out = Vec::new();
        let mut path = Vec::new();
        let mut visiting = BTreeSet::new();
        self.collect_paths(from, to, &mut path, &mut visiting, &mut out);
        Ok(out)
    }

    fn collect_paths<'a>(
        &'a self,
        cur: &'a str,
        to: &str,
        path: &mut Vec<String>,
        visiting: &mut BTreeSet<&'a str>,
        out: &mut Vec<Vec<String>>,
    ) {
        if cur == to {
            out.push(path.clone());
            return;
        }
        if !visiting.insert(cur) {
            return;
        }
        if let Some(c) = self.concepts.get(cur) {
            for d in c.dimensions().filter(|d| d.is_order_edge()) {
                if let Some(next) = d.domain.concept() {
                    path.push(d.name.clone());
                    self.collect_paths(next, to, path, visiting, out);
                    path.pop();
                }
            }
        }
        visiting.remove(cur);
    }

    /// Reflexive upward reachability through order edges.
    pub fn reaches(&self, from: &str, to: &str) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(cur) = stack.pop() {
            if cur == to {
                return true;
            }
            if !seen.insert(cur) {
                continue;
            }
            if let Some(c) = self.concepts.get(cur) {
                stack.extend(
                    c.dimensions()
                        .filter(|d| d.is_order_edge())
                        .filter_map(|d| d.domain.concept()),
                );
            }
        }
        false
    }

    /// Maximal concepts lying below (or equal to) every input concept.
    /// Results are in declaration order.
    pub fn common_lesser(&self, concepts: &[&str]) -> Result<Vec<String>> {
        self.require_validated()?;
        for c in concepts {
            self.get(c)?;
        }
        let candidates: Vec<&str> = self
            .concepts
            .keys()
            .map(String::as_str)
            .filter(|c| concepts.iter().all(|target| self.reaches(c, target)))
            .collect();
        Ok(candidates
            .iter()
            .filter(|c| {
                !candidates
                    .iter()
                    .any(|other| other != *c && self.reaches(c, other))
            })
            .map(|c| c.to_string())
            .collect())
    }
}

fn cycle_dfs<'a>(
    graph: &BTreeMap<&'a str, BTreeSet<&'a str>>,
    start: &'a str,
    cur: &'a str,
    path: &mut Vec<&'a str>,
    on_path: &mut BTreeSet<&'a str>,
    out: &mut Vec<Vec<String>>,
) {
    let Some(next) = graph.get(cur) else { return };
    for &n in next {
        if n == start {
            if path.len() >= 2 {
                out.push(path.iter().map(|s| s.to_string()).collect());
            }
        } else if n > start && !on_path.contains(n) {
            path.push(n);
            on_path.insert(n);
            cycle_dfs(graph, start, n, path, on_path, out);
            on_path.remove(n);
            path.pop();
        }
    }
}
