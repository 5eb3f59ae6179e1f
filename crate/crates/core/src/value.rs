//! Primitive values and complex identities.
//!
//! A [`ComplexIdentity`] is the full reference to an element: one
//! [`Segment`] per level of the inclusion hierarchy, from the root concept
//! down to the element's own concept. Identities are compared segment-wise;
//! `DOUBLE` components compare by bit pattern.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Built-in field types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimitiveType {
    Int,
    Double,
    /// Fixed-max-length string; the payload is the maximum length in characters.
    Char(u32),
    Bool,
}

impl PrimitiveType {
    /// Parses a primitive type keyword (`INT`, `DOUBLE`, `BOOL`). `CHAR(n)`
    /// carries a length and is handled by the parser.
    pub fn from_keyword(word: &str) -> Option<PrimitiveType> {
        match word {
            "INT" => Some(PrimitiveType::Int),
            "DOUBLE" => Some(PrimitiveType::Double),
            "BOOL" => Some(PrimitiveType::Bool),
            _ => None,
        }
    }

    /// Checks `value` against this type, widening `INT` to `DOUBLE` where needed.
    /// `NULL` is accepted by every type; callers decide where it is allowed.
    pub fn coerce(&self, value: Value) -> Result<Value, String> {
        match (self, value) {
            (_, Value::Null) => Ok(Value::Null),
            (PrimitiveType::Int, Value::Int(i)) => Ok(Value::Int(i)),
            (PrimitiveType::Double, Value::Double(d)) => Ok(Value::Double(d)),
            (PrimitiveType::Double, Value::Int(i)) => Ok(Value::Double(i as f64)),
            (PrimitiveType::Bool, Value::Bool(b)) => Ok(Value::Bool(b)),
            (PrimitiveType::Char(n), Value::Str(s)) => {
                let len = s.chars().count();
                if len > *n as usize {
                    Err(format!("string of length {len} exceeds CHAR({n})"))
                } else {
                    Ok(Value::Str(s))
                }
            }
            (ty, v) => Err(format!("expected {ty}, found {}", v.kind_name())),
        }
    }

    /// Parses the textual form of a value of this type (CSV cells, snapshot fields).
    pub fn parse_text(&self, text: &str) -> Result<Value, String> {
        match self {
            PrimitiveType::Int => text
                .trim()
                .parse::<i64>()
                .map(Value::Int)
                .map_err(|_| format!("invalid INT '{text}'")),
            PrimitiveType::Double => text
                .trim()
                .parse::<f64>()
                .map(Value::Double)
                .map_err(|_| format!("invalid DOUBLE '{text}'")),
            PrimitiveType::Bool => match text.trim().to_ascii_lowercase().as_str() {
                "true" | "1" => Ok(Value::Bool(true)),
                "false" | "0" => Ok(Value::Bool(false)),
                _ => Err(format!("invalid BOOL '{text}'")),
            },
            PrimitiveType::Char(_) => self.coerce(Value::Str(text.to_string())),
        }
    }
}

impl fmt::Display for PrimitiveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimitiveType::Int => f.write_str("INT"),
            PrimitiveType::Double => f.write_str("DOUBLE"),
            PrimitiveType::Char(n) => write!(f, "CHAR({n})"),
            PrimitiveType::Bool => f.write_str("BOOL"),
        }
    }
}

/// A stored field value.
#[derive(Debug, Clone)]
pub enum Value {
    Null,
    Int(i64),
    Double(f64),
    Str(String),
    Bool(bool),
    /// Identity of a greater element (a concept-typed dimension value).
    Ref(ComplexIdentity),
}

impl Value {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn as_ref_identity(&self) -> Option<&ComplexIdentity> {
        match self {
            Value::Ref(id) => Some(id),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Null => "NULL",
            Value::Int(_) => "INT",
            Value::Double(_) => "DOUBLE",
            Value::Str(_) => "string",
            Value::Bool(_) => "BOOL",
            Value::Ref(_) => "reference",
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Null => 0,
            Value::Bool(_) => 1,
            Value::Int(_) => 2,
            Value::Double(_) => 3,
            Value::Str(_) => 4,
            Value::Ref(_) => 5,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    // total_cmp is Equal exactly when the bit patterns match, so this order
    // agrees with the bit-equality used for identities.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Null, Value::Null) => Ordering::Equal,
            (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Double(a), Value::Double(b)) => a.total_cmp(b),
            (Value::Str(a), Value::Str(b)) => a.as_bytes().cmp(b.as_bytes()),
            (Value::Ref(a), Value::Ref(b)) => a.cmp(b),
            (a, b) => a.rank().cmp(&b.rank()),
        }
    }
}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Value::Null => {}
            Value::Bool(b) => b.hash(state),
            Value::Int(i) => i.hash(state),
            Value::Double(d) => d.to_bits().hash(state),
            Value::Str(s) => s.hash(state),
            Value::Ref(id) => id.hash(state),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("NULL"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Double(d) => write!(f, "{d}"),
            Value::Str(s) => f.write_str(s),
            Value::Bool(b) => f.write_str(if *b { "TRUE" } else { "FALSE" }),
            Value::Ref(id) => write!(f, "{id}"),
        }
    }
}

/// One level of a complex identity: the identity-dimension values of one
/// concept, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub concept: String,
    pub values: Vec<Value>,
}

impl Segment {
    pub fn new(concept: impl Into<String>, values: Vec<Value>) -> Segment {
        Segment {
            concept: concept.into(),
            values,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            match v {
                Value::Ref(id) => write!(f, "[{id}]")?,
                other => write!(f, "{other}")?,
            }
        }
        Ok(())
    }
}

/// Sequence of identity segments from the root concept down to an element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexIdentity {
    segments: Vec<Segment>,
}

impl ComplexIdentity {
    pub fn root(segment: Segment) -> ComplexIdentity {
        ComplexIdentity {
            segments: vec![segment],
        }
    }

    /// Builds an identity from raw segments. Returns `None` for an empty list.
    pub fn from_segments(segments: Vec<Segment>) -> Option<ComplexIdentity> {
        if segments.is_empty() {
            None
        } else {
            Some(ComplexIdentity { segments })
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn depth(&self) -> usize {
        self.segments.len()
    }

    /// Concept of the identified element (the last segment's concept).
    pub fn concept(&self) -> &str {
        &self.last().concept
    }

    pub fn last(&self) -> &Segment {
        self.segments.last().expect("identities are never empty")
    }

    /// The identity of the parent element, if any.
    pub fn parent(&self) -> Option<ComplexIdentity> {
        if self.segments.len() < 2 {
            None
        } else {
            Some(ComplexIdentity {
                segments: self.segments[..self.segments.len() - 1].to_vec(),
            })
        }
    }

    pub fn child(&self, segment: Segment) -> ComplexIdentity {
        let mut segments = self.segments.clone();
        segments.push(segment);
        ComplexIdentity { segments }
    }

    pub fn has_prefix(&self, prefix: &ComplexIdentity) -> bool {
        prefix.segments.len() <= self.segments.len()
            && self.segments[..prefix.segments.len()] == prefix.segments[..]
    }

    /// First identity value of the first segment, used when an element is
    /// compared against a primitive literal.
    pub fn leading_value(&self) -> Option<&Value> {
        self.segments.iter().flat_map(|s| s.values.iter()).next()
    }
}

impl fmt::Display for ComplexIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{seg}")?;
        }
        Ok(())
    }
}
