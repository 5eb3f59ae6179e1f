//! Whole-database snapshot files.
//!
//! ```text
//! conceptdb-snapshot v1
//! SCHEMA
//! CONCEPT Bank ...
//! ;
//! CREATE TABLE Banks CONCEPT Bank
//! ;
//! DATA Banks 1
//! {Bank('B1')} | 'First Bank', @{City('Berlin')/Address('10115', 'Main')}
//! END
//! ```
//!
//! Each data line is the element identity, a bar, and the entity values.

use thiserror::Error;

use crate::coql::ast::{Statement, StatementKind};
use crate::coql::{parse_script, render_statement};
use crate::session::{concept_from_decl, create_table_of, decl_from_concept};
use crate::store::Database;
use crate::value::{ComplexIdentity, Segment, Value};

pub const SNAPSHOT_HEADER: &str = "conceptdb-snapshot v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnapshotError {
    #[error("snapshot I/O: {0}")]
    Io(String),
    #[error("unsupported snapshot version: {0}")]
    VersionMismatch(String),
    #[error("corrupt snapshot: {0}")]
    CorruptSnapshot(String),
}

fn corrupt(msg: impl Into<String>) -> SnapshotError {
    SnapshotError::CorruptSnapshot(msg.into())
}

pub fn save_snapshot(db: &Database) -> String {
    let mut out = String::new();
    out.push_str(SNAPSHOT_HEADER);
    out.push_str("\nSCHEMA\n");
    for c in db.schema().concepts() {
        let stmt = Statement {
            kind: StatementKind::Concept(decl_from_concept(c)),
            pos: Default::default(),
        };
        out.push_str(&render_statement(&stmt));
        out.push_str("\n;\n");
    }
    for c in db.collections() {
        let stmt = Statement {
            kind: StatementKind::CreateTable(create_table_of(c)),
            pos: Default::default(),
        };
        out.push_str(&render_statement(&stmt));
        out.push_str("\n;\n");
    }
    for c in db.collections() {
        out.push_str(&format!("DATA {} {}\n", c.name, c.len()));
        for el in c.elements() {
            write_identity(&mut out, &el.identity);
            out.push_str(" |");
            for (i, v) in el.entity.iter().enumerate() {
                out.push_str(if i == 0 { " " } else { ", " });
                write_value(&mut out, v);
            }
            out.push('\n');
        }
    }
    out.push_str("END\n");
    out
}

fn write_identity(out: &mut String, id: &ComplexIdentity) {
    out.push('{');
    for (i, s) in id.segments().iter().enumerate() {
        if i > 0 {
            out.push('/');
        }
        out.push_str(&s.concept);
        out.push('(');
        for (j, v) in s.values.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            write_value(out, v);
        }
        out.push(')');
    }
    out.push('}');
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("NULL"),
        Value::Int(i) => out.push_str(&i.to_string()),
        // Debug output always has a '.', an exponent, NaN or inf, so it
        // never reads back as an INT
        Value::Double(d) => out.push_str(&format!("{d:?}")),
        Value::Str(s) => {
            out.push('\'');
            out.push_str(&s.replace('\'', "''"));
            out.push('\'');
        }
        Value::Bool(b) => out.push_str(if *b { "TRUE" } else { "FALSE" }),
        Value::Ref(id) => {
            out.push('@');
            write_identity(out, id);
        }
    }
}

pub fn load_snapshot(text: &str) -> Result<Database, SnapshotError> {
    let mut lines = text.lines().enumerate().peekable();
    match lines.next() {
        Some((_, h)) if h == SNAPSHOT_HEADER => {}
        Some((_, h)) if h.starts_with("conceptdb-snapshot") => {
            return Err(SnapshotError::VersionMismatch(h.trim_start_matches("conceptdb-snapshot").trim().to_string()))
        }
        _ => return Err(corrupt("missing snapshot header")),
    }
    match lines.next() {
        Some((_, "SCHEMA")) => {}
        _ => return Err(corrupt("missing SCHEMA section")),
    }
    let mut schema_text = String::new();
    while let Some((_, l)) = lines.peek() {
        if l.starts_with("DATA ") || *l == "END" {
            break;
        }
        schema_text.push_str(l);
        schema_text.push('\n');
        lines.next();
    }
    let stmts = parse_script(&schema_text).map_err(|e| corrupt(format!("schema section: {e}")))?;
    let mut db = Database::new();
    let mut tables = Vec::new();
    for s in stmts {
        match s.kind {
            StatementKind::Concept(d) => db
                .define_concept(concept_from_decl(&d))
                .map_err(|e| corrupt(e.to_string()))?,
            StatementKind::CreateTable(t) => tables.push(t),
            _ => return Err(corrupt("schema section holds a statement that is not a declaration")),
        }
    }
    let report = db.validate().map_err(|e| corrupt(e.to_string()))?;
    if !report.is_valid() {
        return Err(corrupt("schema does not validate"));
    }
    for t in tables {
        db.create_collection(&t.name, &t.concept, t.parent.as_deref(), &t.bindings)
            .map_err(|e| corrupt(e.to_string()))?;
    }

    let mut ended = false;
    while let Some((n, line)) = lines.next() {
        if line == "END" {
            ended = true;
            break;
        }
        let rest = line
            .strip_prefix("DATA ")
            .ok_or_else(|| corrupt(format!("line {}: expected DATA or END", n + 1)))?;
        let mut parts = rest.split_whitespace();
        let (Some(name), Some(count), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(corrupt(format!("line {}: malformed DATA header", n + 1)));
        };
        let count: usize = count
            .parse()
            .map_err(|_| corrupt(format!("line {}: bad element count", n + 1)))?;
        let entity_names: Vec<String> = {
            let coll = db.collection(name).map_err(|e| corrupt(e.to_string()))?;
            let concept = db.schema().get(&coll.concept).map_err(|e| corrupt(e.to_string()))?;
            concept.entity_dims.iter().map(|d| d.name.clone()).collect()
        };
        for _ in 0..count {
            let (n, line) = lines
                .next()
                .ok_or_else(|| corrupt(format!("collection {name} ends early")))?;
            let at = |m: String| corrupt(format!("line {}: {m}", n + 1));
            let (id, values) = parse_record(line).map_err(at)?;
            if values.len() != entity_names.len() {
                return Err(at(format!("expected {} entity values", entity_names.len())));
            }
            let parent = id.parent();
            let segment = id.last().values.clone();
            let entity = entity_names.iter().cloned().zip(values).collect();
            db.insert_deferred(name, parent.as_ref(), segment, entity)
                .map_err(|e| at(format!("element {id} in {name}: {e}")))?;
        }
    }
    if !ended {
        return Err(corrupt("missing END"));
    }
    db.check_integrity()
        .map_err(|b| {
            let (coll, id, e) = *b;
            corrupt(format!("element {id} in {coll}: {e}"))
        })?;
    Ok(db)
}

struct Cursor<'a> {
    chars: Vec<char>,
    i: usize,
    text: &'a str,
}

impl Cursor<'_> {
    fn ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i] == ' ' {
            self.i += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        self.ws();
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(format!("expected '{c}' at column {} of '{}'", self.i + 1, self.text))
        }
    }

    fn word(&mut self) -> String {
        let start = self.i;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-' || c == '+')
        {
            self.i += 1;
        }
        self.chars[start..self.i].iter().collect()
    }

    fn identity(&mut self) -> Result<ComplexIdentity, String> {
        self.expect('{')?;
        let mut segments = Vec::new();
        loop {
            self.ws();
            let concept = self.word();
            if concept.is_empty() {
                return Err("expected a concept name".to_string());
            }
            self.expect('(')?;
            let mut values = Vec::new();
            self.ws();
            if self.peek() != Some(')') {
                loop {
                    values.push(self.value()?);
                    self.ws();
                    if self.peek() == Some(',') {
                        self.i += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(')')?;
            segments.push(Segment::new(concept, values));
            self.ws();
            match self.peek() {
                Some('/') => self.i += 1,
                Some('}') => {
                    self.i += 1;
                    break;
                }
                _ => return Err("unterminated identity".to_string()),
            }
        }
        ComplexIdentity::from_segments(segments).ok_or_else(|| "empty identity".to_string())
    }

    fn value(&mut self) -> Result<Value, String> {
        self.ws();
        match self.peek() {
            Some('@') => {
                self.i += 1;
                Ok(Value::Ref(self.identity()?))
            }
            Some('\'') => {
                self.i += 1;
                let mut s = String::new();
                loop {
                    match self.peek() {
                        None => return Err("unterminated string".to_string()),
                        Some('\'') if self.chars.get(self.i + 1) == Some(&'\'') => {
                            s.push('\'');
                            self.i += 2;
                        }
                        Some('\'') => {
                            self.i += 1;
                            break;
                        }
                        Some(c) => {
                            s.push(c);
                            self.i += 1;
                        }
                    }
                }
                Ok(Value::Str(s))
            }
            _ => {
                let w = self.word();
                match w.as_str() {
                    "NULL" => Ok(Value::Null),
                    "TRUE" => Ok(Value::Bool(true)),
                    "FALSE" => Ok(Value::Bool(false)),
                    "" => Err("expected a value".to_string()),
                    _ if w.contains(['.', 'e', 'E', 'N', 'i']) => {
                        w.parse::<f64>().map(Value::Double).map_err(|_| format!("bad number {w}"))
                    }
                    _ => w.parse::<i64>().map(Value::Int).map_err(|_| format!("bad number {w}")),
                }
            }
        }
    }
}

fn parse_record(line: &str) -> Result<(ComplexIdentity, Vec<Value>), String> {
    let mut c = Cursor {
        chars: line.chars().collect(),
        i: 0,
        text: line,
    };
    let id = c.identity()?;
    c.expect('|')?;
    let mut values = Vec::new();
    c.ws();
    if c.peek().is_some() {
        loop {
            values.push(c.value()?);
            c.ws();
            match c.peek() {
                Some(',') => c.i += 1,
                None => break,
                Some(x) => return Err(format!("unexpected '{x}'")),
            }
        }
    }
    Ok((id, values))
}
