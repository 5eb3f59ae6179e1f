//! CSV import. Headers name identity or entity dimensions of the target
//! collection's concept; a `super` column carries the parent identity.
//! Reference cells hold identities as `/`-joined segments with
//! `;`-separated fields. An empty cell is NULL.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::schema::Domain;
use crate::session::SessionError;
use crate::store::Database;
use crate::value::{ComplexIdentity, Segment, Value};

pub fn import_csv(db: &mut Database, path: &Path, collection: &str) -> Result<usize, SessionError> {
    let file = File::open(path).map_err(|e| SessionError::Io(format!("{}: {e}", path.display())))?;
    import_csv_reader(db, file, collection, &path.display().to_string())
}

enum Column {
    Parent,
    Identity(usize),
    Entity(String),
}

/// Inserts every data row or none: on the first bad row the rows already
/// inserted from this input are removed again.
pub fn import_csv_reader<R: Read>(db: &mut Database, input: R, collection: &str, label: &str) -> Result<usize, SessionError> {
    let fail = |row: usize, message: String| SessionError::Csv {
        path: label.to_string(),
        row,
        message,
    };
    let coll = db
        .collection(collection)
        .map_err(|e| fail(0, e.to_string()))?;
    let concept = db.schema().get(&coll.concept).map_err(|e| fail(0, e.to_string()))?.clone();
    let has_parent = coll.parent.is_some();

    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = reader.headers().map_err(|e| fail(0, e.to_string()))?.clone();
    let mut columns = Vec::with_capacity(headers.len());
    for h in headers.iter() {
        let h = h.trim();
        let col = if h == "super" || h == "parent" {
            Column::Parent
        } else if let Some(i) = concept.identity_index(h) {
            Column::Identity(i)
        } else if concept.entity_index(h).is_some() {
            Column::Entity(h.to_string())
        } else {
            return Err(fail(0, format!("column {h} is not a field of {}", concept.name)));
        };
        columns.push(col);
    }
    for (i, d) in concept.identity_dims.iter().enumerate() {
        if !columns.iter().any(|c| matches!(c, Column::Identity(j) if *j == i)) {
            return Err(fail(0, format!("identity column {} is missing", d.name)));
        }
    }
    if has_parent && !columns.iter().any(|c| matches!(c, Column::Parent)) {
        return Err(fail(0, "column super (the parent identity) is missing".to_string()));
    }

    let mut inserted: Vec<ComplexIdentity> = Vec::new();
    let mut row = 0;
    let result = (|| -> Result<(), SessionError> {
        for record in reader.records() {
            row += 1;
            let record = record.map_err(|e| fail(row, e.to_string()))?;
            let mut parent = None;
            let mut segment = vec![Value::Null; concept.identity_dims.len()];
            let mut entity = Vec::new();
            for (col, cell) in columns.iter().zip(record.iter()) {
                match col {
                    Column::Parent => {
                        let sup = concept.super_name.as_deref().ok_or_else(|| fail(row, "concept has no parent".to_string()))?;
                        parent = Some(parse_identity_text(db, sup, cell).map_err(|m| fail(row, m))?);
                    }
                    Column::Identity(i) => {
                        segment[*i] = parse_cell(db, &concept.identity_dims[*i].domain, cell).map_err(|m| fail(row, m))?;
                    }
                    Column::Entity(name) => {
                        let d = concept.dimension(name).expect("entity column");
                        entity.push((name.clone(), parse_cell(db, &d.domain, cell).map_err(|m| fail(row, m))?));
                    }
                }
            }
            let id = db
                .insert(collection, parent.as_ref(), segment, entity)
                .map_err(|e| fail(row, e.to_string()))?;
            inserted.push(id);
        }
        Ok(())
    })();
    match result {
        Ok(()) => Ok(inserted.len()),
        Err(e) => {
            for id in inserted.iter().rev() {
                db.remove_for_rollback(collection, id);
            }
            Err(e)
        }
    }
}

fn parse_cell(db: &Database, domain: &Domain, cell: &str) -> Result<Value, String> {
    if cell.is_empty() {
        return Ok(Value::Null);
    }
    match domain {
        Domain::Primitive(p) => p.parse_text(cell),
        Domain::Concept(c) => parse_identity_text(db, c, cell).map(Value::Ref),
    }
}

/// Parses `a/b;c` as an identity of `concept` or of one of its inclusion
/// descendants with that many segments. A candidate whose identity is
/// stored somewhere wins; otherwise the first that parses is returned.
pub fn parse_identity_text(db: &Database, concept: &str, text: &str) -> Result<ComplexIdentity, String> {
    let parts: Vec<&str> = text.split('/').collect();
    let schema = db.schema();
    let mut candidates: Vec<&str> = vec![concept];
    candidates.extend(
        schema
            .concepts()
            .map(|c| c.name.as_str())
            .filter(|c| *c != concept && schema.is_included_in(c, concept)),
    );
    let mut first: Option<ComplexIdentity> = None;
    let mut last_err = format!("'{text}' is not an identity of {concept}");
    for cand in candidates {
        if schema.depth(cand) != Some(parts.len()) {
            continue;
        }
        match build_identity(db, cand, &parts) {
            Ok(id) => {
                if db.collections_of_concept(cand).any(|c| c.contains(&id)) {
                    return Ok(id);
                }
                first.get_or_insert(id);
            }
            Err(e) => last_err = e,
        }
    }
    first.ok_or(last_err)
}

fn build_identity(db: &Database, concept: &str, parts: &[&str]) -> Result<ComplexIdentity, String> {
    let chain = db.schema().inclusion_chain(concept).map_err(|e| e.to_string())?;
    let mut segments = Vec::with_capacity(parts.len());
    for (c, part) in chain.iter().zip(parts) {
        let n = c.identity_dims.len();
        let fields: Vec<&str> = if n == 0 {
            if !part.is_empty() {
                return Err(format!("{} has no identity fields but '{part}' was given", c.name));
            }
            Vec::new()
        } else {
            part.splitn(n, ';').collect()
        };
        if fields.len() != n {
            return Err(format!("{} needs {n} identity fields in '{part}'", c.name));
        }
        let mut values = Vec::with_capacity(n);
        for (d, f) in c.identity_dims.iter().zip(fields) {
            match &d.domain {
                Domain::Primitive(p) => values.push(p.parse_text(f)?),
                Domain::Concept(_) => {
                    return Err(format!(
                        "identity field {}.{} is a reference and cannot be written inline",
                        c.name, d.name
                    ))
                }
            }
        }
        segments.push(Segment::new(c.name.clone(), values));
    }
    ComplexIdentity::from_segments(segments).ok_or_else(|| "empty identity".to_string())
}
