//! Result printing: aligned text tables and CSV.

use crate::algebra::{QueryError, Val};
use crate::store::{Database, ElementSet};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
}

fn cell_text(v: &Value, format: OutputFormat) -> String {
    match (v, format) {
        (Value::Null, OutputFormat::Csv) => String::new(),
        (v, _) => v.to_string(),
    }
}

pub fn render_rows(columns: &[String], rows: &[Vec<Value>], format: OutputFormat) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|v| cell_text(v, format)).collect())
        .collect();
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            // writing to memory cannot fail
            w.write_record(columns).expect("in-memory write");
            for r in &cells {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
        }
        OutputFormat::Table => {
            let mut widths: Vec<usize> = columns.iter().map(|c| c.chars().count()).collect();
            for r in &cells {
                for (i, c) in r.iter().enumerate() {
                    widths[i] = widths[i].max(c.chars().count());
                }
            }
            let line = |items: &[String]| -> String {
                let padded: Vec<String> = items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect();
                padded.join(" | ").trim_end().to_string()
            };
            let mut out = String::new();
            out.push_str(&line(columns));
            out.push('\n');
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("-+-"));
            out.push('\n');
            for r in &cells {
                out.push_str(&line(r));
                out.push('\n');
            }
            let n = rows.len();
            out.push_str(&format!("({n} {})", if n == 1 { "row" } else { "rows" }));
            out
        }
    }
}

/// Identity columns of every segment, then entity columns, one row per
/// member in identity order.
pub fn render_set(db: &Database, set: &ElementSet, format: OutputFormat) -> Result<String, QueryError> {
    let columns = db.column_names(&set.collection)?;
    let coll = db.collection(&set.collection)?;
    let mut rows = Vec::with_capacity(set.len());
    for id in set.iter() {
        let mut row: Vec<Value> = id.segments().iter().flat_map(|s| s.values.iter().cloned()).collect();
        if let Some(el) = coll.get(id) {
            row.extend(el.entity.iter().cloned());
        }
        rows.push(row);
    }
    Ok(render_rows(&columns, &rows, format))
}

pub fn render_val(db: &Database, v: &Val, format: OutputFormat) -> Result<String, QueryError> {
    match v {
        Val::Set(s) => render_set(db, s, format),
        Val::Elem { .. } => render_set(db, &v.as_set().expect("element"), format),
        Val::Table(t) => Ok(render_rows(&t.columns, &t.rows, format)),
        Val::Bag(items) => {
            let rows = items
                .iter()
                .map(|i| i.to_value().map(|v| vec![v]))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(render_rows(&["value".to_string()], &rows, format))
        }
        other => Ok(other.to_string()),
    }
}
