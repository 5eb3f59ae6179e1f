//! Script and REPL sessions: statement execution, variables, result
//! printing, CSV import and snapshots.

mod csv_import;
mod snapshot;
mod table;

use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use thiserror::Error;

use crate::algebra::{truth, EvalConfig, Evaluator, QueryError, Scope, Val};
use crate::coql::ast::{ConceptDecl, CreateTable, FieldGroup, Select, Statement, StatementKind, TypeRef};
use crate::coql::{render_expr, ParseError, Pos, StatementReader};
use crate::schema::{Concept, Domain};
use crate::store::{Database, StoreError};
use crate::value::Value;

pub use csv_import::{import_csv, import_csv_reader, parse_identity_text};
pub use snapshot::{load_snapshot, save_snapshot, SnapshotError, SNAPSHOT_HEADER};
pub use table::{render_rows, render_set, render_val, OutputFormat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("{0}")]
    Parse(ParseError),
    #[error("{pos}: {error}")]
    Query { pos: Pos, error: QueryError },
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("{0}")]
    Io(String),
    #[error("{path}: row {row}: {message}")]
    Csv { path: String, row: usize, message: String },
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error("{0}")]
    Usage(String),
}

impl SessionError {
    /// 1 for engine and parse errors, 2 for usage and I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            SessionError::Io(_) | SessionError::Usage(_) => 2,
            SessionError::Snapshot(SnapshotError::Io(_)) => 2,
            _ => 1,
        }
    }
}

fn at(pos: Pos) -> impl Fn(QueryError) -> SessionError {
    move |error| SessionError::Query { pos, error }
}

fn store_at(pos: Pos) -> impl Fn(StoreError) -> SessionError {
    move |e| SessionError::Query {
        pos,
        error: QueryError::Store(e),
    }
}

/// What a meta-command asks the caller to do next.
#[derive(Debug, Clone, PartialEq)]
pub enum MetaOutcome {
    Output(String),
    Quit,
}

/// One executed script item.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    /// 1-based statement number; meta-commands have none.
    pub statement: Option<usize>,
    pub pos: Pos,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScriptReport {
    pub entries: Vec<ReportEntry>,
    /// The failing statement number (if a statement failed) and the error.
    pub error: Option<(Option<usize>, SessionError)>,
}

impl ScriptReport {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// Printed outputs in order, followed by the error line if any.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            if !e.output.is_empty() {
                out.push_str(&e.output);
                if !e.output.ends_with('\n') {
                    out.push('\n');
                }
            }
        }
        if let Some(line) = self.error_line() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn error_line(&self) -> Option<String> {
        self.error.as_ref().map(|(n, e)| match n {
            Some(n) => format!("error in statement {n}: {e}"),
            None => format!("error: {e}"),
        })
    }
}

pub struct Session {
    pub db: Database,
    pub vars: IndexMap<String, Val>,
    pub format: OutputFormat,
    pub config: EvalConfig,
    /// Directory relative file names in meta-commands are resolved against.
    pub base_dir: PathBuf,
}

impl Default for Session {
    fn default() -> Session {
        Session::new()
    }
}

const META_COMMANDS: [&str; 6] = [".schema", ".collections", ".load", ".save", ".open", ".quit"];

fn is_meta_line(line: &str) -> bool {
    let t = line.trim_start();
    t.starts_with('.') && t[1..].starts_with(|c: char| c.is_ascii_alphabetic())
}

impl Session {
    pub fn new() -> Session {
        Session {
            db: Database::new(),
            vars: IndexMap::new(),
            format: OutputFormat::Table,
            config: EvalConfig::default(),
            base_dir: PathBuf::from("."),
        }
    }

    pub fn with_database(db: Database) -> Session {
        Session {
            db,
            ..Session::new()
        }
    }

    fn resolve(&self, path: &str) -> PathBuf {
        let p = Path::new(path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Runs a script file; relative paths inside it resolve against its directory.
    pub fn run_script_file(&mut self, path: &Path) -> Result<ScriptReport, SessionError> {
        let text = fs::read_to_string(path).map_err(|e| SessionError::Io(format!("{}: {e}", path.display())))?;
        if let Some(dir) = path.parent() {
            self.base_dir = dir.to_path_buf();
        }
        Ok(self.run_script(&text))
    }

    /// Executes statements (and meta-command lines) in order, stopping at
    /// the first error.
    pub fn run_script(&mut self, text: &str) -> ScriptReport {
        let mut report = ScriptReport::default();
        // meta-command lines are blanked out so statement positions stay exact
        let mut metas: Vec<(u32, String)> = Vec::new();
        let mut coql = String::with_capacity(text.len());
        let mut depth_text = String::new();
        for (i, line) in text.lines().enumerate() {
            if is_meta_line(line) && !crate::coql::is_incomplete(&depth_text) {
                metas.push((i as u32 + 1, line.trim().to_string()));
                coql.push('\n');
                depth_text.clear();
            } else {
                coql.push_str(line);
                coql.push('\n');
                depth_text.push_str(line);
                depth_text.push('\n');
            }
        }
        let mut metas = metas.into_iter().peekable();
        let mut index = 0;
        for item in StatementReader::new(&coql) {
            let line = match &item {
                Ok(s) => s.pos.line,
                Err(e) => e.pos().line,
            };
            while metas.peek().is_some_and(|(l, _)| *l < line) {
                let (l, m) = metas.next().expect("peeked");
                if !self.run_meta_entry(&mut report, l, &m) {
                    return report;
                }
            }
            index += 1;
            match item {
                Ok(stmt) => match self.execute(&stmt) {
                    Ok(output) => report.entries.push(ReportEntry {
                        statement: Some(index),
                        pos: stmt.pos,
                        output,
                    }),
                    Err(e) => {
                        report.error = Some((Some(index), e));
                        return report;
                    }
                },
                Err(e) => {
                    report.error = Some((Some(index), SessionError::Parse(e)));
                    return report;
                }
            }
        }
        for (l, m) in metas {
            if !self.run_meta_entry(&mut report, l, &m) {
                break;
            }
        }
        report
    }

    fn run_meta_entry(&mut self, report: &mut ScriptReport, line: u32, cmd: &str) -> bool {
        match self.meta(cmd) {
            Ok(MetaOutcome::Output(output)) => {
                report.entries.push(ReportEntry {
                    statement: None,
                    pos: Pos::new(line, 1),
                    output,
                });
                true
            }
            Ok(MetaOutcome::Quit) => false,
            Err(e) => {
                report.error = Some((None, e));
                false
            }
        }
    }

    /// Executes one REPL input: a meta-command or one or more statements.
    pub fn execute_input(&mut self, text: &str) -> Result<MetaOutcome, SessionError> {
        if is_meta_line(text) {
            return self.meta(text.trim());
        }
        let mut outputs = Vec::new();
        for stmt in StatementReader::new(text) {
            let stmt = stmt.map_err(SessionError::Parse)?;
            let out = self.execute(&stmt)?;
            if !out.is_empty() {
                outputs.push(out);
            }
        }
        Ok(MetaOutcome::Output(outputs.join("\n")))
    }

    fn ensure_validated(&mut self, pos: Pos) -> Result<(), SessionError> {
        if self.db.schema().is_validated() {
            return Ok(());
        }
        let report = self.db.validate().map_err(store_at(pos))?;
        if !report.is_valid() {
            let v: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(SessionError::InvalidSchema(v.join("; ")));
        }
        Ok(())
    }

    fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(&self.db).with_vars(&self.vars).with_config(self.config)
    }

    /// Executes one statement and returns its printed output (possibly empty).
    pub fn execute(&mut self, stmt: &Statement) -> Result<String, SessionError> {
        let pos = stmt.pos;
        match &stmt.kind {
            StatementKind::Concept(decl) => {
                let concept = concept_from_decl(decl);
                self.db.define_concept(concept).map_err(store_at(pos))?;
                Ok(String::new())
            }
            StatementKind::CreateTable(t) => {
                self.ensure_validated(pos)?;
                self.db
                    .create_collection(&t.name, &t.concept, t.parent.as_deref(), &t.bindings)
                    .map_err(store_at(pos))?;
                Ok(String::new())
            }
            StatementKind::Assign { name, expr } => {
                self.ensure_validated(pos)?;
                if self.db.has_collection(name) {
                    return Err(SessionError::Query {
                        pos,
                        error: QueryError::TypeError(format!("{name} is a collection and cannot be assigned")),
                    });
                }
                let v = self.evaluator().eval(expr, &Scope::root()).map_err(at(pos))?;
                let summary = format!("{name} = {v}");
                self.vars.insert(name.clone(), v);
                Ok(summary)
            }
            StatementKind::Select(sel) => {
                self.ensure_validated(pos)?;
                let (columns, rows) = self.select(sel).map_err(at(pos))?;
                Ok(render_rows(&columns, &rows, self.format))
            }
            StatementKind::Query(expr) => {
                self.ensure_validated(pos)?;
                let v = self.evaluator().eval(expr, &Scope::root()).map_err(at(pos))?;
                render_val(&self.db, &v, self.format).map_err(at(pos))
            }
        }
    }

    fn select(&self, sel: &Select) -> Result<(Vec<String>, Vec<Vec<Value>>), QueryError> {
        let ev = self.evaluator();
        let root = Scope::root();
        let base = ev.term_set(&sel.collection, &root)?;
        let columns = sel.items.iter().map(render_expr).collect();
        let mut rows = Vec::new();
        for id in base.iter() {
            let mut s = root.child();
            s.set_this(base.collection.clone(), id.clone());
            if let Some(v) = &sel.var {
                s.bind(
                    v.clone(),
                    Val::Elem {
                        collection: base.collection.clone(),
                        identity: id.clone(),
                    },
                );
            }
            if let Some(w) = &sel.where_ {
                if !truth(&ev.eval(w, &s)?)? {
                    continue;
                }
            }
            let mut row = Vec::with_capacity(sel.items.len());
            for item in &sel.items {
                row.push(ev.eval(item, &s)?.to_value()?);
            }
            rows.push(row);
        }
        Ok((columns, rows))
    }

    /// Runs a meta-command line such as `.load file.csv Persons`.
    pub fn meta(&mut self, line: &str) -> Result<MetaOutcome, SessionError> {
        let mut parts = line.split_whitespace();
        let cmd = parts.next().unwrap_or("");
        let args: Vec<&str> = parts.collect();
        let want = |n: usize, usage: &str| -> Result<(), SessionError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(SessionError::Usage(format!("usage: {usage}")))
            }
        };
        match cmd {
            ".quit" | ".exit" => Ok(MetaOutcome::Quit),
            ".schema" => {
                want(0, ".schema")?;
                Ok(MetaOutcome::Output(self.describe_schema()))
            }
            ".collections" => {
                want(0, ".collections")?;
                Ok(MetaOutcome::Output(self.describe_collections()))
            }
            ".load" => {
                want(2, ".load <csv> <collection>")?;
                self.ensure_validated(Pos::default())?;
                let path = self.resolve(args[0]);
                let n = import_csv(&mut self.db, &path, args[1])?;
                Ok(MetaOutcome::Output(format!("loaded {n} rows into {}", args[1])))
            }
            ".save" => {
                want(1, ".save <path>")?;
                let path = self.resolve(args[0]);
                fs::write(&path, save_snapshot(&self.db))
                    .map_err(|e| SessionError::Io(format!("{}: {e}", path.display())))?;
                Ok(MetaOutcome::Output(format!("saved {}", args[0])))
            }
            ".open" => {
                want(1, ".open <path>")?;
                let path = self.resolve(args[0]);
                self.open(&path)?;
                Ok(MetaOutcome::Output(format!("opened {}", args[0])))
            }
            other => {
                let known = META_COMMANDS.join(", ");
                Err(SessionError::Usage(format!("unknown command {other}; known: {known}")))
            }
        }
    }

    /// Replaces the database with a snapshot file's contents.
    pub fn open(&mut self, path: &Path) -> Result<(), SessionError> {
        let text = fs::read_to_string(path).map_err(|e| SessionError::Snapshot(SnapshotError::Io(format!("{}: {e}", path.display()))))?;
        self.db = load_snapshot(&text)?;
        self.vars.clear();
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), SessionError> {
        fs::write(path, save_snapshot(&self.db))
            .map_err(|e| SessionError::Snapshot(SnapshotError::Io(format!("{}: {e}", path.display()))))
    }

    /// One line per concept: inclusion, fields and greater links.
    pub fn describe_schema(&self) -> String {
        let mut out = Vec::new();
        for c in self.db.schema().concepts() {
            let mut line = c.name.clone();
            if let Some(s) = &c.super_name {
                line.push_str(&format!(" IN {s}"));
            }
            let fields = |dims: &[crate::schema::Dimension]| -> String {
                dims.iter()
                    .map(|d| format!("{} {}", d.domain, d.name))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            line.push_str(&format!(
                " | identity: {} | entity: {}",
                fields(&c.identity_dims),
                fields(&c.entity_dims)
            ));
            let greater: Vec<String> = c
                .dimensions()
                .filter(|d| d.is_order_edge())
                .map(|d| format!("{} -> {}", d.name, d.domain))
                .collect();
            if !greater.is_empty() {
                line.push_str(&format!(" | greater: {}", greater.join(", ")));
            }
            out.push(line);
        }
        out.push(format!("({} concepts)", self.db.schema().len()));
        out.join("\n")
    }

    pub fn describe_collections(&self) -> String {
        let mut out = Vec::new();
        let mut n = 0;
        for c in self.db.collections() {
            n += 1;
            let mut line = format!("{} CONCEPT {}", c.name, c.concept);
            if let Some(p) = &c.parent {
                line.push_str(&format!(" IN {p}"));
            }
            for (d, b) in &c.bindings {
                line.push_str(&format!(", {d} = {b}"));
            }
            line.push_str(&format!(" ({} elements)", c.len()));
            out.push(line);
        }
        out.push(format!("({n} collections)"));
        out.join("\n")
    }
}

pub(crate) fn domain_of(t: &TypeRef) -> Domain {
    match t {
        TypeRef::Primitive(p) => Domain::Primitive(*p),
        TypeRef::Concept(c) => Domain::Concept(c.clone()),
    }
}

pub fn concept_from_decl(decl: &ConceptDecl) -> Concept {
    let mut c = Concept::new(decl.name.clone());
    if let Some(s) = &decl.super_name {
        c = c.within(s.clone());
    }
    for g in &decl.identity {
        for n in &g.names {
            c = c.identity(n.clone(), domain_of(&g.ty));
        }
    }
    for g in &decl.entity {
        for n in &g.names {
            c = c.entity(n.clone(), domain_of(&g.ty));
        }
    }
    c
}

pub fn decl_from_concept(c: &Concept) -> ConceptDecl {
    let group = |d: &crate::schema::Dimension| FieldGroup {
        ty: match &d.domain {
            Domain::Primitive(p) => TypeRef::Primitive(*p),
            Domain::Concept(n) => TypeRef::Concept(n.clone()),
        },
        names: vec![d.name.clone()],
    };
    ConceptDecl {
        name: c.name.clone(),
        super_name: c.super_name.clone(),
        identity: c.identity_dims.iter().map(group).collect(),
        entity: c.entity_dims.iter().map(group).collect(),
    }
}

pub fn create_table_of(c: &crate::store::Collection) -> CreateTable {
    CreateTable {
        name: c.name.clone(),
        concept: c.concept.clone(),
        parent: c.parent.clone(),
        bindings: c.bindings.iter().map(|(d, b)| (d.clone(), b.clone())).collect(),
    }
}
