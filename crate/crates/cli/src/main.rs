use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use conceptdb::coql::{is_incomplete, parse_script};
use conceptdb::session::{MetaOutcome, SessionError, SnapshotError};
use conceptdb::{OutputFormat, Session};

#[derive(Parser)]
#[command(name = "conceptdb", version, about = "Concept-oriented database with the COQL query language")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a COQL script and print its results.
    Run {
        script: PathBuf,
        /// Snapshot to open before running the script.
        #[arg(long, env = "CONCEPTDB_DB")]
        db: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Start an interactive session.
    Repl {
        #[arg(long, env = "CONCEPTDB_DB")]
        db: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> OutputFormat {
        match f {
            Format::Table => OutputFormat::Table,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let code = match cli.command {
        Command::Run { script, db, format } => run(script, db, format.into()),
        Command::Repl { db, format } => repl(db, format.into()),
    };
    ExitCode::from(code as u8)
}

fn open_session(db: Option<PathBuf>, format: OutputFormat) -> Result<Session, SessionError> {
    let mut session = Session::new();
    session.format = format;
    if let Some(path) = db {
        session.open(&path)?;
    }
    Ok(session)
}

fn run(script: PathBuf, db: Option<PathBuf>, format: OutputFormat) -> i32 {
    let mut session = match open_session(db, format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let report = match session.run_script_file(&script) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let mut stdout = io::stdout().lock();
    for entry in &report.entries {
        if !entry.output.is_empty() {
            let _ = writeln!(stdout, "{}", entry.output.trim_end_matches('\n'));
        }
    }
    let _ = stdout.flush();
    match (&report.error, report.error_line()) {
        (Some((_, e)), Some(line)) => {
            eprintln!("{line}");
            e.exit_code()
        }
        _ => 0,
    }
}

/// A statement ends at a `;`, at a blank line, or (typed at a terminal) on
/// a single line that already parses, but never inside open brackets.
fn statement_ends(buffer: &str, line: &str, blank: bool, interactive: bool) -> bool {
    if is_incomplete(buffer) {
        return false;
    }
    if blank || line.trim_end().ends_with(';') {
        return true;
    }
    interactive && buffer.lines().count() == 1 && parse_script(buffer).is_ok()
}

fn is_fatal(cmd: &str, e: &SessionError) -> bool {
    let io = matches!(e, SessionError::Io(_) | SessionError::Snapshot(SnapshotError::Io(_)));
    io && (cmd.starts_with(".save") || cmd.starts_with(".open"))
}

fn repl(db: Option<PathBuf>, format: OutputFormat) -> i32 {
    let mut session = match open_session(db, format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let interactive = io::stdin().is_terminal();
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut buffer = String::new();
    loop {
        if interactive {
            print!("{}", if buffer.is_empty() { "coql> " } else { "  ... " });
            let _ = io::stdout().flush();
        }
        let line = match lines.next() {
            Some(Ok(l)) => l,
            Some(Err(e)) => {
                eprintln!("error: {e}");
                return 2;
            }
            None => break,
        };
        let blank = line.trim().is_empty();
        if buffer.is_empty() && blank {
            continue;
        }
        let meta = buffer.is_empty() && line.trim_start().starts_with('.');
        buffer.push_str(&line);
        buffer.push('\n');
        if !meta && !statement_ends(&buffer, &line, blank, interactive) {
            continue;
        }
        let input = std::mem::take(&mut buffer);
        if let Some(code) = execute(&mut session, input.trim()) {
            return code;
        }
    }
    if !buffer.trim().is_empty() {
        if let Some(code) = execute(&mut session, buffer.trim()) {
            return code;
        }
    }
    0
}

/// Runs one REPL input and prints its output or error. Returns an exit
/// code when the loop should stop.
fn execute(session: &mut Session, input: &str) -> Option<i32> {
    match session.execute_input(input) {
        Ok(MetaOutcome::Quit) => Some(0),
        Ok(MetaOutcome::Output(out)) => {
            if !out.is_empty() {
                println!("{}", out.trim_end_matches('\n'));
            }
            None
        }
        Err(e) => {
            eprintln!("error: {e}");
            is_fatal(input, &e).then(|| e.exit_code())
        }
    }
}
