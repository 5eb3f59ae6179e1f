//! The COQL query language: tokens, syntax trees, parsing and rendering.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod render;

pub use ast::{Expr, ExprKind, Statement, StatementKind};
pub use lexer::{tokenize, LexError, Pos, Token, TokenKind};
pub use parser::{is_incomplete, parse_query, parse_script, parse_statement, ParseError, StatementReader};
pub use render::{render_expr, render_statement};
