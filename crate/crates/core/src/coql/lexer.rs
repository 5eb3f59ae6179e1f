//! Tokenizer for COQL text.

use std::fmt;

use thiserror::Error;

/// 1-based line and column (columns count characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub fn new(line: u32, col: u32) -> Pos {
        Pos { line, col }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Ident,
    Int,
    Double,
    Str,
    Op,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text; for strings, the unescaped contents.
    pub text: String,
    pub pos: Pos,
    /// Length of the token in characters, as written.
    pub len: u32,
}

impl Token {
    pub fn is_op(&self, op: &str) -> bool {
        self.kind == TokenKind::Op && self.text == op
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == kw
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }

    /// Whether `pos` falls within this token's span on its line.
    pub fn spans(&self, pos: Pos) -> bool {
        pos.line == self.pos.line && pos.col >= self.pos.col && pos.col < self.pos.col + self.len.max(1)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::Eof => f.write_str("end of input"),
            TokenKind::Str => write!(f, "'{}'", self.text),
            _ => write!(f, "{}", self.text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

pub const KEYWORDS: [&str; 20] = [
    "CONCEPT",
    "IDENTITY",
    "ENTITY",
    "IN",
    "CREATE",
    "TABLE",
    "CUBE",
    "WHERE",
    "BODY",
    "RETURN",
    "AND",
    "OR",
    "NOT",
    "STARTSWITH",
    "SUM",
    "COUNT",
    "SELECT",
    "FROM",
    "super",
    "this",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

// Longest first so that maximal munch falls out of a linear scan.
const OPERATORS: [&str; 30] = [
    "<--*->", "<--*(", "<-*->", "<-*(", "<-*>", "<*->", ")*->", "->", "<-", "==", "!=", "<=", ">=", "<",
    ">", "=", "|", ".", ",", "(", ")", "{", "}", "[", "]", ";", "+", "-", "*", "/",
];

pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let (tokens, err) = tokenize_partial(text);
    match err {
        Some(e) => Err(e),
        None => Ok(tokens),
    }
}

/// Tokenizes as far as possible. On a lexical error the tokens before it
/// are returned, terminated by an end-of-input token at the error position.
pub fn tokenize_partial(text: &str) -> (Vec<Token>, Option<LexError>) {
    let mut out = Vec::new();
    let (end, err) = match scan(text, &mut out) {
        Ok(end) => (end, None),
        Err(e) => (e.pos, Some(e)),
    };
    out.push(Token {
        kind: TokenKind::Eof,
        text: String::new(),
        pos: end,
        len: 0,
    });
    (out, err)
}

fn scan(text: &str, out: &mut Vec<Token>) -> Result<Pos, LexError> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos::new(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let len = (i - start) as u32;
            col += len;
            let kind = if is_keyword(&word) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            out.push(Token {
                kind,
                text: word,
                pos,
                len,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let mut kind = TokenKind::Int;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                kind = TokenKind::Double;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    kind = TokenKind::Double;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(LexError {
                    pos: Pos::new(line, col + (i - start) as u32),
                    message: format!("unexpected character '{}' in number", chars[i]),
                });
            }
            let len = (i - start) as u32;
            col += len;
            out.push(Token {
                kind,
                text: chars[start..i].iter().collect(),
                pos,
                len,
            });
            continue;
        }
        if c == '\'' {
            let start = i;
            let mut s = String::new();
            i += 1;
            let mut closed = false;
            while i < chars.len() {
                if chars[i] == '\'' {
                    if chars.get(i + 1) == Some(&'\'') {
                        s.push('\'');
                        i += 2;
                        continue;
                    }
                    i += 1;
                    closed = true;
                    break;
                }
                if chars[i] == '\n' {
                    break;
                }
                s.push(chars[i]);
                i += 1;
            }
            if !closed {
                return Err(LexError {
                    pos,
                    message: "unterminated string literal".to_string(),
                });
            }
            let len = (i - start) as u32;
            col += len;
            out.push(Token {
                kind: TokenKind::Str,
                text: s,
                pos,
                len,
            });
            continue;
        }
        let rest = &chars[i..];
        let op = OPERATORS.iter().find(|op| {
            let n = op.chars().count();
            rest.len() >= n && op.chars().zip(rest.iter()).all(|(a, b)| a == *b)
        });
        match op {
            Some(op) => {
                let len = op.chars().count() as u32;
                i += len as usize;
                col += len;
                out.push(Token {
                    kind: TokenKind::Op,
                    text: op.to_string(),
                    pos,
                    len,
                });
            }
            None => {
                return Err(LexError {
                    pos,
                    message: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(Pos::new(line, col))
}
