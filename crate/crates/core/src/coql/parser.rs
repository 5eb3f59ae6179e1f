//! Recursive-descent parser for COQL.
//!
//! Expression precedence, loosest first: inference operators, `OR`, `AND`,
//! `NOT`, comparisons, `+ -`, `* /`, access-path chains, `.attr`, primaries.

use thiserror::Error;

use crate::coql::ast::*;
use crate::coql::lexer::{tokenize_partial, LexError, Pos, Token, TokenKind};
use crate::value::PrimitiveType;

/// Maximum syntactic nesting accepted in one statement.
pub const MAX_NESTING: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("lex error at {0}")]
    Lex(LexError),
    #[error("{pos}: expected {}, found {found}", expected.join(" or "))]
    Unexpected {
        pos: Pos,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: {message}")]
    Invalid { pos: Pos, message: String },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Lex(e) => e.pos,
            ParseError::Unexpected { pos, .. } | ParseError::Invalid { pos, .. } => *pos,
        }
    }
}

type PResult<T> = Result<T, ParseError>;

/// Parses exactly one statement; a trailing `;` is allowed.
pub fn parse_statement(text: &str) -> PResult<Statement> {
    let mut p = Parser::new(text);
    let stmt = p.statement()?;
    p.skip_semicolons();
    p.expect_end()?;
    Ok(stmt)
}

/// Parses exactly one query expression.
pub fn parse_query(text: &str) -> PResult<Expr> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.skip_semicolons();
    p.expect_end()?;
    Ok(e)
}

/// Parses a whole script, failing on the first error.
pub fn parse_script(text: &str) -> PResult<Vec<Statement>> {
    StatementReader::new(text).collect()
}

/// Yields statements one at a time, so that statements before a syntax
/// error can be executed. Stops after the first error.
pub struct StatementReader {
    parser: Parser,
    done: bool,
}

impl StatementReader {
    pub fn new(text: &str) -> StatementReader {
        StatementReader {
            parser: Parser::new(text),
            done: false,
        }
    }
}

impl Iterator for StatementReader {
    type Item = PResult<Statement>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        self.parser.skip_semicolons();
        if self.parser.at_eof() {
            self.done = true;
            return self.parser.lex_error.take().map(|e| Err(ParseError::Lex(e)));
        }
        let r = self.parser.statement();
        if r.is_err() {
            self.done = true;
        }
        Some(r)
    }
}

/// True when `text` ends inside an open bracket or string, i.e. a REPL
/// should keep reading continuation lines.
pub fn is_incomplete(text: &str) -> bool {
    let (tokens, err) = tokenize_partial(text);
    if let Some(e) = err {
        if e.message.starts_with("unterminated") {
            return true;
        }
    }
    let mut depth: i64 = 0;
    for t in &tokens {
        if t.kind != TokenKind::Op {
            continue;
        }
        match t.text.as_str() {
            "(" | "{" | "[" | "<-*(" | "<--*(" => depth += 1,
            ")" | "}" | "]" | ")*->" => depth -= 1,
            _ => {}
        }
    }
    depth > 0
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    depth: usize,
    lex_error: Option<LexError>,
}

impl Parser {
    fn new(text: &str) -> Parser {
        let (toks, lex_error) = tokenize_partial(text);
        Parser {
            toks,
            i: 0,
            depth: 0,
            lex_error,
        }
    }

    fn tok(&self) -> &Token {
        &self.toks[self.i]
    }

    fn peek(&self, n: usize) -> &Token {
        let idx = (self.i + n).min(self.toks.len() - 1);
        &self.toks[idx]
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn at_eof(&self) -> bool {
        self.tok().kind == TokenKind::Eof
    }

    fn error<T>(&mut self, expected: &[&str]) -> PResult<T> {
        if self.at_eof() {
            if let Some(e) = self.lex_error.take() {
                return Err(ParseError::Lex(e));
            }
        }
        let t = self.tok();
        Err(ParseError::Unexpected {
            pos: t.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.to_string(),
        })
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let pos = self.tok().pos;
            return Err(ParseError::Invalid {
                pos,
                message: format!("expression nested deeper than {MAX_NESTING} levels"),
            });
        }
        Ok(())
    }

    fn leave(&mut self, n: usize) {
        self.depth -= n;
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.tok().is_op(op) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.tok().is_keyword(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, op: &str) -> PResult<Token> {
        if self.tok().is_op(op) {
            Ok(self.advance())
        } else {
            self.error(&[&format!("'{op}'")])
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Token> {
        if self.tok().is_keyword(kw) {
            Ok(self.advance())
        } else {
            self.error(&[kw])
        }
    }

    fn expect_ident(&mut self) -> PResult<String> {
        if self.tok().is_ident() {
            Ok(self.advance().text)
        } else {
            self.error(&["identifier"])
        }
    }

    fn expect_end(&mut self) -> PResult<()> {
        if self.at_eof() {
            if let Some(e) = self.lex_error.take() {
                return Err(ParseError::Lex(e));
            }
            Ok(())
        } else {
            self.error(&["end of statement"])
        }
    }

    fn skip_semicolons(&mut self) {
        while self.eat_op(";") {}
    }

    // ---- statements ----

    fn statement(&mut self) -> PResult<Statement> {
        self.depth = 0;
        let pos = self.tok().pos;
        let kind = if self.tok().is_keyword("CONCEPT") {
            StatementKind::Concept(self.concept_decl()?)
        } else if self.tok().is_keyword("CREATE") {
            StatementKind::CreateTable(self.create_table()?)
        } else if self.tok().is_keyword("SELECT") {
            StatementKind::Select(self.select()?)
        } else if self.tok().is_ident() && self.peek(1).is_op("=") {
            let name = self.advance().text;
            self.advance();
            let expr = self.expr()?;
            StatementKind::Assign { name, expr }
        } else {
            StatementKind::Query(self.expr()?)
        };
        Ok(Statement { kind, pos })
    }

    fn concept_decl(&mut self) -> PResult<ConceptDecl> {
        self.expect_keyword("CONCEPT")?;
        let name = self.expect_ident()?;
        let super_name = if self.eat_keyword("IN") {
            Some(self.expect_ident()?)
        } else {
            None
        };
        let identity = if self.eat_keyword("IDENTITY") {
            self.field_groups()?
        } else {
            Vec::new()
        };
        let entity = if self.eat_keyword("ENTITY") {
            self.field_groups()?
        } else {
            Vec::new()
        };
        Ok(ConceptDecl {
            name,
            super_name,
            identity,
            entity,
        })
    }

    fn at_field_start(&self) -> bool {
        let t = self.tok();
        if !t.is_ident() {
            return false;
        }
        let next = self.peek(1);
        next.is_ident() || (t.text == "CHAR" && (next.is_op("(") || next.is_op("[")))
    }

    fn field_groups(&mut self) -> PResult<Vec<FieldGroup>> {
        let mut out = Vec::new();
        while self.at_field_start() {
            let ty = self.type_ref()?;
            let mut names = vec![self.expect_ident()?];
            while self.eat_op(",") {
                names.push(self.expect_ident()?);
            }
            self.skip_semicolons();
            out.push(FieldGroup { ty, names });
        }
        Ok(out)
    }

    fn type_ref(&mut self) -> PResult<TypeRef> {
        let t = self.advance();
        if let Some(p) = PrimitiveType::from_keyword(&t.text) {
            return Ok(TypeRef::Primitive(p));
        }
        if t.text == "CHAR" {
            let close = if self.eat_op("(") {
                ")"
            } else {
                self.expect_op("[")?;
                "]"
            };
            let n_tok = self.tok().clone();
            if n_tok.kind != TokenKind::Int {
                return self.error(&["length"]);
            }
            self.advance();
            let n: u32 = match n_tok.text.parse() {
                Ok(n) if n >= 1 => n,
                _ => {
                    return Err(ParseError::Invalid {
                        pos: n_tok.pos,
                        message: format!("invalid CHAR length {}", n_tok.text),
                    })
                }
            };
            self.expect_op(close)?;
            return Ok(TypeRef::Primitive(PrimitiveType::Char(n)));
        }
        Ok(TypeRef::Concept(t.text))
    }

    fn create_table(&mut self) -> PResult<CreateTable> {
        self.expect_keyword("CREATE")?;
        self.expect_keyword("TABLE")?;
        let name = self.expect_ident()?;
        self.expect_keyword("CONCEPT")?;
        let concept = self.expect_ident()?;
        let parent = if self.eat_keyword("IN") {
            Some(self.expect_ident()?)
        } else {
            None
        };
        let mut bindings = Vec::new();
        while self.eat_op(",") {
            let dim = self.expect_ident()?;
            self.expect_op("=")?;
            let coll = self.expect_ident()?;
            bindings.push((dim, coll));
        }
        Ok(CreateTable {
            name,
            concept,
            parent,
            bindings,
        })
    }

    fn select(&mut self) -> PResult<Select> {
        self.expect_keyword("SELECT")?;
        let mut items = vec![self.expr()?];
        while self.eat_op(",") {
            items.push(self.expr()?);
        }
        self.expect_keyword("FROM")?;
        let collection = self.expect_ident()?;
        let var = if self.tok().is_ident() {
            Some(self.advance().text)
        } else {
            None
        };
        let where_ = if self.eat_keyword("WHERE") {
            Some(self.expr()?)
        } else {
            None
        };
        Ok(Select {
            items,
            collection,
            var,
            where_,
        })
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let r = self.infer();
        self.leave(1);
        r
    }

    fn infer(&mut self) -> PResult<Expr> {
        let mut lhs = self.or()?;
        let mut levels = 0;
        loop {
            let t = self.tok().clone();
            let via = match t.text.as_str() {
                "<-*->" | "<--*->" | "<*->" | "<-*>" if t.kind == TokenKind::Op => {
                    self.advance();
                    None
                }
                "<-*(" | "<--*(" if t.kind == TokenKind::Op => {
                    self.advance();
                    let via = self.via()?;
                    self.expect_op(")*->")?;
                    Some(via)
                }
                _ => break,
            };
            self.enter()?;
            levels += 1;
            let target = self.collection_term()?;
            lhs = Expr::new(
                ExprKind::Infer {
                    source: Box::new(lhs),
                    via,
                    target: Box::new(target),
                },
                t.pos,
            );
        }
        self.leave(levels);
        Ok(lhs)
    }

    fn via(&mut self) -> PResult<Via> {
        let name = self.expect_ident()?;
        if name == "Bottom" {
            let filter = if self.eat_op("|") {
                Some(Box::new(self.expr()?))
            } else {
                None
            };
            return Ok(Via::Bottom { filter });
        }
        let var = if self.tok().is_ident() {
            Some(self.advance().text)
        } else {
            None
        };
        let filter = if self.eat_op("|") {
            Some(Box::new(self.expr()?))
        } else {
            None
        };
        Ok(Via::Collection { name, var, filter })
    }

    /// A collection name or a filtered term.
    fn collection_term(&mut self) -> PResult<Expr> {
        let pos = self.tok().pos;
        if self.tok().is_ident() {
            let name = self.advance().text;
            return Ok(Expr::new(ExprKind::Name(name), pos));
        }
        if self.at_filter_term() {
            return self.filter_term();
        }
        self.error(&["collection"])
    }

    fn at_filter_term(&self) -> bool {
        if !self.tok().is_op("(") || !self.peek(1).is_ident() {
            return false;
        }
        self.peek(2).is_op("|") || (self.peek(2).is_ident() && self.peek(3).is_op("|"))
    }

    fn filter_term(&mut self) -> PResult<Expr> {
        let pos = self.expect_op("(")?.pos;
        let collection = self.expect_ident()?;
        let var = if self.tok().is_ident() {
            Some(self.advance().text)
        } else {
            None
        };
        self.expect_op("|")?;
        let pred = self.expr()?;
        self.expect_op(")")?;
        Ok(Expr::new(
            ExprKind::Filter {
                collection,
                var,
                pred: Box::new(pred),
            },
            pos,
        ))
    }

    fn binary_loop(
        &mut self,
        next: fn(&mut Parser) -> PResult<Expr>,
        ops: &[(&str, BinOp)],
    ) -> PResult<Expr> {
        let mut lhs = next(self)?;
        let mut levels = 0;
        loop {
            let t = self.tok();
            let found = ops.iter().find(|(text, _)| {
                (t.kind == TokenKind::Op || t.kind == TokenKind::Keyword) && t.text == *text
            });
            let Some(&(_, op)) = found else { break };
            let pos = self.advance().pos;
            self.enter()?;
            levels += 1;
            let rhs = next(self)?;
            lhs = Expr::new(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                pos,
            );
        }
        self.leave(levels);
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Expr> {
        self.binary_loop(Parser::and, &[("OR", BinOp::Or)])
    }

    fn and(&mut self) -> PResult<Expr> {
        self.binary_loop(Parser::not, &[("AND", BinOp::And)])
    }

    fn not(&mut self) -> PResult<Expr> {
        if self.tok().is_keyword("NOT") {
            let pos = self.advance().pos;
            self.enter()?;
            let inner = self.not();
            self.leave(1);
            return Ok(Expr::new(ExprKind::Not(Box::new(inner?)), pos));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let lhs = self.additive()?;
        let t = self.tok().clone();
        let op = match (t.kind, t.text.as_str()) {
            (TokenKind::Op, "==") | (TokenKind::Op, "=") => Some(CmpOp::Eq),
            (TokenKind::Op, "!=") => Some(CmpOp::Ne),
            (TokenKind::Op, "<") => Some(CmpOp::Lt),
            (TokenKind::Op, "<=") => Some(CmpOp::Le),
            (TokenKind::Op, ">") => Some(CmpOp::Gt),
            (TokenKind::Op, ">=") => Some(CmpOp::Ge),
            (TokenKind::Keyword, "STARTSWITH") => Some(CmpOp::StartsWith),
            (TokenKind::Keyword, "IN") => {
                self.advance();
                let items = self.literal_set()?;
                return Ok(Expr::new(
                    ExprKind::In {
                        lhs: Box::new(lhs),
                        items,
                    },
                    t.pos,
                ));
            }
            _ => None,
        };
        let Some(op) = op else { return Ok(lhs) };
        self.advance();
        let rhs = self.additive()?;
        Ok(Expr::new(
            ExprKind::Cmp {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            },
            t.pos,
        ))
    }

    fn literal_set(&mut self) -> PResult<Vec<Literal>> {
        self.expect_op("{")?;
        let mut items = Vec::new();
        if self.eat_op("}") {
            return Ok(items);
        }
        loop {
            match self.literal()? {
                Some(l) => items.push(l),
                None => return self.error(&["literal"]),
            }
            if self.eat_op("}") {
                return Ok(items);
            }
            self.expect_op(",")?;
        }
    }

    /// Consumes a literal if one starts here, including a negated number.
    fn literal(&mut self) -> PResult<Option<Literal>> {
        let t = self.tok().clone();
        let negative = t.is_op("-") && matches!(self.peek(1).kind, TokenKind::Int | TokenKind::Double);
        let num = if negative { self.peek(1).clone() } else { t.clone() };
        let lit = match num.kind {
            TokenKind::Int => {
                let text = if negative {
                    format!("-{}", num.text)
                } else {
                    num.text.clone()
                };
                match text.parse::<i64>() {
                    Ok(v) => Literal::Int(v),
                    Err(_) => {
                        return Err(ParseError::Invalid {
                            pos: t.pos,
                            message: format!("integer literal {text} out of range"),
                        })
                    }
                }
            }
            TokenKind::Double => {
                let v: f64 = num.text.parse().map_err(|_| ParseError::Invalid {
                    pos: num.pos,
                    message: format!("invalid number {}", num.text),
                })?;
                Literal::Double(if negative { -v } else { v })
            }
            TokenKind::Str if !negative => Literal::Str(t.text.clone()),
            TokenKind::Ident if !negative => match t.text.as_str() {
                "TRUE" => Literal::Bool(true),
                "FALSE" => Literal::Bool(false),
                "NULL" => Literal::Null,
                _ => return Ok(None),
            },
            _ => return Ok(None),
        };
        if negative {
            self.advance();
        }
        self.advance();
        Ok(Some(lit))
    }

    fn additive(&mut self) -> PResult<Expr> {
        self.binary_loop(Parser::multiplicative, &[("+", BinOp::Add), ("-", BinOp::Sub)])
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        self.binary_loop(Parser::chain, &[("*", BinOp::Mul), ("/", BinOp::Div)])
    }

    fn chain(&mut self) -> PResult<Expr> {
        let mut expr = self.postfix()?;
        let mut steps = Vec::new();
        let mut levels = 0;
        loop {
            let dir = if self.tok().is_op("->") {
                Dir::Up
            } else if self.tok().is_op("<-") {
                Dir::Down
            } else {
                break;
            };
            self.advance();
            let item = self.step_item()?;
            steps.push(Step { dir, item });
            if self.tok().is_op(".") {
                let pos = expr.pos;
                expr = Expr::new(
                    ExprKind::Chain {
                        source: Box::new(expr),
                        steps: std::mem::take(&mut steps),
                    },
                    pos,
                );
                self.enter()?;
                levels += 1;
                while self.eat_op(".") {
                    let name = self.attr_name()?;
                    self.enter()?;
                    levels += 1;
                    expr = Expr::new(ExprKind::Attr(Box::new(expr), name), pos);
                }
            }
        }
        self.leave(levels);
        if !steps.is_empty() {
            let pos = expr.pos;
            expr = Expr::new(
                ExprKind::Chain {
                    source: Box::new(expr),
                    steps,
                },
                pos,
            );
        }
        Ok(expr)
    }

    fn step_item(&mut self) -> PResult<StepItem> {
        if self.eat_keyword("super") {
            return Ok(StepItem::Super);
        }
        if self.tok().is_ident() {
            return Ok(StepItem::Name(self.advance().text));
        }
        if self.at_filter_term() {
            return Ok(StepItem::Term(self.filter_term()?));
        }
        self.error(&["dimension", "collection", "super"])
    }

    fn attr_name(&mut self) -> PResult<String> {
        if self.eat_keyword("super") {
            return Ok("super".to_string());
        }
        self.expect_ident()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        let mut levels = 0;
        while self.tok().is_op(".") {
            self.advance();
            let name = self.attr_name()?;
            self.enter()?;
            levels += 1;
            let pos = e.pos;
            e = Expr::new(ExprKind::Attr(Box::new(e), name), pos);
        }
        self.leave(levels);
        Ok(e)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.tok().clone();
        if let Some(lit) = self.literal()? {
            return Ok(Expr::new(ExprKind::Lit(lit), t.pos));
        }
        match t.kind {
            TokenKind::Ident => {
                self.advance();
                Ok(Expr::new(ExprKind::Name(t.text), t.pos))
            }
            TokenKind::Keyword => match t.text.as_str() {
                "this" => {
                    self.advance();
                    Ok(Expr::new(ExprKind::This, t.pos))
                }
                "super" => {
                    self.advance();
                    Ok(Expr::new(ExprKind::Super, t.pos))
                }
                "SUM" | "COUNT" => {
                    self.advance();
                    let func = if t.text == "SUM" { AggFunc::Sum } else { AggFunc::Count };
                    self.expect_op("(")?;
                    let arg = self.expr()?;
                    self.expect_op(")")?;
                    Ok(Expr::new(
                        ExprKind::Agg {
                            func,
                            arg: Box::new(arg),
                        },
                        t.pos,
                    ))
                }
                "CUBE" => self.cube(),
                _ => self.error(&["expression"]),
            },
            TokenKind::Op if t.text == "(" => {
                if self.at_filter_term() {
                    return self.filter_term();
                }
                self.advance();
                let e = self.expr()?;
                self.expect_op(")")?;
                Ok(e)
            }
            _ => self.error(&["expression"]),
        }
    }

    fn cube_source(&mut self) -> PResult<CubeSource> {
        let term = if self.at_filter_term() {
            self.filter_term()?
        } else {
            let pos = self.tok().pos;
            Expr::new(ExprKind::Name(self.expect_ident()?), pos)
        };
        let var = if self.tok().is_ident() {
            Some(self.advance().text)
        } else {
            None
        };
        Ok(CubeSource { term, var })
    }

    fn cube(&mut self) -> PResult<Expr> {
        let pos = self.expect_keyword("CUBE")?.pos;
        let mut sources = Vec::new();
        let mut source_filter = None;
        if self.tok().is_op("(") {
            self.advance();
            sources.push(self.cube_source()?);
            while self.eat_op(",") {
                sources.push(self.cube_source()?);
            }
            if self.eat_op("|") {
                source_filter = Some(self.expr()?);
            }
            self.expect_op(")")?;
        } else {
            sources.push(self.cube_source()?);
        }
        let where_ = if self.eat_keyword("WHERE") {
            Some(self.expr()?)
        } else {
            None
        };
        let mut body = Vec::new();
        if self.eat_keyword("BODY") {
            self.expect_op("(")?;
            while !self.tok().is_op(")") {
                let name = self.expect_ident()?;
                self.expect_op("=")?;
                let e = self.expr()?;
                body.push((name, e));
                while self.eat_op(";") || self.eat_op(",") {}
            }
            self.expect_op(")")?;
        }
        let ret = if self.eat_keyword("RETURN") {
            Some(self.return_items()?)
        } else {
            None
        };
        Ok(Expr::new(
            ExprKind::Cube(Box::new(CubeExpr {
                sources,
                source_filter,
                where_,
                body,
                ret,
            })),
            pos,
        ))
    }

    fn return_item(&mut self) -> PResult<ReturnItem> {
        if self.tok().is_ident() && self.peek(1).is_op("=") {
            let name = self.advance().text;
            self.advance();
            let expr = self.expr()?;
            return Ok(ReturnItem {
                name: Some(name),
                expr,
            });
        }
        Ok(ReturnItem {
            name: None,
            expr: self.expr()?,
        })
    }

    fn return_list(&mut self) -> PResult<Vec<ReturnItem>> {
        let mut items = vec![self.return_item()?];
        while self.eat_op(",") {
            items.push(self.return_item()?);
        }
        Ok(items)
    }

    fn return_items(&mut self) -> PResult<Vec<ReturnItem>> {
        if self.tok().is_op("(") && !self.at_filter_term() {
            // `RETURN ( a, b )`, unless the bracket only opens the first
            // expression of a bare list such as `RETURN (a + b) * 2`.
            let save = (self.i, self.depth);
            self.advance();
            if let Ok(items) = self.return_list() {
                if self.eat_op(")") && !self.continues_expression() {
                    return Ok(items);
                }
            }
            self.i = save.0;
            self.depth = save.1;
        }
        self.return_list()
    }

    fn continues_expression(&self) -> bool {
        let t = self.tok();
        match t.kind {
            TokenKind::Op => matches!(
                t.text.as_str(),
                "," | "." | "->" | "<-" | "==" | "=" | "!=" | "<" | "<=" | ">" | ">=" | "+" | "-" | "*" | "/"
                    | "<-*->" | "<--*->" | "<*->" | "<-*>" | "<-*(" | "<--*("
            ),
            TokenKind::Keyword => matches!(t.text.as_str(), "AND" | "OR" | "STARTSWITH" | "IN"),
            _ => false,
        }
    }
}
