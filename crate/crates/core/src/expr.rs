//! Small Boolean expression language for local transition functions.
//!
//! Grammar (lowest precedence first):
//!
//! ```text
//! or   := and ("or" and)*
//! and  := not ("and" not)*
//! not  := "not" not | atom
//! atom := "x<i>" | "0" | "1" | "(" or ")"
//! ```

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Configuration;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Expr::Or(Box::new(a), Box::new(b))
    }

    /// Variable `i`, negated when `negated` holds.
    pub fn literal(i: usize, negated: bool) -> Self {
        if negated {
            Expr::not(Expr::var(i))
        } else {
            Expr::var(i)
        }
    }

    pub fn eval(&self, x: &Configuration) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => x.get(*i),
            Expr::Not(e) => !e.eval(x),
            Expr::And(a, b) => a.eval(x) && b.eval(x),
            Expr::Or(a, b) => a.eval(x) || b.eval(x),
        }
    }

    /// Evaluates with variable lookups delegated to `lookup`.
    pub fn eval_with(&self, lookup: &impl Fn(usize) -> bool) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => lookup(*i),
            Expr::Not(e) => !e.eval_with(lookup),
            Expr::And(a, b) => a.eval_with(lookup) && b.eval_with(lookup),
            Expr::Or(a, b) => a.eval_with(lookup) || b.eval_with(lookup),
        }
    }

    /// Sorted, deduplicated variable indices.
    pub fn variables(&self) -> Vec<usize> {
        fn walk(e: &Expr, out: &mut Vec<usize>) {
            match e {
                Expr::Const(_) => {}
                Expr::Var(i) => out.push(*i),
                Expr::Not(e) => walk(e, out),
                Expr::And(a, b) | Expr::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.or()?;
        if let Some(t) = p.peek() {
            return Err(t.error("unexpected trailing input"));
        }
        Ok(e)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 0,
            Expr::And(..) => 1,
            Expr::Not(_) => 2,
            Expr::Const(_) | Expr::Var(_) => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Const(b) => f.write_str(if *b { "1" } else { "0" })?,
            Expr::Var(i) => write!(f, "x{i}")?,
            Expr::Not(e) => {
                f.write_str("not ")?;
                e.fmt_prec(f, 2)?;
            }
            Expr::And(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" and ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Or(a, b) => {
                a.fmt_prec(f, 0)?;
                f.write_str(" or ")?;
                b.fmt_prec(f, 1)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(usize),
    Const(bool),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

impl Token {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: String::from(message),
        }
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col, start_i) = (line, col, i);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let err = |message: String| Error::Parse {
            line: start_line,
            column: start_col,
            message,
        };
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '0' | '1' => {
                i += 1;
                if chars.get(i).is_some_and(|c| c.is_ascii_alphanumeric()) {
                    return Err(err(String::from("malformed constant")));
                }
                Tok::Const(c == '1')
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                match word.as_str() {
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    w if w.starts_with('x') && w.len() > 1 => {
                        let digits = &w[1..];
                        if !digits.bytes().all(|b| b.is_ascii_digit()) {
                            return Err(err(alloc::format!("unknown token `{w}`")));
                        }
                        let idx = digits
                            .parse::<usize>()
                            .map_err(|_| err(alloc::format!("bad variable `{w}`")))?;
                        Tok::Var(idx)
                    }
                    w => return Err(err(alloc::format!("unknown token `{w}`"))),
                }
            }
            other => return Err(err(alloc::format!("unexpected character {other:?}"))),
        };
        col = start_col + (i - start_i);
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eof_error(&self) -> Error {
        let (line, column) = self
            .tokens
            .last()
            .map(|t| (t.line, t.column + 1))
            .unwrap_or((1, 1));
        Error::Parse {
            line,
            column,
            message: String::from("unexpected end of expression"),
        }
    }

    fn or(&mut self) -> Result<Expr> {
        let mut lhs = self.and()?;
        while self.peek().is_some_and(|t| t.tok == Tok::Or) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = Expr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut lhs = self.not()?;
        while self.peek().is_some_and(|t| t.tok == Tok::And) {
            self.pos += 1;
            let rhs = self.not()?;
            lhs = Expr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Expr> {
        if self.peek().is_some_and(|t| t.tok == Tok::Not) {
            self.pos += 1;
            return Ok(Expr::not(self.not()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.peek().cloned().ok_or_else(|| self.eof_error())?;
        self.pos += 1;
        match t.tok {
            Tok::Var(i) => Ok(Expr::Var(i)),
            Tok::Const(b) => Ok(Expr::Const(b)),
            Tok::LParen => {
                let e = self.or()?;
                match self.peek() {
                    Some(Token {
                        tok: Tok::RParen, ..
                    }) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    Some(other) => Err(other.error("expected `)`")),
                    None => Err(self.eof_error()),
                }
            }
            _ => Err(t.error("expected a variable, constant or `(`")),
        }
    }
}
