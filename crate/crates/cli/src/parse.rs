//! Expression syntax for algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*        (also '/' when the divisor is a scalar)
//! unary  := ('-' | '+')* factor
//! factor := int | 'q' ('^' ['-'] int)? | '[' ['-'] int ']q'
//!         | 'W[' ['-'] int ']' | 'G[' int ']' | 'Gt[' int ']' | '(' expr ')'
//! ```
//!
//! Products are noncommutative and elaborate left to right. `G[0]` and
//! `Gt[0]` are the scalar `-(q - q^-1)[2]^2`.

use num_bigint::BigInt;
use onsager_core::qfield::q_int;
use onsager_core::words::{symbol_from_subscript, IndexError, SubscriptFamily};
use onsager_core::{NCPoly, QRat};
use std::fmt;
use thiserror::Error;

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: {source}")]
    Index { pos: Pos, source: IndexError },
    #[error("{pos}: divisor is not a nonzero scalar")]
    BadDivisor { pos: Pos },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Index { pos, .. } | ParseError::BadDivisor { pos } => *pos,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    W,
    G,
    Gt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Int(BigInt),
    /// `q^e`.
    QPow(i64),
    /// `[n]q`.
    QInt(i64),
    Gen {
        kind: GenKind,
        index: i64,
        pos: Pos,
    },
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>, Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, Pos)>,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let (mut line, mut col) = (1, 1);
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos { line, col };
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
            let start = i;
            if c.is_ascii_digit() {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), pos));
            } else if c.is_ascii_alphabetic() {
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            } else if "+-*/^()[]".contains(c) {
                toks.push((Tok::Sym(c), pos));
                i += 1;
            } else {
                return Err(ParseError::Syntax { pos, msg: format!("unexpected character '{c}'") });
            }
            col += i - start;
        }
        toks.push((Tok::End, Pos { line, col }));
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Int(n) => format!("'{n}'"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{c}', found {}", Self::describe(self.peek())))
        }
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = if *self.peek() == Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        match self.bump().0 {
            Tok::Int(n) => {
                let n = if neg { -n } else { n };
                i64::try_from(n).map_err(|_| ParseError::Syntax { pos, msg: "integer out of range".into() })
            }
            t => Err(ParseError::Syntax { pos, msg: format!("expected an integer, found {}", Self::describe(&t)) }),
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    let pos = self.bump().1;
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(ExprAst::Neg(Box::new(self.unary()?)))
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(ExprAst::Int(n)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                let n = self.signed_int()?;
                self.expect(']')?;
                match self.bump() {
                    (Tok::Ident(s), _) if s == "q" => Ok(ExprAst::QInt(n)),
                    (t, pos) => Err(ParseError::Syntax {
                        pos,
                        msg: format!("expected 'q' after ']', found {}", Self::describe(&t)),
                    }),
                }
            }
            Tok::Ident(s) if s == "q" => {
                if *self.peek() == Tok::Sym('^') {
                    self.bump();
                    Ok(ExprAst::QPow(self.signed_int()?))
                } else {
                    Ok(ExprAst::QPow(1))
                }
            }
            Tok::Ident(s) if matches!(s.as_str(), "W" | "G" | "Gt") => {
                let kind = match s.as_str() {
                    "W" => GenKind::W,
                    "G" => GenKind::G,
                    _ => GenKind::Gt,
                };
                self.expect('[')?;
                let index = self.signed_int()?;
                self.expect(']')?;
                Ok(ExprAst::Gen { kind, index, pos })
            }
            t => Err(ParseError::Syntax { pos, msg: format!("unexpected {}", Self::describe(&t)) }),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expr(text: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser { toks: Lexer::new(text)?.toks, at: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => p.err(format!("unexpected {} after expression", Parser::describe(t))),
    }
}

/// Elaborates an expression tree into a free-algebra element.
pub fn elaborate(e: &ExprAst) -> Result<NCPoly, ParseError> {
    Ok(match e {
        ExprAst::Int(n) => NCPoly::scalar(QRat::from_bigint(n.clone())),
        ExprAst::QPow(k) => NCPoly::scalar(QRat::q_pow(*k)),
        ExprAst::QInt(n) => NCPoly::scalar(q_int(*n)),
        ExprAst::Gen { kind, index, pos } => {
            let fam = match kind {
                GenKind::W => SubscriptFamily::W,
                GenKind::G => SubscriptFamily::G,
                GenKind::Gt => SubscriptFamily::Gtilde,
            };
            let sym = symbol_from_subscript(fam, *index).map_err(|source| ParseError::Index { pos: *pos, source })?;
            NCPoly::symbol(sym)
        }
        ExprAst::Neg(a) => -elaborate(a)?,
        ExprAst::Add(a, b) => elaborate(a)? + elaborate(b)?,
        ExprAst::Sub(a, b) => elaborate(a)? - elaborate(b)?,
        ExprAst::Mul(a, b) => elaborate(a)? * elaborate(b)?,
        ExprAst::Div(a, b, pos) => {
            let d = elaborate(b)?;
            let c = d.constant_term();
            if d.len() != 1 || c.is_zero() {
                return Err(ParseError::BadDivisor { pos: *pos });
            }
            elaborate(a)?.scale(&c.inv())
        }
    })
}

/// Parses and elaborates in one step.
pub fn parse_poly(text: &str) -> Result<NCPoly, ParseError> {
    elaborate(&parse_expr(text)?)
}
