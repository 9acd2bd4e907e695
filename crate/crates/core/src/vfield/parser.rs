use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ast::{BinOp, Expr, Func};

/// Parse failure with a one-based character position inside the component string.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("component {component}, position {position}: {kind}")]
pub struct ParseError {
    /// Zero-based component index.
    pub component: usize,
    /// One-based character position; `len + 1` denotes end of input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    UnknownIdentifier(String),
    Arity { function: String, expected: usize, found: usize },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error: found {found}, expected one of [{}]", expected.join(", "))
            }
            ParseErrorKind::UnknownIdentifier(name) => write!(f, "unknown identifier `{name}`"),
            ParseErrorKind::Arity { function, expected, found } => {
                write!(f, "`{function}` takes {expected} argument(s), got {found}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, integer: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number {value}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str, component: usize) -> Result<Lexed, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = simple {
            toks.push((t, pos));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            let mut integer = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                integer = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = i;
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    integer = false;
                    i = j;
                } else {
                    i = save;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text.parse().map_err(|_| ParseError {
                component,
                position: pos,
                kind: ParseErrorKind::Syntax {
                    expected: vec!["number".into()],
                    found: format!("`{text}`"),
                },
            })?;
            toks.push((Tok::Num { value, integer }, pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        return Err(ParseError {
            component,
            position: pos,
            kind: ParseErrorKind::Syntax {
                expected: vec!["expression".into()],
                found: format!("character `{c}`"),
            },
        });
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexed { toks })
}

/// Recognises `x<k>` with `k >= 1`.
pub(crate) fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse::<usize>().ok().map(|k| k - 1)
}

/// Whether `name` can be bound as a parameter.
pub fn is_valid_parameter_name(name: &str) -> bool {
    let mut chars = name.chars();
    let ok_start = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    ok_start
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "t"
        && variable_index(name).is_none()
        && Func::from_name(name).is_none()
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    component: usize,
    dimension: usize,
    params: &'a BTreeMap<String, f64>,
}

const PRIMARY_START: [&str; 4] = ["number", "identifier", "`(`", "`-`"];

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax(&self, expected: &[&str]) -> ParseError {
        ParseError {
            component: self.component,
            position: self.pos(),
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.peek().describe(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(&[name]))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let negative = match self.peek() {
                Tok::Minus => {
                    self.bump();
                    true
                }
                Tok::Plus => {
                    self.bump();
                    false
                }
                _ => false,
            };
            match self.peek().clone() {
                Tok::Num { value, integer: true } if value <= i32::MAX as f64 => {
                    self.bump();
                    let n = value as i32;
                    base = Expr::Pow(Box::new(base), if negative { -n } else { n });
                }
                _ => return Err(self.syntax(&["integer exponent"])),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num { value, .. } => Ok(Expr::Num(value)),
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(name, pos),
            _ => Err(ParseError {
                    component: self.component,
                    position: pos,
                    kind: ParseErrorKind::Syntax {
                        expected: PRIMARY_START.iter().map(|s| s.to_string()).collect(),
                        found: tok.describe(),
                    },
                }),
        }
    }

    fn identifier(&mut self, name: String, pos: usize) -> Result<Expr, ParseError> {
        if let Some(func) = Func::from_name(&name) {
            self.expect(Tok::LParen, "`(`")?;
            let mut args = vec![self.sum()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.sum()?);
            }
            self.expect(Tok::RParen, "`)`")?;
            if args.len() != 1 {
                return Err(ParseError {
                    component: self.component,
                    position: pos,
                    kind: ParseErrorKind::Arity {
                        function: name,
                        expected: 1,
                        found: args.len(),
                    },
                });
            }
            return Ok(Expr::Call(func, Box::new(args.pop().expect("one argument"))));
        }
        if name == "t" {
            return Ok(Expr::Time);
        }
        if let Some(k) = variable_index(&name) {
            if k < self.dimension {
                return Ok(Expr::Var(k));
            }
        } else if let Some(&value) = self.params.get(&name) {
            return Ok(Expr::Param { name, value });
        }
        Err(ParseError {
            component: self.component,
            position: pos,
            kind: ParseErrorKind::UnknownIdentifier(name),
        })
    }
}

/// Parses one component of an `dimension`-dimensional field.
pub fn parse_expression(
    src: &str,
    component: usize,
    dimension: usize,
    params: &BTreeMap<String, f64>,
) -> Result<Expr, ParseError> {
    let lexed = lex(src, component)?;
    let mut p = Parser {
        toks: lexed.toks,
        at: 0,
        component,
        dimension,
        params,
    };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.syntax(&["operator", "end of input"]));
    }
    Ok(e)
}
