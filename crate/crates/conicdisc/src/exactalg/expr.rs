//! Parser for polynomial expressions.
//!
//! Grammar: integer literals, identifiers, `+ - * ^`, parentheses, and
//! division by a nonzero constant. Exponents are nonnegative integer
//! literals. The identifier naming the field generator (for F_{p^k}, k > 1)
//! denotes that field element.

use std::sync::Arc;

use num::BigInt;

use super::field::Field;
use super::poly::Poly;
use super::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("column {col}: undeclared variable '{name}'")]
    UndeclaredVariable { col: usize, name: String },
}

impl ExprError {
    pub fn column(&self) -> usize {
        match self {
            ExprError::Syntax { col, .. } | ExprError::UndeclaredVariable { col, .. } => *col,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ExprError::Syntax { col, msg: format!("unexpected character '{c}'") });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    field: &'a Field,
    vars: &'a Arc<Vec<String>>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { col: self.col(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump();
                    let col = self.col();
                    let d = self.unary()?;
                    if !d.is_constant() {
                        return Err(ExprError::Syntax { col, msg: "can only divide by a constant".into() });
                    }
                    let inv = d.inverse().ok_or(ExprError::Syntax { col, msg: "division by zero".into() })?;
                    acc = acc * inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ExprError> {
        if self.peek() == &Tok::Op('-') {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ExprError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Int(n) => {
                let e: u32 = n.try_into().map_err(|_| ExprError::Syntax {
                    col: self.toks[self.pos - 1].1,
                    msg: "exponent too large".into(),
                })?;
                Ok(base.pow(e))
            }
            _ => Err(ExprError::Syntax {
                col: self.toks[self.pos.saturating_sub(1)].1,
                msg: "exponent must be a nonnegative integer literal".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Poly, ExprError> {
        let col = self.col();
        match self.bump() {
            Tok::Int(n) => Ok(Poly::constant(self.field, self.vars, self.field.from_bigint(&n))),
            Tok::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(Poly::var(self.field, self.vars, i))
                } else if self.field.degree() > 1 && name == self.field.generator_name() {
                    Ok(Poly::constant(self.field, self.vars, self.field.generator()))
                } else {
                    Err(ExprError::UndeclaredVariable { col, name })
                }
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.bump() != Tok::Op(')') {
                    return Err(ExprError::Syntax { col: self.toks[self.pos - 1].1, msg: "expected ')'".into() });
                }
                Ok(e)
            }
            Tok::End => Err(ExprError::Syntax { col, msg: "unexpected end of expression".into() }),
            Tok::Op(c) => Err(ExprError::Syntax { col, msg: format!("unexpected '{c}'") }),
        }
    }
}

/// Parse `src` as a polynomial over `field` in the variables `vars`.
pub fn parse_poly(src: &str, field: &Field, vars: &Arc<Vec<String>>) -> Result<Poly, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, field, vars };
    let out = p.expr()?;
    if p.peek() != &Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}
