//! Text grammar for polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := integer | [integer ['*']] factor ('*' factor)*
//! factor := var ['^' positive-integer]
//! ```
//! Whitespace is insignificant and coefficients are reduced mod p.

use std::sync::Arc;

use smallvec::SmallVec;

use super::monomial::Exponents;
use super::poly::{PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based column in the input string.
    pub column: usize,
    pub message: String,
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    fn column(&self) -> usize {
        match self.chars.get(self.pos) {
            Some((i, _)) => self.src[..*i].chars().count() + 1,
            None => self.src.chars().count() + 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            column: self.column(),
            message: message.into(),
        }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let col = self.column();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.pos += 1;
        }
        s.parse().map_err(|_| ParseError {
            column: col,
            message: "expected an integer".into(),
        })
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
            s.push(c);
            self.pos += 1;
        }
        s
    }
}

pub fn parse_polynomial(ring: &Arc<PolyRing>, src: &str) -> Result<Polynomial, ParseError> {
    let mut lx = Lexer::new(src);
    let p = ring.p() as i64;
    let mut terms: Vec<(Exponents, i64)> = Vec::new();
    if lx.peek().is_none() {
        return Err(lx.err("empty polynomial"));
    }
    let mut first = true;
    loop {
        let mut sign = 1i64;
        match lx.peek() {
            Some('+') => {
                lx.bump();
            }
            Some('-') => {
                lx.bump();
                sign = -1;
            }
            Some(_) if first => {}
            Some(c) => return Err(lx.err(format!("expected '+' or '-', found '{c}'"))),
            None => break,
        }
        first = false;
        let mut coeff: i64 = 1;
        let mut exps: Exponents = SmallVec::from_elem(0, ring.nvars());
        let mut need_factor = false;
        if lx.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = (lx.integer()? % p as u64) as i64;
            if lx.peek() == Some('*') {
                lx.bump();
                need_factor = true;
            } else if lx.peek().is_some_and(|c| c.is_alphabetic()) {
                need_factor = true;
            }
        } else {
            need_factor = true;
        }
        if need_factor {
            loop {
                if !lx.peek().is_some_and(|c| c.is_alphabetic() || c == '_') {
                    return Err(lx.err("expected a variable"));
                }
                let col = lx.column();
                let name = lx.ident();
                let idx = ring.var_index(&name).ok_or(ParseError {
                    column: col,
                    message: format!("unknown variable '{name}'"),
                })?;
                let mut e = 1u64;
                if lx.peek() == Some('^') {
                    lx.bump();
                    e = lx.integer()?;
                    if e == 0 {
                        return Err(lx.err("exponent must be positive"));
                    }
                }
                exps[idx] += u32::try_from(e).map_err(|_| lx.err("exponent too large"))?;
                if lx.peek() == Some('*') {
                    lx.bump();
                } else {
                    break;
                }
            }
        }
        terms.push((exps, sign * coeff));
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(Polynomial::from_terms(ring, terms))
}
