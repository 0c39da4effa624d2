//! Text grammar for Laurent polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := [integer]['*']? factor ('*'? factor)*  |  integer
//! factor := 'u' INDEX ('^' SIGNED_INT)?  |  't' ('^' SIGNED_INT)?
//! ```
//!
//! `t` is an alias for `u1` and may only be used in univariate input.

use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use super::{Exponents, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParsePolyError {
    #[error("empty polynomial text")]
    Empty,
    #[error("unexpected character {ch:?} at offset {pos}")]
    Unexpected { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("variable index must be at least 1")]
    ZeroIndex,
    #[error("variable u{index} exceeds the declared {dim} variables")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("'t' is only allowed for univariate polynomials")]
    MixedT,
    #[error("number out of range: {0}")]
    Overflow(String),
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(), idx: 0, _src: src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.idx += 1;
        c
    }

    fn unexpected(&self) -> ParsePolyError {
        match self.chars.get(self.idx) {
            Some(&(pos, ch)) => ParsePolyError::Unexpected { ch, pos },
            None => ParsePolyError::UnexpectedEnd,
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.idx;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.idx += 1;
        }
        (self.idx > start).then(|| self.chars[start..self.idx].iter().map(|&(_, c)| c).collect())
    }

    fn signed_int(&mut self) -> Result<i64, ParsePolyError> {
        let neg = match self.peek() {
            Some('-') => {
                self.idx += 1;
                true
            }
            Some('+') => {
                self.idx += 1;
                false
            }
            _ => false,
        };
        let ds = self.digits().ok_or_else(|| self.unexpected())?;
        let v: i64 = ds.parse().map_err(|_| ParsePolyError::Overflow(ds.clone()))?;
        Ok(if neg { -v } else { v })
    }
}

/// Parsed term: coefficient and sparse (variable, exponent) factors.
struct RawTerm {
    coeff: BigInt,
    factors: Vec<(usize, i64)>,
}

fn parse_terms(src: &str) -> Result<(Vec<RawTerm>, bool), ParsePolyError> {
    let mut cur = Cursor::new(src);
    if cur.peek().is_none() {
        return Err(ParsePolyError::Empty);
    }
    let mut terms = Vec::new();
    let mut used_t = false;
    let mut first = true;
    loop {
        let mut sign = 1;
        match cur.peek() {
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -1;
            }
            _ if first => {}
            None => break,
            _ => return Err(cur.unexpected()),
        }
        first = false;
        let mut coeff = BigInt::from(sign);
        let mut saw_number = false;
        if let Some(ds) = cur.digits() {
            coeff *= ds.parse::<BigInt>().expect("digits parse");
            saw_number = true;
            if cur.peek() == Some('*') {
                cur.bump();
                if !matches!(cur.peek(), Some('u') | Some('t')) {
                    return Err(cur.unexpected());
                }
            }
        }
        let mut factors = Vec::new();
        loop {
            match cur.peek() {
                Some('u') => {
                    cur.bump();
                    let ds = cur.digits().ok_or_else(|| cur.unexpected())?;
                    let index: usize = ds.parse().map_err(|_| ParsePolyError::Overflow(ds.clone()))?;
                    if index == 0 {
                        return Err(ParsePolyError::ZeroIndex);
                    }
                    let exp = if cur.peek() == Some('^') {
                        cur.bump();
                        cur.signed_int()?
                    } else {
                        1
                    };
                    factors.push((index - 1, exp));
                }
                Some('t') => {
                    cur.bump();
                    used_t = true;
                    let exp = if cur.peek() == Some('^') {
                        cur.bump();
                        cur.signed_int()?
                    } else {
                        1
                    };
                    factors.push((0, exp));
                }
                _ => break,
            }
            if cur.peek() == Some('*') {
                cur.bump();
                if !matches!(cur.peek(), Some('u') | Some('t')) {
                    return Err(cur.unexpected());
                }
            }
        }
        if !saw_number && factors.is_empty() {
            return Err(cur.unexpected());
        }
        terms.push(RawTerm { coeff, factors });
        if cur.peek().is_none() {
            break;
        }
    }
    Ok((terms, used_t))
}

fn build(terms: Vec<RawTerm>, dim: usize) -> LaurentPoly {
    LaurentPoly::from_terms(
        dim,
        terms.into_iter().map(|t| {
            let mut e = vec![0i64; dim];
            for (v, x) in t.factors {
                e[v] += x;
            }
            (Exponents(e), t.coeff)
        }),
    )
}

impl LaurentPoly {
    /// Parses with an explicit variable count.
    pub fn parse_with_dim(src: &str, dim: usize) -> Result<LaurentPoly, ParsePolyError> {
        let (terms, used_t) = parse_terms(src)?;
        if used_t && dim != 1 {
            return Err(ParsePolyError::MixedT);
        }
        if let Some(index) = terms.iter().flat_map(|t| t.factors.iter()).map(|&(v, _)| v + 1).find(|&i| i > dim) {
            return Err(ParsePolyError::IndexOutOfRange { index, dim });
        }
        Ok(build(terms, dim))
    }
}

impl FromStr for LaurentPoly {
    type Err = ParsePolyError;

    /// The variable count is the largest index mentioned (at least 1).
    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let (terms, used_t) = parse_terms(src)?;
        let dim = terms.iter().flat_map(|t| t.factors.iter()).map(|&(v, _)| v + 1).max().unwrap_or(1);
        if used_t && dim != 1 {
            return Err(ParsePolyError::MixedT);
        }
        Ok(build(terms, dim))
    }
}
