//! Text to polynomial.
//!
//! Accepts sums of products of rationals, variables `x0..xn`, named
//! parameters and parenthesised subexpressions, with `^` for nonnegative
//! powers (negative powers only for nonzero constants). Division is only by
//! constants. The printing grammar of [`Polynomial`] is a subset.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Var(usize),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Token, String)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            d if d.is_ascii_digit() => {
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..=i].iter().collect();
                Token::Num(text.parse().expect("digits"))
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let text: String = chars[start..=i].iter().collect();
                match text.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                    Some(idx) if text[1..].chars().all(|c| c.is_ascii_digit()) => Token::Var(idx),
                    _ => Token::Ident(text),
                }
            }
            other => return Err(Error::parse(other.to_string(), "unexpected character")),
        };
        i += 1;
        out.push((tok, chars[start..i].iter().collect()));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, String)>,
    pos: usize,
    nvars: usize,
    params: &'a HashMap<String, BigRational>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn text(&self) -> String {
        self.tokens
            .get(self.pos)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| "<end>".into())
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let token = self.text();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::parse(token, "division only by nonzero constants"));
                    }
                    acc = acc.scale(&d.leading_coefficient().expect("nonzero").recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let token = self.text();
        let k = match self.peek() {
            Some(Token::Num(k)) => u32::try_from(k).map_err(|_| Error::parse(&token, "exponent too large"))?,
            _ => return Err(Error::parse(token, "expected an integer exponent")),
        };
        self.pos += 1;
        if negative {
            if !base.is_constant() || base.is_zero() {
                return Err(Error::parse(token, "negative powers only of nonzero constants"));
            }
            let c = base.leading_coefficient().expect("nonzero").recip();
            let mut v = BigRational::one();
            for _ in 0..k {
                v *= &c;
            }
            return Ok(Polynomial::constant(self.nvars, v));
        }
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let token = self.text();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::parse("<end>", "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(Polynomial::constant(self.nvars, BigRational::from_integer(v))),
            Token::Var(i) => {
                if i >= self.nvars {
                    return Err(Error::parse(token, format!("variable outside x0..x{}", self.nvars - 1)));
                }
                Ok(Polynomial::var(self.nvars, i))
            }
            Token::Ident(name) => match self.params.get(&name) {
                Some(v) => Ok(Polynomial::constant(self.nvars, v.clone())),
                None => Err(Error::parse(token, "unknown identifier")),
            },
            Token::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(Error::parse(self.text(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(Error::parse(token, "unexpected token")),
        }
    }
}

/// Parses a polynomial in `x0..x{nvars-1}`.
pub fn parse_polynomial(src: &str, nvars: usize) -> Result<Polynomial> {
    parse_polynomial_with(src, nvars, &HashMap::new())
}

/// Parses with named rational parameters (e.g. `a`, `b`).
pub fn parse_polynomial_with(src: &str, nvars: usize, params: &HashMap<String, BigRational>) -> Result<Polynomial> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::parse(src, "empty polynomial"));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        nvars,
        params,
    };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::parse(p.text(), "trailing input"));
    }
    Ok(out)
}

/// Parses a rational such as `-3`, `7/2`.
pub fn parse_rational(src: &str) -> Result<BigRational> {
    let p = parse_polynomial(src, 0)?;
    if !p.is_constant() {
        return Err(Error::parse(src, "expected a rational number"));
    }
    Ok(p.leading_coefficient().cloned().unwrap_or_else(BigRational::zero))
}
