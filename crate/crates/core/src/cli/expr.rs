//! Intersection expressions: basis labels, `c1`, `c2`, rational literals,
//! `+`, `-`, parentheses, and `*` as the intersection product.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{CurveClass, DivisorClass, Rational};
use crate::tower::Variety;

use super::script::parse_rational;

/// Value of an expression, by degree: 0, 1, 2 or 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(Rational),
    Div(DivisorClass),
    Curve(CurveClass),
    /// An intersection number.
    Top(Rational),
}

impl Value {
    fn degree(&self) -> u32 {
        match self {
            Value::Scalar(_) => 0,
            Value::Div(_) => 1,
            Value::Curve(_) => 2,
            Value::Top(_) => 3,
        }
    }

    pub fn number(&self) -> Option<&Rational> {
        match self {
            Value::Scalar(r) | Value::Top(r) => Some(r),
            _ => None,
        }
    }

    pub fn display<'a>(&'a self, v: &'a Variety) -> ValueDisplay<'a> {
        ValueDisplay { value: self, v }
    }
}

pub struct ValueDisplay<'a> {
    value: &'a Value,
    v: &'a Variety,
}

impl fmt::Display for ValueDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Value::Scalar(r) | Value::Top(r) => write!(f, "{r}"),
            Value::Div(x) => f.write_str(&self.v.format_div(x)),
            Value::Curve(c) => f.write_str(&self.v.format_curve(c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let r = parse_rational(&lit).ok_or_else(|| Error::parse(1, format!("malformed rational '{lit}'")))?;
                out.push(Tok::Num(r));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::parse(1, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    v: &'a Variety,
}

fn over_graded() -> Error {
    Error::Grading("product exceeds top degree".into())
}

fn mul(v: &Variety, a: Value, b: Value) -> Result<Value> {
    use Value::*;
    if a.degree() + b.degree() > 3 {
        return Err(over_graded());
    }
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => Scalar(x * y),
        (Scalar(x), Div(d)) | (Div(d), Scalar(x)) => Div(d.scale(&x)),
        (Scalar(x), Curve(c)) | (Curve(c), Scalar(x)) => Curve(c.scale(&x)),
        (Scalar(x), Top(y)) | (Top(y), Scalar(x)) => Top(x * y),
        (Div(x), Div(y)) => Curve(v.intersect_dd(&x, &y)?),
        (Div(x), Curve(c)) | (Curve(c), Div(x)) => Top(v.pair_dc(&x, &c)?),
        _ => return Err(over_graded()),
    })
}

fn add(a: Value, b: Value) -> Result<Value> {
    use Value::*;
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => Scalar(x + y),
        (Scalar(x), Top(y)) | (Top(x), Scalar(y)) | (Top(x), Top(y)) => Top(x + y),
        (Div(x), Div(y)) => Div(x.add(&y)?),
        (Curve(x), Curve(y)) => Curve(x.add(&y)?),
        (a, b) => {
            return Err(Error::Grading(format!(
                "cannot add terms of degree {} and {}",
                a.degree(),
                b.degree()
            )))
        }
    })
}

fn neg(a: Value) -> Value {
    match a {
        Value::Scalar(x) => Value::Scalar(-x),
        Value::Top(x) => Value::Top(-x),
        Value::Div(d) => Value::Div(d.neg()),
        Value::Curve(c) => Value::Curve(c.neg()),
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = add(acc, self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = add(acc, neg(self.term()?))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = mul(self.v, acc, rhs)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(neg(self.unary()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Value> {
        match self.next() {
            Some(Tok::Num(r)) => Ok(Value::Scalar(r)),
            Some(Tok::Ident(name)) => self.symbol(&name),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(Error::parse(1, "expected ')'")),
                }
            }
            Some(t) => Err(Error::parse(1, format!("unexpected token {t:?}"))),
            None => Err(Error::parse(1, "unexpected end of expression")),
        }
    }

    fn symbol(&self, name: &str) -> Result<Value> {
        match name {
            "c1" => Ok(Value::Div(self.v.c1().clone())),
            "c2" => Ok(Value::Curve(self.v.c2().clone())),
            _ => {
                if let Ok(d) = self.v.div(name) {
                    Ok(Value::Div(d))
                } else if let Ok(c) = self.v.curve(name) {
                    Ok(Value::Curve(c))
                } else {
                    Err(Error::UnknownLabel {
                        name: name.to_string(),
                        step: self.v.point_count() + self.v.curve_count(),
                    })
                }
            }
        }
    }
}

pub fn eval_expr(v: &Variety, expr: &str) -> Result<Value> {
    let mut p = Parser {
        toks: tokenize(expr)?,
        pos: 0,
        v,
    };
    let value = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(1, format!("unexpected token {:?}", p.toks[p.pos])));
    }
    Ok(value)
}
