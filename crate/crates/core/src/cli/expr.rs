//! Expression grammar for field elements and forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? int)?
//! atom   := int | var | '(' expr ')' | '<' expr (',' expr)* '>' | 'pf(' [expr (',' expr)*] ')'
//! ```
//!
//! Values are scalars or forms: `+` on forms is the orthogonal sum, `-` the
//! Witt difference, `*` the tensor product (or scaling when one side is a
//! scalar).

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement};
use crate::forms::QForm;
use crate::pfister::PfisterSpec;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(FieldElement),
    Form(QForm),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(s.parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^(),<>".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    field: &'a FieldDesc,
}

impl<'a> Parser<'a> {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.toks.get(self.i), Some((_, Tok::Sym(s))) if *s == c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek_sym(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn scalar(&mut self) -> Result<FieldElement> {
        let pos = self.pos();
        match self.expr()? {
            Value::Scalar(s) => Ok(s),
            Value::Form(_) => Err(Error::Parse { pos, msg: "expected a scalar, found a form".into() }),
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let plus = if self.eat('+') {
                true
            } else if self.eat('-') {
                false
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            let f = self.field;
            lhs = match (lhs, rhs) {
                (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(if plus { f.add(&a, &b) } else { f.sub(&a, &b) }),
                (Value::Form(a), Value::Form(b)) => Value::Form(if plus { a.orth_sum(&b)? } else { a.minus(&b)? }),
                _ => return Err(Error::Parse { pos, msg: "cannot add a scalar and a form".into() }),
            };
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let mul = if self.eat('*') {
                true
            } else if self.eat('/') {
                false
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            let f = self.field;
            lhs = match (lhs, rhs, mul) {
                (Value::Scalar(a), Value::Scalar(b), true) => Value::Scalar(f.mul(&a, &b)),
                (Value::Scalar(a), Value::Scalar(b), false) => Value::Scalar(f.div(&a, &b)?),
                (Value::Scalar(a), Value::Form(q), true) | (Value::Form(q), Value::Scalar(a), true) => {
                    Value::Form(q.scale(&a)?)
                }
                (Value::Form(a), Value::Form(b), true) => Value::Form(a.tensor(&b)?),
                (Value::Form(q), Value::Scalar(a), false) => Value::Form(q.scale(&f.inv(&a)?)?),
                _ => return Err(Error::Parse { pos, msg: "cannot divide by a form".into() }),
            };
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Value::Scalar(a) => Value::Scalar(self.field.neg(&a)),
                Value::Form(q) => Value::Form(q.neg()),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.toks.get(self.i) {
            Some((_, Tok::Num(n))) => {
                let e: i64 =
                    n.try_into().map_err(|_| Error::Parse { pos: self.pos(), msg: "exponent too large".into() })?;
                self.i += 1;
                if neg {
                    -e
                } else {
                    e
                }
            }
            _ => return self.err("expected an integer exponent"),
        };
        match base {
            Value::Scalar(a) => Ok(Value::Scalar(self.field.pow(&a, e)?)),
            Value::Form(_) => self.err("forms cannot be raised to a power"),
        }
    }

    fn list(&mut self, close: char) -> Result<Vec<FieldElement>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.scalar()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let Some((pos, tok)) = self.toks.get(self.i).cloned() else {
            return self.err("unexpected end of input");
        };
        self.i += 1;
        match tok {
            Tok::Num(n) => Ok(Value::Scalar(self.field.rational(&BigRational::from_integer(n))?)),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Sym('<') => {
                let entries = self.list('>')?;
                if entries.is_empty() {
                    return Err(Error::Parse { pos, msg: "empty form".into() });
                }
                Ok(Value::Form(QForm::new(self.field, &entries)?))
            }
            Tok::Ident(name) if name == "pf" && self.peek_sym('(') => {
                self.i += 1;
                let slots = self.list(')')?;
                Ok(Value::Form(PfisterSpec::from_elements(self.field, &slots)?.expand(self.field)?))
            }
            Tok::Ident(name) => Ok(Value::Scalar(self.field.variable(&name)?)),
            Tok::Sym(c) => Err(Error::Parse { pos, msg: format!("unexpected `{c}`") }),
        }
    }
}

fn parse_value(text: &str, field: &FieldDesc) -> Result<Value> {
    let mut p = Parser { toks: lex(text)?, i: 0, end: text.chars().count(), field };
    let v = p.expr()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parse a form expression over `field`.
pub fn parse_form(text: &str, field: &FieldDesc) -> Result<QForm> {
    match parse_value(text, field)? {
        Value::Form(q) => Ok(q),
        Value::Scalar(_) => Err(Error::Parse { pos: 0, msg: "expected a form, found a scalar".into() }),
    }
}

/// Parse a scalar expression over `field`.
/// Evaluate an expression and print the result, a form or a scalar.
pub fn evaluate(text: &str, field: &FieldDesc) -> Result<String> {
    Ok(match parse_value(text, field)? {
        Value::Form(q) => q.to_string(),
        Value::Scalar(s) => field.format_element(&s),
    })
}

pub fn parse_scalar(text: &str, field: &FieldDesc) -> Result<FieldElement> {
    match parse_value(text, field)? {
        Value::Scalar(s) => Ok(s),
        Value::Form(_) => Err(Error::Parse { pos: 0, msg: "expected a scalar, found a form".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        let q = FieldDesc::rationals();
        assert_eq!(parse_form("<1,-1>", &q).unwrap().to_string(), "<1,-1>");
        assert_eq!(parse_form("pf(1,1)", &q).unwrap().to_string(), "<1,1,1,1>");
        assert_eq!(parse_form("pf()", &q).unwrap().to_string(), "<1>");
        assert_eq!(parse_form(" 2 * < 1 , 3/4 > ", &q).unwrap().to_string(), "<2,6>");
        assert_eq!(parse_form("<1,2> * <1,3>", &q).unwrap().to_string(), "<1,3,2,6>");
        assert_eq!(parse_form("<1> - <2>", &q).unwrap().to_string(), "<1,-2>");
    }

    #[test]
    fn laurent_expression() {
        let f = FieldDesc::parse("Q((x))").unwrap();
        let q = parse_form("<1,-1> + x*<1,1>", &f).unwrap();
        assert_eq!(q.to_string(), "<1,-1,x,x>");
        assert_eq!(parse_form("<x^3, 4*x^-2>", &f).unwrap().to_string(), "<x,1>");
    }

    #[test]
    fn errors() {
        let q = FieldDesc::rationals();
        assert_eq!(parse_form("<1,0>", &q).unwrap_err(), Error::ZeroEntry);
        assert_eq!(parse_form("<x>", &q).unwrap_err(), Error::UnknownVariable("x".into()));
        assert!(matches!(parse_form("<1,2", &q), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_form("<1> + 2", &q), Err(Error::Parse { .. })));
        assert!(matches!(parse_form("<1> $", &q), Err(Error::Parse { pos: 4, .. })));
    }
}
