//! Expressions such as `theta^2 + 1`, `t*(t - 1)` or `1/(t + a)` evaluated
//! directly in a target field, and field specifications `GF(p^e)`.

use crate::algebra::field::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

fn parse_err(src: &str, offset: usize, message: impl Into<String>) -> Error {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().unwrap().chars().count() + 1;
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + d.len_utf8();
                it.next();
            }
            let n = src[i..end]
                .parse()
                .map_err(|_| parse_err(src, i, "integer literal out of range"))?;
            out.push((Tok::Num(n), i));
        } else if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                end = j + d.len_utf8();
                it.next();
            }
            out.push((Tok::Ident(src[i..end].to_string()), i));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            it.next();
        } else {
            return Err(parse_err(src, i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    field: &'a F,
    vars: &'a dyn Fn(&str) -> Option<F::Elem>,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |(_, o)| *o)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        parse_err(self.src, self.offset(), msg)
    }

    fn expr(&mut self) -> Result<F::Elem> {
        let mut acc = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' {
                self.field.add(&acc, &rhs)
            } else {
                self.field.sub(&acc, &rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<F::Elem> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.field.mul(&acc, &rhs);
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    acc = self
                        .field
                        .div(&acc, &rhs)
                        .ok_or_else(|| parse_err(self.src, at, "division by zero"))?;
                }
                // juxtaposition: `2t`, `3(t + 1)`
                Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::Sym('(')) => {
                    let rhs = self.power()?;
                    acc = self.field.mul(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<F::Elem> {
        if let Some(Tok::Sym('-')) = self.peek() {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.field.neg(&v));
        }
        if let Some(Tok::Sym('+')) = self.peek() {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<F::Elem> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Sym('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let at = self.offset();
            let Some(Tok::Num(e)) = self.peek().cloned() else {
                return Err(self.err("expected an integer exponent"));
            };
            self.pos += 1;
            let e = if neg { -e } else { e };
            return self
                .field
                .pow_signed(&base, e)
                .ok_or_else(|| parse_err(self.src, at, "negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<F::Elem> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.field.from_int(n))
            }
            Some(Tok::Ident(name)) => {
                let v = (self.vars)(&name).ok_or_else(|| self.err(format!("unknown variable '{name}'")))?;
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Sym(')')) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(t) => Err(self.err(format!("unexpected '{t}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Evaluates `src` in `field`, resolving identifiers through `vars`.
pub fn parse_expr<F: Field>(field: &F, src: &str, vars: &dyn Fn(&str) -> Option<F::Elem>) -> Result<F::Elem> {
    let toks = lex(src)?;
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        field,
        vars,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// `GF(p)`, `GF(p^e)` or `GF(q)` with `q` a prime power; returns `(p, e)`.
pub fn parse_field_spec(src: &str) -> Result<(u64, usize)> {
    let s = src.trim();
    let inner = s
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(src, 0, "expected GF(p) or GF(p^e)"))?;
    let bad = |m: &str| parse_err(src, 3, m.to_string());
    let (p, e) = match inner.split_once('^') {
        Some((p, e)) => (
            p.trim().parse::<u64>().map_err(|_| bad("bad characteristic"))?,
            e.trim().parse::<usize>().map_err(|_| bad("bad exponent"))?,
        ),
        None => {
            let q: u64 = inner.trim().parse().map_err(|_| bad("bad field order"))?;
            let p = (2..=q)
                .find(|d| q.is_multiple_of(*d))
                .ok_or_else(|| bad("field order must be at least 2"))?;
            let mut e = 0;
            let mut r = q;
            while r.is_multiple_of(p) {
                r /= p;
                e += 1;
            }
            if r != 1 {
                return Err(bad("field order must be a prime power"));
            }
            (p, e)
        }
    };
    if e == 0 {
        return Err(bad("exponent must be positive"));
    }
    Ok((p, e))
}
