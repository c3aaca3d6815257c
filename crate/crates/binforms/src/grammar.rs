//! Expression grammar for module products and pairings:
//! `V(n,m)`, `V(n,m)*V(p,q)*...` and `T(u, v; p1, p2)`.

use crate::biform::BiForm;
use crate::error::{FormError, Result};
use crate::module::Module;
use exactalg::parse::parse_poly;

const MAX_FACTORS: usize = 4;
const MAX_DEGREE: u32 = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Product(Vec<(u32, u32)>),
    Pairing { u: BiForm, v: BiForm, p1: u32, p2: u32 },
}

impl Expr {
    /// Tensor product module of a `Product` expression.
    pub fn module(&self) -> Option<Module> {
        match self {
            Expr::Product(fs) => {
                let mut it = fs.iter();
                let first = it.next()?;
                let mut m = Module::irreducible(first.0, first.1);
                for f in it {
                    m = m.tensor(&Module::irreducible(f.0, f.1));
                }
                Some(m)
            }
            Expr::Pairing { .. } => None,
        }
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> FormError {
        FormError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.s[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.ws();
        if self.s[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.s[self.pos..].chars().next()
    }

    fn number(&mut self) -> Result<u32> {
        self.ws();
        let start = self.pos;
        while self.s[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a nonnegative integer"));
        }
        self.s[start..self.pos].parse().map_err(|_| FormError::Parse { pos: start, msg: "integer too large".into() })
    }

    /// Text up to the next top-level `stop` character.
    fn until(&mut self, stop: char) -> Result<(usize, &'a str)> {
        let start = self.pos;
        let mut depth = 0i32;
        for (off, c) in self.s[start..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => break,
                ')' => depth -= 1,
                c if c == stop && depth == 0 => {
                    self.pos = start + off;
                    return Ok((start, &self.s[start..start + off]));
                }
                _ => {}
            }
        }
        self.pos = start;
        Err(self.err(format!("expected `{stop}`")))
    }
}

fn literal(offset: usize, text: &str) -> Result<BiForm> {
    let p = parse_poly(text).map_err(|e| match e {
        exactalg::AlgError::Parse { pos, msg } => FormError::Parse { pos: offset + pos, msg },
        other => FormError::Parse { pos: offset, msg: other.to_string() },
    })?;
    if p.is_zero() {
        return Err(FormError::Parse { pos: offset, msg: "zero form has no bidegree".into() });
    }
    BiForm::infer(p).map_err(|e| FormError::Parse { pos: offset, msg: e.to_string() })
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut c = Cursor { s: text, pos: 0 };
    let out = match c.peek() {
        Some('V') => {
            let mut factors = Vec::new();
            loop {
                c.eat('V')?;
                c.eat('(')?;
                let n = c.number()?;
                let m = if c.peek() == Some(',') {
                    c.eat(',')?;
                    c.number()?
                } else {
                    0
                };
                c.eat(')')?;
                if n > MAX_DEGREE || m > MAX_DEGREE {
                    return Err(c.err(format!("degrees are limited to {MAX_DEGREE}")));
                }
                factors.push((n, m));
                if factors.len() > MAX_FACTORS {
                    return Err(c.err(format!("at most {MAX_FACTORS} factors")));
                }
                if c.peek() == Some('*') {
                    c.eat('*')?;
                } else {
                    break;
                }
            }
            Expr::Product(factors)
        }
        Some('T') => {
            c.eat('T')?;
            c.eat('(')?;
            let (at, u) = c.until(',')?;
            let u = literal(at, u)?;
            c.eat(',')?;
            let (at, v) = c.until(';')?;
            let v = literal(at, v)?;
            c.eat(';')?;
            let p1 = c.number()?;
            c.eat(',')?;
            let p2 = c.number()?;
            c.eat(')')?;
            Expr::Pairing { u, v, p1, p2 }
        }
        _ => return Err(c.err("expected `V(` or `T(`")),
    };
    c.ws();
    if c.pos != text.len() {
        return Err(c.err("unexpected trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        assert_eq!(parse_expr("V(1,2)*V(1,2)").unwrap(), Expr::Product(vec![(1, 2), (1, 2)]));
        assert_eq!(parse_expr(" V(3) ").unwrap(), Expr::Product(vec![(3, 0)]));
        assert!(parse_expr("V(1,2)*").is_err());
        assert!(parse_expr("V(1,99)").is_err());
    }

    #[test]
    fn pairings() {
        match parse_expr("T(x1*x2^2, y1*(y2)^2; 1, 2)").unwrap() {
            Expr::Pairing { u, v, p1, p2 } => {
                assert_eq!((u.bidegree(), v.bidegree(), p1, p2), ((1, 2), (1, 2), 1, 2));
            }
            other => panic!("{other:?}"),
        }
        match parse_expr("T(x1 + , y1; 0, 0)") {
            Err(FormError::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("T(x1+y2, y1; 0, 0)").is_err());
    }
}
