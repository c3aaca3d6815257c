//! Polynomial literals such as `3/2*x1^2*y2 - (x2 + y2)^2`.

use crate::error::{AlgError, Result};
use crate::poly::{context, Poly};
use crate::scalar;

const MAX_EXPONENT: u32 = 64;
const MAX_DEGREE: u32 = 256;
const MAX_TERMS: usize = 20_000;
const MAX_DEPTH: usize = 64;

/// Parses a polynomial literal. The context is the set of variables that
/// appear, plus `extra` names.
pub fn parse_poly_with(text: &str, extra: &[&str]) -> Result<Poly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, depth: 0 };
    let names = p.collect_names()?;
    let ctx = context(names.iter().map(String::as_str).chain(extra.iter().copied()));
    let mut p = Parser { src: text.as_bytes(), pos: 0, depth: 0 };
    let out = p.expr(&ctx)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

pub fn parse_poly(text: &str) -> Result<Poly> {
    parse_poly_with(text, &[])
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> AlgError {
        AlgError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn collect_names(&mut self) -> Result<Vec<String>> {
        let mut names = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_alphabetic() || c == b'_' {
                names.push(self.ident());
            } else if c.is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
            } else {
                self.pos += 1;
            }
        }
        if names.len() > 256 {
            return Err(AlgError::TooLarge("too many variable occurrences".into()));
        }
        Ok(names)
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        if self.pos - start > 512 {
            return Err(self.err("numeral too long"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn guard(&self, p: &Poly) -> Result<()> {
        if p.len() > MAX_TERMS || p.total_degree().unwrap_or(0) > MAX_DEGREE {
            return Err(AlgError::TooLarge(format!("intermediate result at byte {}", self.pos)));
        }
        Ok(())
    }

    fn expr(&mut self, ctx: &crate::poly::Ctx) -> Result<Poly> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("nesting too deep"));
        }
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term(ctx)?.neg_poly()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term(ctx)?
            }
            _ => self.term(ctx)?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add_poly(&self.term(ctx)?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub_poly(&self.term(ctx)?);
                }
                _ => break,
            }
            self.guard(&acc)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self, ctx: &crate::poly::Ctx) -> Result<Poly> {
        let mut acc = self.factor(ctx)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor(ctx)?;
            if acc.total_degree().unwrap_or(0) + f.total_degree().unwrap_or(0) > MAX_DEGREE
                || acc.len().saturating_mul(f.len()) > MAX_TERMS * 4
            {
                return Err(AlgError::TooLarge(format!("product at byte {}", self.pos)));
            }
            acc = acc.mul_poly(&f);
            self.guard(&acc)?;
        }
        Ok(acc)
    }

    fn factor(&mut self, ctx: &crate::poly::Ctx) -> Result<Poly> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr(ctx)?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let text = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    format!("{num}/{}", self.digits()?)
                } else {
                    num
                };
                let value = scalar::parse(&text).map_err(|_| self.err("invalid rational constant"))?;
                Poly::constant(ctx, value)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                Poly::var_in(ctx, &name)?
            }
            Some(b'-') => {
                self.pos += 1;
                return Ok(self.factor(ctx)?.neg_poly());
            }
            _ => return Err(self.err("expected a number, variable or `(`")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e: u32 = self.digits()?.parse().map_err(|_| self.err("invalid exponent"))?;
            if e > MAX_EXPONENT {
                return Err(self.err("exponent too large"));
            }
            if base.total_degree().unwrap_or(0).saturating_mul(e) > MAX_DEGREE {
                return Err(AlgError::TooLarge(format!("power at byte {}", self.pos)));
            }
            let mut acc = Poly::one(ctx);
            for _ in 0..e {
                acc = acc.mul_poly(&base);
                self.guard(&acc)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn literals() {
        let p = parse_poly("3/2*x1^2*y2 - (x2 + y2)^2").unwrap();
        let x2 = Poly::variable("x2");
        let y2 = Poly::variable("y2");
        let x1 = Poly::variable("x1");
        let expect = &(&x1.pow(2) * &y2).scale(&ratio(3, 2)) - &(&x2 + &y2).pow(2);
        assert_eq!(p, expect);
        assert_eq!(parse_poly("x1^0*x2^2").unwrap(), x2.pow(2));
        assert_eq!(parse_poly(" -4 ").unwrap().constant_value(), Some(int(-4)));
    }

    #[test]
    fn errors_carry_position() {
        match parse_poly("x + * y") {
            Err(AlgError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("(x+y").is_err());
        assert!(parse_poly("x^999").is_err());
        assert!(parse_poly("1/0").is_err());
    }
}
