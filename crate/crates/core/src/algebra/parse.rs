//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'i' | name | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant. Numbers may carry a
//! decimal point (`0.25` is the exact rational `1/4`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::context::Ctx;
use super::poly::GradedPolynomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parse `text` into a polynomial over `ctx`.
pub fn parse(text: &str, ctx: &Ctx) -> Result<GradedPolynomial> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
    };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a Ctx,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
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

    fn expr(&mut self) -> Result<GradedPolynomial> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GradedPolynomial> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let op_pos = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            if op == b'*' {
                acc = &acc * &rhs;
            } else {
                let divisor = rhs.as_constant().ok_or(Error::Syntax {
                    offset: op_pos,
                    message: "division by a non-constant expression".into(),
                })?;
                let inv = divisor.inv().ok_or(Error::Syntax {
                    offset: op_pos,
                    message: "division by zero".into(),
                })?;
                acc = acc.scale(&inv);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<GradedPolynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<GradedPolynomial> {
        let start = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let (base, ghost_name) = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let exp_pos = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            return Err(self.error("negative exponents are not allowed"));
        }
        let digits = self.take_while(|b| b.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.error("expected a non-negative integer exponent"));
        }
        let exponent: u64 = digits.parse().map_err(|_| Error::Syntax {
            offset: exp_pos,
            message: "exponent too large".into(),
        })?;
        if let Some(name) = ghost_name {
            if exponent > 1 {
                return Err(Error::GhostExponent {
                    name,
                    exponent,
                    offset: start,
                });
            }
        }
        let exponent = u32::try_from(exponent)
            .ok()
            .filter(|&e| e <= 4096)
            .ok_or(Error::Syntax {
                offset: exp_pos,
                message: "exponent too large".into(),
            })?;
        Ok(base.pow(exponent))
    }

    fn take_while(&mut self, pred: impl Fn(u8) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && pred(self.src[self.pos]) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    /// Returns the value and, for a bare ghost variable, its name.
    fn atom(&mut self) -> Result<(GradedPolynomial, Option<String>)> {
        let Some(b) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        let start = self.pos;
        if b == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.error("expected `)`"));
            }
            self.pos += 1;
            return Ok((inner, None));
        }
        if b.is_ascii_digit() || b == b'.' {
            let value = self.number()?;
            return Ok((GradedPolynomial::constant(self.ctx, value), None));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            let name = self.take_while(|b| b.is_ascii_alphanumeric() || b == b'_');
            if name == "i" {
                return Ok((GradedPolynomial::constant(self.ctx, Scalar::i()), None));
            }
            let var = self.ctx.lookup(&name).ok_or_else(|| Error::UnknownVariable {
                name: name.clone(),
                offset: start,
            })?;
            let ghost = var.is_odd().then_some(name);
            return Ok((GradedPolynomial::var(self.ctx, var), ghost));
        }
        Err(self.error(&format!("unexpected character `{}`", b as char)))
    }

    fn number(&mut self) -> Result<Scalar> {
        let start = self.pos;
        let int_part = self.take_while(|b| b.is_ascii_digit());
        let mut frac_part = String::new();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_part = self.take_while(|b| b.is_ascii_digit());
        }
        if int_part.is_empty() && frac_part.is_empty() {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = digits.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "malformed number".into(),
        })?;
        let mut denom = BigInt::one();
        for _ in 0..frac_part.len() {
            denom *= 10;
        }
        debug_assert!(!denom.is_zero());
        Ok(Scalar::from_rational(BigRational::new(numer, denom)))
    }
}
