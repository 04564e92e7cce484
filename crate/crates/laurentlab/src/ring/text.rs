//! Canonical text grammar for polynomials.
//!
//! Terms are sorted graded-lex descending and joined with ` + ` / ` - `.
//! A term is `coeff*var^exp*var^exp` with the coefficient elided when it is
//! 1, `^1` elided, and negative exponents written `var^-2`. The zero
//! polynomial prints as `0`. The same grammar is parsed back; serialization
//! of equal polynomials is byte-identical.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::error::RingError;
use super::poly::{Exponents, LaurentPolynomial};
use super::table::VariableTable;

impl LaurentPolynomial {
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exps, coeff)) in self.terms().rev().enumerate() {
            let neg = coeff.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = coeff.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || exps.is_zero() {
                factors.push(mag.to_string());
            }
            for (v, &e) in exps.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e == 1 {
                    factors.push(self.table().name(v).to_string());
                } else {
                    factors.push(format!("{}^{}", self.table().name(v), e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    table: &'a Arc<VariableTable>,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> RingError {
        RingError::Parse { position: self.pos, message: message.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn parse_integer(&mut self) -> Result<BigInt, RingError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        if text.is_empty() || text == "-" {
            return Err(self.err("expected integer"));
        }
        text.parse::<BigInt>().map_err(|e| self.err(format!("bad integer: {e}")))
    }

    fn parse_name(&mut self) -> Result<String, RingError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return Err(self.err("expected variable name")),
        }
        while matches!(self.peek(), Some(c)
            if c.is_ascii_alphanumeric() || c == b'_' || c == b':' || c == b'-')
        {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.input[start..self.pos]).unwrap().to_string())
    }

    /// One `factor (* factor)*` group; sign already consumed by the caller.
    fn parse_term(&mut self) -> Result<(Exponents, BigInt), RingError> {
        let mut coeff = BigInt::one();
        let mut exps = Exponents::zeros(self.table.arity());
        let mut first = true;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    if !first {
                        return Err(self.err("numeric coefficient must lead the term"));
                    }
                    coeff = self.parse_integer()?;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let name_pos = self.pos;
                    let name = self.parse_name()?;
                    let var = self.table.index_of(&name).ok_or_else(|| RingError::Parse {
                        position: name_pos,
                        message: format!("unknown variable `{name}`"),
                    })?;
                    let exp: i64 = if matches!(self.peek(), Some(b'^')) {
                        self.bump();
                        let e = self.parse_integer()?;
                        let digits = e.to_string();
                        digits.parse::<i64>().map_err(|_| self.err("exponent out of range"))?
                    } else {
                        1
                    };
                    exps.0[var] += exp;
                }
                _ => return Err(self.err("expected coefficient or variable")),
            }
            first = false;
            if matches!(self.peek(), Some(b'*')) {
                self.bump();
            } else {
                break;
            }
        }
        Ok((exps, coeff))
    }

    fn parse_polynomial(&mut self) -> Result<LaurentPolynomial, RingError> {
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty input"));
        }
        let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        let mut negate = false;
        if matches!(self.peek(), Some(b'-')) {
            self.bump();
            negate = true;
        }
        loop {
            self.skip_ws();
            let (exps, coeff) = self.parse_term()?;
            let coeff = if negate { -coeff } else { coeff };
            if !coeff.is_zero() {
                let entry = acc.entry(exps).or_insert_with(BigInt::zero);
                *entry += coeff;
                if entry.is_zero() {
                    // remove cancelled term lazily below
                }
            }
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.bump();
                    negate = false;
                }
                Some(b'-') => {
                    self.bump();
                    negate = true;
                }
                Some(c) => return Err(self.err(format!("unexpected character `{}`", c as char))),
            }
        }
        acc.retain(|_, c| !c.is_zero());
        let mut poly = LaurentPolynomial::zero(self.table);
        for (e, c) in acc {
            poly = poly
                .checked_add(&LaurentPolynomial::monomial(self.table, e, c))
                .expect("same table");
        }
        Ok(poly)
    }
}

/// Parse the canonical grammar over the given table.
pub fn parse_canonical(
    text: &str,
    table: &Arc<VariableTable>,
) -> Result<LaurentPolynomial, RingError> {
    let mut parser = Parser { input: text.as_bytes(), pos: 0, table };
    parser.skip_ws();
    if parser.peek() == Some(b'0') && text.trim() == "0" {
        return Ok(LaurentPolynomial::zero(table));
    }
    let poly = parser.parse_polynomial()?;
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<VariableTable> {
        VariableTable::new(["x", "y", "f0"]).unwrap()
    }

    #[test]
    fn serializes_fixed_forms() {
        let t = table();
        let x = LaurentPolynomial::variable(&t, "x");
        let one = LaurentPolynomial::one(&t);
        let p = &(&x * &x) - &one;
        assert_eq!(p.to_canonical_string(), "x^2 - 1");
        assert_eq!(LaurentPolynomial::zero(&t).to_canonical_string(), "0");
        let m = LaurentPolynomial::var_pow(&t, "x", -2);
        assert_eq!(m.scale(&5.into()).to_canonical_string(), "5*x^-2");
        let q = &(&x.scale(&(-1).into()) * &LaurentPolynomial::variable(&t, "y")) - &one;
        assert_eq!(q.to_canonical_string(), "-x*y - 1");
    }

    #[test]
    fn parses_back_fixed_forms() {
        let t = table();
        for text in ["x^2 - 1", "5*x^-2", "-x*y - 1", "7 + 2*x*y^-3*f0", "0"] {
            let p = parse_canonical(text, &t).unwrap();
            assert_eq!(p.to_canonical_string(), text);
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        let t = table();
        match parse_canonical("", &t) {
            Err(RingError::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_canonical("x +", &t).is_err());
        assert!(parse_canonical("zz", &t).is_err());
        assert!(parse_canonical("x^", &t).is_err());
    }
}
