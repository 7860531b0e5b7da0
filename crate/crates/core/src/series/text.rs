//! Textual form of series, e.g. `3*t^(-1) + 2 + 5*t^(3/7) + O(t^5)`.
//!
//! Series coefficients of nested towers are printed in parentheses, inner
//! level first: `(1 + 2*X)*Y^2 + (X)*Y^3`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

use super::quadratic::QuadraticElement;
use super::{Domain, Elem, Exponent, Precision, Series};

fn var_power(var: &str, e: &Exponent) -> String {
    if *e == Exponent::ONE {
        var.to_string()
    } else if e.is_integer() && !e.is_negative() {
        format!("{var}^{e}")
    } else {
        format!("{var}^({e})")
    }
}

fn format_term(coefficient: &Elem, var: &str, e: &Exponent) -> String {
    let nested = matches!(coefficient, Elem::Series(_) | Elem::Quadratic(_));
    if e.is_zero() {
        return if nested { format!("({coefficient})") } else { coefficient.to_string() };
    }
    let mono = var_power(var, e);
    if nested {
        format!("({coefficient})*{mono}")
    } else if coefficient.is_one() {
        mono
    } else if coefficient.neg().is_one() && matches!(coefficient, Elem::Rational(_)) {
        format!("-{mono}")
    } else {
        format!("{coefficient}*{mono}")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.domain().var();
        let mut parts: Vec<String> = self.terms().map(|(e, c)| format_term(c, var, e)).collect();
        if let Precision::Bounded(b) = self.precision() {
            parts.push(format!("O({})", var_power(var, &b)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, part) in parts.iter().enumerate() {
            if i == 0 {
                write!(f, "{part}")?;
            } else if let Some(rest) = part.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {part}")?;
            }
        }
        Ok(())
    }
}

impl Domain {
    /// Parses an element written in the textual series format. Numbers are
    /// read in the base field; any variable of the tower may appear.
    pub fn parse(&self, text: &str) -> Result<Elem> {
        let tower = self.tower();
        let mut parser = Parser { chars: text.chars().collect(), pos: 0, tower: &tower };
        let value = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing input"));
        }
        parser.lift(value, tower.len() - 1).map(|v| v.elem)
    }
}

struct Value {
    level: usize,
    elem: Elem,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    tower: &'a [Domain],
}

impl Parser<'_> {
    fn error(&self, why: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{why} at offset {} in '{text}'", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn is_minus(c: char) -> bool {
        c == '-' || c == '−'
    }

    fn lift(&self, mut v: Value, level: usize) -> Result<Value> {
        while v.level < level {
            let up = &self.tower[v.level + 1];
            v = Value { level: v.level + 1, elem: up.embed(&v.elem)? };
        }
        Ok(v)
    }

    fn combine(&self, a: Value, b: Value, op: fn(&Elem, &Elem) -> Result<Elem>) -> Result<Value> {
        let level = a.level.max(b.level);
        let a = self.lift(a, level)?;
        let b = self.lift(b, level)?;
        Ok(Value { level, elem: op(&a.elem, &b.elem)? })
    }

    fn expr(&mut self) -> Result<Value> {
        let negate = matches!(self.peek(), Some(c) if Self::is_minus(c));
        if negate {
            self.pos += 1;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if negate {
            acc.elem = acc.elem.neg();
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.combine(acc, t, Elem::try_add)?;
                }
                Some(c) if Self::is_minus(c) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.combine(acc, t, Elem::try_sub)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = self.combine(acc, f, Elem::try_mul)?;
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse::<BigInt>().map_err(|_| self.error("bad integer"))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn exponent(&mut self) -> Result<Exponent> {
        if !self.eat('^') {
            return Ok(Exponent::ONE);
        }
        let paren = self.eat('(');
        let negative = matches!(self.peek(), Some(c) if Self::is_minus(c));
        if negative {
            self.pos += 1;
        }
        let n = self.integer()?;
        let d = if paren && self.eat('/') { self.integer()? } else { BigInt::from(1) };
        if paren && !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        let to_i64 = |x: &BigInt| x.to_string().parse::<i64>().map_err(|_| self.error("exponent too large"));
        let n = to_i64(&n)?;
        Exponent::new(if negative { -n } else { n }, to_i64(&d)?)
    }

    fn level_of(&self, var: &str) -> Option<usize> {
        self.tower.iter().position(|d| match d {
            Domain::Series(s) => s.var() == var,
            Domain::Quadratic(q) => q.var() == var,
            _ => false,
        })
    }

    fn factor(&mut self) -> Result<Value> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let mut v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                if self.peek() == Some('^') {
                    let e = self.exponent()?;
                    if !e.is_integer() {
                        return Err(self.error("powers of expressions must be integers"));
                    }
                    let base = if e.is_negative() { v.elem.inv()? } else { v.elem };
                    v.elem = base.pow(e.numer().unsigned_abs());
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.eat('/') { self.integer()? } else { BigInt::from(1) };
                if d == BigInt::from(0) {
                    return Err(self.error("zero denominator"));
                }
                let elem = self.tower[0].from_rational(&BigRational::new(n, d))?;
                Ok(Value { level: 0, elem })
            }
            Some(c) if c.is_alphabetic() => {
                let name = self.ident();
                if name == "O" && self.eat('(') {
                    let var = self.ident();
                    let level = self.level_of(&var).ok_or_else(|| self.error("unknown variable in O-term"))?;
                    let e = self.exponent()?;
                    if !self.eat(')') {
                        return Err(self.error("expected ')'"));
                    }
                    let sd = self.tower[level].as_series().ok_or_else(|| self.error("O-term on a non-series variable"))?;
                    sd.group().require(&e)?;
                    return Ok(Value { level, elem: Elem::Series(Series::big_o(sd, e)) });
                }
                let level = self.level_of(&name).ok_or_else(|| self.error(&format!("unknown variable '{name}'")))?;
                let e = self.exponent()?;
                let domain = &self.tower[level];
                let elem = match domain {
                    Domain::Series(_) => {
                        let one = domain.residue_domain().expect("series").one();
                        domain.monomial(one, e)?
                    }
                    Domain::Quadratic(q) => {
                        let g = Elem::Quadratic(Box::new(QuadraticElement::from_parts(
                            q.clone(),
                            q.base().zero(),
                            q.base().one(),
                        )));
                        if !e.is_integer() || e.is_negative() {
                            return Err(self.error("quadratic generator needs a nonnegative integer power"));
                        }
                        g.pow(e.numer() as u64)
                    }
                    _ => unreachable!("variables only exist on series and quadratic levels"),
                };
                Ok(Value { level, elem })
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_laurent() {
        let d = Domain::laurent(Domain::prime(7).unwrap(), "t");
        let s = d.parse("3*t^(-1) + 2 + 5*t^3 + O(t^5)").unwrap();
        assert_eq!(s.to_string(), "3*t^(-1) + 2 + 5*t^3 + O(t^5)");
        let back = d.parse(&s.to_string()).unwrap();
        assert!(back.eq_to_precision(&s));
    }

    #[test]
    fn hahn_exponents() {
        let d = Domain::hahn(Domain::prime(7).unwrap(), "t", 7).unwrap();
        let s = d.parse("3*t^(-1) + 2 + 5*t^(3/7) + O(t^5)").unwrap();
        assert_eq!(s.to_string(), "3*t^(-1) + 2 + 5*t^(3/7) + O(t^5)");
        assert!(Domain::laurent(Domain::prime(7).unwrap(), "t").parse("t^(1/7)").is_err());
    }

    #[test]
    fn nested_and_signs() {
        let d = Domain::rational_laurent_tower();
        let s = d.parse("X*Y^2 + Y^3").unwrap();
        assert_eq!(s.to_string(), "(X)*Y^2 + (1)*Y^3");
        let s = d.parse("(1 - 3/4*X)*Y - 2").unwrap();
        assert_eq!(s.to_string(), "(-2) + (1 - 3/4*X)*Y");
        let back = d.parse(&s.to_string()).unwrap();
        assert!(back.eq_to_precision(&s));
        let inner = d.parse("(1 + X + O(X^3))*Y").unwrap();
        assert_eq!(inner.to_string(), "(1 + X + O(X^3))*Y");
    }

    #[test]
    fn prime_field_fractions() {
        let d = Domain::prime(7).unwrap();
        assert_eq!(d.parse("1/2").unwrap().to_string(), "4");
        assert_eq!(d.parse("-1").unwrap().to_string(), "6");
        assert!(d.parse("1/7").is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        for text in ["F7((t))", "Q((X))((Y))", "F7((x^Z[1/7]))((t^Z[1/7]))", "Q((X))((Y))[g^2 = (2 + 2*X^2)]"] {
            let d: Domain = text.parse().unwrap();
            assert_eq!(d.to_string(), text);
        }
    }
}
