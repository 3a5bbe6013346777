//! Canonical text form and the expression parser shared with the input
//! format.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{Monomial, Polynomial, Rational, Var, NVARS};

pub(crate) fn write_polynomial(p: &Polynomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let mag = c.abs();
        if m.is_one() {
            write_rational(&mag, f)?;
            continue;
        }
        if !mag.is_one() {
            write_rational(&mag, f)?;
            f.write_str("*")?;
        }
        write_monomial(m, f)?;
    }
    Ok(())
}

fn write_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for v in Var::ALL {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(v.name())?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseFailure {
    /// 1-based column and a description of what was expected there.
    #[error("column {col}: expected {expected}")]
    Expected { col: usize, expected: &'static str },
    #[error("column {col}: unknown variable `{name}`")]
    WrongVariable { col: usize, name: String },
    #[error("column {col}: zero denominator")]
    ZeroDenominator { col: usize },
}

impl ParseFailure {
    pub fn col(&self) -> usize {
        match self {
            ParseFailure::Expected { col, .. }
            | ParseFailure::WrongVariable { col, .. }
            | ParseFailure::ZeroDenominator { col } => *col,
        }
    }
}

/// Parse a polynomial over all six variables.
pub fn parse_polynomial(src: &str) -> Result<Polynomial, ParseFailure> {
    parse_polynomial_in(src, &Var::ALL)
}

/// Parse a signed sum of terms, accepting only the listed variables.
///
/// A term is an optional rational coefficient, an optional `*`, then a
/// product of variable powers. Factors may be juxtaposed (`s^2t`, `X1X2`) and
/// exponents may be negative (`s^-1`).
pub fn parse_polynomial_in(src: &str, allowed: &[Var]) -> Result<Polynomial, ParseFailure> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        allowed,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.expected("`+`, `-` or end of expression"));
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    allowed: &'a [Var],
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expected(&self, what: &'static str) -> ParseFailure {
        ParseFailure::Expected {
            col: self.pos + 1,
            expected: what,
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseFailure> {
        let mut out = Polynomial::zero();
        self.skip_ws();
        let mut sign = Rational::one();
        if let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            if c == '-' {
                sign = -sign;
            }
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * &sign);
            self.skip_ws();
            match self.peek() {
                Some('+') => sign = Rational::one(),
                Some('-') => sign = -Rational::one(),
                _ => return Ok(out),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseFailure> {
        self.skip_ws();
        let mut coef = Rational::one();
        let mut saw_coef = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coef = self.rational()?;
            saw_coef = true;
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                self.skip_ws();
                if !self.at_factor() {
                    return Err(self.expected("a variable after `*`"));
                }
            }
        }
        let mut exps = [0i32; NVARS];
        let mut factors = 0;
        loop {
            self.skip_ws();
            if factors > 0 && self.peek() == Some('*') {
                self.pos += 1;
                self.skip_ws();
                if !self.at_factor() {
                    return Err(self.expected("a variable after `*`"));
                }
            }
            if !self.at_factor() {
                break;
            }
            let (v, e) = self.factor()?;
            exps[v.index()] += e;
            factors += 1;
        }
        if !saw_coef && factors == 0 {
            return Err(self.expected("a coefficient or variable"));
        }
        Ok((Monomial::new(exps), coef))
    }

    fn at_factor(&self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_alphabetic())
    }

    fn factor(&mut self) -> Result<(Var, i32), ParseFailure> {
        let start = self.pos;
        let c = self.peek().unwrap();
        let name: String = if c == 's' || c == 't' {
            self.pos += 1;
            c.to_string()
        } else if c == 'X' && self.chars.get(self.pos + 1).is_some_and(|d| d.is_ascii_digit()) {
            self.pos += 2;
            self.chars[start..self.pos].iter().collect()
        } else {
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            self.chars[start..self.pos].iter().collect()
        };
        let var = Var::from_name(&name)
            .filter(|v| self.allowed.contains(v))
            .ok_or(ParseFailure::WrongVariable {
                col: start + 1,
                name,
            })?;
        self.skip_ws();
        let mut e = 1;
        let starred = self.peek() == Some('*') && self.chars.get(self.pos + 1) == Some(&'*');
        if self.peek() == Some('^') || starred {
            self.pos += if starred { 2 } else { 1 };
            self.skip_ws();
            let neg = match self.peek() {
                Some('-') => {
                    self.pos += 1;
                    true
                }
                Some('+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let digits = self.digits().ok_or_else(|| self.expected("an integer exponent"))?;
            e = digits
                .parse::<i32>()
                .map_err(|_| self.expected("an exponent that fits in 32 bits"))?;
            if neg {
                e = -e;
            }
        }
        Ok((var, e))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn rational(&mut self) -> Result<Rational, ParseFailure> {
        let num: BigInt = self.digits().unwrap().parse().unwrap();
        self.skip_ws();
        if self.peek() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            let col = self.pos + 1;
            let den: BigInt = self
                .digits()
                .ok_or_else(|| self.expected("a denominator"))?
                .parse()
                .unwrap();
            if den.is_zero() {
                return Err(ParseFailure::ZeroDenominator { col });
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_print() {
        let p: Polynomial = "-1/3*X3 + 2*X1^2*X2".parse().unwrap();
        assert_eq!(p.to_string(), "2*X1^2*X2 - 1/3*X3");
        assert_eq!(Polynomial::zero().to_string(), "0");
        let q: Polynomial = "s^-1 - 1".parse().unwrap();
        assert_eq!(q.to_string(), "-1 + s^-1");
    }

    #[test]
    fn juxtaposition_and_spacing() {
        let a: Polynomial = "2 s^2t - 3st^ -1 + X1X2".parse().unwrap();
        let b: Polynomial = "2*s^2*t - 3*s*t^-1 + X1*X2".parse().unwrap();
        assert_eq!(a, b);
        let c: Polynomial = "X1**2*X3 - s**-1".parse().unwrap();
        assert_eq!(c, "X1^2*X3 - s^-1".parse().unwrap());
    }

    #[test]
    fn errors_carry_columns() {
        let err = parse_polynomial_in("s + u", &[Var::S, Var::T]).unwrap_err();
        assert_eq!(
            err,
            ParseFailure::WrongVariable {
                col: 5,
                name: "u".into()
            }
        );
        assert_eq!(parse_polynomial("s +").unwrap_err().col(), 4);
        assert!(matches!(
            parse_polynomial("1/0"),
            Err(ParseFailure::ZeroDenominator { col: 3 })
        ));
    }

    #[test]
    fn print_parse_roundtrip() {
        for src in ["0", "1", "-7/2", "X1^3*X3 - 2*X2 + 5", "s^-2*t^3 - 1/4*s*X4"] {
            let p: Polynomial = src.parse().unwrap();
            assert_eq!(p.to_string().parse::<Polynomial>().unwrap(), p);
        }
    }
}
