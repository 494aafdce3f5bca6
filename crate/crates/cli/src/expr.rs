//! Parsing of map expressions, points, place lists and rationals.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)*
//! atom   := integer | 'z' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use orbitgap_core::{Place, PlaceSet, ProjPoint, RatPoly, RationalMap};
use thiserror::Error;

/// Exponents beyond this are rejected rather than expanded.
const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("map has degree {0} after cancellation; degree 2 or more is required")]
    DegreeTooLow(usize),
    #[error("division by the zero polynomial at {0}")]
    DivisionByZeroPolynomial(usize),
    #[error("invalid map: {0}")]
    Map(orbitgap_core::Error),
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, msg: msg.into() }
}

/// A quotient of polynomials, kept unreduced until the end.
#[derive(Clone)]
struct Frac {
    num: RatPoly,
    den: RatPoly,
}

impl Frac {
    fn poly(p: RatPoly) -> Self {
        Frac { num: p, den: RatPoly::constant(BigRational::one()) }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    fn neg(&self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    fn div(&self, o: &Frac, pos: usize) -> Result<Frac, ParseError> {
        if o.num.is_zero() {
            return Err(ParseError::DivisionByZeroPolynomial(pos));
        }
        Ok(Frac { num: &self.num * &o.den, den: &self.den * &o.num })
    }

    fn pow(&self, n: u32) -> Frac {
        Frac { num: self.num.pow(n), den: self.den.pow(n) }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            core::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap()
        })
    }

    fn expr(&mut self) -> Result<Frac, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Frac, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                acc = acc.div(&self.unary()?, at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Frac, ParseError> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Frac, ParseError> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let at = self.pos;
            let n = self.integer().ok_or_else(|| syntax(at, "expected a nonnegative integer exponent"))?;
            let n = u32::try_from(&n)
                .ok()
                .filter(|&n| n <= MAX_EXPONENT)
                .ok_or_else(|| syntax(at, format!("exponent larger than {MAX_EXPONENT}")))?;
            base = base.pow(n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac, ParseError> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(Frac::poly(RatPoly::x()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(syntax(self.pos, "expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().expect("digit present");
                Ok(Frac::poly(RatPoly::constant(BigRational::from_integer(n))))
            }
            Some(c) => Err(syntax(self.pos, format!("unexpected '{}'", c as char))),
            None => Err(syntax(self.pos, "unexpected end of input")),
        }
    }
}

/// Parses and normalizes a map such as `(2*z^2+3)/(5*z-7)`.
pub fn parse_map_expr(text: &str) -> Result<RationalMap, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let frac = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(syntax(p.pos, format!("unexpected '{}'", c as char)));
    }
    RationalMap::normalize(&frac.num, &frac.den).map_err(|e| match e {
        orbitgap_core::Error::DegreeTooLow(d) => ParseError::DegreeTooLow(d),
        other => ParseError::Map(other),
    })
}

pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let t = text.trim();
    let bad = || syntax(0, format!("expected an integer or p/q, got '{t}'"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(syntax(0, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

/// `p/q`, an integer, or `inf`.
pub fn parse_point(text: &str) -> Result<ProjPoint, ParseError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(ProjPoint::infinity());
    }
    Ok(ProjPoint::from_rational(&parse_rational(t)?))
}

/// Comma-separated `inf` and primes, e.g. `inf,2,3`.
pub fn parse_places(text: &str) -> Result<PlaceSet, ParseError> {
    let mut places = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item.eq_ignore_ascii_case("inf") {
            places.push(Place::INFINITY);
        } else {
            let p: u64 = item.parse().map_err(|_| syntax(0, format!("bad place '{item}'")))?;
            places.push(Place::finite(p).map_err(ParseError::Map)?);
        }
    }
    PlaceSet::new(places).map_err(ParseError::Map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbitgap_core::heights::map_height;
    use orbitgap_core::LogLinearReal;

    #[test]
    fn documented_examples() {
        let m = parse_map_expr("z^2 + z").unwrap();
        assert_eq!(m.degree(), 2);
        assert!(m.is_polynomial());
        let m = parse_map_expr("(2*z^2+3)/(5*z-7)").unwrap();
        assert_eq!(map_height(&m), LogLinearReal::log_int(7u32));
        assert_eq!(parse_map_expr("z^2/z"), Err(ParseError::DegreeTooLow(1)));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_map_expr("z^2 + $"), Err(syntax(6, "unexpected '$'")));
        assert!(matches!(parse_map_expr("(z^2"), Err(ParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_map_expr("z^-2"), Err(ParseError::Syntax { pos: 2, .. })));
        assert_eq!(parse_map_expr("z^2/(z-z)"), Err(ParseError::DivisionByZeroPolynomial(3)));
        assert!(matches!(parse_map_expr("z z"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn rational_coefficients_are_cleared() {
        let a = parse_map_expr("1/2*z^2 + 1/3").unwrap();
        let b = parse_map_expr("(3*z^2 + 2)/6").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, parse_map_expr("(z^2 + 2/3) / 2").unwrap());
    }

    #[test]
    fn points_and_places() {
        assert_eq!(parse_point("inf").unwrap(), ProjPoint::infinity());
        assert_eq!(parse_point("-4/6").unwrap().to_string(), "-2/3");
        assert!(parse_point("1/0").is_err());
        let s = parse_places("inf, 2,3").unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.has_archimedean());
        assert!(parse_places("4").is_err());
        assert!(parse_places("2,2").is_err());
    }
}
