//! Exact reals of the form `sum q_i * ln(b_i)`.
//!
//! Terms are kept over a pairwise coprime set of integer bases `b_i > 1`.
//! Pairwise coprime integers are multiplicatively independent, so a value is
//! zero exactly when every coefficient vanishes; the sign of a nonzero value
//! is found by refining interval enclosures, which always terminates.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::{self, RealInterval, DEFAULT_START_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, Debug, Default)]
pub struct LogLinearReal {
    // sorted by base; bases pairwise coprime and > 1; coefficients nonzero
    terms: Vec<(BigUint, BigRational)>,
}

impl LogLinearReal {
    pub fn zero() -> Self {
        LogLinearReal { terms: Vec::new() }
    }

    /// `ln n` for a positive integer.
    pub fn log_int(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        assert!(!n.is_zero(), "logarithm of zero");
        Self::from_terms([(n, BigRational::one())])
    }

    /// `ln |q|` for a nonzero rational.
    pub fn log_rational(q: &BigRational) -> Self {
        assert!(!q.is_zero(), "logarithm of zero");
        Self::from_terms([
            (q.numer().magnitude().clone(), BigRational::one()),
            (q.denom().magnitude().clone(), -BigRational::one()),
        ])
    }

    /// `c * ln n`.
    pub fn log_int_scaled(n: impl Into<BigUint>, c: BigRational) -> Self {
        Self::from_terms([(n.into(), c)])
    }

    /// Builds a canonical value from arbitrary `(base, coefficient)` pairs.
    pub fn from_terms(items: impl IntoIterator<Item = (BigUint, BigRational)>) -> Self {
        LogLinearReal { terms: coprime_merge(items.into_iter().collect()) }
    }

    pub fn terms(&self) -> &[(BigUint, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LogLinearReal {
            terms: self.terms.iter().map(|(b, q)| (b.clone(), q * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(c.into()))
    }

    /// Enclosure of width roughly `2^-prec`.
    pub fn enclose(&self, prec: u64) -> RealInterval {
        if self.terms.is_empty() {
            return RealInterval::zero();
        }
        let nbits = 64 - (self.terms.len() as u64).leading_zeros() as u64;
        let mut acc = RealInterval::zero();
        for (b, c) in &self.terms {
            let cmag = c.abs().ceil().to_integer();
            let extra = cmag.bits() + nbits + 2;
            let l = interval::ln_uint(b, prec + extra);
            acc = &acc + &l.scale_rational(c, prec + nbits + 2);
        }
        acc.round_outward(prec + 1)
    }

    /// Exact sign.
    pub fn sign(&self) -> Sign {
        if self.terms.is_empty() {
            return Sign::Zero;
        }
        let mut bits = DEFAULT_START_BITS / 2;
        loop {
            let e = self.enclose(bits);
            if e.lo().signum() > 0 {
                return Sign::Positive;
            }
            if e.hi().signum() < 0 {
                return Sign::Negative;
            }
            bits *= 2;
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn max_exact(&self, other: &Self) -> Self {
        if self.cmp_exact(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// `max(0, self)`.
    pub fn positive_part(&self) -> Self {
        if self.sign() == Sign::Positive {
            self.clone()
        } else {
            Self::zero()
        }
    }

    /// Decimal rendering of the enclosure at `digits` places.
    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        let bits = (digits as u64 * 10) / 3 + 8;
        self.enclose(bits).to_decimal_pair(digits)
    }
}

/// Splits shared factors until the bases are pairwise coprime.
fn coprime_merge(mut work: Vec<(BigUint, BigRational)>) -> Vec<(BigUint, BigRational)> {
    let mut out: Vec<(BigUint, BigRational)> = Vec::new();
    while let Some((a, c)) = work.pop() {
        if a.is_one() || c.is_zero() {
            continue;
        }
        let hit = out.iter().enumerate().find_map(|(i, (b, _))| {
            let g = a.gcd(b);
            (!g.is_one()).then_some((i, g))
        });
        match hit {
            None => out.push((a, c)),
            Some((i, g)) => {
                let (b, e) = out.swap_remove(i);
                if a == b {
                    work.push((a, c + e));
                } else {
                    // c ln a + e ln b = (c+e) ln g + c ln(a/g) + e ln(b/g); a*b strictly shrinks
                    let ag = &a / &g;
                    let bg = &b / &g;
                    work.push((g, &c + &e));
                    work.push((ag, c));
                    work.push((bg, e));
                }
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

impl PartialEq for LogLinearReal {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for LogLinearReal {}

impl Add for &LogLinearReal {
    type Output = LogLinearReal;
    fn add(self, rhs: &LogLinearReal) -> LogLinearReal {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        LogLinearReal::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl Add for LogLinearReal {
    type Output = LogLinearReal;
    fn add(self, rhs: LogLinearReal) -> LogLinearReal {
        &self + &rhs
    }
}

impl Sub for &LogLinearReal {
    type Output = LogLinearReal;
    fn sub(self, rhs: &LogLinearReal) -> LogLinearReal {
        self + &(-rhs)
    }
}

impl Sub for LogLinearReal {
    type Output = LogLinearReal;
    fn sub(self, rhs: LogLinearReal) -> LogLinearReal {
        &self - &rhs
    }
}

impl Neg for &LogLinearReal {
    type Output = LogLinearReal;
    fn neg(self) -> LogLinearReal {
        LogLinearReal {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }
}

impl Neg for LogLinearReal {
    type Output = LogLinearReal;
    fn neg(self) -> LogLinearReal {
        -&self
    }
}

impl core::iter::Sum for LogLinearReal {
    fn sum<I: Iterator<Item = LogLinearReal>>(iter: I) -> Self {
        LogLinearReal::from_terms(iter.flat_map(|x| x.terms))
    }
}

impl fmt::Display for LogLinearReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "log({b})")?;
            } else {
                write!(f, "{mag}*log({b})")?;
            }
        }
        Ok(())
    }
}

/// A [`LogLinearReal`] or `+inf`; the value of a chordal log distance
/// between coincident points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtLogReal {
    Finite(LogLinearReal),
    PosInfinity,
}

impl ExtLogReal {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtLogReal::PosInfinity)
    }

    pub fn finite(&self) -> Option<&LogLinearReal> {
        match self {
            ExtLogReal::Finite(x) => Some(x),
            ExtLogReal::PosInfinity => None,
        }
    }

    /// `self >= other`; `+inf` compares above every finite value.
    pub fn ge(&self, other: &ExtLogReal) -> bool {
        match (self, other) {
            (ExtLogReal::PosInfinity, _) => true,
            (ExtLogReal::Finite(_), ExtLogReal::PosInfinity) => false,
            (ExtLogReal::Finite(a), ExtLogReal::Finite(b)) => a.cmp_exact(b) != Ordering::Less,
        }
    }

    pub fn max(self, other: ExtLogReal) -> ExtLogReal {
        if self.ge(&other) {
            self
        } else {
            other
        }
    }

    pub fn scale_int(&self, k: u64) -> ExtLogReal {
        match self {
            ExtLogReal::Finite(x) => {
                ExtLogReal::Finite(x.scale(&BigRational::from_integer(BigInt::from(k))))
            }
            ExtLogReal::PosInfinity => ExtLogReal::PosInfinity,
        }
    }
}

impl Add for &ExtLogReal {
    type Output = ExtLogReal;
    fn add(self, rhs: &ExtLogReal) -> ExtLogReal {
        match (self, rhs) {
            (ExtLogReal::Finite(a), ExtLogReal::Finite(b)) => ExtLogReal::Finite(a + b),
            _ => ExtLogReal::PosInfinity,
        }
    }
}

impl fmt::Display for ExtLogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtLogReal::Finite(x) => write!(f, "{x}"),
            ExtLogReal::PosInfinity => write!(f, "+inf"),
        }
    }
}
