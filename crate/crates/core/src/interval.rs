//! Dyadic rationals, outward-rounded intervals and certified logarithms.
//!
//! Precision arguments are absolute: rounding at `prec` bits moves an endpoint
//! to a multiple of `2^-prec`, always away from the enclosed value.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::logreal::LogLinearReal;

/// First precision tried by refinement loops.
pub const DEFAULT_START_BITS: u64 = 128;
/// Default precision cap for refinement loops.
pub const DEFAULT_CAP_BITS: u64 = 1 << 16;

/// `mant * 2^exp`, with odd mantissa unless zero.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.mant.is_positive() {
            1
        } else if self.mant.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// `floor(q * 2^prec) / 2^prec`.
    pub fn from_rational_floor(q: &BigRational, prec: u64) -> Self {
        let scaled = q.numer() << prec;
        Dyadic::new(scaled.div_floor(q.denom()), -(prec as i64))
    }

    /// `ceil(q * 2^prec) / 2^prec`.
    pub fn from_rational_ceil(q: &BigRational, prec: u64) -> Self {
        let scaled = q.numer() << prec;
        Dyadic::new(num_integer::Integer::div_ceil(&scaled, q.denom()), -(prec as i64))
    }

    /// Largest multiple of `2^-prec` not above `self`.
    pub fn floor_at(&self, prec: u64) -> Self {
        let shift = -(prec as i64) - self.exp;
        if shift <= 0 {
            return self.clone();
        }
        let m = &self.mant >> shift as u64; // arithmetic shift floors
        Dyadic::new(m, -(prec as i64))
    }

    /// Smallest multiple of `2^-prec` not below `self`.
    pub fn ceil_at(&self, prec: u64) -> Self {
        self.neg().floor_at(prec).neg()
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// `floor(log2 |self|)`; `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.mant.bits() as i64 - 1 + self.exp)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (
            &self.mant << (self.exp - e) as u64,
            &other.mant << (other.exp - e) as u64,
            e,
        )
    }

    /// Quotient rounded down to a multiple of `2^-prec`.
    pub fn div_floor(&self, other: &Dyadic, prec: u64) -> Dyadic {
        assert!(!other.is_zero(), "division by zero dyadic");
        Dyadic::from_rational_floor(&(self.to_rational() / other.to_rational()), prec)
    }

    pub fn div_ceil(&self, other: &Dyadic, prec: u64) -> Dyadic {
        assert!(!other.is_zero(), "division by zero dyadic");
        Dyadic::from_rational_ceil(&(self.to_rational() / other.to_rational()), prec)
    }

    /// Decimal string with `digits` fractional digits, rounded toward
    /// `-inf` (`up == false`) or `+inf` (`up == true`).
    pub fn to_decimal(&self, digits: u32, up: bool) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits as usize);
        let q = self.to_rational() * BigRational::from_integer(scale);
        let n = if up { q.ceil().to_integer() } else { q.floor().to_integer() };
        format_fixed(&n, digits)
    }
}

pub(crate) fn format_fixed(n: &BigInt, digits: u32) -> String {
    use alloc::string::ToString;
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    let digits = digits as usize;
    if digits > 0 {
        while s.len() <= digits {
            s.insert(0, '0');
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.mant == other.mant && self.exp == other.exp
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", &self.mant << self.exp as u64)
        } else {
            write!(f, "{}/2^{}", self.mant, -self.exp)
        }
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RealInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        RealInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        RealInterval::point(Dyadic::zero())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        RealInterval::point(Dyadic::from_int(n))
    }

    /// Tightest enclosure of `q` with endpoints on the `2^-prec` grid.
    pub fn from_rational(q: &BigRational, prec: u64) -> Self {
        RealInterval {
            lo: Dyadic::from_rational_floor(q, prec),
            hi: Dyadic::from_rational_ceil(q, prec),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).shl(-1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = core::cmp::max(&self.lo, &other.lo).clone();
        let hi = core::cmp::min(&self.hi, &other.hi).clone();
        (lo <= hi).then_some(RealInterval { lo, hi })
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: core::cmp::min(&self.lo, &other.lo).clone(),
            hi: core::cmp::max(&self.hi, &other.hi).clone(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn round_outward(&self, prec: u64) -> RealInterval {
        RealInterval {
            lo: self.lo.floor_at(prec),
            hi: self.hi.ceil_at(prec),
        }
    }

    /// Exact multiplication by an integer.
    pub fn scale_int(&self, k: &BigInt) -> RealInterval {
        let k = Dyadic::from_int(k.clone());
        let (a, b) = (&self.lo * &k, &self.hi * &k);
        if a <= b {
            RealInterval { lo: a, hi: b }
        } else {
            RealInterval { lo: b, hi: a }
        }
    }

    pub fn scale_rational(&self, q: &BigRational, prec: u64) -> RealInterval {
        let a = self.lo.to_rational() * q;
        let b = self.hi.to_rational() * q;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        RealInterval {
            lo: Dyadic::from_rational_floor(&a, prec),
            hi: Dyadic::from_rational_ceil(&b, prec),
        }
    }

    pub fn shl(&self, k: i64) -> RealInterval {
        RealInterval { lo: self.lo.shl(k), hi: self.hi.shl(k) }
    }

    pub fn abs(&self) -> RealInterval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            RealInterval {
                lo: Dyadic::zero(),
                hi: core::cmp::max(self.lo.abs(), self.hi.abs()),
            }
        }
    }

    /// Enclosure of `max(x, y)` for `x` in `self`, `y` in `other`.
    pub fn max(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: core::cmp::max(&self.lo, &other.lo).clone(),
            hi: core::cmp::max(&self.hi, &other.hi).clone(),
        }
    }

    /// Clips the lower endpoint at zero, for quantities known to be nonnegative.
    pub fn clamp_nonnegative(&self) -> RealInterval {
        let z = Dyadic::zero();
        RealInterval {
            lo: core::cmp::max(&self.lo, &z).clone(),
            hi: core::cmp::max(&self.hi, &z).clone(),
        }
    }

    /// Outward-rounded quotient; `None` if the divisor contains zero.
    pub fn div(&self, other: &RealInterval, prec: u64) -> Option<RealInterval> {
        if other.lo.signum() <= 0 && other.hi.signum() >= 0 {
            return None;
        }
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = cands.iter().map(|(a, b)| a.div_floor(b, prec)).min()?;
        let hi = cands.iter().map(|(a, b)| a.div_ceil(b, prec)).max()?;
        Some(RealInterval { lo, hi })
    }

    /// Enclosure of `ln x`; `None` unless the interval is positive.
    pub fn ln(&self, prec: u64) -> Option<RealInterval> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_dyadic(&self.lo, prec).lo;
        let hi = ln_dyadic(&self.hi, prec).hi;
        Some(RealInterval { lo, hi })
    }

    pub fn to_decimal_pair(&self, digits: u32) -> (String, String) {
        (self.lo.to_decimal(digits, false), self.hi.to_decimal(digits, true))
    }
}

impl Add for &RealInterval {
    type Output = RealInterval;
    fn add(self, rhs: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &RealInterval {
    type Output = RealInterval;
    fn sub(self, rhs: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &RealInterval {
    type Output = RealInterval;
    fn mul(self, rhs: &RealInterval) -> RealInterval {
        let p = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = p.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = p.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        RealInterval { lo, hi }
    }
}

impl Neg for &RealInterval {
    type Output = RealInterval;
    fn neg(self) -> RealInterval {
        RealInterval { lo: -&self.hi, hi: -&self.lo }
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(12);
        write!(f, "[{lo}, {hi}]")
    }
}

/// `sum_{j>=0} t^(2j+1)/(2j+1)` for `t = a/b` in `[0, 1/3]`, in units of
/// `2^-w`. The exact value lies in `[s, s + err]`.
fn atanh_fixed(a: &BigUint, b: &BigUint, w: u64) -> (BigUint, u64) {
    debug_assert!(a * 3u32 <= *b);
    let a2 = a * a;
    let b2 = b * b;
    let mut pow = (a << w) / b;
    let mut sum = BigUint::zero();
    let mut j: u64 = 0;
    // pow_j undershoots t^(2j+1) 2^w by less than j+1; each term by less than 2.
    while !pow.is_zero() {
        sum += &pow / BigUint::from(2 * j + 1);
        pow = &pow * &a2 / &b2;
        j += 1;
    }
    // tail after stopping is below (j+1) * 9/8 ulps
    (sum, 4 * j + 2)
}

/// `ln 2` in units of `2^-w`: exact value lies in `[lo, hi]`.
fn ln2_fixed(w: u64) -> (BigUint, BigUint) {
    let (s, err) = atanh_fixed(&BigUint::one(), &BigUint::from(3u32), w);
    let lo = &s << 1u32;
    let hi = (s + err) << 1u32;
    (lo, hi)
}

fn guard_bits(prec: u64, extra: u64) -> u64 {
    let lg = 64 - (prec + extra + 64).leading_zeros() as u64;
    2 * lg + extra + 8
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u64) -> RealInterval {
    let w = prec + guard_bits(prec, 0);
    let (lo, hi) = ln2_fixed(w);
    let e = -(w as i64);
    RealInterval {
        lo: Dyadic::new(BigInt::from(lo), e),
        hi: Dyadic::new(BigInt::from(hi), e),
    }
    .round_outward(prec + 2)
}

/// Enclosure of `ln n` for a positive integer, of width about `2^-prec`.
pub fn ln_uint(n: &BigUint, prec: u64) -> RealInterval {
    assert!(!n.is_zero(), "logarithm of zero");
    if n.is_one() {
        return RealInterval::zero();
    }
    let k = n.bits() - 1;
    let kbits = 64 - k.leading_zeros() as u64;
    let w = prec + guard_bits(prec, kbits);
    // n = 2^k * m with m in [1, 2), m in [m_lo, m_hi] / 2^w
    let (m_lo, exact) = if k <= w {
        (n << (w - k), true)
    } else {
        let m = n >> (k - w);
        let exact = (&m << (k - w)) == *n;
        (m, exact)
    };
    let m_hi = if exact { m_lo.clone() } else { &m_lo + 1u32 };
    let unit = BigUint::one() << w;
    let (s_lo, _) = atanh_fixed(&(&m_lo - &unit), &(&m_lo + &unit), w);
    let (s_hi, err_hi) = atanh_fixed(&(&m_hi - &unit), &(&m_hi + &unit), w);
    let (l2_lo, l2_hi) = ln2_fixed(w);
    let kk = BigUint::from(k);
    let lo = &kk * l2_lo + (s_lo << 1u32);
    let hi = &kk * l2_hi + ((s_hi + err_hi) << 1u32);
    let e = -(w as i64);
    RealInterval {
        lo: Dyadic::new(BigInt::from(lo), e),
        hi: Dyadic::new(BigInt::from(hi), e),
    }
    .round_outward(prec + 2)
}

/// Enclosure of `ln q` for a positive rational.
pub fn ln_rational(q: &BigRational, prec: u64) -> RealInterval {
    assert!(q.is_positive(), "logarithm of a nonpositive rational");
    let n = ln_uint(q.numer().magnitude(), prec + 1);
    let d = ln_uint(q.denom().magnitude(), prec + 1);
    &n - &d
}

/// Enclosure of `ln x` for a positive dyadic.
pub fn ln_dyadic(x: &Dyadic, prec: u64) -> RealInterval {
    assert!(x.signum() > 0, "logarithm of a nonpositive dyadic");
    let m = ln_uint(x.mant.magnitude(), prec + 1);
    if x.exp == 0 {
        return m;
    }
    let ebits = 64 - x.exp.unsigned_abs().leading_zeros() as u64;
    let l2 = ln2(prec + 1 + ebits);
    &m + &l2.scale_int(&BigInt::from(x.exp))
}

/// Three-valued outcome of comparing an enclosure with an exact real.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    Greater,
    Unresolved,
}

/// Source of successively narrower enclosures of one fixed real number.
pub trait Refine {
    /// Enclosure of width about `2^-bits`, or `None` if no better one exists.
    fn refine(&mut self, bits: u64) -> Option<RealInterval>;
}

impl<F: FnMut(u64) -> Option<RealInterval>> Refine for F {
    fn refine(&mut self, bits: u64) -> Option<RealInterval> {
        self(bits)
    }
}

/// Refiner that never improves its interval.
pub struct NoRefine;

impl Refine for NoRefine {
    fn refine(&mut self, _bits: u64) -> Option<RealInterval> {
        None
    }
}

/// Compares the real enclosed by `a` with the exact value `b`.
///
/// Precision starts at [`DEFAULT_START_BITS`] and doubles up to `cap_bits`;
/// each round re-encloses `b` and asks `refiner` for a narrower `a`.
pub fn compare_interval(
    a: &RealInterval,
    b: &LogLinearReal,
    refiner: &mut dyn Refine,
    cap_bits: u64,
) -> Comparison {
    let mut a = a.clone();
    let mut bits = DEFAULT_START_BITS.min(cap_bits.max(1));
    loop {
        let eb = b.enclose(bits);
        if a.hi < eb.lo {
            return Comparison::Less;
        }
        if a.lo > eb.hi {
            return Comparison::Greater;
        }
        if bits >= cap_bits {
            return Comparison::Unresolved;
        }
        bits = (bits * 2).min(cap_bits);
        match refiner.refine(bits) {
            Some(r) => a = a.intersect(&r).unwrap_or(r),
            // `b` strictly inside a fixed `a`: more digits of `b` cannot help.
            None if a.lo < eb.lo && eb.hi < a.hi => return Comparison::Unresolved,
            None => {}
        }
    }
}

pub fn sum<'a>(items: impl IntoIterator<Item = &'a RealInterval>) -> RealInterval {
    items
        .into_iter()
        .fold(RealInterval::zero(), |acc, x| &acc + x)
}
