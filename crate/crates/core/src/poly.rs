//! Dense univariate polynomials over Z and Q.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::gcd_all;

/// Integer polynomial, coefficient `i` of `z^i`, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `z`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `b z - a`, vanishing at `a/b`.
    pub fn linear_root(a: &BigInt, b: &BigInt) -> Self {
        Self::new(vec![-a, b.clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        gcd_all(&self.coeffs)
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn div_scalar_exact(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a / c).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * z + a)
    }

    /// `b^deg * f(a/b)`.
    pub fn eval_homogeneous(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc
    }

    pub fn pow(&self, n: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f(g(z))`.
    pub fn compose(&self, g: &IntPoly) -> IntPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, a| &(&acc * g) + &IntPoly::constant(a.clone()))
    }

    /// Pseudo-remainder of `self` by `d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero(), "pseudo-division by zero polynomial");
        let dd = d.deg();
        let lc = d.lc();
        let mut r = self.clone();
        while !r.is_zero() && r.deg() >= dd {
            let shift = r.deg() - dd;
            let rl = r.lc();
            let mut nc: Vec<BigInt> = r.coeffs.iter().map(|a| a * &lc).collect();
            for (i, c) in d.coeffs.iter().enumerate() {
                nc[i + shift] -= &rl * c;
            }
            r = IntPoly::new(nc);
        }
        r
    }

    /// Exact quotient over Z, or `None` if `d` does not divide `self` in Z[z].
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let dd = d.deg();
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &qk * c;
            }
            q[k] = qk;
        }
        r.iter().all(Zero::is_zero).then(|| IntPoly::new(q))
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a
    }

    /// Squarefree decomposition `pp(self) = prod s_i^i`, returning the
    /// nonconstant `(s_i, i)` with each `s_i` primitive.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive_part();
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        let mut g = f.gcd(&f.derivative());
        let mut w = f.div_exact(&g).expect("gcd divides").primitive_part();
        let mut i = 1;
        while w.deg() > 0 {
            let y = w.gcd(&g);
            let z = w.div_exact(&y).expect("gcd divides").primitive_part();
            if z.deg() > 0 {
                out.push((z, i));
            }
            g = g.div_exact(&y).expect("gcd divides").primitive_part();
            w = y;
            i += 1;
        }
        out
    }

    /// Multiplicity of the root `a/b` (`b != 0`).
    pub fn root_multiplicity(&self, a: &BigInt, b: &BigInt) -> u32 {
        assert!(!b.is_zero());
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = IntPoly::linear_root(a, b);
        let mut f = self.clone();
        let mut m = 0;
        while f.deg() > 0 && f.eval_homogeneous(a, b).is_zero() {
            f = f.div_exact(&lin).expect("primitive linear factor divides");
            m += 1;
        }
        m
    }

    /// Irreducible factorization over Q: primitive irreducible factors with
    /// positive leading coefficient, with multiplicities, sorted.
    pub fn factor(&self) -> Vec<(IntPoly, u32)> {
        let mut out = Vec::new();
        for (s, m) in self.squarefree_decomposition() {
            for f in crate::factor::factor_squarefree(&s) {
                out.push((f, m));
            }
        }
        out.sort();
        out
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

fn write_poly<T: fmt::Display + Signed + Zero + One + PartialEq>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        let unit = mag.is_one();
        match i {
            0 => write!(f, "{mag}")?,
            _ => {
                if !unit {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{i}")?;
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs)
    }
}

/// Rational polynomial, coefficient `i` of `z^i`, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Lcm of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `self * scale`, which must have integer coefficients.
    pub fn to_int_scaled(&self, scale: &BigInt) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let v = c * BigRational::from_integer(scale.clone());
                    assert!(v.is_integer(), "scale does not clear denominators");
                    v.to_integer()
                })
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> RatPoly {
        let mut acc = RatPoly::constant(BigRational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &RatPoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
        RatPoly::new((0..n).map(|i| get(self, i) + get(rhs, i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn arithmetic_and_display() {
        let f = p(&[1, 1]);
        assert_eq!(&f * &f, p(&[1, 2, 1]));
        assert_eq!(alloc::format!("{}", p(&[-7, 5])), "5*z - 7");
        assert_eq!(alloc::format!("{}", p(&[0, 1, 1])), "z^2 + z");
        assert_eq!(alloc::format!("{}", p(&[3, 0, -2])), "-2*z^2 + 3");
        assert_eq!(p(&[6, -12, 3]).primitive_part(), p(&[2, -4, 1]));
        assert_eq!(p(&[0, 1, 1]).compose(&p(&[1, 1])), p(&[2, 3, 1]));
    }

    #[test]
    fn gcd_and_exact_division() {
        let a = &p(&[-1, 0, 1]) * &p(&[2, 3]);
        let b = &p(&[-1, 1]) * &p(&[5, 0, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(a.div_exact(&p(&[2, 3])), Some(p(&[-1, 0, 1])));
        assert_eq!(p(&[1, 0, 1]).div_exact(&p(&[0, 2])), None);
    }

    #[test]
    fn squarefree_examples() {
        // (z-1)^3 (z+2)^2 z
        let f = &(&p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(2)) * &p(&[0, 1]);
        let sf = f.squarefree_decomposition();
        assert_eq!(sf, vec![(p(&[0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]);
        assert_eq!(f.root_multiplicity(&BigInt::from(1), &BigInt::from(1)), 3);
        assert_eq!(f.root_multiplicity(&BigInt::from(5), &BigInt::from(1)), 0);
    }

    proptest! {
        #[test]
        fn squarefree_parts_reassemble(
            a in proptest::collection::vec(-20i64..20, 2..4),
            b in proptest::collection::vec(-20i64..20, 2..4),
            e1 in 1u32..4, e2 in 1u32..4,
        ) {
            let fa = p(&a);
            let fb = p(&b);
            prop_assume!(fa.deg() >= 1 && fb.deg() >= 1);
            let f = &fa.pow(e1) * &fb.pow(e2);
            let sf = f.squarefree_decomposition();
            let mut prod = IntPoly::one();
            for (s, m) in &sf {
                prop_assert!(s.gcd(&s.derivative()).deg() == 0);
                prod = &prod * &s.pow(*m);
            }
            prop_assert_eq!(prod, f.primitive_part());
        }
    }
}
