//! Rational maps of degree at least 2 on P^1 over Q, in normalized form.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::gcd_all;
use crate::error::{Error, Result};
use crate::heights::{height_gap_constants, HeightGapConstants};
use crate::logreal::Sign;
use crate::poly::{IntPoly, RatPoly};
use crate::projpoint::{naive_height, ProjPoint};

/// `phi(z) = f(z) / g(z)`, with `F(x, y) = y^d f(x/y)` and `G` likewise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMap {
    f: IntPoly,
    g: IntPoly,
    degree: usize,
    resultant: BigInt,
}

/// A point of a fiber or of the ramification divisor: either infinity or
/// the roots of an irreducible polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberPoint {
    Infinity,
    /// Primitive irreducible integer polynomial with positive leading
    /// coefficient; stands for all of its conjugate roots.
    Roots(IntPoly),
}

impl FiberPoint {
    /// Number of geometric points represented.
    pub fn degree(&self) -> usize {
        match self {
            FiberPoint::Infinity => 1,
            FiberPoint::Roots(q) => q.deg(),
        }
    }

    /// The rational point, if this is one.
    pub fn rational_point(&self) -> Option<ProjPoint> {
        match self {
            FiberPoint::Infinity => Some(ProjPoint::infinity()),
            FiberPoint::Roots(q) if q.deg() == 1 => {
                Some(ProjPoint::new(-q.coeff(0), q.coeff(1)).expect("linear factor"))
            }
            FiberPoint::Roots(_) => None,
        }
    }

    /// The monic minimal polynomial over Q (`None` at infinity).
    pub fn monic(&self) -> Option<RatPoly> {
        match self {
            FiberPoint::Infinity => None,
            FiberPoint::Roots(q) => {
                let lc = BigRational::from_integer(q.lc());
                Some(q.to_rat().scale(&lc.recip()))
            }
        }
    }
}

impl fmt::Display for FiberPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberPoint::Infinity => write!(f, "inf"),
            FiberPoint::Roots(q) => write!(f, "{q}"),
        }
    }
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub(crate) fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

impl RationalMap {
    /// Clears denominators, cancels common factors and content, fixes the
    /// sign so that the top coefficient of `g` (or of `f` when `g` is zero)
    /// is positive, and caches the resultant.
    pub fn normalize(f_raw: &RatPoly, g_raw: &RatPoly) -> Result<Self> {
        if f_raw.is_zero() && g_raw.is_zero() {
            return Err(Error::ZeroMap);
        }
        let l = f_raw.denominator_lcm().lcm(&g_raw.denominator_lcm());
        Self::from_int_polys(&f_raw.to_int_scaled(&l), &g_raw.to_int_scaled(&l))
    }

    pub fn from_int_polys(f: &IntPoly, g: &IntPoly) -> Result<Self> {
        if f.is_zero() && g.is_zero() {
            return Err(Error::ZeroMap);
        }
        let common = f.gcd(g);
        let mut f = f.div_exact(&common).expect("gcd divides");
        let mut g = g.div_exact(&common).expect("gcd divides");
        let content = f.content().gcd(&g.content());
        f = f.div_scalar_exact(&content);
        g = g.div_scalar_exact(&content);
        let lead = if g.is_zero() { f.lc() } else { g.lc() };
        if lead.is_negative() {
            f = -&f;
            g = -&g;
        }
        let degree = f.deg().max(g.deg());
        if degree < 2 {
            return Err(Error::DegreeTooLow(degree));
        }
        let resultant = determinant(sylvester(&f, &g, degree));
        debug_assert!(!resultant.is_zero());
        Ok(RationalMap { f, g, degree, resultant })
    }

    pub fn from_i64(f: &[i64], g: &[i64]) -> Result<Self> {
        Self::from_int_polys(&IntPoly::from_i64(f), &IntPoly::from_i64(g))
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.f
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Sylvester determinant of the degree-`d` homogenizations.
    pub fn resultant(&self) -> &BigInt {
        &self.resultant
    }

    /// `(a_0..a_d, b_0..b_d)`, padded to length `d + 1` each.
    pub fn coefficient_vector(&self) -> Vec<BigInt> {
        (0..=self.degree)
            .map(|i| self.f.coeff(i))
            .chain((0..=self.degree).map(|i| self.g.coeff(i)))
            .collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.g.deg() == 0
    }

    /// `(F(x, y), G(x, y))` without normalization.
    pub fn eval_forms(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (self.eval_form(&self.f, x, y), self.eval_form(&self.g, x, y))
    }

    fn eval_form(&self, p: &IntPoly, x: &BigInt, y: &BigInt) -> BigInt {
        // Horner in x with powers of y for the missing top degrees.
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::one();
        for i in (0..=self.degree).rev() {
            acc = acc * x + p.coeff(i) * &ypow;
            ypow *= y;
        }
        acc
    }

    pub fn evaluate(&self, p: &ProjPoint) -> ProjPoint {
        let (x, y) = self.eval_forms(p.x(), p.y());
        ProjPoint::new(x, y).expect("nonzero resultant keeps the image defined")
    }

    /// `self ∘ other`. The composed forms are already coprime, and
    /// `Res(F(P, Q), G(P, Q)) = Res(F, G)^e Res(P, Q)^(d^2)`, so neither a
    /// polynomial gcd nor a large determinant is needed.
    pub fn compose(&self, other: &RationalMap) -> RationalMap {
        let (d, e) = (self.degree, other.degree);
        let (mut f, mut g) = compose_forms(&self.f, &self.g, d, &other.f, &other.g, e);
        let content = f.content().gcd(&g.content());
        f = f.div_scalar_exact(&content);
        g = g.div_scalar_exact(&content);
        let lead = if g.is_zero() { f.lc() } else { g.lc() };
        if lead.is_negative() {
            f = -&f;
            g = -&g;
        }
        let raw = num_traits::pow(self.resultant.clone(), e) * num_traits::pow(other.resultant.clone(), d * d);
        let resultant = raw / num_traits::pow(content, 2 * d * e);
        RationalMap { f, g, degree: d * e, resultant }
    }

    /// `phi^n`, refusing when `d^n` exceeds `degree_budget`.
    pub fn iterate(&self, n: u32, degree_budget: u64) -> Result<RationalMap> {
        assert!(n >= 1, "iterate needs n >= 1");
        let degree = (self.degree as u128).checked_pow(n).unwrap_or(u128::MAX);
        if degree > degree_budget as u128 {
            return Err(Error::IterateTooLarge { degree, budget: degree_budget });
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc);
        }
        Ok(acc)
    }

    /// `[P, phi P, ..., phi^n P]` by repeated evaluation.
    pub fn orbit(&self, p: &ProjPoint, n: usize, height_budget_bits: u64) -> Result<Vec<ProjPoint>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = p.clone();
        for i in 0..=n {
            if cur.bits() > height_budget_bits {
                return Err(Error::HeightBudgetExceeded(i as u64));
            }
            let next = if i < n { Some(self.evaluate(&cur)) } else { None };
            out.push(cur);
            match next {
                Some(q) => cur = q,
                None => break,
            }
        }
        Ok(out)
    }

    /// `f' g - f g'`, the affine part of the Wronskian form
    /// `F_x G_y - F_y G_x` (which is `d` times it). As a form it has degree
    /// `2d - 2`; the missing top degrees are its order at infinity.
    pub fn wronskian(&self) -> IntPoly {
        &(&self.f.derivative() * &self.g) - &(&self.f * &self.g.derivative())
    }

    pub fn ramification_index(&self, p: &ProjPoint) -> u32 {
        let w = self.wronskian();
        let ord = if p.is_infinity() {
            (2 * self.degree - 2 - w.deg()) as u32
        } else {
            w.root_multiplicity(p.x(), p.y())
        };
        1 + ord
    }

    /// Ramification divisor: points with `e_P - 1 > 0`, each irreducible
    /// factor standing for its conjugates.
    pub fn ramification_divisor(&self) -> Vec<(FiberPoint, u32)> {
        let w = self.wronskian();
        let mut out: Vec<(FiberPoint, u32)> =
            w.factor().into_iter().map(|(q, m)| (FiberPoint::Roots(q), m)).collect();
        let at_inf = 2 * self.degree - 2 - w.deg();
        if at_inf > 0 {
            out.insert(0, (FiberPoint::Infinity, at_inf as u32));
        }
        out
    }

    /// `y_A f(z) - x_A g(z)`, vanishing on the finite part of the fiber.
    pub fn fiber_polynomial(&self, a: &ProjPoint) -> IntPoly {
        &self.f.scale(a.y()) - &self.g.scale(a.x())
    }

    /// The fiber over `A` as irreducible pieces with ramification indices.
    pub fn fiber_data(&self, a: &ProjPoint) -> Vec<(FiberPoint, u32)> {
        let h = self.fiber_polynomial(a);
        let mut out: Vec<(FiberPoint, u32)> =
            h.factor().into_iter().map(|(q, m)| (FiberPoint::Roots(q), m)).collect();
        if h.deg() < self.degree {
            out.insert(0, (FiberPoint::Infinity, (self.degree - h.deg()) as u32));
        }
        out
    }

    /// Largest ramification index over `A`; needs no factorization.
    pub fn max_fiber_multiplicity(&self, a: &ProjPoint) -> u32 {
        let h = self.fiber_polynomial(a);
        let finite = h
            .squarefree_decomposition()
            .iter()
            .map(|(_, m)| *m)
            .max()
            .unwrap_or(0);
        finite.max((self.degree - h.deg()) as u32)
    }

    /// Points `P` with `phi^2(P) = P` totally ramified for `phi^2`: at most
    /// two, possibly one conjugate pair reported by its quadratic.
    pub fn exceptional_points(&self) -> Vec<FiberPoint> {
        let psi = self.compose(self);
        let big_d = psi.degree;
        let mut out = Vec::new();
        if psi.is_polynomial() {
            out.push(FiberPoint::Infinity);
        }
        let fix = &psi.f - &(&IntPoly::x() * &psi.g);
        let mut totally = IntPoly::one();
        for (s, m) in psi.wronskian().squarefree_decomposition() {
            if m as usize + 1 >= big_d {
                totally = &totally * &s;
            }
        }
        let cand = fix.gcd(&totally);
        if cand.deg() > 0 {
            for (q, _) in cand.factor() {
                out.push(FiberPoint::Roots(q));
            }
        }
        out
    }

    pub fn is_exceptional(&self, p: &ProjPoint) -> bool {
        self.exceptional_points().iter().any(|e| match e {
            FiberPoint::Infinity => p.is_infinity(),
            FiberPoint::Roots(q) => !p.is_infinity() && q.deg() == 1 && q.eval_homogeneous(p.x(), p.y()).is_zero(),
        })
    }

    pub fn second_iterate_is_polynomial(&self) -> bool {
        self.compose(self).is_polynomial()
    }

    /// Exact decision. A preperiodic point has canonical height 0, so every
    /// point of its orbit has naive height at most `max(c+, c-) / (d - 1)`;
    /// an orbit either repeats or climbs past that ceiling.
    pub fn is_preperiodic(&self, p: &ProjPoint) -> bool {
        let HeightGapConstants { c_plus, c_minus } = height_gap_constants(self);
        let ceiling = c_plus
            .max_exact(&c_minus)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(self.degree - 1)));
        let mut seen = BTreeSet::new();
        let mut cur = p.clone();
        loop {
            if !seen.insert(cur.clone()) {
                return true;
            }
            if (&naive_height(&cur) - &ceiling).sign() == Sign::Positive {
                return false;
            }
            cur = self.evaluate(&cur);
        }
    }
}

/// `(F(P, Q), G(P, Q))` dehomogenized, where `F, G` are forms of degree `d`
/// and `P, Q` forms of degree `e` given by their affine parts.
pub(crate) fn compose_forms(
    f: &IntPoly,
    g: &IntPoly,
    d: usize,
    p: &IntPoly,
    q: &IntPoly,
    e: usize,
) -> (IntPoly, IntPoly) {
    debug_assert!(p.deg() <= e && q.deg() <= e);
    let qpows: Vec<IntPoly> = (0..=d as u32).map(|k| q.pow(k)).collect();
    let mut ppow = IntPoly::one();
    let (mut num, mut den) = (IntPoly::zero(), IntPoly::zero());
    for i in 0..=d {
        let term = &ppow * &qpows[d - i];
        num = &num + &term.scale(&f.coeff(i));
        den = &den + &term.scale(&g.coeff(i));
        ppow = &ppow * p;
    }
    (num, den)
}

/// Sylvester matrix of the degree-`d` forms, coefficients highest first.
pub(crate) fn sylvester(f: &IntPoly, g: &IntPoly, d: usize) -> Vec<Vec<BigInt>> {
    let n = 2 * d;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..d {
        for i in 0..=d {
            m[r][r + i] = f.coeff(d - i);
            m[r + d][r + i] = g.coeff(d - i);
        }
    }
    m
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.g == IntPoly::one() {
            write!(f, "{}", self.f)
        } else {
            write!(f, "({})/({})", self.f, self.g)
        }
    }
}

/// Content of the joint coefficient vector; 1 for normalized maps.
pub fn joint_content(phi: &RationalMap) -> BigInt {
    gcd_all(&phi.coefficient_vector())
}
