//! Points of P^1(Q), the logarithmic chordal metric, and the naive height.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::int_valuation;
use crate::error::{Error, Result};
use crate::logreal::{ExtLogReal, LogLinearReal};
use crate::places::{Place, PlaceKind};

/// `[x : y]` with coprime integer coordinates, `y > 0` or `[1 : 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    x: BigInt,
    y: BigInt,
}

/// Normalizes `[numerator : denominator]`.
pub fn make_point(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<ProjPoint> {
    ProjPoint::new(numerator.into(), denominator.into())
}

impl ProjPoint {
    pub fn new(x: BigInt, y: BigInt) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::BothZero);
        }
        let mut g = x.gcd(&y);
        if y.is_negative() || (y.is_zero() && x.is_negative()) {
            g = -g;
        }
        Ok(ProjPoint { x: x / &g, y: y / &g })
    }

    pub fn infinity() -> Self {
        ProjPoint { x: BigInt::one(), y: BigInt::zero() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        ProjPoint { x: n.into(), y: BigInt::one() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        ProjPoint { x: q.numer().clone(), y: q.denom().clone() }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// The affine coordinate `x/y`, `None` at infinity.
    pub fn affine(&self) -> Option<BigRational> {
        (!self.is_infinity()).then(|| BigRational::new(self.x.clone(), self.y.clone()))
    }

    /// Bit length of the larger coordinate.
    pub fn bits(&self) -> u64 {
        self.x.bits().max(self.y.bits())
    }

    /// `x1 y2 - x2 y1`.
    pub fn cross(&self, other: &ProjPoint) -> BigInt {
        &self.x * &other.y - &other.x * &self.y
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.y.is_one() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

/// `lambda_v(P, Q) = -log rho_v(P, Q)`, `+inf` iff `P = Q`.
pub fn chordal_log(p: &ProjPoint, q: &ProjPoint, v: &Place) -> ExtLogReal {
    let delta = p.cross(q);
    if delta.is_zero() {
        return ExtLogReal::PosInfinity;
    }
    ExtLogReal::Finite(match v.kind() {
        PlaceKind::Finite(prime) => {
            LogLinearReal::log_int(prime).scale_int(int_valuation(&delta, prime) as i64)
        }
        PlaceKind::Archimedean => {
            let n1 = &p.x * &p.x + &p.y * &p.y;
            let n2 = &q.x * &q.x + &q.y * &q.y;
            let ratio = BigRational::new(n1 * n2, &delta * &delta);
            LogLinearReal::log_rational(&ratio).scale(&BigRational::new(1.into(), 2.into()))
        }
    })
}

/// `h(P) = log max(|x|, |y|)`.
pub fn naive_height(p: &ProjPoint) -> LogLinearReal {
    LogLinearReal::log_int(p.x.magnitude().max(p.y.magnitude()).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logreal::Sign;
    use proptest::prelude::*;

    fn pt(x: i64, y: i64) -> ProjPoint {
        make_point(x, y).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(pt(4, 6), pt(2, 3));
        assert_eq!((pt(-2, -4).x().clone(), pt(-2, -4).y().clone()), (1.into(), 2.into()));
        assert_eq!(pt(1, 0), ProjPoint::infinity());
        assert_eq!(pt(-5, 0), ProjPoint::infinity());
        assert_eq!(make_point(0, 0), Err(Error::BothZero));
        assert_eq!(alloc::format!("{} {} {}", pt(3, -6), pt(4, 2), pt(7, 0)), "-1/2 2 inf");
    }

    #[test]
    fn chordal_examples() {
        let l3 = LogLinearReal::log_int(3u32);
        assert_eq!(chordal_log(&pt(1, 1), &pt(4, 1), &Place::finite(3).unwrap()), ExtLogReal::Finite(l3));
        assert!(chordal_log(&pt(2, 7), &pt(2, 7), &Place::INFINITY).is_infinite());
        let half_log5 = LogLinearReal::log_int(5u32).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(
            chordal_log(&pt(2, 1), &ProjPoint::infinity(), &Place::INFINITY),
            ExtLogReal::Finite(half_log5)
        );
    }

    #[test]
    fn height_examples() {
        assert_eq!(naive_height(&pt(2, 3)), LogLinearReal::log_int(3u32));
        assert!(naive_height(&ProjPoint::infinity()).is_zero());
        assert_eq!(naive_height(&pt(-7, 2)), LogLinearReal::log_int(7u32));
    }

    fn any_point() -> impl Strategy<Value = ProjPoint> {
        (-500i64..500, 0i64..500)
            .prop_filter("not both zero", |(x, y)| *x != 0 || *y != 0)
            .prop_map(|(x, y)| pt(x, y))
    }

    fn any_place() -> impl Strategy<Value = Place> {
        proptest::sample::select(alloc::vec![0u64, 2, 3, 5, 7]).prop_map(|p| {
            if p == 0 {
                Place::INFINITY
            } else {
                Place::finite(p).unwrap()
            }
        })
    }

    fn ge(a: &ExtLogReal, b: &ExtLogReal) -> bool {
        a.ge(b)
    }

    proptest! {
        #[test]
        fn nonnegative_and_symmetric(p in any_point(), q in any_point(), v in any_place()) {
            let a = chordal_log(&p, &q, &v);
            prop_assert!(ge(&a, &ExtLogReal::Finite(LogLinearReal::zero())));
            prop_assert_eq!(a, chordal_log(&q, &p, &v));
        }

        #[test]
        fn strong_triangle(x in any_point(), y in any_point(), z in any_point(), p in proptest::sample::select(alloc::vec![2u64, 3, 5])) {
            let v = Place::finite(p).unwrap();
            let xy = chordal_log(&x, &y, &v);
            let xz = chordal_log(&x, &z, &v);
            let yz = chordal_log(&y, &z, &v);
            let lo = if ge(&xz, &yz) { yz.clone() } else { xz.clone() };
            prop_assert!(ge(&xy, &lo));
            if xz != yz {
                prop_assert_eq!(xy, lo);
            }
        }

        #[test]
        fn height_versus_distance_to_infinity(p in any_point()) {
            prop_assume!(!p.is_infinity());
            let inf = ProjPoint::infinity();
            let mut total = chordal_log(&p, &inf, &Place::INFINITY);
            for prime in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
                total = &total + &chordal_log(&p, &inf, &Place::finite(prime).unwrap());
            }
            // y < 500 has at most one prime factor above 47.
            let mut rest = p.y().clone();
            for prime in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
                while !rest.is_zero() && (&rest % prime).is_zero() {
                    rest /= prime;
                }
            }
            if !rest.is_zero() && !rest.is_one() {
                total = &total + &ExtLogReal::Finite(LogLinearReal::log_int(rest.magnitude().clone()));
            }
            if let Some(sum) = total.finite() {
                let gap = &naive_height(&p) - sum;
                prop_assert!(gap.sign() != Sign::Positive);
                let half_log2 = LogLinearReal::log_int(2u32).scale(&BigRational::new(1.into(), 2.into()));
                prop_assert!((&gap + &half_log2).sign() != Sign::Negative);
            } else {
                prop_assert!(false, "distance to infinity is finite away from infinity");
            }
        }
    }
}
