//! Places of Q and the absolute values attached to them.

use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{int_valuation, is_prime};
use crate::error::{Error, Result};
use crate::logreal::LogLinearReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    Archimedean,
    Finite(u64),
}

/// A place of Q. The local degree is always 1 since the base field is Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    kind: PlaceKind,
}

impl Place {
    pub const INFINITY: Place = Place { kind: PlaceKind::Archimedean };

    pub fn finite(p: u64) -> Result<Place> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Place { kind: PlaceKind::Finite(p) })
    }

    pub fn kind(&self) -> PlaceKind {
        self.kind
    }

    pub fn is_archimedean(&self) -> bool {
        self.kind == PlaceKind::Archimedean
    }

    pub fn prime(&self) -> Option<u64> {
        match self.kind {
            PlaceKind::Finite(p) => Some(p),
            PlaceKind::Archimedean => None,
        }
    }

    /// `[Q_v : Q_p] / [Q : Q]`.
    pub fn local_degree(&self) -> u32 {
        1
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PlaceKind::Archimedean => write!(f, "inf"),
            PlaceKind::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Duplicate-free set of places, archimedean first, then primes ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PlaceSet {
    places: Vec<Place>,
}

impl PlaceSet {
    pub fn new(places: impl IntoIterator<Item = Place>) -> Result<Self> {
        let mut v: Vec<Place> = places.into_iter().collect();
        v.sort();
        let n = v.len();
        v.dedup();
        if v.len() != n {
            return Err(Error::DuplicatePlace);
        }
        Ok(PlaceSet { places: v })
    }

    /// Builds a set from primes, plus the archimedean place if requested.
    pub fn from_primes(archimedean: bool, primes: &[u64]) -> Result<Self> {
        let mut v = Vec::new();
        if archimedean {
            v.push(Place::INFINITY);
        }
        for &p in primes {
            v.push(Place::finite(p)?);
        }
        Self::new(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.places.iter()
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.places.binary_search(v).is_ok()
    }

    pub fn has_archimedean(&self) -> bool {
        self.places.first().is_some_and(Place::is_archimedean)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.places.iter().filter_map(Place::prime)
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.places.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// `v` with `|x|_p = p^-v`.
pub fn padic_valuation(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// Exact `ln |x|_v`.
pub fn local_log_abs(x: &BigRational, v: &Place) -> Result<LogLinearReal> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(match v.kind {
        PlaceKind::Archimedean => LogLinearReal::log_rational(&x.abs()),
        PlaceKind::Finite(p) => {
            let val = padic_valuation(x, p)?;
            LogLinearReal::log_int(p).scale_int(-val)
        }
    })
}

/// Exact `ln+ |x|_v = max(0, ln |x|_v)`; zero for `x = 0`.
pub fn local_log_plus(x: &BigRational, v: &Place) -> LogLinearReal {
    if x.is_zero() {
        return LogLinearReal::zero();
    }
    match v.kind {
        PlaceKind::Archimedean => {
            let a = x.abs();
            if a.numer() > a.denom() {
                LogLinearReal::log_rational(&a)
            } else {
                LogLinearReal::zero()
            }
        }
        PlaceKind::Finite(p) => {
            let val = int_valuation(x.denom(), p);
            LogLinearReal::log_int(p).scale_int(val as i64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logreal::Sign;
    use num_bigint::BigUint;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&q(36, 1), 3), Ok(2));
        assert_eq!(padic_valuation(&q(1, 12), 2), Ok(-2));
        assert_eq!(padic_valuation(&q(5, 7), 3), Ok(0));
        assert_eq!(padic_valuation(&q(0, 1), 3), Err(Error::ZeroInput));
        assert_eq!(padic_valuation(&q(5, 1), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn local_log_examples() {
        let l3 = LogLinearReal::log_int(3u32);
        assert_eq!(local_log_abs(&q(12, 1), &Place::finite(3).unwrap()).unwrap(), -&l3);
        assert_eq!(
            local_log_abs(&q(-3, 4), &Place::INFINITY).unwrap(),
            &l3 - &LogLinearReal::log_int(4u32)
        );
        assert!(local_log_abs(&q(5, 1), &Place::finite(7).unwrap()).unwrap().is_zero());
        assert_eq!(local_log_abs(&q(0, 1), &Place::INFINITY), Err(Error::ZeroInput));
    }

    #[test]
    fn place_set_order_and_duplicates() {
        let s = PlaceSet::new([Place::finite(5).unwrap(), Place::INFINITY, Place::finite(2).unwrap()]).unwrap();
        let order: Vec<_> = s.iter().copied().collect();
        assert_eq!(order, [Place::INFINITY, Place::finite(2).unwrap(), Place::finite(5).unwrap()]);
        assert!(s.has_archimedean());
        assert_eq!(
            PlaceSet::new([Place::INFINITY, Place::INFINITY]),
            Err(Error::DuplicatePlace)
        );
        assert_eq!(Place::finite(9), Err(Error::NotPrime(9)));
        assert_eq!(alloc::format!("{s}"), "{inf,2,5}");
    }

    fn small_primes_dividing(n: &BigUint) -> Vec<u64> {
        let mut m = n.clone();
        let mut out = Vec::new();
        let mut p = 2u64;
        while m > BigUint::from(1u32) {
            if (&m % p).is_zero() {
                out.push(p);
                while (&m % p).is_zero() {
                    m /= p;
                }
            }
            p += 1;
        }
        out
    }

    proptest::proptest! {
        #[test]
        fn product_formula(n in -100_000i64..100_000, d in 1i64..100_000) {
            proptest::prop_assume!(n != 0);
            let x = q(n, d);
            let mut total = local_log_abs(&x, &Place::INFINITY).unwrap();
            let nd = x.numer().magnitude() * x.denom().magnitude();
            for p in small_primes_dividing(&nd) {
                total = &total + &local_log_abs(&x, &Place::finite(p).unwrap()).unwrap();
            }
            proptest::prop_assert_eq!(total.sign(), Sign::Zero);
        }

        #[test]
        fn multiplicativity(a in 1i64..10_000, b in 1i64..10_000, c in 1i64..10_000, d in 1i64..10_000, p in proptest::sample::select(vec![2u64, 3, 5, 7, 11])) {
            let x = q(a, b);
            let y = q(-c, d);
            for v in [Place::INFINITY, Place::finite(p).unwrap()] {
                let lhs = local_log_abs(&(&x * &y), &v).unwrap();
                let rhs = &local_log_abs(&x, &v).unwrap() + &local_log_abs(&y, &v).unwrap();
                proptest::prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
