//! Integer helpers shared by the other modules.

use alloc::vec;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    strip_factor(n, &BigInt::from(p)).1
}

/// Removes every factor `p` from `n`, returning the cofactor and the count.
/// Divides by `p^(2^k)` for growing, then shrinking, `k`, so large
/// valuations cost a logarithmic number of divisions.
pub fn strip_factor(n: &BigInt, p: &BigInt) -> (BigInt, u64) {
    if n.is_zero() {
        return (n.clone(), 0);
    }
    if *p == BigInt::from(2) {
        let v = n.trailing_zeros().unwrap_or(0);
        return (n >> v, v);
    }
    let mut m = n.clone();
    let mut v = 0;
    let mut powers = vec![p.clone()];
    loop {
        let top = powers.last().unwrap();
        let (q, r) = m.div_rem(top);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1u64 << (powers.len() - 1);
        let next = top * top;
        powers.push(next);
    }
    while let Some(pk) = powers.pop() {
        let (q, r) = m.div_rem(&pk);
        if r.is_zero() {
            m = q;
            v += 1u64 << powers.len();
        }
    }
    (m, v)
}

pub fn bits(n: &BigInt) -> u64 {
    n.bits()
}

pub fn abs_uint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

pub fn to_int(n: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n)
}

/// Representative of `a mod m` in `(-m/2, m/2]`.
pub fn symmetric_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if (&r << 1u32) > *m {
        r - m
    } else {
        r
    }
}

pub fn gcd_all<'a>(items: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for x in items {
        if g.is_one() {
            break;
        }
        g = g.gcd(x);
    }
    g
}

pub fn max_abs<'a>(items: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    items
        .into_iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let slow = |n: u64| n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k));
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), slow(n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn strip_factor_matches_repeated_division() {
        for p in [2u64, 3, 5, 7] {
            let pb = BigInt::from(p);
            for k in [0u64, 1, 2, 3, 7, 8, 31, 64, 100, 1000] {
                for unit in [1i64, -1, 11, 13 * 17] {
                    let n = num_traits::pow(pb.clone(), k as usize) * BigInt::from(unit);
                    assert_eq!(strip_factor(&n, &pb), (BigInt::from(unit), k));
                    assert_eq!(int_valuation(&n, p), k);
                }
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(int_valuation(&BigInt::from(36), 3), 2);
        assert_eq!(int_valuation(&BigInt::from(-48), 2), 4);
        assert_eq!(int_valuation(&BigInt::from(7), 2), 0);
    }

    #[test]
    fn symmetric_reduction() {
        let m = BigInt::from(10);
        assert_eq!(symmetric_mod(&BigInt::from(6), &m), BigInt::from(-4));
        assert_eq!(symmetric_mod(&BigInt::from(5), &m), BigInt::from(5));
        assert_eq!(symmetric_mod(&BigInt::from(-6), &m), BigInt::from(4));
    }
}
