//! Heights of polynomials, maps and points, the per-map height-gap
//! constants, and certified canonical heights.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, max_abs};
use crate::error::{Error, Result};
use crate::interval::{Dyadic, RealInterval};
use crate::logreal::LogLinearReal;
use crate::places::{Place, PlaceKind};
use crate::poly::RatPoly;
use crate::projpoint::ProjPoint;
use crate::ratmap::RationalMap;

/// `log |f|_v = log max_i |a_i|_v`.
pub fn poly_local_norm(f: &RatPoly, v: &Place) -> Result<LogLinearReal> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let nonzero = f.coeffs().iter().filter(|c| !c.is_zero());
    Ok(match v.kind() {
        PlaceKind::Archimedean => {
            let m = nonzero.map(|c| c.abs()).max().expect("nonzero polynomial");
            LogLinearReal::log_rational(&m)
        }
        PlaceKind::Finite(p) => {
            let val = nonzero
                .map(|c| crate::places::padic_valuation(c, p).expect("nonzero, prime"))
                .min()
                .expect("nonzero polynomial");
            LogLinearReal::log_int(p).scale_int(-val)
        }
    })
}

/// Primitive integer vector proportional to a nonzero rational vector.
fn primitive_vector(coeffs: &[BigRational]) -> Vec<BigInt> {
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = gcd_all(&ints);
    ints.into_iter().map(|c| c / &g).collect()
}

/// Projective height of the coefficient vector; invariant under scaling.
pub fn poly_height(f: &RatPoly) -> Result<LogLinearReal> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let v = primitive_vector(f.coeffs());
    Ok(LogLinearReal::log_int(max_abs(&v).magnitude().clone()))
}

/// `h(phi)`: the joint coefficient vector of a normalized map is primitive.
pub fn map_height(phi: &RationalMap) -> LogLinearReal {
    LogLinearReal::log_int(max_abs(&phi.coefficient_vector()).magnitude().clone())
}

/// `-c_minus <= h(phi(Q)) - d h(Q) <= c_plus` for every rational `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightGapConstants {
    pub c_plus: LogLinearReal,
    pub c_minus: LogLinearReal,
}

impl HeightGapConstants {
    /// `max(c_plus, c_minus)`.
    pub fn max(&self) -> LogLinearReal {
        self.c_plus.max_exact(&self.c_minus)
    }
}

/// Solves `M w = rhs` over Q for an invertible square matrix.
fn solve_rational(m: &[Vec<BigInt>], rhs: &[BigInt]) -> Vec<BigRational> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            row.iter()
                .chain(core::iter::once(r))
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible system");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for c in col..=n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n].clone()).collect()
}

/// Integer forms `u, v` of degree `d - 1` with `u F + v G = R x^(2d-1)`
/// (`top = true`) or `R y^(2d-1)`, as coefficient lists indexed by the power
/// of `x`.
pub(crate) fn cofactor_forms(phi: &RationalMap, top: bool) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = phi.degree();
    let n = 2 * d;
    // Column j < d: u_j x^j y^(d-1-j); column d + j: v_j. Row k: x^k y^(2d-1-k).
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for j in 0..d {
        for i in 0..=d {
            m[i + j][j] = phi.numerator().coeff(i);
            m[i + j][d + j] = phi.denominator().coeff(i);
        }
    }
    let r = phi.resultant().clone();
    let mut rhs = vec![BigInt::zero(); n];
    rhs[if top { n - 1 } else { 0 }] = r;
    let w = solve_rational(&m, &rhs);
    let ints: Vec<BigInt> = w
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer(), "Cramer's rule gives integral cofactors");
            c.to_integer()
        })
        .collect();
    (ints[..d].to_vec(), ints[d..].to_vec())
}

/// Per-map constants for the height gap.
///
/// Upper: `|F(x, y)| <= (d + 1) |F| max(|x|, |y|)^d`, so
/// `c_plus = h(phi) + log(d + 1)`.
///
/// Lower: with `u_1 F + v_1 G = R x^(2d-1)` and `u_2 F + v_2 G = R y^(2d-1)`
/// in integer forms, `gcd(F(Q), G(Q))` divides `R`, and
/// `|R| max(|x|,|y|)^(2d-1) <= 2 d U max(|x|,|y|)^(d-1) max(|F(Q)|, |G(Q)|)`
/// with `U` the largest cofactor coefficient. The `|R|` factors cancel and
/// `c_minus = log(2d) + log U`.
pub fn height_gap_constants(phi: &RationalMap) -> HeightGapConstants {
    let d = phi.degree() as u64;
    let c_plus = &map_height(phi) + &LogLinearReal::log_int(d + 1);
    let (u1, v1) = cofactor_forms(phi, true);
    let (u2, v2) = cofactor_forms(phi, false);
    let u = max_abs(u1.iter().chain(&v1).chain(&u2).chain(&v2));
    let c_minus = &LogLinearReal::log_int(2 * d) + &LogLinearReal::log_int(u.magnitude().clone());
    HeightGapConstants { c_plus, c_minus }
}

/// Upper endpoint of an enclosure, as a dyadic.
fn upper(x: &LogLinearReal) -> Dyadic {
    x.enclose(64).hi().clone()
}

fn lower_bits(width: &Dyadic) -> u64 {
    // Smallest k with 2^-k <= width.
    let l = width.log2_floor().expect("positive width");
    (-l).max(0) as u64
}

/// Interval evaluation of the degree-`d` forms at `(x, y)`.
fn eval_forms_interval(
    phi: &RationalMap,
    x: &RealInterval,
    y: &RealInterval,
    w: u64,
) -> (RealInterval, RealInterval) {
    let d = phi.degree();
    let mut fx = RealInterval::zero();
    let mut gx = RealInterval::zero();
    let mut ypow = RealInterval::from_int(1);
    for i in (0..=d).rev() {
        let a = RealInterval::from_int(phi.numerator().coeff(i));
        let b = RealInterval::from_int(phi.denominator().coeff(i));
        fx = (&(&fx * x) + &(&a * &ypow)).round_outward(w);
        gx = (&(&gx * x) + &(&b * &ypow)).round_outward(w);
        ypow = (&ypow * y).round_outward(w);
    }
    (fx, gx)
}

/// Shifts `(x, y)` by a common power of two so the larger magnitude lies in
/// `[1/2, 2)`.
fn renormalize(x: &RealInterval, y: &RealInterval) -> (RealInterval, RealInterval) {
    let m = [x.lo().abs(), x.hi().abs(), y.lo().abs(), y.hi().abs()]
        .into_iter()
        .max()
        .expect("four endpoints");
    match m.log2_floor() {
        Some(k) => (x.shl(-k), y.shl(-k)),
        None => (x.clone(), y.clone()),
    }
}

/// `gcd(F(x_n, y_n), G(x_n, y_n))` for `n < steps` along the orbit of `P`,
/// computed modulo `|R|^(steps + 1)` without ever forming the orbit.
pub(crate) fn orbit_gcds(phi: &RationalMap, p: &ProjPoint, steps: usize) -> Vec<BigInt> {
    let r = phi.resultant().abs();
    if r.is_one() {
        return vec![BigInt::one(); steps];
    }
    let mut m = num_traits::pow(r, steps + 1);
    let mut x = p.x().mod_floor(&m);
    let mut y = p.y().mod_floor(&m);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let (fx, gy) = phi.eval_forms(&x, &y);
        let (fx, gy) = (fx.mod_floor(&m), gy.mod_floor(&m));
        let e = fx.gcd(&gy).gcd(&m);
        m = &m / &e;
        x = (fx / &e).mod_floor(&m);
        y = (gy / &e).mod_floor(&m);
        out.push(e);
    }
    out
}

/// Working-precision ceiling for the real orbit.
const MAX_WORK_BITS: u64 = 1 << 16;

/// Certified enclosure of the canonical height, of width at most `target`.
///
/// Uses the telescoping form
/// `h^(P) = h(P) + sum_{n>=0} (h(P_{n+1}) - d h(P_n)) / d^(n+1)`. Each
/// summand splits into an archimedean part, scale invariant and computed
/// on a real-interval orbit, and `-log gcd(F(P_n), G(P_n))`, which divides
/// the resultant and is tracked modulo a power of it. Summands are in
/// `[-c_minus, c_plus]`, which bounds the tail after `N` terms.
pub fn canonical_height(phi: &RationalMap, p: &ProjPoint, target: &Dyadic) -> Result<RealInterval> {
    assert!(target.signum() > 0, "target width must be positive");
    let d = phi.degree() as u64;
    let consts = height_gap_constants(phi);
    let (cp, cm) = (upper(&consts.c_plus), upper(&consts.c_minus));
    let spread = &cp + &cm;
    // Tail width (cp + cm) / ((d - 1) d^N) <= target / 2.
    let mut steps = 0usize;
    let mut denom = BigInt::from(d - 1);
    let half = target.shl(-1);
    while spread.div_ceil(&Dyadic::from_int(denom.clone()), lower_bits(&half) + 8) > half {
        denom *= d;
        steps += 1;
    }
    let tail_den = BigRational::from_integer(denom);
    let tbits = lower_bits(target) + 8;
    let tail = RealInterval::new(
        Dyadic::from_rational_floor(&(-cm.to_rational() / &tail_den), tbits),
        Dyadic::from_rational_ceil(&(cp.to_rational() / &tail_den), tbits),
    );
    let gcds = orbit_gcds(phi, p, steps);
    let h0 = crate::projpoint::naive_height(p);

    let step_bits = 64 - (steps as u64 + 1).leading_zeros() as u64;
    let mut w = tbits + 2 * step_bits + 32;
    loop {
        if let Some(sum) = telescoped_sum(phi, p, &gcds, w) {
            let total = &(&h0.enclose(w) + &sum) + &tail;
            let total = total.clamp_nonnegative();
            if total.width() <= *target {
                return Ok(total);
            }
        }
        w *= 2;
        if w > MAX_WORK_BITS {
            return Err(Error::PrecisionCapReached);
        }
    }
}

/// `sum_{n < N} (Delta_n - log e_n) / d^(n+1)` at working precision `w`;
/// `None` if the real orbit lost too much precision.
fn telescoped_sum(phi: &RationalMap, p: &ProjPoint, gcds: &[BigInt], w: u64) -> Option<RealInterval> {
    let d = phi.degree() as u64;
    let k = p.bits() as i64;
    let mut x = RealInterval::point(Dyadic::new(p.x().clone(), -k));
    let mut y = RealInterval::point(Dyadic::new(p.y().clone(), -k));
    let mut acc = RealInterval::zero();
    let mut scale = BigInt::one();
    for e in gcds {
        scale *= d;
        let (fx, gy) = eval_forms_interval(phi, &x, &y, w);
        let top = fx.abs().max(&gy.abs()).ln(w)?;
        let base = x.abs().max(&y.abs()).ln(w)?;
        let delta = &top - &base.scale_int(&BigInt::from(d));
        let term = &delta - &crate::interval::ln_uint(e.magnitude(), w);
        acc = &acc + &term.scale_rational(&BigRational::new(BigInt::one(), scale.clone()), w);
        let (nx, ny) = renormalize(&fx, &gy);
        x = nx.round_outward(w);
        y = ny.round_outward(w);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logreal::Sign;
    use crate::poly::IntPoly;
    use crate::projpoint::{make_point, naive_height};

    fn rp(c: &[(i64, i64)]) -> RatPoly {
        RatPoly::new(c.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    fn ip(c: &[i64]) -> RatPoly {
        IntPoly::from_i64(c).to_rat()
    }

    fn map(f: &[i64], g: &[i64]) -> RationalMap {
        RationalMap::from_i64(f, g).unwrap()
    }

    fn log(n: u64) -> LogLinearReal {
        LogLinearReal::log_int(n)
    }

    #[test]
    fn local_norm_examples() {
        assert_eq!(poly_local_norm(&ip(&[4, 0, 6]), &Place::finite(2).unwrap()).unwrap(), -&log(2));
        assert_eq!(poly_local_norm(&ip(&[1, 3]), &Place::INFINITY).unwrap(), log(3));
        assert!(poly_local_norm(&ip(&[0, 1, 1]), &Place::finite(5).unwrap()).unwrap().is_zero());
        assert_eq!(poly_local_norm(&RatPoly::zero(), &Place::INFINITY), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn height_examples() {
        assert_eq!(poly_height(&ip(&[6, -12, 3])).unwrap(), log(4));
        assert!(poly_height(&ip(&[0, 0, 0, 0, 0, 1])).unwrap().is_zero());
        assert_eq!(poly_height(&rp(&[(3, 1), (1, 2)])).unwrap(), log(6));
        assert!(map_height(&map(&[0, 0, 1], &[1])).is_zero());
        assert_eq!(map_height(&map(&[3, 0, 2], &[-7, 5])), log(7));
        assert!(map_height(&map(&[0, 1, 1], &[1])).is_zero());
    }

    #[test]
    fn gap_constant_examples() {
        let c = height_gap_constants(&map(&[0, 0, 1], &[1]));
        assert_eq!(c.c_plus, log(3));
        let phi = map(&[-2, 0, 1], &[1]);
        let c = height_gap_constants(&phi);
        assert_eq!(c.c_plus, log(6));
        assert_eq!(c.c_minus, log(8));
        // phi(3/2) = 1/4: the gap log 4 - 2 log 3 must be >= -c_minus.
        let q = make_point(3, 2).unwrap();
        let gap = &naive_height(&phi.evaluate(&q)) - &naive_height(&q).scale_int(2);
        assert_eq!(gap, &log(4) - &log(9));
        assert_ne!((&gap + &c.c_minus).sign(), Sign::Negative);
    }

    #[test]
    fn cofactor_identity_holds() {
        for phi in [map(&[3, 0, 2], &[-7, 5]), map(&[1], &[1, 0, 1]), map(&[-1, 0, 1], &[0, 1])] {
            let d = phi.degree();
            for top in [true, false] {
                let (u, v) = cofactor_forms(&phi, top);
                let u = IntPoly::new(u);
                let v = IntPoly::new(v);
                // Compare as forms of degree 2d - 1 via dehomogenization.
                let lhs = &(&u * phi.numerator()) + &(&v * phi.denominator());
                let mut want = vec![BigInt::zero(); 2 * d];
                want[if top { 2 * d - 1 } else { 0 }] = phi.resultant().clone();
                assert_eq!(lhs, IntPoly::new(want));
            }
        }
    }

    #[test]
    fn orbit_gcds_match_exact_orbit() {
        let phi = map(&[3, 0, 2], &[-7, 5]);
        let p = make_point(1, 3).unwrap();
        let orbit = phi.orbit(&p, 6, 1 << 20).unwrap();
        let g = orbit_gcds(&phi, &p, 6);
        for (n, q) in orbit.iter().take(6).enumerate() {
            let (a, b) = phi.eval_forms(q.x(), q.y());
            assert_eq!(g[n], a.gcd(&b), "step {n}");
        }
    }

    fn pow2(k: i64) -> Dyadic {
        Dyadic::pow2(k)
    }

    #[test]
    fn canonical_height_of_power_map_is_naive_height() {
        let phi = map(&[0, 0, 1], &[1]);
        let h = canonical_height(&phi, &make_point(2, 1).unwrap(), &pow2(-40)).unwrap();
        assert!(h.width() <= pow2(-40));
        assert!(h.overlaps(&log(2).enclose(80)));
    }

    #[test]
    fn canonical_height_of_preperiodic_point_contains_zero() {
        let phi = map(&[-1, 0, 1], &[1]);
        let h = canonical_height(&phi, &make_point(0, 1).unwrap(), &pow2(-34)).unwrap();
        assert!(h.contains(&Dyadic::zero()));
    }
}
