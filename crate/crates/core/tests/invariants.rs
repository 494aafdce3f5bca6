use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use orbitgap_core::heights::{map_height, poly_height, poly_local_norm};
use orbitgap_core::projpoint::{chordal_log, make_point, naive_height};
use orbitgap_core::ratmap::FiberPoint;
use orbitgap_core::*;
use proptest::prelude::*;

fn le(a: &LogLinearReal, b: &LogLinearReal) -> bool {
    (b - a).sign() != Sign::Negative
}

fn log(n: u64) -> LogLinearReal {
    LogLinearReal::log_int(n)
}

/// Primitive integer polynomials.
fn int_poly(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    proptest::collection::vec(-65535i64..=65535, 1..=max_deg + 1)
        .prop_filter_map("zero polynomial", |c| {
            let p = IntPoly::from_i64(&c);
            (!p.is_zero()).then(|| p.primitive_part().to_rat())
        })
}

fn rat_poly(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    proptest::collection::vec((-999i64..=999, 1i64..=99), 1..=max_deg + 1).prop_filter_map("zero polynomial", |c| {
        let p = RatPoly::new(c.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect());
        (!p.is_zero()).then_some(p)
    })
}

fn deg(f: &RatPoly) -> i64 {
    f.degree().unwrap() as i64
}

fn any_map(max_d: usize) -> impl Strategy<Value = RationalMap> {
    (2..=max_d, proptest::collection::vec(-99i64..=99, 5), proptest::collection::vec(-99i64..=99, 5), 0usize..3)
        .prop_filter_map("degenerate map", |(d, a, b, shape)| {
            let g: Vec<i64> = match shape {
                0 => b[..=d].to_vec(),
                1 => b[..d].to_vec(),
                _ => vec![b[0]],
            };
            RationalMap::from_i64(&a[..=d], &g).ok().filter(|m| m.degree() == d)
        })
}

fn any_point() -> impl Strategy<Value = ProjPoint> {
    (-9999i64..=9999, 0i64..=9999)
        .prop_filter("not both zero", |(x, y)| *x != 0 || *y != 0)
        .prop_map(|(x, y)| make_point(x, y).unwrap())
}

fn fiber_size(fiber: &[(FiberPoint, u32)]) -> usize {
    fiber.iter().map(|(pt, e)| pt.degree() * *e as usize).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gauss_lemma(f in int_poly(8), g in rat_poly(8), p in proptest::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let v = Place::finite(p).unwrap();
        let lhs = poly_local_norm(&(&f * &g), &v).unwrap();
        prop_assert_eq!(lhs, &poly_local_norm(&f, &v).unwrap() + &poly_local_norm(&g, &v).unwrap());
    }

    #[test]
    fn archimedean_product_bound(f in rat_poly(8), g in rat_poly(8)) {
        let d = deg(&f) + deg(&g) + 1;
        let v = Place::INFINITY;
        let gap = &(&poly_local_norm(&(&f * &g), &v).unwrap() - &poly_local_norm(&f, &v).unwrap())
            - &poly_local_norm(&g, &v).unwrap();
        let b = log(4).scale_int(d);
        prop_assert!(le(&gap, &b) && le(&-&b, &gap));
    }

    #[test]
    fn product_height(fs in proptest::collection::vec(rat_poly(6), 1..4)) {
        let prod = fs.iter().skip(1).fold(fs[0].clone(), |acc, f| &acc * f);
        let bound: LogLinearReal = fs.iter().map(|f| &poly_height(f).unwrap() + &log(2).scale_int(deg(f) + 1)).sum();
        prop_assert!(le(&poly_height(&prod).unwrap(), &bound));
    }

    #[test]
    fn sum_height(fs in proptest::collection::vec(int_poly(8), 1..5)) {
        let sum = fs.iter().skip(1).fold(fs[0].clone(), |acc, f| &acc + f);
        prop_assume!(!sum.is_zero());
        let bound: LogLinearReal = fs.iter().map(|f| poly_height(f).unwrap()).sum::<LogLinearReal>() + log(fs.len() as u64);
        prop_assert!(le(&poly_height(&sum).unwrap(), &bound));
    }

    #[test]
    fn map_height_dominates_parts(phi in any_map(4)) {
        let h = map_height(&phi);
        prop_assert!(le(&poly_height(&phi.numerator().to_rat()).unwrap(), &h));
        prop_assert!(le(&poly_height(&phi.denominator().to_rat()).unwrap(), &h));
    }

    #[test]
    fn composition_height(phi in any_map(3), psi in any_map(3)) {
        let (dp, dq) = (phi.degree() as i64, psi.degree() as i64);
        let bound = &(&map_height(&phi) + &map_height(&psi).scale_int(dp)) + &log(8).scale_int(dp * dq);
        prop_assert!(le(&map_height(&phi.compose(&psi)), &bound));
    }

    #[test]
    fn riemann_hurwitz(phi in any_map(4)) {
        let total: usize = phi.ramification_divisor().iter().map(|(pt, r)| pt.degree() * *r as usize).sum();
        prop_assert_eq!(total, 2 * phi.degree() - 2);
    }

    #[test]
    fn fibers_have_degree_d(phi in any_map(4), a in any_point()) {
        prop_assert_eq!(fiber_size(&phi.fiber_data(&a)), phi.degree());
        for c in [ProjPoint::infinity(), make_point(0, 1).unwrap(), phi.evaluate(&a)] {
            prop_assert_eq!(fiber_size(&phi.fiber_data(&c)), phi.degree());
        }
    }

    #[test]
    fn ramification_is_multiplicative(phi in any_map(3), psi in any_map(3), p in any_point()) {
        let comp = phi.compose(&psi);
        prop_assert_eq!(comp.ramification_index(&p), phi.ramification_index(&psi.evaluate(&p)) * psi.ramification_index(&p));
    }

    #[test]
    fn iterates_compose(phi in any_map(3), p in any_point()) {
        let i2 = phi.iterate(2, 1 << 10).unwrap();
        let i3 = phi.iterate(3, 1 << 10).unwrap();
        prop_assert_eq!(&phi.iterate(5, 1 << 10).unwrap(), &i2.compose(&i3));
        let orbit = phi.orbit(&p, 3, 1 << 20).unwrap();
        prop_assert_eq!(&i3.evaluate(&p), &orbit[3]);
    }

    #[test]
    fn exceptional_sets_are_small(phi in any_map(4)) {
        prop_assert!(phi.exceptional_points().len() <= 2);
    }

    #[test]
    fn product_formula(n in -10_000_000i64..10_000_000, d in 1i64..10_000_000) {
        prop_assume!(n != 0);
        let x = BigRational::new(n.into(), d.into());
        let mut total = local_log_abs(&x, &Place::INFINITY).unwrap();
        let mut m = (n * d).unsigned_abs();
        let mut p = 2;
        while m > 1 {
            if p * p > m {
                p = m;
            }
            if m % p == 0 {
                total = &total + &local_log_abs(&x, &Place::finite(p).unwrap()).unwrap();
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        prop_assert!(total.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn iterate_height(phi in any_map(3), n in 1u32..=3) {
        let d = phi.degree() as i64;
        let dn = d.pow(n);
        let a = BigRational::new((dn - 1).into(), (d - 1).into());
        let b = BigRational::new((d * d * (d.pow(n - 1) - 1)).into(), (d - 1).into());
        let bound = &map_height(&phi).scale(&a) + &log(8).scale(&b);
        prop_assert!(le(&map_height(&phi.iterate(n, 1 << 10).unwrap()), &bound));
    }
}

#[test]
fn sum_bound_needs_integral_representatives() {
    // Projective heights forget scaling: z + 1 and z/2 both have height 0, but
    // their sum (3/2)z + 1 has height log 3 > log 2.
    let f = IntPoly::from_i64(&[1, 1]).to_rat();
    let g = RatPoly::new(vec![BigRational::zero(), BigRational::new(1.into(), 2.into())]);
    assert!(poly_height(&f).unwrap().is_zero() && poly_height(&g).unwrap().is_zero());
    assert_eq!(poly_height(&(&f + &g)).unwrap(), log(3));
}

#[test]
fn height_versus_chordal_examples() {
    // h(P) - sum_v lambda_v(P, inf) in [-log 2 / 2, 0].
    for (x, y) in [(1, 1), (6, 35), (-12, 5), (1024, 3)] {
        let p = make_point(x, y).unwrap();
        let inf = ProjPoint::infinity();
        let mut total = chordal_log(&p, &inf, &Place::INFINITY).finite().unwrap().clone();
        for prime in [2u64, 3, 5, 7] {
            total = &total + chordal_log(&p, &inf, &Place::finite(prime).unwrap()).finite().unwrap();
        }
        let gap = &naive_height(&p) - &total;
        assert!(le(&gap, &LogLinearReal::zero()));
        let half = log(2).scale(&BigRational::new(BigInt::one(), 2.into()));
        assert!(le(&-&half, &gap));
        assert!(!gap.is_zero() || BigInt::from(x).is_zero() || !BigInt::from(y).is_zero());
    }
}
