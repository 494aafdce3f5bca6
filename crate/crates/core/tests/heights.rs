use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use orbitgap_core::heights::*;
use orbitgap_core::interval::Dyadic;
use orbitgap_core::projpoint::{make_point, naive_height};
use orbitgap_core::*;
use proptest::prelude::*;

fn map(f: &[i64], g: &[i64]) -> RationalMap {
    RationalMap::from_i64(f, g).unwrap()
}

fn pt(x: i64, y: i64) -> ProjPoint {
    make_point(x, y).unwrap()
}

fn log(n: u64) -> LogLinearReal {
    LogLinearReal::log_int(n)
}

fn le(a: &LogLinearReal, b: &LogLinearReal) -> bool {
    (b - a).sign() != Sign::Negative
}

fn dec(s: &str) -> BigRational {
    let (i, f) = s.split_once('.').unwrap();
    BigRational::new(format!("{i}{f}").parse().unwrap(), num_traits::pow(BigInt::from(10), f.len()))
}

fn below(x: &Dyadic, s: &str) -> bool {
    x.to_rational() < dec(s)
}

/// `h(phi^N P) / d^N +- max(c_plus, c_minus) / ((d - 1) d^N)` from the exact
/// orbit; independent of the telescoped computation.
fn orbit_oracle(phi: &RationalMap, p: &ProjPoint, n: usize) -> RealInterval {
    let d = phi.degree() as i64;
    let q = phi.orbit(p, n, 1 << 24).unwrap().pop().unwrap();
    let dn = num_traits::pow(BigInt::from(d), n);
    let mid = naive_height(&q).enclose(96).scale_rational(&BigRational::new(BigInt::one(), dn.clone()), 96);
    let c = height_gap_constants(phi)
        .max()
        .enclose(96)
        .scale_rational(&BigRational::new(BigInt::one(), dn * (d - 1)), 96);
    &mid + &RealInterval::new(-c.hi().clone(), c.hi().clone())
}

#[test]
fn canonical_height_examples() {
    let sq = map(&[0, 0, 1], &[1]);
    let h = canonical_height(&sq, &pt(2, 1), &Dyadic::pow2(-40)).unwrap();
    assert!(h.overlaps(&log(2).enclose(128)));
    assert!(h.width() <= Dyadic::pow2(-40));

    let h = canonical_height(&map(&[-1, 0, 1], &[1]), &pt(0, 1), &Dyadic::pow2(-34)).unwrap();
    assert!(h.contains(&Dyadic::zero()));

    let h = canonical_height(&map(&[0, 1, 1], &[1]), &pt(3, 1), &Dyadic::pow2(-10)).unwrap();
    assert!(!below(h.lo(), "1.26") && below(h.hi(), "1.27"), "{h}");
}

#[test]
fn limit_oracle_values() {
    let phi = map(&[0, 1, 1], &[1]);
    let orbit = phi.orbit(&pt(3, 1), 10, 1 << 20).unwrap();
    let expect = ["1.0986", "1.2425", "1.2625", "1.2633"];
    for (n, want) in expect.iter().enumerate() {
        let v = naive_height(&orbit[n])
            .enclose(64)
            .scale_rational(&BigRational::new(BigInt::one(), BigInt::from(1u64 << n)), 64);
        let (lo, _) = v.to_decimal_pair(4);
        let r = dec(&lo);
        let w = dec(want);
        let ulp = dec("0.0001");
        assert!(r <= &w + &ulp && &w - &ulp <= r, "n = {n}: {lo} vs {want}");
    }
    let h = canonical_height(&phi, &pt(3, 1), &Dyadic::pow2(-30)).unwrap();
    assert!(h.overlaps(&orbit_oracle(&phi, &pt(3, 1), 10)));
}

#[test]
fn orbit_oracle_agrees_on_assorted_maps() {
    let cases = [
        (map(&[3, 0, 2], &[-7, 5]), pt(1, 2)),
        (map(&[1], &[1, 0, 1]), pt(1, 1)),
        (map(&[1, 0, 1], &[0, 1]), pt(1, 1)),
        (map(&[-2, 0, 1], &[1]), pt(3, 2)),
        (map(&[0, 0, 0, 1], &[2, 0, 1]), pt(-5, 3)),
        (map(&[0, 1, 1], &[1]), pt(3, 1)),
    ];
    for (phi, p) in cases {
        let h = canonical_height(&phi, &p, &Dyadic::pow2(-30)).unwrap();
        for n in [2, 5, 8] {
            assert!(h.overlaps(&orbit_oracle(&phi, &p, n)), "{phi} at {p}, n = {n}: {h}");
        }
    }
}

#[test]
fn power_maps_have_naive_canonical_heights() {
    for (x, y) in [(2, 1), (-7, 3), (1, 1), (0, 1), (123456, 789), (1, 0)] {
        let p = pt(x, y);
        for d in [2usize, 3] {
            let mut f = vec![0i64; d + 1];
            f[d] = 1;
            let h = canonical_height(&map(&f, &[1]), &p, &Dyadic::pow2(-40)).unwrap();
            assert!(h.overlaps(&naive_height(&p).enclose(128)), "{p}");
        }
    }
}

#[test]
fn preperiodic_points_have_zero_height() {
    let phi = map(&[-1, 0, 1], &[1]);
    assert!(phi.is_preperiodic(&pt(0, 1)));
    let h = canonical_height(&phi, &pt(0, 1), &Dyadic::pow2(-34)).unwrap();
    assert!(h.contains(&Dyadic::zero()));
    let phi = map(&[0, 1, 1], &[1]);
    assert!(!phi.is_preperiodic(&pt(3, 1)));
    let h = canonical_height(&phi, &pt(3, 1), &Dyadic::pow2(-20)).unwrap();
    assert!(*h.lo() > Dyadic::from_int(1));
    // -1 -> 0 -> 0 under z^2 + z.
    assert!(phi.is_preperiodic(&pt(-1, 1)));
    let h = canonical_height(&phi, &pt(-1, 1), &Dyadic::pow2(-20)).unwrap();
    assert!(h.contains(&Dyadic::zero()));
}

#[test]
fn gap_constant_examples() {
    let sq = map(&[0, 0, 1], &[1]);
    assert_eq!(height_gap_constants(&sq).c_plus, log(3));
    let c = height_gap_constants(&map(&[-2, 0, 1], &[1]));
    assert_eq!(c.c_plus, log(6));
    let need = &log(3).scale_int(2) - &log(4);
    assert!(le(&need, &c.c_minus));
    assert_eq!(map_height(&map(&[3, 0, 2], &[-7, 5])), log(7));
}

fn small_map() -> impl Strategy<Value = RationalMap> {
    (2usize..=3, proptest::collection::vec(-255i64..=255, 8), proptest::collection::vec(-255i64..=255, 8), 0usize..3)
        .prop_filter_map("degenerate map", |(d, a, b, shape)| {
            let f = &a[..=d];
            let g: Vec<i64> = match shape {
                0 => b[..=d].to_vec(),
                1 => b[..d].to_vec(),
                _ => vec![b[0]],
            };
            RationalMap::from_i64(f, &g).ok().filter(|m| m.degree() == d)
        })
}

fn small_point() -> impl Strategy<Value = ProjPoint> {
    (-255i64..=255, 0i64..=255)
        .prop_filter("not both zero", |(x, y)| *x != 0 || *y != 0)
        .prop_map(|(x, y)| pt(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn functional_equation(phi in small_map(), p in small_point()) {
        let w = Dyadic::pow2(-27);
        let a = canonical_height(&phi, &phi.evaluate(&p), &w).unwrap();
        let b = canonical_height(&phi, &p, &w).unwrap().scale_int(&BigInt::from(phi.degree()));
        let dist = (&a.midpoint() - &b.midpoint()).abs();
        prop_assert!(dist <= &a.width() + &b.width());
    }

    #[test]
    fn naive_canonical_gap(phi in small_map(), p in small_point()) {
        let h = canonical_height(&phi, &p, &Dyadic::pow2(-20)).unwrap();
        let c = height_gap_constants(&phi).max();
        let d = phi.degree() as i64;
        let bound = c.scale(&BigRational::new(1.into(), (d - 1).into())).enclose(96);
        let gap = (&h.midpoint() - &naive_height(&p).enclose(96).midpoint()).abs();
        prop_assert!(gap <= &(bound.hi() + &h.width()) + &Dyadic::pow2(-90));
    }

    #[test]
    fn one_step_gap_is_bounded(phi in small_map(), p in small_point()) {
        let c = height_gap_constants(&phi);
        let d = phi.degree() as i64;
        let gap = &naive_height(&phi.evaluate(&p)) - &naive_height(&p).scale_int(d);
        prop_assert!(le(&gap, &c.c_plus));
        prop_assert!(le(&-&c.c_minus, &gap));
    }

    #[test]
    fn canonical_height_matches_orbit_oracle(phi in small_map(), p in small_point()) {
        let h = canonical_height(&phi, &p, &Dyadic::pow2(-24)).unwrap();
        prop_assert!(h.overlaps(&orbit_oracle(&phi, &p, 4)));
    }
}
