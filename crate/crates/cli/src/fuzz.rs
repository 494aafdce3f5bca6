//! Randomized verification of the proved inequalities and exact invariants.
//!
//! Every suite draws from its own ChaCha8 stream (stream id = suite index)
//! seeded by the run seed, so suites can run in parallel and still reproduce
//! case for case.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use orbitgap_core::heights::{map_height, poly_height, poly_local_norm};
use orbitgap_core::places::local_log_abs;
use orbitgap_core::projpoint::{chordal_log, naive_height};
use orbitgap_core::{ExtLogReal, IntPoly, LogLinearReal, Place, ProjPoint, RatPoly, RationalMap, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const PRNG: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = suite index";

/// Generator bounds.
pub const MAX_POLY_DEGREE: usize = 8;
pub const MAX_COEFF_BITS: u32 = 16;
pub const MAX_MAP_DEGREE: usize = 4;
const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
/// Counterexamples kept per suite.
const KEEP: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FuzzSizes {
    /// Cases for polynomial and map-height suites.
    pub instances: usize,
    /// Cases for the iterate-height suite.
    pub iterates: usize,
    /// Cases for the metric suites.
    pub metric: usize,
    /// Maps for the ramification suite.
    pub ramification: usize,
}

impl Default for FuzzSizes {
    fn default() -> Self {
        FuzzSizes { instances: 10_000, iterates: 1_000, metric: 10_000, ramification: 200 }
    }
}

impl FuzzSizes {
    pub fn zero() -> Self {
        FuzzSizes { instances: 0, iterates: 0, metric: 0, ramification: 0 }
    }

    pub fn uniform(n: usize) -> Self {
        FuzzSizes { instances: n, iterates: n, metric: n, ramification: n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    /// Cases where an implication's hypothesis held (equal to `cases` for
    /// unconditional statements).
    pub exercised: usize,
    pub failures: usize,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub prng: &'static str,
    pub seed: u64,
    pub weakened: bool,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

struct Suite {
    result: SuiteResult,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { result: SuiteResult { name, cases: 0, exercised: 0, failures: 0, counterexamples: Vec::new() } }
    }

    /// Records one case. `ok = None` means the hypothesis did not hold.
    fn record(&mut self, ok: Option<bool>, describe: impl FnOnce() -> String) {
        self.result.cases += 1;
        let Some(ok) = ok else { return };
        self.result.exercised += 1;
        if !ok {
            self.result.failures += 1;
            if self.result.counterexamples.len() < KEEP {
                self.result.counterexamples.push(describe());
            }
        }
    }
}

fn le(a: &LogLinearReal, b: &LogLinearReal) -> bool {
    (b - a).sign() != Sign::Negative
}

fn log(n: u64) -> LogLinearReal {
    LogLinearReal::log_int(n)
}

fn coeff(rng: &mut ChaCha8Rng) -> i64 {
    let bound = (1i64 << MAX_COEFF_BITS) - 1;
    rng.random_range(-bound..=bound)
}

/// Primitive integer polynomial, degree at most 8, coefficients below 2^16.
pub fn random_primitive_poly(rng: &mut ChaCha8Rng) -> IntPoly {
    let deg = rng.random_range(0..=MAX_POLY_DEGREE);
    let mut c: Vec<i64> = (0..=deg).map(|_| coeff(rng)).collect();
    while c[deg] == 0 {
        c[deg] = coeff(rng);
    }
    let p = IntPoly::from_i64(&c).primitive_part();
    assert!(p.deg() <= MAX_POLY_DEGREE);
    assert!(p.coeffs().iter().all(|a| a.bits() <= MAX_COEFF_BITS as u64));
    p
}

/// A nonzero rational built from small primes, for scaling polynomials.
fn random_scalar(rng: &mut ChaCha8Rng) -> BigRational {
    let mut q = BigRational::one();
    for _ in 0..rng.random_range(0..4) {
        let p = BigRational::from_integer(SMALL_PRIMES[rng.random_range(0..SMALL_PRIMES.len())].into());
        q = if rng.random_bool(0.5) { q * p } else { q / p };
    }
    if rng.random_bool(0.5) {
        -q
    } else {
        q
    }
}

/// A rational polynomial: primitive polynomial times a scalar.
fn random_rat_poly(rng: &mut ChaCha8Rng) -> RatPoly {
    random_primitive_poly(rng).to_rat().scale(&random_scalar(rng))
}

/// Normalized map of degree `2..=max_d` with coefficients below `2^bits`.
pub fn random_map(rng: &mut ChaCha8Rng, max_d: usize, bits: u32) -> RationalMap {
    assert!((2..=MAX_MAP_DEGREE).contains(&max_d));
    let bound = (1i64 << bits) - 1;
    loop {
        let d = rng.random_range(2..=max_d);
        let f: Vec<i64> = (0..=d).map(|_| rng.random_range(-bound..=bound)).collect();
        let gdeg = match rng.random_range(0..3) {
            0 => d,
            1 => rng.random_range(0..d),
            _ => 0,
        };
        let g: Vec<i64> = (0..=gdeg).map(|_| rng.random_range(-bound..=bound)).collect();
        if let Ok(m) = RationalMap::from_i64(&f, &g) {
            if m.degree() == d {
                assert!(m.coefficient_vector().iter().all(|c| c.bits() <= bits as u64));
                return m;
            }
        }
    }
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n: i64 = rng.random_range(-(1i64 << 31)..=(1i64 << 31));
    let d: i64 = rng.random_range(1..=(1i64 << 31));
    BigRational::new(n.into(), d.into())
}

fn random_place(rng: &mut ChaCha8Rng) -> Place {
    let k = rng.random_range(0..=SMALL_PRIMES.len());
    if k == 0 {
        Place::INFINITY
    } else {
        Place::finite(SMALL_PRIMES[k - 1]).unwrap()
    }
}

/// A rational `v`-adically close to `y` half of the time, so that the
/// hypothesis of the chordal comparison lemma is actually exercised.
fn nearby(rng: &mut ChaCha8Rng, y: &BigRational, v: &Place) -> BigRational {
    if rng.random_bool(0.5) {
        return random_rational(rng);
    }
    let k: u32 = rng.random_range(1..40);
    let step = match v.prime() {
        Some(p) => BigRational::from_integer(num_traits::pow(BigInt::from(p), k as usize)),
        None => BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(2), k as usize)),
    };
    let u = BigRational::from_integer(rng.random_range(1i64..1000).into());
    y + step * u
}

fn point_of(q: &BigRational) -> ProjPoint {
    ProjPoint::from_rational(q)
}

fn suite_absval_sum(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("absval_sum");
    for _ in 0..n {
        let (f, g, v) = (random_rat_poly(rng), random_rat_poly(rng), random_place(rng));
        let sum = &f + &g;
        if sum.is_zero() {
            s.record(None, String::new);
            continue;
        }
        let lhs = poly_local_norm(&sum, &v).unwrap();
        let (nf, ng) = (poly_local_norm(&f, &v).unwrap(), poly_local_norm(&g, &v).unwrap());
        let ok = if v.is_archimedean() {
            let max = |p: &RatPoly| p.coeffs().iter().map(|c| c.abs()).max().unwrap();
            le(&lhs, &LogLinearReal::log_rational(&(max(&f) + max(&g))))
        } else {
            le(&lhs, &nf.max_exact(&ng))
        };
        s.record(Some(ok), || format!("f = {f}, g = {g}, v = {v}"));
    }
    s.result
}

fn suite_gauss(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("gauss_lemma");
    for _ in 0..n {
        let (f, g) = (random_rat_poly(rng), random_rat_poly(rng));
        let v = Place::finite(SMALL_PRIMES[rng.random_range(0..SMALL_PRIMES.len())]).unwrap();
        let ok = poly_local_norm(&(&f * &g), &v).unwrap()
            == &poly_local_norm(&f, &v).unwrap() + &poly_local_norm(&g, &v).unwrap();
        s.record(Some(ok), || format!("f = {f}, g = {g}, v = {v}"));
    }
    s.result
}

fn suite_archimedean_product(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("archimedean_product_4d");
    for _ in 0..n {
        let (f, g) = (random_rat_poly(rng), random_rat_poly(rng));
        let d = (f.degree().unwrap() + g.degree().unwrap() + 1) as i64;
        let v = Place::INFINITY;
        let gap = &(&poly_local_norm(&(&f * &g), &v).unwrap() - &poly_local_norm(&f, &v).unwrap())
            - &poly_local_norm(&g, &v).unwrap();
        let b = log(4).scale_int(d);
        s.record(Some(le(&gap, &b) && le(&-&b, &gap)), || format!("f = {f}, g = {g}, d = {d}"));
    }
    s.result
}

fn suite_product_height(rng: &mut ChaCha8Rng, n: usize, weakened: bool) -> SuiteResult {
    let mut s = Suite::new("product_height");
    for _ in 0..n {
        let r = rng.random_range(1..=4);
        let fs: Vec<RatPoly> = (0..r).map(|_| random_rat_poly(rng)).collect();
        let prod = fs.iter().skip(1).fold(fs[0].clone(), |acc, f| &acc * f);
        let bound: LogLinearReal = fs
            .iter()
            .map(|f| {
                let h = poly_height(f).unwrap();
                if weakened {
                    h
                } else {
                    &h + &log(2).scale_int(f.degree().unwrap() as i64 + 1)
                }
            })
            .sum();
        let ok = le(&poly_height(&prod).unwrap(), &bound);
        s.record(Some(ok), || {
            let list: Vec<String> = fs.iter().map(|f| format!("({f})")).collect();
            format!("factors = {}", list.join(" * "))
        });
    }
    s.result
}

fn suite_sum_height(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("sum_height");
    for _ in 0..n {
        let r = rng.random_range(1..=4);
        let fs: Vec<RatPoly> = (0..r).map(|_| random_primitive_poly(rng).to_rat()).collect();
        let sum = fs.iter().skip(1).fold(fs[0].clone(), |acc, f| &acc + f);
        if sum.is_zero() {
            s.record(None, String::new);
            continue;
        }
        let bound = fs.iter().map(|f| poly_height(f).unwrap()).sum::<LogLinearReal>() + log(r as u64);
        let ok = le(&poly_height(&sum).unwrap(), &bound);
        s.record(Some(ok), || {
            let list: Vec<String> = fs.iter().map(|f| format!("({f})")).collect();
            format!("summands = {}", list.join(" + "))
        });
    }
    s.result
}

fn suite_map_height_parts(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("map_height_dominates_parts");
    for _ in 0..n {
        let phi = random_map(rng, MAX_MAP_DEGREE, MAX_COEFF_BITS);
        let h = map_height(&phi);
        let ok = le(&poly_height(&phi.numerator().to_rat()).unwrap(), &h)
            && le(&poly_height(&phi.denominator().to_rat()).unwrap(), &h);
        s.record(Some(ok), || format!("phi = {phi}"));
    }
    s.result
}

fn suite_composition_height(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("composition_height");
    for _ in 0..n {
        let phi = random_map(rng, MAX_MAP_DEGREE, MAX_COEFF_BITS);
        let psi = random_map(rng, MAX_MAP_DEGREE, MAX_COEFF_BITS);
        let (dp, dq) = (phi.degree() as i64, psi.degree() as i64);
        let bound = &(&map_height(&phi) + &map_height(&psi).scale_int(dp)) + &log(8).scale_int(dp * dq);
        let ok = le(&map_height(&phi.compose(&psi)), &bound);
        s.record(Some(ok), || format!("phi = {phi}, psi = {psi}"));
    }
    s.result
}

fn suite_iterate_height(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("iterate_height");
    for _ in 0..n {
        let phi = random_map(rng, MAX_MAP_DEGREE, MAX_COEFF_BITS);
        let k: u32 = rng.random_range(1..=3);
        let d = phi.degree() as i64;
        let a = BigRational::new((d.pow(k) - 1).into(), (d - 1).into());
        let b = BigRational::new((d * d * (d.pow(k - 1) - 1)).into(), (d - 1).into());
        let bound = &map_height(&phi).scale(&a) + &log(8).scale(&b);
        let it = phi.iterate(k, 1 << 12).expect("within budget");
        s.record(Some(le(&map_height(&it), &bound)), || format!("phi = {phi}, n = {k}"));
    }
    s.result
}

fn suite_product_formula(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("product_formula");
    for _ in 0..n {
        let x = random_rational(rng);
        if x.is_zero() {
            s.record(None, String::new);
            continue;
        }
        let mut total = local_log_abs(&x, &Place::INFINITY).unwrap();
        let mut primes = prime_factors(x.numer());
        primes.extend(prime_factors(x.denom()));
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            total = &total + &local_log_abs(&x, &Place::finite(p).unwrap()).unwrap();
        }
        s.record(Some(total.is_zero()), || format!("x = {x}"));
    }
    s.result
}

/// Prime factors of a nonzero integer below 2^64 by trial division; meant
/// for the 32-bit values the generators produce.
fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut m: u64 = n.magnitude().try_into().expect("fits in u64");
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn suite_log_chordal(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("log_chordal_lemma");
    let inf = ProjPoint::infinity();
    for _ in 0..n {
        let v = random_place(rng);
        let y = random_rational(rng);
        let x = nearby(rng, &y, &v);
        if x == y {
            s.record(None, String::new);
            continue;
        }
        let (px, py) = (point_of(&x), point_of(&y));
        let lxy = chordal_log(&px, &py, &v).finite().cloned().expect("distinct points");
        let lyi = chordal_log(&py, &inf, &v).finite().cloned().expect("finite point");
        let log_ell = if v.is_archimedean() { log(2) } else { LogLinearReal::zero() };
        if !(&lxy - &(&lyi + &log_ell)).sign().eq(&Sign::Positive) {
            s.record(None, String::new);
            continue;
        }
        let mid = &lxy + &local_log_abs(&(&x - &y), &v).unwrap();
        let ok = le(&lyi, &mid) && le(&mid, &(&lyi.scale_int(2) + &log_ell));
        s.record(Some(ok), || format!("x = {x}, y = {y}, v = {v}"));
    }
    s.result
}

fn suite_strong_triangle(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("strong_triangle");
    for _ in 0..n {
        let v = Place::finite(SMALL_PRIMES[rng.random_range(0..SMALL_PRIMES.len())]).unwrap();
        let z = random_rational(rng);
        let x = nearby(rng, &z, &v);
        let y = nearby(rng, &z, &v);
        let (px, py, pz) = (point_of(&x), point_of(&y), point_of(&z));
        let xy = chordal_log(&px, &py, &v);
        let xz = chordal_log(&px, &pz, &v);
        let yz = chordal_log(&py, &pz, &v);
        let lo = if xz.ge(&yz) { yz.clone() } else { xz.clone() };
        let ok = xy.ge(&lo) && (xz == yz || xy == lo);
        s.record(Some(ok), || format!("x = {x}, y = {y}, z = {z}, v = {v}"));
    }
    s.result
}

fn suite_height_vs_chordal(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("height_vs_chordal");
    let inf = ProjPoint::infinity();
    let half_log2 = log(2).scale(&BigRational::new(1.into(), 2.into()));
    for _ in 0..n {
        let x = random_rational(rng);
        let p = point_of(&x);
        let mut total = chordal_log(&p, &inf, &Place::INFINITY);
        // lambda_p(P, inf) = v_p(y) log p vanishes unless p divides y.
        for q in prime_factors(p.y()) {
            total = &total + &chordal_log(&p, &inf, &Place::finite(q).unwrap());
        }
        let ExtLogReal::Finite(sum) = total else {
            s.record(Some(false), || format!("x = {x}"));
            continue;
        };
        let gap = &naive_height(&p) - &sum;
        let ok = le(&gap, &LogLinearReal::zero()) && le(&-&half_log2, &gap);
        s.record(Some(ok), || format!("x = {x}"));
    }
    s.result
}

fn suite_ramification(rng: &mut ChaCha8Rng, n: usize) -> SuiteResult {
    let mut s = Suite::new("ramification");
    for _ in 0..n {
        let phi = random_map(rng, MAX_MAP_DEGREE, 8);
        let d = phi.degree();
        let rh: usize = phi.ramification_divisor().iter().map(|(pt, r)| pt.degree() * *r as usize).sum();
        let a = point_of(&random_rational(rng));
        let targets = [a.clone(), phi.evaluate(&a), ProjPoint::infinity(), ProjPoint::from_int(0)];
        let fibers_ok = targets.iter().all(|t| {
            phi.fiber_data(t).iter().map(|(pt, e)| pt.degree() * *e as usize).sum::<usize>() == d
        });
        s.record(Some(rh == 2 * d - 2 && fibers_ok), || format!("phi = {phi}, A = {a}"));
    }
    s.result
}

/// Suite names in stream order.
pub const SUITES: [&str; 13] = [
    "absval_sum",
    "gauss_lemma",
    "archimedean_product_4d",
    "product_height",
    "sum_height",
    "map_height_dominates_parts",
    "composition_height",
    "iterate_height",
    "product_formula",
    "log_chordal_lemma",
    "strong_triangle",
    "height_vs_chordal",
    "ramification",
];

fn run_suite(index: usize, seed: u64, sizes: &FuzzSizes, weakened: bool) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let rng = &mut rng;
    match SUITES[index] {
        "absval_sum" => suite_absval_sum(rng, sizes.instances),
        "gauss_lemma" => suite_gauss(rng, sizes.instances),
        "archimedean_product_4d" => suite_archimedean_product(rng, sizes.instances),
        "product_height" => suite_product_height(rng, sizes.instances, weakened),
        "sum_height" => suite_sum_height(rng, sizes.instances),
        "map_height_dominates_parts" => suite_map_height_parts(rng, sizes.instances),
        "composition_height" => suite_composition_height(rng, sizes.instances),
        "iterate_height" => suite_iterate_height(rng, sizes.iterates),
        "product_formula" => suite_product_formula(rng, sizes.metric),
        "log_chordal_lemma" => suite_log_chordal(rng, sizes.metric),
        "strong_triangle" => suite_strong_triangle(rng, sizes.metric),
        "height_vs_chordal" => suite_height_vs_chordal(rng, sizes.metric),
        "ramification" => suite_ramification(rng, sizes.ramification),
        _ => unreachable!(),
    }
}

/// Runs the named suites (all when `only` is empty). In weakened mode the
/// product-height bound loses its `(deg f + 1) log 2` terms, which the suite
/// should then catch.
pub fn fuzz_suites(seed: u64, sizes: &FuzzSizes, weakened: bool, only: &[&str]) -> FuzzSummary {
    let picked: Vec<usize> = (0..SUITES.len()).filter(|&i| only.is_empty() || only.contains(&SUITES[i])).collect();
    let suites: Vec<SuiteResult> = picked.par_iter().map(|&i| run_suite(i, seed, sizes, weakened)).collect();
    let passed = suites.iter().all(|s| s.failures == 0);
    FuzzSummary { prng: PRNG, seed, weakened, passed, suites }
}
