//! Quasi-integrality, the Gamma scan over an orbit, the S-integral census,
//! the growth closed form for `z^d + z^(d-1)`, and diagnostic reports.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::strip_factor;
use crate::error::{Error, Result};
use crate::heights::{canonical_height, map_height};
use crate::interval::{self, compare_interval, Comparison, Dyadic, NoRefine, RealInterval};
use crate::logreal::{ExtLogReal, LogLinearReal, Sign};
use crate::places::{local_log_plus, PlaceSet};
use crate::projpoint::{chordal_log, naive_height, ProjPoint};
use crate::ratmap::{FiberPoint, RationalMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    In,
    Out,
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Exact orbit points; any place set, cost grows like `d^n` digits.
    ExactOrbit,
    /// Orbit modulo `p^M` per prime of `S`; finite places only.
    FinitePlaceModular,
}

/// Resource limits for scans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanCaps {
    /// Cap for comparing a threshold against an exact value.
    pub precision_cap_bits: u64,
    /// Initial canonical-height width is `2^-hhat_bits`.
    pub hhat_bits: u64,
    /// The coordinator refines the canonical height up to this many bits.
    pub hhat_refine_cap_bits: u64,
    /// Exact-orbit coordinate size limit.
    pub height_budget_bits: u64,
    /// Largest `p^M` the modular backend may use, in bits.
    pub modulus_cap_bits: u64,
    /// Largest iterate degree for iterate-based reports.
    pub degree_budget: u64,
}

impl Default for ScanCaps {
    fn default() -> Self {
        ScanCaps {
            precision_cap_bits: interval::DEFAULT_CAP_BITS,
            hhat_bits: 20,
            hhat_refine_cap_bits: 320,
            height_budget_bits: 1 << 22,
            modulus_cap_bits: 1 << 22,
            degree_budget: 1 << 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanVerdict {
    pub n: usize,
    pub membership: Membership,
    /// `sum_{v in S} lambda_v(phi^n P, A)`, or a lower bound for it when
    /// `lambda_exact` is false (modular backend, decided without the exact
    /// value).
    pub lambda_sum: ExtLogReal,
    pub lambda_exact: bool,
    pub threshold: RealInterval,
}

/// Input echo carried by every report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEcho {
    pub map: String,
    pub target: String,
    pub start: String,
    pub places: String,
    pub epsilon: String,
    pub n_max: usize,
    pub backend: Option<Backend>,
    pub naive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub verdicts: Vec<ScanVerdict>,
    pub count_in: usize,
    pub count_unresolved: usize,
    /// Canonical height of the start point used for every threshold.
    pub hhat: Option<RealInterval>,
    pub bound_log_term: Option<RealInterval>,
    /// The theorem's count bound with its ineffective constant left symbolic.
    pub bound_symbolic: String,
    pub echo: ScanEcho,
}

fn check_epsilon(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || *eps > BigRational::one() {
        return Err(Error::InvalidEpsilon);
    }
    Ok(())
}

/// `sum_{v in S} log+ |x|_v >= eps h(x)`, decided exactly.
pub fn quasi_integral_test(x: &BigRational, s: &PlaceSet, eps: &BigRational) -> Result<bool> {
    check_epsilon(eps)?;
    let lhs: LogLinearReal = s.iter().map(|v| local_log_plus(x, v)).sum();
    let rhs = naive_height(&ProjPoint::from_rational(x)).scale(eps);
    Ok((&lhs - &rhs).sign() != Sign::Negative)
}

/// `sum_{v in S} lambda_v(P, A)`; `+inf` iff `P = A`.
pub fn lambda_sum(p: &ProjPoint, a: &ProjPoint, s: &PlaceSet) -> ExtLogReal {
    s.iter()
        .fold(ExtLogReal::Finite(LogLinearReal::zero()), |acc, v| &acc + &chordal_log(p, a, v))
}

/// Valuation of `x_n y_A - x_A y_n` along the orbit, from arithmetic modulo
/// `p^digits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PadicVal {
    Exact(u64),
    AtLeast(u64),
}

/// Tracks `phi^n P` modulo `p^digits` up to p-adic units. Each step divides
/// out the `p`-part of `gcd(F, G)` and loses that many digits.
fn padic_orbit_valuations(
    phi: &RationalMap,
    start: &ProjPoint,
    target: &ProjPoint,
    p: u64,
    n_max: usize,
    digits: u64,
) -> Vec<PadicVal> {
    let pb = BigInt::from(p);
    let mut prec = digits;
    let mut modulus = num_traits::pow(pb.clone(), digits as usize);
    let mut x = start.x().mod_floor(&modulus);
    let mut y = start.y().mod_floor(&modulus);
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if prec == 0 {
            out.resize(n_max + 1, PadicVal::AtLeast(0));
            break;
        }
        let delta = (&x * target.y() - target.x() * &y).mod_floor(&modulus);
        out.push(if delta.is_zero() {
            PadicVal::AtLeast(prec)
        } else {
            PadicVal::Exact(strip_factor(&delta, &pb).1)
        });
        if n == n_max {
            break;
        }
        let (fx, gy) = phi.eval_forms(&x, &y);
        let (fx, gy) = (fx.mod_floor(&modulus), gy.mod_floor(&modulus));
        let vf = if fx.is_zero() { prec } else { strip_factor(&fx, &pb).1.min(prec) };
        let vg = if gy.is_zero() { prec } else { strip_factor(&gy, &pb).1.min(prec) };
        let k = vf.min(vg);
        if k >= prec {
            prec = 0;
            continue;
        }
        let pk = num_traits::pow(pb.clone(), k as usize);
        prec -= k;
        modulus = &modulus / &pk;
        x = (fx / &pk).mod_floor(&modulus);
        y = (gy / &pk).mod_floor(&modulus);
    }
    out
}

/// Lambda sum for one step: exact, or a lower bound.
#[derive(Clone, Debug)]
struct LambdaBound {
    value: ExtLogReal,
    exact: bool,
}

enum Decision {
    Settled(Membership),
    /// Only a lower bound is known and it does not clear the threshold.
    NeedDigits,
}

fn decide(threshold: &RealInterval, lam: &LambdaBound, cap: u64) -> Decision {
    let ExtLogReal::Finite(value) = &lam.value else {
        return Decision::Settled(Membership::In);
    };
    match compare_interval(threshold, value, &mut NoRefine, cap) {
        Comparison::Less => Decision::Settled(Membership::In),
        _ if !lam.exact => Decision::NeedDigits,
        Comparison::Greater => Decision::Settled(Membership::Out),
        Comparison::Unresolved => Decision::Settled(Membership::Unresolved),
    }
}

fn modular_lambdas(
    phi: &RationalMap,
    a: &ProjPoint,
    p: &ProjPoint,
    s: &PlaceSet,
    n_max: usize,
    digits_for: impl Fn(u64) -> u64,
) -> Vec<LambdaBound> {
    let mut out = vec![
        LambdaBound { value: ExtLogReal::Finite(LogLinearReal::zero()), exact: true };
        n_max + 1
    ];
    for prime in s.primes() {
        let vals = padic_orbit_valuations(phi, p, a, prime, n_max, digits_for(prime));
        let logp = LogLinearReal::log_int(prime);
        for (slot, v) in out.iter_mut().zip(vals) {
            let (k, exact) = match v {
                PadicVal::Exact(k) => (k, true),
                PadicVal::AtLeast(k) => (k, false),
            };
            slot.value = &slot.value + &ExtLogReal::Finite(logp.scale_int(k as i64));
            slot.exact &= exact;
        }
    }
    out
}

fn threshold_at(t0: &RealInterval, d: usize, n: usize) -> RealInterval {
    t0.scale_int(&num_traits::pow(BigInt::from(d), n))
}

fn echo(
    phi: &RationalMap,
    a: &ProjPoint,
    p: &ProjPoint,
    s: &PlaceSet,
    eps: &BigRational,
    n_max: usize,
    backend: Option<Backend>,
) -> ScanEcho {
    ScanEcho {
        map: format!("{phi}"),
        target: format!("{a}"),
        start: format!("{p}"),
        places: format!("{s}"),
        epsilon: format!("{eps}"),
        n_max,
        backend,
        naive: backend.is_none(),
    }
}

fn check_scan_inputs(phi: &RationalMap, a: &ProjPoint, p: &ProjPoint, eps: &BigRational) -> Result<()> {
    check_epsilon(eps)?;
    if phi.is_exceptional(a) {
        return Err(Error::ExceptionalTarget);
    }
    if phi.is_preperiodic(p) {
        return Err(Error::PreperiodicStart);
    }
    Ok(())
}

fn hhat_at(phi: &RationalMap, p: &ProjPoint, bits: u64) -> Result<RealInterval> {
    canonical_height(phi, p, &Dyadic::pow2(-(bits as i64)))
}

fn bound_symbolic(s: &PlaceSet) -> String {
    format!("4^{}*gamma_3 + log_d^+((h(phi) + hhat(A))/hhat(P))", s.len())
}

fn finish(verdicts: Vec<ScanVerdict>, hhat: Option<RealInterval>, bound: Option<RealInterval>, s: &PlaceSet, echo: ScanEcho) -> ScanReport {
    let count_in = verdicts.iter().filter(|v| v.membership == Membership::In).count();
    let count_unresolved = verdicts
        .iter()
        .filter(|v| v.membership == Membership::Unresolved)
        .count();
    ScanReport {
        verdicts,
        count_in,
        count_unresolved,
        hhat,
        bound_log_term: bound,
        bound_symbolic: bound_symbolic(s),
        echo,
    }
}

/// `Gamma_{phi,S}(A, P, eps)` restricted to `0..=n_max`, against the
/// canonical-height threshold `eps d^n h^(P)`.
#[allow(clippy::too_many_arguments)]
pub fn gamma_scan(
    phi: &RationalMap,
    a: &ProjPoint,
    p: &ProjPoint,
    s: &PlaceSet,
    eps: &BigRational,
    n_max: usize,
    backend: Backend,
    caps: &ScanCaps,
) -> Result<ScanReport> {
    if backend == Backend::FinitePlaceModular && s.has_archimedean() {
        return Err(Error::BackendUnsupported);
    }
    check_scan_inputs(phi, a, p, eps)?;
    let d = phi.degree();

    let mut digits_bits = 64u64;
    let digits_for = |bits: u64| move |prime: u64| (bits / (64 - prime.leading_zeros() as u64)).max(1);
    let mut lambdas = match backend {
        Backend::ExactOrbit => phi
            .orbit(p, n_max, caps.height_budget_bits)?
            .iter()
            .map(|q| LambdaBound { value: lambda_sum(q, a, s), exact: true })
            .collect::<Vec<_>>(),
        Backend::FinitePlaceModular => modular_lambdas(phi, a, p, s, n_max, digits_for(digits_bits)),
    };

    let mut hhat_bits = caps.hhat_bits;
    let mut hhat = hhat_at(phi, p, hhat_bits)?;
    let verdicts = loop {
        let t0 = hhat.scale_rational(eps, hhat_bits + 8);
        let mut need_digits = false;
        let mut unresolved = false;
        let mut verdicts = Vec::with_capacity(n_max + 1);
        for (n, lam) in lambdas.iter().enumerate() {
            let threshold = threshold_at(&t0, d, n);
            let membership = match decide(&threshold, lam, caps.precision_cap_bits) {
                Decision::Settled(m) => m,
                Decision::NeedDigits => {
                    need_digits = true;
                    Membership::Unresolved
                }
            };
            unresolved |= membership == Membership::Unresolved;
            verdicts.push(ScanVerdict {
                n,
                membership,
                lambda_sum: lam.value.clone(),
                lambda_exact: lam.exact,
                threshold,
            });
        }
        if need_digits && digits_bits * 2 <= caps.modulus_cap_bits {
            digits_bits *= 2;
            lambdas = modular_lambdas(phi, a, p, s, n_max, digits_for(digits_bits));
            continue;
        }
        if unresolved && hhat_bits * 2 <= caps.hhat_refine_cap_bits {
            hhat_bits *= 2;
            hhat = hhat_at(phi, p, hhat_bits)?;
            continue;
        }
        break verdicts;
    };
    let bound = bound_log_term(phi, a, p, &Dyadic::pow2(-20))?;
    Ok(finish(verdicts, Some(hhat), Some(bound), s, echo(phi, a, p, s, eps, n_max, Some(backend))))
}

/// The same scan against the naive threshold `eps h(phi^n P)`; exact, so
/// never unresolved. The horizon is finite, so exceptional targets are
/// allowed here.
pub fn gamma_scan_naive(
    phi: &RationalMap,
    a: &ProjPoint,
    p: &ProjPoint,
    s: &PlaceSet,
    eps: &BigRational,
    n_max: usize,
    caps: &ScanCaps,
) -> Result<ScanReport> {
    check_epsilon(eps)?;
    if phi.is_preperiodic(p) {
        return Err(Error::PreperiodicStart);
    }
    let orbit = phi.orbit(p, n_max, caps.height_budget_bits)?;
    let verdicts = orbit
        .iter()
        .enumerate()
        .map(|(n, q)| {
            let lam = lambda_sum(q, a, s);
            let t = naive_height(q).scale(eps);
            let membership = if lam.ge(&ExtLogReal::Finite(t.clone())) {
                Membership::In
            } else {
                Membership::Out
            };
            ScanVerdict { n, membership, lambda_sum: lam, lambda_exact: true, threshold: t.enclose(64) }
        })
        .collect();
    Ok(finish(verdicts, None, None, s, echo(phi, a, p, s, eps, n_max, None)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    /// `n` in `1..=n_max` with `phi^n P` an S-integer.
    pub integral: Vec<usize>,
    /// `log_d^+(h(phi) / h^(P))`.
    pub log_term: RealInterval,
}

fn is_s_integral(q: &ProjPoint, s: &PlaceSet) -> bool {
    if q.is_infinity() {
        return false;
    }
    let mut den = q.y().clone();
    for prime in s.primes() {
        den = strip_factor(&den, &BigInt::from(prime)).0;
    }
    den.is_one()
}

/// S-integral points among `phi^n P`, `1 <= n <= n_max`.
pub fn integral_census(
    phi: &RationalMap,
    p: &ProjPoint,
    s: &PlaceSet,
    n_max: usize,
    height_budget_bits: u64,
) -> Result<CensusReport> {
    if phi.second_iterate_is_polynomial() {
        return Err(Error::SecondIteratePolynomial);
    }
    if phi.is_preperiodic(p) {
        return Err(Error::PreperiodicStart);
    }
    let orbit = phi.orbit(p, n_max, height_budget_bits)?;
    let integral = orbit
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, q)| is_s_integral(q, s))
        .map(|(n, _)| n)
        .collect();
    let hp = positive_hhat(phi, p, 24)?;
    let log_term = log_d_plus(&map_height(phi).enclose(40), &hp, phi.degree(), 40);
    Ok(CensusReport { integral, log_term })
}

/// Canonical height of a wandering point, refined until bounded away from 0.
fn positive_hhat(phi: &RationalMap, p: &ProjPoint, start_bits: u64) -> Result<RealInterval> {
    let mut bits = start_bits;
    loop {
        let h = hhat_at(phi, p, bits)?;
        if h.is_positive() {
            return Ok(h);
        }
        bits *= 2;
        if bits > interval::DEFAULT_CAP_BITS {
            return Err(Error::PreperiodicStart);
        }
    }
}

/// `[log_d^+(num.lo / den.hi), log_d^+(num.hi / den.lo)]` with
/// `log^+ x = max(0, log x)`, for `den > 0` and `num >= 0`.
fn log_d_plus(num: &RealInterval, den: &RealInterval, d: usize, prec: u64) -> RealInterval {
    let lnd = interval::ln_uint(&(d as u64).into(), prec + 8);
    let one = Dyadic::from_int(1);
    let part = |x: &Dyadic, y: &Dyadic, up: bool| -> Dyadic {
        let r = if up { x.div_ceil(y, prec + 8) } else { x.div_floor(y, prec + 8) };
        if r <= one {
            return Dyadic::zero();
        }
        let l = interval::ln_dyadic(&r, prec + 8);
        let q = if up { l.div(&lnd, prec + 8).unwrap().hi().clone() } else { l.div(&lnd, prec + 8).unwrap().lo().clone() };
        q.max(Dyadic::zero())
    };
    let lo_num = num.lo().clone().max(Dyadic::zero());
    RealInterval::new(part(&lo_num, den.hi(), false), part(num.hi(), den.lo(), true))
}

/// Enclosure of `log_d^+((h(phi) + h^(A)) / h^(P))` of width at most `tol`.
pub fn bound_log_term(phi: &RationalMap, a: &ProjPoint, p: &ProjPoint, tol: &Dyadic) -> Result<RealInterval> {
    if phi.is_preperiodic(p) {
        return Err(Error::PreperiodicStart);
    }
    let hphi = map_height(phi);
    let a_pre = phi.is_preperiodic(a);
    let mut bits = 24u64;
    loop {
        let hp = positive_hhat(phi, p, bits)?;
        let ha = if a_pre { RealInterval::zero() } else { hhat_at(phi, a, bits)? };
        let num = &hphi.enclose(bits + 8) + &ha;
        let r = log_d_plus(&num, &hp, phi.degree(), bits + 8);
        if r.width() <= *tol {
            return Ok(r);
        }
        bits *= 2;
        if bits > interval::DEFAULT_CAP_BITS {
            return Err(Error::PrecisionCapReached);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemarkCount {
    Count(u64),
    Unresolved,
}

/// For `phi = z^d + z^(d-1)`, `A = 0`, `P = p`, `S = {p}`: the number of
/// `n >= 0` with `(d-1)^n log p >= eps d^n h^(p)`, i.e.
/// `max(0, floor(log(log p / (eps h^)) / log(d / (d-1))) + 1)`.
pub fn remark_count(d: u64, p: u64, eps: &BigRational, hhat: &RealInterval) -> Result<RemarkCount> {
    assert!(d >= 2, "degree must be at least 2");
    if !hhat.is_positive() {
        return Err(Error::NonpositiveHeight);
    }
    check_epsilon(eps)?;
    let width_bits = hhat
        .width()
        .log2_floor()
        .map_or(64, |l| (-l).max(0) as u64);
    let prec = width_bits + 64;
    let lnp = interval::ln_uint(&p.into(), prec);
    let denom = hhat.scale_rational(eps, prec);
    let ratio = lnp.div(&denom, prec).expect("positive denominator");
    let ln_ratio = ratio.ln(prec).expect("positive ratio");
    let ln_base = interval::ln_rational(&BigRational::new(d.into(), (d - 1).into()), prec);
    let x = ln_ratio.div(&ln_base, prec).expect("d/(d-1) > 1");
    let (lo, hi) = (x.lo().floor(), x.hi().floor());
    if lo != hi {
        return Ok(RemarkCount::Unresolved);
    }
    let c: BigInt = (lo + BigInt::one()).max(BigInt::zero());
    Ok(RemarkCount::Count(c.to_u64().expect("count fits in u64")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvFunRecord {
    /// `sum_{v in S} max_{A'} e_{A'}(psi) lambda_v(P, A')`.
    pub lhs: ExtLogReal,
    /// `sum_{v in S} lambda_v(psi(P), A)`.
    pub rhs: ExtLogReal,
    /// `lhs - rhs`; absent unless both sides are finite.
    pub residual: Option<LogLinearReal>,
    /// `h(A) + h(psi) + 1`, the scale of the implied constant.
    pub scale: RealInterval,
}

/// Both sides of the inverse-image distance estimate, for rational fibers.
pub fn inv_fun_report(psi: &RationalMap, a: &ProjPoint, p: &ProjPoint, s: &PlaceSet) -> Result<InvFunRecord> {
    let fiber: Vec<(ProjPoint, u32)> = psi
        .fiber_data(a)
        .iter()
        .map(|(pt, e)| pt.rational_point().map(|q| (q, *e)).ok_or(Error::RationalFiberRequired))
        .collect::<Result<_>>()?;
    let mut lhs = ExtLogReal::Finite(LogLinearReal::zero());
    for v in s.iter() {
        let best = fiber
            .iter()
            .map(|(q, e)| chordal_log(p, q, v).scale_int(*e as u64))
            .reduce(ExtLogReal::max)
            .expect("fibers are nonempty");
        lhs = &lhs + &best;
    }
    let rhs = lambda_sum(&psi.evaluate(p), a, s);
    let residual = match (&lhs, &rhs) {
        (ExtLogReal::Finite(l), ExtLogReal::Finite(r)) => Some(l - r),
        _ => None,
    };
    let scale = &(&naive_height(a) + &map_height(psi)).enclose(40) + &RealInterval::from_int(1);
    Ok(InvFunRecord { lhs, rhs, residual, scale })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    /// Entry `m - 1`: largest ramification index of `phi^m` over `Q`.
    pub max_multiplicity: Vec<u32>,
    /// Largest integer not exceeding `e^(2d - 2)`.
    pub bound: u64,
    /// Whether `Q` was certified wandering (only then are violations flagged).
    pub wandering: bool,
    /// Values of `m` whose multiplicity exceeds the bound.
    pub violations: Vec<u32>,
}

/// `floor(e^k)` for `k >= 1`, decided with certified logarithms.
fn floor_exp(k: u64) -> u64 {
    let below = |n: u64| -> bool {
        // ln n < k? ln of an integer > 1 is never an integer.
        let mut prec = 32;
        loop {
            let l = interval::ln_uint(&n.into(), prec);
            if *l.hi() < Dyadic::from_int(k) {
                return true;
            }
            if *l.lo() > Dyadic::from_int(k) {
                return false;
            }
            prec *= 2;
        }
    };
    let mut hi = 2u64;
    while below(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // below(lo) holds, below(hi) fails.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest fiber multiplicity of `phi^m` over `Q` for `m = 1..=m_max`.
pub fn ramification_growth(phi: &RationalMap, q: &ProjPoint, m_max: u32, degree_budget: u64) -> Result<GrowthReport> {
    if phi.is_exceptional(q) {
        return Err(Error::ExceptionalTarget);
    }
    let mut values = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let it = phi.iterate(m, degree_budget)?;
        values.push(it.max_fiber_multiplicity(q));
    }
    let bound = floor_exp(2 * phi.degree() as u64 - 2);
    let wandering = !phi.is_preperiodic(q);
    let violations = if wandering {
        (1..=m_max).filter(|m| values[*m as usize - 1] as u64 > bound).collect()
    } else {
        Vec::new()
    };
    Ok(GrowthReport { max_multiplicity: values, bound, wandering, violations })
}

/// True iff the fiber consists of rational points only.
pub fn fiber_is_rational(psi: &RationalMap, a: &ProjPoint) -> bool {
    psi.fiber_data(a).iter().all(|(pt, _)| matches!(pt, FiberPoint::Infinity) || pt.degree() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projpoint::make_point;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn pt(x: i64, y: i64) -> ProjPoint {
        make_point(x, y).unwrap()
    }

    fn map(f: &[i64], g: &[i64]) -> RationalMap {
        RationalMap::from_i64(f, g).unwrap()
    }

    fn places(arch: bool, primes: &[u64]) -> PlaceSet {
        PlaceSet::from_primes(arch, primes).unwrap()
    }

    #[test]
    fn quasi_integral_examples() {
        let one = q(1, 1);
        assert!(quasi_integral_test(&q(1, 6), &places(false, &[2, 3]), &one).unwrap());
        assert!(!quasi_integral_test(&q(1, 6), &places(false, &[2]), &one).unwrap());
        assert!(quasi_integral_test(&q(5, 1), &places(true, &[]), &one).unwrap());
        assert!(quasi_integral_test(&q(0, 1), &places(true, &[]), &one).unwrap());
        assert_eq!(quasi_integral_test(&q(5, 1), &places(true, &[]), &q(3, 2)), Err(Error::InvalidEpsilon));
    }

    #[test]
    fn lambda_sum_examples() {
        assert_eq!(
            lambda_sum(&pt(12, 1), &pt(0, 1), &places(false, &[3])),
            ExtLogReal::Finite(LogLinearReal::log_int(3u32))
        );
        assert!(lambda_sum(&pt(5, 7), &pt(5, 7), &places(true, &[2])).is_infinite());
        assert_eq!(
            lambda_sum(&pt(2, 1), &ProjPoint::infinity(), &places(true, &[])),
            ExtLogReal::Finite(LogLinearReal::log_int(5u32).scale(&q(1, 2)))
        );
    }

    #[test]
    fn padic_valuations_match_exact_orbit() {
        let phi = map(&[3, 0, 2], &[-7, 5]);
        let p = pt(1, 3);
        let a = pt(2, 5);
        let orbit = phi.orbit(&p, 6, 1 << 20).unwrap();
        for prime in [2u64, 3, 5, 7] {
            let vals = padic_orbit_valuations(&phi, &p, &a, prime, 6, 400);
            for (n, qn) in orbit.iter().enumerate() {
                let delta = qn.cross(&a);
                let exact = strip_factor(&delta, &BigInt::from(prime)).1;
                assert_eq!(vals[n], PadicVal::Exact(exact), "p = {prime}, n = {n}");
            }
        }
    }

    #[test]
    fn remark_count_examples() {
        let h = |mid: &str, rad_exp: i64| {
            let m: BigRational = {
                let (i, f) = mid.split_once('.').unwrap();
                BigRational::new(format!("{i}{f}").parse().unwrap(), num_traits::pow(BigInt::from(10), f.len()))
            };
            let r = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), rad_exp as usize));
            RealInterval::new(Dyadic::from_rational_floor(&(&m - &r), 80), Dyadic::from_rational_ceil(&(&m + &r), 80))
        };
        assert_eq!(remark_count(2, 3, &q(1, 100), &h("1.2632", 6)).unwrap(), RemarkCount::Count(7));
        assert_eq!(remark_count(2, 3, &q(1, 1), &h("1.2632", 6)).unwrap(), RemarkCount::Count(0));
        assert_eq!(remark_count(3, 3, &q(1, 100), &h("1.197", 4)).unwrap(), RemarkCount::Count(12));
        assert_eq!(remark_count(2, 3, &q(1, 100), &RealInterval::zero()), Err(Error::NonpositiveHeight));
    }

    #[test]
    fn floor_exp_values() {
        assert_eq!(floor_exp(1), 2);
        assert_eq!(floor_exp(2), 7);
        assert_eq!(floor_exp(4), 54);
        assert_eq!(floor_exp(6), 403);
    }
}
