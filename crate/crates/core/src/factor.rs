//! Factorization of squarefree integer polynomials (Zassenhaus): Berlekamp
//! splitting modulo a small prime, linear Hensel lifting, then recombination
//! of lifted factors by trial division.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, symmetric_mod};
use crate::poly::IntPoly;

// ---- arithmetic in F_p[z], p < 2^31, coefficients low to high ----

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, p as i64, a as i64);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i64) as u64
}

fn reduce(f: &IntPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn fp_add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c != 0 {
            for (i, &y) in b.iter().enumerate() {
                r[k + i] = (r[k + i] + p - c * y % p) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    let inv = inv_mod(*a.last().unwrap(), p);
    a.iter().map(|&c| c * inv % p).collect()
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        fp_monic(&a, p)
    }
}

/// Returns `(g, s, t)` with `s a + t b = g` monic.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &Fp| trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

/// Nullspace basis of a square matrix over F_p (rows are vectors `v` with
/// `v M = 0`).
fn left_nullspace(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    // Solve M^T x = 0 by Gaussian elimination on the transpose.
    let n = m.len();
    let mut a: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let mut pivot_col = vec![usize::MAX; n];
    let mut row = 0;
    let mut is_pivot = vec![false; n];
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = inv_mod(a[row][col], p);
        for c in 0..n {
            a[row][c] = a[row][c] * inv % p;
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..n {
                    a[r][c] = (a[r][c] + p - f * a[row][c] % p) % p;
                }
            }
        }
        pivot_col[row] = col;
        is_pivot[col] = true;
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for r in 0..row {
            v[pivot_col[r]] = (p - a[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Monic irreducible factors of a squarefree monic `f` over F_p.
fn berlekamp(f: &Fp, p: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // Row i holds z^(ip) mod f.
    let xp = {
        let mut acc: Fp = vec![1];
        let mut base: Fp = vec![0, 1];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_divrem(&fp_mul(&acc, &base, p), f, p).1;
            }
            base = fp_divrem(&fp_mul(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    };
    let mut q = Vec::with_capacity(n);
    let mut cur: Fp = vec![1];
    for i in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        row[i] = (row[i] + p - 1) % p;
        q.push(row);
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    let basis = left_nullspace(&q, p);
    let r = basis.len();
    let mut factors = vec![f.clone()];
    for v in &basis {
        if factors.len() == r {
            break;
        }
        let v = trim(v.clone());
        if v.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for u in factors {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut rest = u;
            for s in 0..p {
                if rest.len() <= 2 {
                    break;
                }
                let shifted = fp_sub(&v, &vec![s], p);
                let g = fp_gcd(&rest, &shifted, p);
                if g.len() > 1 && g.len() < rest.len() {
                    rest = fp_monic(&fp_divrem(&rest, &g, p).0, p);
                    next.push(g);
                }
            }
            next.push(rest);
        }
        factors = next;
    }
    debug_assert_eq!(factors.len(), r);
    factors
}

// ---- Hensel lifting over Z / p^k, coefficients as BigInt ----

fn big(a: &Fp) -> IntPoly {
    IntPoly::new(a.iter().map(|&c| BigInt::from(c)).collect())
}

fn mod_poly(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

/// Lifts `f = g h mod p` (g monic, `lc(h) = lc(f)`) to a factorization
/// modulo `p^k`.
fn hensel_pair(f: &IntPoly, g: &Fp, h: &Fp, p: u64, k: u32) -> (IntPoly, IntPoly) {
    let (one, s, t) = fp_xgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut g_l = big(g);
    let mut h_l = {
        let mut c = big(h).coeffs().to_vec();
        *c.last_mut().unwrap() = f.lc();
        IntPoly::new(c)
    };
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let diff = mod_poly(&(f - &(&g_l * &h_l)), &next);
        let e = reduce(&diff.div_scalar_exact(&pj), p);
        let et = fp_mul(&e, &t, p);
        let (qq, dg) = fp_divrem(&et, g, p);
        let dh = fp_add(&fp_mul(&e, &s, p), &fp_mul(&qq, h, p), p);
        g_l = mod_poly(&(&g_l + &big(&dg).scale(&pj)), &next);
        h_l = mod_poly(&(&h_l + &big(&dh).scale(&pj)), &next);
        pj = next;
    }
    (g_l, h_l)
}

/// Factors `f` modulo `p^k` into monic lifts of the given monic factors
/// modulo `p` (whose product is `f / lc(f)` mod p).
fn hensel_multi(f: &IntPoly, mods: &[Fp], p: u64, k: u32) -> Vec<IntPoly> {
    let pk = BigInt::from(p).pow(k);
    let mut out = Vec::with_capacity(mods.len());
    let mut cur = mod_poly(f, &pk);
    for (i, g) in mods.iter().enumerate() {
        if i + 1 == mods.len() {
            // Remaining cofactor: make it monic modulo p^k.
            let lc = cur.lc();
            let inv = lc.modpow(&(&pk - BigInt::one() - (&pk / BigInt::from(p))), &pk);
            // Euler: lc^(phi(p^k) - 1) is the inverse.
            out.push(mod_poly(&cur.scale(&inv), &pk));
            break;
        }
        let rest: Fp = mods[i + 1..]
            .iter()
            .fold(vec![reduce(&IntPoly::constant(cur.lc()), p)[0]], |acc, m| fp_mul(&acc, m, p));
        let (gl, hl) = hensel_pair(&cur, g, &rest, p, k);
        out.push(gl);
        cur = hl;
    }
    out
}

fn choose_prime(f: &IntPoly) -> (u64, Vec<Fp>) {
    let lc = f.lc();
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 5 {
        p += 1;
        if !is_prime(p) || (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce(f, p);
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        tried += 1;
        let facs = berlekamp(&fp_monic(&fp, p), p);
        if best.as_ref().is_none_or(|b| facs.len() < b.1.len()) {
            best = Some((p, facs));
        }
        if best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    best.unwrap()
}

/// Irreducible factors over Q of a primitive squarefree `f`, each primitive
/// with positive leading coefficient.
pub(crate) fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let mut f = f.primitive_part();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    // Pull out the factor z so the constant-term test below stays useful.
    if f.coeff(0).is_zero() {
        out.push(IntPoly::x());
        f = f.div_exact(&IntPoly::x()).unwrap();
    }
    if f.deg() <= 1 {
        if f.deg() == 1 {
            out.push(f);
        }
        return out;
    }
    let (p, mods) = choose_prime(&f);
    if mods.len() == 1 {
        out.push(f);
        return out;
    }
    let n = f.deg() as u32;
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let bound = (norm2.sqrt() + BigInt::one()) << n;
    let target = bound * f.lc().abs() * 2u32;
    let mut k = 1;
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    while pk <= target {
        pk *= &pb;
        k += 1;
    }
    let mut lifted = hensel_multi(&f, &mods, p, k);

    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), size) {
            let lc = f.lc();
            let mut g = IntPoly::constant(lc.clone());
            for &i in &subset {
                g = mod_poly(&(&g * &lifted[i]), &pk);
            }
            let g = IntPoly::new(g.coeffs().iter().map(|c| symmetric_mod(c, &pk)).collect());
            // Cheap constant-term screen before full division.
            let c0 = g.coeff(0);
            if !c0.is_zero() && !(&(f.coeff(0) * &lc) % &c0).is_zero() {
                continue;
            }
            let g = g.primitive_part();
            if let Some(q) = f.div_exact(&g) {
                out.push(g);
                f = q.primitive_part();
                let mut j = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&j);
                    j += 1;
                    keep
                });
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.deg() > 0 {
        out.push(f);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn sorted(mut v: Vec<IntPoly>) -> Vec<IntPoly> {
        v.sort();
        v
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn known_factorizations() {
        // z^4 + 1 is irreducible over Q but splits modulo every prime.
        assert_eq!(factor_squarefree(&p(&[1, 0, 0, 0, 1])), vec![p(&[1, 0, 0, 0, 1])]);
        let f = &(&p(&[-2, 0, 1]) * &p(&[1, 1, 1])) * &p(&[3, -5]);
        assert_eq!(
            sorted(factor_squarefree(&f)),
            sorted(vec![p(&[-2, 0, 1]), p(&[1, 1, 1]), p(&[-3, 5])])
        );
        // z^8 - 1 = (z-1)(z+1)(z^2+1)(z^4+1)
        assert_eq!(
            sorted(factor_squarefree(&p(&[-1, 0, 0, 0, 0, 0, 0, 0, 1]))),
            sorted(vec![p(&[-1, 1]), p(&[1, 1]), p(&[1, 0, 1]), p(&[1, 0, 0, 0, 1])])
        );
        assert_eq!(
            sorted(factor_squarefree(&p(&[0, -1, 0, 1]))),
            sorted(vec![p(&[0, 1]), p(&[-1, 1]), p(&[1, 1])])
        );
    }

    /// Independent oracle for linear factors: rational-root search.
    fn rational_roots(f: &IntPoly) -> usize {
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            let n = n.abs();
            let mut d = Vec::new();
            let mut i = BigInt::one();
            while &i * &i <= n {
                if (&n % &i).is_zero() {
                    d.push(i.clone());
                    d.push(&n / &i);
                }
                i += 1;
            }
            d
        };
        let mut count = 0;
        let mut seen = Vec::new();
        if f.coeff(0).is_zero() {
            count += 1;
            seen.push((BigInt::zero(), BigInt::one()));
        }
        let c0 = f.coeffs().iter().find(|c| !c.is_zero()).unwrap().clone();
        for a in divisors(&c0) {
            for b in divisors(&f.lc()) {
                for a in [a.clone(), -a.clone()] {
                    let g = a.gcd(&b);
                    let key = (&a / &g, &b / &g);
                    if seen.contains(&key) {
                        continue;
                    }
                    if f.eval_homogeneous(&key.0, &key.1).is_zero() {
                        seen.push(key);
                        count += 1;
                    }
                }
            }
        }
        count
    }

    proptest! {
        #[test]
        fn factors_reassemble_and_match_root_oracle(
            a in proptest::collection::vec(-30i64..30, 2..5),
            b in proptest::collection::vec(-30i64..30, 2..5),
            c in proptest::collection::vec(-30i64..30, 2..4),
        ) {
            let f = &(&p(&a) * &p(&b)) * &p(&c);
            prop_assume!(f.deg() >= 1);
            let sf = f.primitive_part();
            prop_assume!(sf.gcd(&sf.derivative()).deg() == 0);
            let facs = factor_squarefree(&sf);
            let mut prod = IntPoly::one();
            for g in &facs {
                prop_assert!(g.deg() >= 1);
                prop_assert!(g.lc().is_positive());
                prod = &prod * g;
            }
            prop_assert_eq!(prod.primitive_part(), sf.clone());
            let linear = facs.iter().filter(|g| g.deg() == 1).count();
            prop_assert_eq!(linear, rational_roots(&sf));
            // Nothing of degree <= 3 coming back can have a rational root.
            for g in facs.iter().filter(|g| g.deg() >= 2 && g.deg() <= 3) {
                prop_assert_eq!(rational_roots(g), 0);
            }
        }
    }
}
