//! Factorization of univariate polynomials over Q (Zassenhaus).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Rat;
use super::poly::Poly;
use crate::error::{PolarError, Result};

/// Squarefree factorization: monic, pairwise coprime, squarefree factors
/// with multiplicities whose product equals `p` up to a unit.
pub fn squarefree_factor(p: &Poly<Rat>) -> Result<Vec<(Poly<Rat>, usize)>> {
    if p.is_zero() {
        return Err(PolarError::ZeroPolynomial);
    }
    Ok(p.squarefree_decomposition())
}

/// Complete factorization `p = c · Π f_i^{e_i}` with `f_i` monic irreducible,
/// sorted by degree and then coefficients.
pub fn factor_rational(p: &Poly<Rat>) -> (Rat, Vec<(Poly<Rat>, usize)>) {
    assert!(!p.is_zero(), "factoring the zero polynomial");
    let c = p.lc();
    let mut out = Vec::new();
    for (g, e) in p.squarefree_decomposition() {
        for h in factor_squarefree(&g) {
            out.push((h, e));
        }
    }
    out.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.cmp(&b.0)));
    (c, out)
}

pub fn is_irreducible(p: &Poly<Rat>) -> bool {
    if p.deg() < 1 {
        return false;
    }
    let (_, f) = factor_rational(p);
    f.len() == 1 && f[0].1 == 1
}

/// Number of irreducible factors of `p` modulo the prime `q` (diagnostics).
pub fn factor_mod_p_count(p: &Poly<Rat>, q: u64) -> Option<usize> {
    let z = primitive_integer(&p.monic());
    let f = reduce(&z, q);
    if f.len() != z.len() {
        return None;
    }
    let f = zp_monic(&f, q);
    if zp_deg(&zp_gcd(&f, &zp_deriv(&f, q), q)) != 0 {
        return None;
    }
    Some(factor_mod_prime(&f, q).len())
}

/// Monic irreducible factors of a monic squarefree polynomial.
fn factor_squarefree(g: &Poly<Rat>) -> Vec<Poly<Rat>> {
    let g = g.monic();
    if g.deg() <= 1 {
        return vec![g];
    }
    let z = primitive_integer(&g);
    let n = z.len() - 1;
    let a = z[n].clone();
    // H(y) = a^{n-1} G(y/a) is monic with integer coefficients.
    let mut h = Vec::with_capacity(n + 1);
    for (i, c) in z.iter().enumerate() {
        if i == n {
            h.push(BigInt::one());
        } else {
            h.push(c * num_traits::pow(a.clone(), n - 1 - i));
        }
    }
    let factors = zassenhaus_monic(&h);
    factors
        .into_iter()
        .map(|f| {
            // f(y) with y = a x; take the monic rational version.
            let cs: Vec<Rat> =
                f.iter().enumerate().map(|(i, c)| Rat::from_integer(c * num_traits::pow(a.clone(), i))).collect();
            Poly::new(cs).monic()
        })
        .collect()
}

/// Clears denominators and content; result has positive leading coefficient.
fn primitive_integer(g: &Poly<Rat>) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in g.coeffs() {
        l = l.lcm(c.denom());
    }
    let mut v: Vec<BigInt> = g.coeffs().iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
    let mut cont = BigInt::zero();
    for c in &v {
        cont = cont.gcd(c);
    }
    if !cont.is_zero() {
        for c in v.iter_mut() {
            *c = &*c / &cont;
        }
    }
    if v.last().is_some_and(|c| c.is_negative()) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

const PRIMES: [u64; 24] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn zassenhaus_monic(h: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = h.len() - 1;
    if n == 1 {
        return vec![h.to_vec()];
    }
    // Pick the good prime with the fewest modular factors among the first few.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for &p in PRIMES.iter().chain([101u64, 103, 107, 109, 113, 127, 131, 137, 139, 149].iter()) {
        let f = reduce(h, p);
        if zp_deg(&zp_gcd(&f, &zp_deriv(&f, p), p)) != 0 {
            continue;
        }
        let facs = factor_mod_prime(&f, p);
        if facs.len() == 1 {
            return vec![h.to_vec()];
        }
        if best.as_ref().is_none_or(|b| facs.len() < b.1.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, facs) = best.expect("a good prime exists for squarefree input");
    // Coefficient bound for monic factors: 2^n times the l1 norm.
    let l1: BigInt = h.iter().map(|c| c.abs()).sum();
    let bound = l1 * num_traits::pow(BigInt::from(2), n) * 2 + 1;
    let mut k = 1u32;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_multi(h, facs, p, k);
    recombine(h, lifted, &modulus)
}

fn recombine(h: &[BigInt], mut lifted: Vec<Vec<BigInt>>, m: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut rest: Poly<Rat> = Poly::new(h.iter().map(|c| Rat::from_integer(c.clone())).collect());
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let r = lifted.len();
        let mut found = false;
        for subset in combinations(r, s) {
            let mut prod = vec![BigInt::one()];
            for &i in &subset {
                prod = symmetric(&int_mul(&prod, &lifted[i]), m);
            }
            let cand: Poly<Rat> = Poly::new(prod.iter().map(|c| Rat::from_integer(c.clone())).collect());
            if let Some(q) = rest.exact_div(&cand) {
                if q.coeffs().iter().all(|c| c.is_integer()) {
                    out.push(prod);
                    rest = q;
                    let mut keep = Vec::new();
                    for (i, f) in lifted.into_iter().enumerate() {
                        if !subset.contains(&i) {
                            keep.push(f);
                        }
                    }
                    lifted = keep;
                    found = true;
                    break;
                }
            }
        }
        if !found {
            s += 1;
        }
    }
    if !rest.is_constant() {
        out.push(rest.coeffs().iter().map(|c| c.to_integer()).collect());
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half: BigInt = m / 2;
    let mut v: Vec<BigInt> = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn reduce(a: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    zp_trim(&mut v);
    v
}

fn lift_zp(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `h ≡ Π facs (mod p)` to a factorization modulo `p^k` (monic factors).
fn hensel_multi(h: &[BigInt], facs: Vec<Vec<u64>>, p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if facs.len() == 1 {
        return vec![h.to_vec()];
    }
    let first = facs[0].clone();
    let mut rest = vec![1u64];
    for f in &facs[1..] {
        rest = zp_mul(&rest, f, p);
    }
    let (g, hh) = hensel_pair(h, &first, &rest, p, k);
    let mut out = vec![g];
    out.extend(hensel_multi(&hh, facs[1..].to_vec(), p, k));
    out
}

fn hensel_pair(h: &[BigInt], g0: &[u64], h0: &[u64], p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (gg, s, t) = zp_ext_gcd(g0, h0, p);
    debug_assert_eq!(gg, vec![1]);
    let pb = BigInt::from(p);
    let mut g = lift_zp(g0);
    let mut hh = lift_zp(h0);
    let mut pj = pb.clone();
    for _ in 1..k {
        let prod = int_mul(&g, &hh);
        let mut e: Vec<BigInt> = (0..h.len().max(prod.len()))
            .map(|i| h.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default())
            .collect();
        for c in e.iter_mut() {
            debug_assert!((&*c % &pj).is_zero());
            *c = &*c / &pj;
        }
        let e = reduce(&e, p);
        let dg = zp_rem(&zp_mul(&t, &e, p), g0, p);
        let dh = zp_rem(&zp_mul(&s, &e, p), h0, p);
        for (i, c) in dg.iter().enumerate() {
            g[i] += &pj * BigInt::from(*c);
        }
        for (i, c) in dh.iter().enumerate() {
            hh[i] += &pj * BigInt::from(*c);
        }
        pj *= &pb;
    }
    (g, hh)
}

// ---- arithmetic in F_p[x], coefficient vectors low degree first ----

fn zp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn zp_deg(v: &[u64]) -> i64 {
    v.len() as i64 - 1
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn zp_monic(a: &[u64], p: u64) -> Vec<u64> {
    let inv = inv_mod(*a.last().unwrap(), p);
    a.iter().map(|c| c * inv % p).collect()
}

fn zp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (0..a.len().max(b.len()))
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    zp_trim(&mut v);
    v
}

fn zp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    zp_trim(&mut r);
    r
}

fn zp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    zp_trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bc % p) % p;
        }
        q[i] = c;
    }
    r.truncate(db);
    zp_trim(&mut r);
    zp_trim(&mut q);
    (q, r)
}

fn zp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    zp_divrem(a, b, p).1
}

fn zp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    zp_trim(&mut a);
    zp_trim(&mut b);
    while !b.is_empty() {
        let r = zp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        zp_monic(&a, p)
    }
}

fn zp_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = zp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = zp_sub(&s0, &zp_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = zp_sub(&t0, &zp_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &[u64]| -> Vec<u64> {
        let mut w: Vec<u64> = v.iter().map(|c| c * inv % p).collect();
        zp_trim(&mut w);
        w
    };
    (sc(&r0), sc(&s0), sc(&t0))
}

fn zp_deriv(a: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect();
    zp_trim(&mut v);
    v
}

fn zp_powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let b = zp_rem(base, m, p);
    for i in (0..e.bits()).rev() {
        r = zp_rem(&zp_mul(&r, &r, p), m, p);
        if e.bit(i) {
            r = zp_rem(&zp_mul(&r, &b, p), m, p);
        }
    }
    r
}

/// Irreducible monic factors of a monic squarefree polynomial over F_p.
fn factor_mod_prime(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 1usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    while zp_deg(&rest) >= 2 * d as i64 {
        h = zp_powmod(&h, &BigUint::from(p), &rest, p);
        let g = zp_gcd(&zp_sub(&h, &x, p), &rest, p);
        if zp_deg(&g) > 0 {
            equal_degree(&g, d, p, &mut rng, &mut out);
            rest = zp_divrem(&rest, &g, p).0;
            h = zp_rem(&h, &rest, p);
        }
        d += 1;
    }
    if zp_deg(&rest) > 0 {
        out.push(zp_monic(&rest, p));
    }
    out.sort();
    out
}

fn equal_degree(g: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
    let n = zp_deg(g) as usize;
    if n == d {
        out.push(zp_monic(g, p));
        return;
    }
    let e = (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32;
    loop {
        let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        zp_trim(&mut a);
        if zp_deg(&a) < 1 {
            continue;
        }
        let b = zp_sub(&zp_powmod(&a, &e, g, p), &[1], p);
        let c = zp_gcd(&b, g, p);
        let dc = zp_deg(&c);
        if dc > 0 && (dc as usize) < n {
            let other = zp_divrem(g, &c, p).0;
            equal_degree(&c, d, p, rng, out);
            equal_degree(&other, d, p, rng, out);
            return;
        }
    }
}
