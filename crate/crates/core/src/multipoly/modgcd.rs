//! Multivariate gcd over ℤ by dense modular images (Brown's algorithm):
//! gcds modulo word-size primes, computed by evaluating variables away and
//! interpolating back, combined by Chinese remaindering and confirmed by
//! exact trial division.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{exact_divide, Monomial, MultiPoly, Rational};

type Mon = Vec<u32>;
/// Dense univariate polynomial mod p, ascending, no trailing zeros.
type Up = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^61, descending.
fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 61) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

fn reduce_int(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

fn trim(mut a: Up) -> Up {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn u_eval(a: &Up, x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| addmod(mulmod(acc, x, p), c, p))
}

fn u_deg(a: &Up) -> usize {
    a.len().saturating_sub(1)
}

fn u_mul(a: &Up, b: &Up, p: u64) -> Up {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(x, y, p), p);
        }
    }
    trim(out)
}

fn u_divrem(a: &Up, b: &Up, p: u64) -> (Up, Up) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = invmod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = mulmod(r[k + b.len() - 1], inv, p);
        q[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = submod(r[k + j], mulmod(c, bj, p), p);
            }
        }
    }
    r.truncate(b.len() - 1);
    (trim(q), trim(r))
}

fn u_monic(a: &Up, p: u64) -> Up {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = invmod(l, p);
            a.iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

fn u_gcd(a: &Up, b: &Up, p: u64) -> Up {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = u_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    u_monic(&a, p)
}

/// Sparse polynomial mod p in `n` variables; terms sorted lex-descending.
#[derive(Clone, Debug, PartialEq)]
struct Mp {
    n: usize,
    terms: Vec<(Mon, u64)>,
}

impl Mp {
    fn from_map(n: usize, map: BTreeMap<Mon, u64>) -> Self {
        Mp { n, terms: map.into_iter().rev().filter(|(_, c)| *c != 0).collect() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }

    fn lc(&self) -> u64 {
        self.terms[0].1
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    fn scale(&self, c: u64, p: u64) -> Mp {
        Mp { n: self.n, terms: self.terms.iter().map(|(m, x)| (m.clone(), mulmod(*x, c, p))).collect() }
    }

    /// Coefficients in the last variable, keyed by the remaining exponents.
    fn split_last(&self) -> BTreeMap<Mon, Up> {
        let mut out: BTreeMap<Mon, Up> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m[self.n - 1] as usize;
            let u = out.entry(m[..self.n - 1].to_vec()).or_default();
            if u.len() <= e {
                u.resize(e + 1, 0);
            }
            u[e] = *c;
        }
        out
    }

    fn from_split(n: usize, parts: &BTreeMap<Mon, Up>) -> Mp {
        let mut map = BTreeMap::new();
        for (k, u) in parts {
            for (e, &c) in u.iter().enumerate() {
                if c != 0 {
                    let mut m = k.clone();
                    m.push(e as u32);
                    map.insert(m, c);
                }
            }
        }
        Mp::from_map(n, map)
    }
}

fn eval_split(parts: &BTreeMap<Mon, Up>, n: usize, alpha: u64, p: u64) -> Mp {
    let mut map = BTreeMap::new();
    for (k, u) in parts {
        let v = u_eval(u, alpha, p);
        if v != 0 {
            map.insert(k.clone(), v);
        }
    }
    Mp::from_map(n - 1, map)
}

/// Some gcd of `f` and `g` mod p (unnormalized scalar).
fn gcd_modp(f: &Mp, g: &Mp, p: u64, seed: &mut u64) -> Mp {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    let n = f.n;
    if n == 1 {
        let (fs, gs) = (f.split_last(), g.split_last());
        let h = u_gcd(&fs[&Vec::new()], &gs[&Vec::new()], p);
        let mut parts = BTreeMap::new();
        parts.insert(Vec::new(), h);
        return Mp::from_split(1, &parts);
    }
    let (mut fs, mut gs) = (f.split_last(), g.split_last());
    let cont = |s: &BTreeMap<Mon, Up>| s.values().fold(Vec::new(), |acc, u| u_gcd(&acc, u, p));
    let (cf, cg) = (cont(&fs), cont(&gs));
    let c = u_gcd(&cf, &cg, p);
    for u in fs.values_mut() {
        *u = u_divrem(u, &cf, p).0;
    }
    for u in gs.values_mut() {
        *u = u_divrem(u, &cg, p).0;
    }
    let lcf = fs.iter().next_back().unwrap().1.clone();
    let lcg = gs.iter().next_back().unwrap().1.clone();
    let gamma = u_gcd(&lcf, &lcg, p);
    let gamma = if gamma.is_empty() { vec![1] } else { gamma };
    let dmax = |s: &BTreeMap<Mon, Up>| s.values().map(u_deg).max().unwrap_or(0);
    let bound = u_deg(&gamma) + dmax(&fs).min(dmax(&gs)) + 1;
    let mut points: Vec<(u64, Mp)> = Vec::new();
    let mut best: Option<Mon> = None;
    let mut guard = 0;
    while points.len() < bound {
        guard += 1;
        if guard > 4 * bound + 64 {
            break;
        }
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let alpha = (*seed >> 3) % (p - 1) + 1;
        if u_eval(&lcf, alpha, p) == 0 || u_eval(&lcg, alpha, p) == 0 {
            continue;
        }
        let fa = eval_split(&fs, n, alpha, p);
        let ga = eval_split(&gs, n, alpha, p);
        let h = gcd_modp(&fa, &ga, p, seed);
        if h.is_constant() {
            let mut parts = BTreeMap::new();
            parts.insert(vec![0; n - 1], c);
            return Mp::from_split(n, &parts);
        }
        let lm = h.lm().to_vec();
        match &best {
            Some(b) if lm > *b => continue,
            Some(b) if lm < *b => points.clear(),
            _ => {}
        }
        best = Some(lm);
        let scale = mulmod(u_eval(&gamma, alpha, p), invmod(h.lc(), p), p);
        points.push((alpha, h.scale(scale, p)));
    }
    // Interpolate each coefficient in the last variable (Lagrange).
    let xs: Vec<u64> = points.iter().map(|(a, _)| *a).collect();
    let mut keys: BTreeMap<Mon, Vec<u64>> = BTreeMap::new();
    for (i, (_, h)) in points.iter().enumerate() {
        for (m, v) in &h.terms {
            keys.entry(m.clone()).or_insert_with(|| vec![0; xs.len()])[i] = *v;
        }
    }
    let basis = lagrange_basis(&xs, p);
    let mut parts: BTreeMap<Mon, Up> = BTreeMap::new();
    for (k, vals) in keys {
        let mut u = vec![0u64; xs.len()];
        for (v, b) in vals.iter().zip(&basis) {
            if *v == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                u[j] = addmod(u[j], mulmod(*v, bj, p), p);
            }
        }
        let u = trim(u);
        if !u.is_empty() {
            parts.insert(k, u);
        }
    }
    let pc = parts.values().fold(Vec::new(), |acc, u| u_gcd(&acc, u, p));
    for u in parts.values_mut() {
        *u = u_mul(&u_divrem(u, &pc, p).0, &c, p);
    }
    Mp::from_split(n, &parts)
}

/// Lagrange basis polynomials for the nodes `xs`.
fn lagrange_basis(xs: &[u64], p: u64) -> Vec<Up> {
    let mut full: Up = vec![1];
    for &x in xs {
        full = u_mul(&full, &vec![p - x, 1], p);
    }
    xs.iter()
        .map(|&xi| {
            let (q, _) = u_divrem(&full, &vec![(p - xi) % p, 1], p);
            let denom = u_eval(&q, xi, p);
            let inv = invmod(denom, p);
            let mut q: Up = q.iter().map(|&c| mulmod(c, inv, p)).collect();
            q.resize(xs.len(), 0);
            q
        })
        .collect()
}

fn to_mp(f: &MultiPoly, p: u64) -> Mp {
    let n = f.context().len();
    let mut map = BTreeMap::new();
    for (m, c) in f.terms() {
        let v = reduce_int(c.numer(), p);
        if v != 0 {
            map.insert(m.exponents().collect::<Mon>(), v);
        }
    }
    Mp::from_map(n, map)
}

fn symmetric(c: &BigInt, modulus: &BigInt) -> BigInt {
    let half: BigInt = modulus >> 1;
    if c > &half {
        c - modulus
    } else {
        c.clone()
    }
}

/// Gcd of two nonzero polynomials with integer coefficients, up to sign.
/// Returns `None` if the prime budget runs out (practically never).
pub(crate) fn modular_gcd(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    let ctx = f.context().clone();
    let lf = f.leading_coefficient()?.numer().clone();
    let lg = g.leading_coefficient()?.numer().clone();
    let gamma = lf.gcd(&lg);
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    let mut modulus = BigInt::one();
    let mut crt: BTreeMap<Mon, BigInt> = BTreeMap::new();
    let mut best: Option<Mon> = None;
    let mut last: Option<BTreeMap<Mon, BigInt>> = None;
    for p in primes().take(200) {
        let pb = BigInt::from(p);
        if (&lf % &pb).is_zero() || (&lg % &pb).is_zero() {
            continue;
        }
        let h = gcd_modp(&to_mp(f, p), &to_mp(g, p), p, &mut seed);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Some(MultiPoly::one(&ctx));
        }
        let lm = h.lm().to_vec();
        match &best {
            Some(b) if lm > *b => continue,
            Some(b) if lm < *b => {
                modulus = BigInt::one();
                crt.clear();
                last = None;
            }
            _ => {}
        }
        best = Some(lm);
        let h = h.scale(mulmod(reduce_int(&gamma, p), invmod(h.lc(), p), p), p);
        // Chinese remaindering coefficientwise; absent monomials are zero.
        let inv_m = invmod(reduce_int(&modulus, p), p);
        let mut image: BTreeMap<Mon, u64> = h.terms.into_iter().collect();
        let keys: Vec<Mon> = crt.keys().cloned().chain(image.keys().cloned()).collect();
        for k in keys {
            if crt.contains_key(&k) && !image.contains_key(&k) {
                image.insert(k.clone(), 0);
            }
            let b = image.get(&k).copied().unwrap_or(0);
            let a = crt.get(&k).cloned().unwrap_or_default();
            let t = mulmod(submod(b, reduce_int(&a, p), p), inv_m, p);
            crt.insert(k, a + &modulus * BigInt::from(t));
        }
        modulus *= &pb;
        let cand: BTreeMap<Mon, BigInt> =
            crt.iter().map(|(k, v)| (k.clone(), symmetric(v, &modulus))).filter(|(_, v)| !v.is_zero()).collect();
        if last.as_ref() == Some(&cand) {
            let poly = MultiPoly::from_terms(
                &ctx,
                cand.iter().map(|(k, v)| (Monomial::from_exponents(k.iter().copied()), Rational::from_integer(v.clone()))),
            );
            let (_, prim) = poly.primitive_scalar();
            if exact_divide(f, &prim).is_ok() && exact_divide(g, &prim).is_ok() {
                return Some(if prim.leading_coefficient().unwrap().is_negative() { prim.neg() } else { prim });
            }
        }
        last = Some(cand);
    }
    None
}
