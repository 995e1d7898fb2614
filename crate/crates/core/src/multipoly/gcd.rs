//! Multivariate gcd (modular, with a subresultant PRS fallback) and content
//! extraction.

use num_traits::{One, Signed};

use super::{exact_divide, same_context, MultiPoly, PolyError, Rational};

/// `scalar · gcd` is the content of a list of polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Content {
    /// Positive rational scalar.
    pub scalar: Rational,
    /// Integer-primitive polynomial gcd with positive leading coefficient.
    pub gcd: MultiPoly,
}

impl Content {
    pub fn value(&self) -> MultiPoly {
        self.gcd.scale(&self.scalar)
    }
}

/// Normalized gcd: integer coefficients with unit content and a positive
/// leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    assert!(same_context(f.context(), g.context()), "polynomial context mismatch");
    if !f.is_constant() && !g.is_constant() {
        if let Some(h) = super::modgcd::modular_gcd(&normalize(f), &normalize(g)) {
            return h;
        }
    }
    normalize(&gcd_rec(f, g))
}

fn normalize(f: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return f.clone();
    }
    let (_, p) = f.primitive_scalar();
    if p.leading_coefficient().unwrap().is_negative() {
        p.neg()
    } else {
        p
    }
}

fn gcd_rec(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return normalize(g);
    }
    if g.is_zero() {
        return normalize(f);
    }
    if f.is_constant() || g.is_constant() {
        return MultiPoly::one(f.context());
    }
    let n = f.context().len();
    // A variable present in only one argument lets us pass to its content.
    for v in 0..n {
        let (df, dg) = (f.degree_in(v), g.degree_in(v));
        if df > 0 && dg == 0 {
            let c = content_in(f, v, Some(g));
            return gcd_rec(&c, g);
        }
        if dg > 0 && df == 0 {
            let c = content_in(g, v, Some(f));
            return gcd_rec(f, &c);
        }
    }
    if let Some(h) = trivial_divisor(f, g) {
        return h;
    }
    let v = (0..n)
        .filter(|&v| f.degree_in(v) > 0)
        .min_by_key(|&v| f.degree_in(v).max(g.degree_in(v)))
        .expect("non-constant polynomial has a variable");
    let cf = content_in(f, v, None);
    let cg = content_in(g, v, None);
    let pf = exact_divide(f, &cf).expect("content divides");
    let pg = exact_divide(g, &cg).expect("content divides");
    let c = gcd_rec(&cf, &cg);
    let h = prs_gcd(&pf, &pg, v);
    normalize(&(&c * &h))
}

/// Shortcut for the common case that one argument divides the other.
fn trivial_divisor(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let small = normalize(small);
    if exact_divide(large, &small).is_ok() {
        Some(small)
    } else {
        None
    }
}

/// Gcd of the coefficients of `f` with respect to `v`. When `with` is given,
/// the running gcd is also folded with it so that the recursion can stop as
/// soon as it becomes constant.
fn content_in(f: &MultiPoly, v: usize, with: Option<&MultiPoly>) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = f.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut acc = match with {
        Some(w) => {
            let first = coeffs.remove(0);
            gcd_rec(&first, w)
        }
        None => normalize(&coeffs.remove(0)),
    };
    for c in coeffs {
        if acc.is_constant() {
            break;
        }
        acc = gcd_rec(&acc, &c);
    }
    if acc.is_constant() {
        MultiPoly::one(f.context())
    } else {
        acc
    }
}

type Upoly = Vec<MultiPoly>;

fn deg(p: &Upoly) -> usize {
    p.len() - 1
}

fn trim(mut p: Upoly) -> Upoly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn is_zero_u(p: &Upoly) -> bool {
    p.iter().all(MultiPoly::is_zero)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &Upoly, b: &Upoly) -> Upoly {
    let k = deg(b);
    let lb = b.last().unwrap();
    let mut r = a.clone();
    let mut e = deg(a) + 1 - k;
    while !is_zero_u(&r) && deg(&r) >= k {
        let lr = r.last().unwrap().clone();
        let shift = deg(&r) - k;
        let mut next: Upoly = r.iter().map(|c| c * lb).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(bc * &lr);
        }
        debug_assert!(next.last().unwrap().is_zero());
        next.pop();
        r = trim(if next.is_empty() { vec![MultiPoly::zero(lb.context())] } else { next });
        e -= 1;
    }
    if e > 0 {
        let s = lb.pow(e as u32);
        r = r.iter().map(|c| c * &s).collect();
    }
    r
}

fn div_all(p: &Upoly, d: &MultiPoly) -> Upoly {
    p.iter().map(|c| exact_divide(c, d).expect("subresultant division is exact")).collect()
}

/// Gcd of two polynomials primitive with respect to `v`.
fn prs_gcd(f: &MultiPoly, g: &MultiPoly, v: usize) -> MultiPoly {
    let ctx = f.context().clone();
    let (mut a, mut b) = (f.coefficients_in(v), g.coefficients_in(v));
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut gg = MultiPoly::one(&ctx);
    let mut h = MultiPoly::one(&ctx);
    loop {
        let delta = deg(&a) - deg(&b);
        let r = prem(&a, &b);
        if is_zero_u(&r) {
            break;
        }
        if deg(&r) == 0 {
            return MultiPoly::one(&ctx);
        }
        a = b;
        let d = &gg * &h.pow(delta as u32);
        b = div_all(&r, &d);
        gg = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            exact_divide(&gg.pow(delta as u32), &h.pow(delta as u32 - 1)).expect("subresultant division is exact")
        };
    }
    let bp = MultiPoly::from_coefficients_in(&ctx, v, &b);
    let c = content_in(&bp, v, None);
    normalize(&exact_divide(&bp, &c).expect("content divides"))
}

/// Splits each input into `content × primitive part`, where the content is
/// a positive rational scalar times the polynomial gcd of all inputs.
pub fn content_primitive(v: &[MultiPoly]) -> Result<(Content, Vec<MultiPoly>), PolyError> {
    let first = v.iter().find(|p| !p.is_zero()).ok_or(PolyError::AllZero)?;
    let ctx = first.context().clone();
    for p in v {
        if !same_context(p.context(), &ctx) {
            return Err(PolyError::ContextMismatch);
        }
    }
    let mut nonzero: Vec<&MultiPoly> = v.iter().filter(|p| !p.is_zero()).collect();
    nonzero.sort_by_key(|p| p.len());
    let mut g = normalize(nonzero[0]);
    for p in &nonzero[1..] {
        if g.is_constant() {
            break;
        }
        if exact_divide(p, &g).is_ok() {
            continue;
        }
        g = gcd(&g, p);
    }
    if g.is_constant() {
        g = MultiPoly::one(&ctx);
    }
    let parts: Vec<MultiPoly> = v
        .iter()
        .map(|p| exact_divide(p, &g).expect("gcd divides every input"))
        .collect();
    let scalar = super::rational_content(parts.iter().flat_map(|p| p.terms().iter().map(|(_, c)| c)));
    let inv = scalar.recip();
    let parts = parts.iter().map(|p| p.scale(&inv)).collect();
    debug_assert!(scalar.is_positive() || scalar.is_one());
    Ok((Content { scalar, gcd: g }, parts))
}
