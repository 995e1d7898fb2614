//! Buchberger's algorithm, normal forms, and the Vieta ideal of the roots.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::multipoly::{
    elementary_symmetric, exact_divide, multivariate_division, reduce_natural, Monomial, MonomialOrder, MultiPoly,
    PolyError, VarContext,
};
use crate::shape::Equation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("zero polynomial among the inputs")]
    ZeroInput,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A Gröbner basis together with the order it was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    pub basis: Vec<MultiPoly>,
    pub order: MonomialOrder,
    /// Monic, auto-reduced, sorted by descending leading monomial.
    pub reduced: bool,
}

impl GroebnerBasis {
    /// Wraps a set already known to be a Gröbner basis (for example one with
    /// pairwise coprime leading monomials).
    pub fn from_known_basis(basis: Vec<MultiPoly>, order: MonomialOrder) -> Result<Self, GroebnerError> {
        if basis.iter().any(MultiPoly::is_zero) {
            return Err(GroebnerError::ZeroInput);
        }
        let natural = natural_frame(&basis, &order)?;
        let reduced = natural.as_ref().map_or(&basis, |(_, b)| b);
        let auto = interreduce(reduced.clone());
        let auto = match &natural {
            Some(_) => auto.iter().map(|p| p.remap(basis[0].context())).collect::<Result<_, _>>()?,
            None => auto,
        };
        Ok(GroebnerBasis { basis: auto, order, reduced: true })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Leading monomials under the basis order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|p| self.order.leading_term(p).unwrap().0.clone()).collect()
    }

    /// Normal form of `f · factor`, computed as `NF(NF(f) · factor)`.
    pub fn mul_reduce(&self, f: &MultiPoly, factor: &MultiPoly) -> Result<MultiPoly, GroebnerError> {
        normal_form(&f.checked_mul(factor)?, self)
    }
}

/// Remaps `polys` to a context whose natural order is `order`, or `None`
/// when `order` is already natural.
fn natural_frame(
    polys: &[MultiPoly],
    order: &MonomialOrder,
) -> Result<Option<(Arc<VarContext>, Vec<MultiPoly>)>, PolyError> {
    if order.is_natural() || polys.is_empty() {
        return Ok(None);
    }
    let ctx = polys[0].context().permuted(order.precedence())?;
    let mapped = polys.iter().map(|p| p.remap(&ctx)).collect::<Result<Vec<_>, _>>()?;
    Ok(Some((ctx, mapped)))
}

/// `(lcm/LT(f))·f − (lcm/LT(g))·g` with LT taken under `order`.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly, order: &MonomialOrder) -> Result<MultiPoly, GroebnerError> {
    let (fm, fc) = order.leading_term(f).ok_or(GroebnerError::ZeroInput)?;
    let (gm, gc) = order.leading_term(g).ok_or(GroebnerError::ZeroInput)?;
    let l = fm.lcm(gm);
    let a = f.mul_term(&l.div(fm).unwrap(), &fc.recip());
    let b = g.mul_term(&l.div(gm).unwrap(), &gc.recip());
    Ok(a.checked_sub(&b)?)
}

/// Unique normal form of `f` modulo the ideal of `gb`.
pub fn normal_form(f: &MultiPoly, gb: &GroebnerBasis) -> Result<MultiPoly, GroebnerError> {
    if gb.order.is_natural() {
        if let Some(g) = gb.basis.first() {
            if g.context() != f.context() {
                return Err(PolyError::ContextMismatch.into());
            }
        }
        return Ok(reduce_natural(f, &gb.basis));
    }
    Ok(multivariate_division(f, &gb.basis, &gb.order)?.remainder)
}

/// Reduced Gröbner basis of the ideal generated by `generators`.
pub fn buchberger(generators: &[MultiPoly], order: &MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    if generators.is_empty() {
        return Ok(GroebnerBasis { basis: Vec::new(), order: order.clone(), reduced: true });
    }
    if generators.iter().any(MultiPoly::is_zero) {
        return Err(GroebnerError::ZeroInput);
    }
    let ctx = generators[0].context().clone();
    for g in generators {
        if g.context() != &ctx {
            return Err(PolyError::ContextMismatch.into());
        }
    }
    let natural = natural_frame(generators, order)?;
    let gens = natural.as_ref().map_or(generators, |(_, g)| g.as_slice());
    let basis = buchberger_natural(gens);
    let basis = match natural {
        Some(_) => basis.iter().map(|p| p.remap(&ctx)).collect::<Result<_, _>>()?,
        None => basis,
    };
    Ok(GroebnerBasis { basis, order: order.clone(), reduced: true })
}

fn lm(p: &MultiPoly) -> &Monomial {
    &p.leading_term().unwrap().0
}

fn buchberger_natural(generators: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut g: Vec<MultiPoly> = Vec::new();
    for p in generators {
        let r = reduce_natural(p, &g);
        if !r.is_zero() {
            g.push(r.monic());
        }
    }
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.insert((lm(&g[i]).lcm(lm(&g[j])).total_degree(), j, i));
        }
    }
    while let Some(key) = pairs.pop_first() {
        let (_, j, i) = key;
        let (li, lj) = (lm(&g[i]), lm(&g[j]));
        if li.is_coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && lm(&g[k]).divides(&l)
                && !pending(&pairs, &g, i, k)
                && !pending(&pairs, &g, j, k)
        });
        if chain {
            continue;
        }
        let s = spoly_natural(&g[i], &g[j]);
        let r = reduce_natural(&s, &g);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        let n = g.len();
        for k in 0..n {
            pairs.insert((lm(&g[k]).lcm(lm(&r)).total_degree(), n, k));
        }
        g.push(r);
    }
    interreduce(g)
}

fn pending(pairs: &BTreeSet<(u32, usize, usize)>, g: &[MultiPoly], a: usize, b: usize) -> bool {
    let (j, i) = if a > b { (a, b) } else { (b, a) };
    pairs.contains(&(lm(&g[i]).lcm(lm(&g[j])).total_degree(), j, i))
}

fn spoly_natural(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading_term().unwrap();
    let (gm, gc) = g.leading_term().unwrap();
    let l = fm.lcm(gm);
    let a = f.mul_term(&l.div(fm).unwrap(), &fc.recip());
    let b = g.mul_term(&l.div(gm).unwrap(), &gc.recip());
    &a - &b
}

/// Minimal, monic, auto-reduced basis sorted by descending leading monomial.
fn interreduce(mut g: Vec<MultiPoly>) -> Vec<MultiPoly> {
    g.sort_by(|a, b| lm(a).cmp(lm(b)));
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| lm(q).divides(lm(&p))) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MultiPoly> =
            minimal.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, q)| q.clone()).collect();
        let head = MultiPoly::from_terms(minimal[i].context(), [minimal[i].leading_term().unwrap().clone()]);
        let tail = &minimal[i] - &head;
        out.push((&head + &reduce_natural(&tail, &others)).monic());
    }
    out.sort_by(|a, b| lm(b).cmp(lm(a)));
    out
}

/// Vieta relations between the roots `s_1, …, s_m` of the equation and its
/// coefficients, in the root context `[s_m, …, s_1, names…, x]`.
///
/// For every `k` in `1..=m` the generator is `e_k(s) − (−1)^k·c`, where `c`
/// is the coefficient of `y^(m−k)` (zero when absent, `x` for `k = m`).
pub fn vieta_generators(eq: &Equation) -> Result<Vec<MultiPoly>, GroebnerError> {
    let ctx = eq.root_context();
    let m = eq.shape.m() as usize;
    let roots: Vec<usize> = (1..=m).map(|i| eq.root_index(i)).collect();
    let mut out = Vec::with_capacity(m);
    for k in 1..=m {
        let e = elementary_symmetric(&ctx, k, &roots)?;
        let c = if k == m {
            MultiPoly::var_named(&ctx, "x")?
        } else {
            match eq.shape.exps().iter().position(|&mj| mj as usize == m - k) {
                Some(j) => eq.coefficient_poly(j, &ctx)?,
                None => MultiPoly::zero(&ctx),
            }
        };
        let c = if k % 2 == 1 { c.neg() } else { c };
        out.push(&e - &c);
    }
    Ok(out)
}

/// Triangular basis of the Vieta ideal by iterated divided differences of
/// `μ(s_1) = P(s_1)`. `C_i` has leading monomial `s_i^(m−i+1)`.
pub fn cauchy_triangular(eq: &Equation) -> Result<Vec<MultiPoly>, GroebnerError> {
    let ctx = eq.root_context();
    let m = eq.shape.m() as usize;
    let mut out = Vec::with_capacity(m);
    let mut c = eq.defining_polynomial(&ctx, eq.root_index(1))?;
    out.push(c.clone());
    for i in 2..=m {
        let (prev, cur) = (eq.root_index(i - 1), eq.root_index(i));
        let shifted = c.swap_vars(prev, cur);
        let diff = &MultiPoly::var(&ctx, prev) - &MultiPoly::var(&ctx, cur);
        c = exact_divide(&(&c - &shifted), &diff)?;
        out.push(c.clone());
    }
    Ok(out)
}

/// Gröbner basis of the Vieta ideal from the triangular set; its leading
/// monomials are pairwise coprime, so no S-pair needs reducing.
pub fn vieta_basis_triangular(eq: &Equation) -> Result<GroebnerBasis, GroebnerError> {
    let c = cauchy_triangular(eq)?;
    let order = MonomialOrder::lex(eq.root_context().len());
    GroebnerBasis::from_known_basis(c, order)
}

/// Gröbner basis of the Vieta ideal by Buchberger's algorithm.
pub fn vieta_basis_buchberger(eq: &Equation) -> Result<GroebnerBasis, GroebnerError> {
    let v = vieta_generators(eq)?;
    buchberger(&v, &MonomialOrder::lex(eq.root_context().len()))
}

/// Whether every element is monic (leading coefficient one).
pub fn is_monic_set(basis: &[MultiPoly]) -> bool {
    basis.iter().all(|p| p.leading_coefficient().is_some_and(One::is_one))
}
