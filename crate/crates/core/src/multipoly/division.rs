use std::collections::BTreeMap;

use num_traits::Zero;

use super::{r_add_assign, r_div, r_mul, same_context, Monomial, MonomialOrder, MultiPoly, PolyError, Rational};

/// Result of [`multivariate_division`]: `f = Σ quotients[i]·divisors[i] + remainder`.
#[derive(Debug, Clone)]
pub struct Division {
    pub quotients: Vec<MultiPoly>,
    pub remainder: MultiPoly,
}

/// Subtracts `q · mon · tail` from the working set.
fn sub_scaled(work: &mut BTreeMap<Monomial, Rational>, tail: &[(Monomial, Rational)], mon: &Monomial, q: &Rational) {
    for (m, c) in tail {
        let key = m.mul(mon);
        let delta = -r_mul(q, c);
        match work.entry(key) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                r_add_assign(e.get_mut(), &delta);
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(delta);
            }
        }
    }
}

/// Exact quotient `f / g`, or [`PolyError::NotDivisible`].
pub fn exact_divide(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
    if !same_context(f.context(), g.context()) {
        return Err(PolyError::ContextMismatch);
    }
    let (glm, glc) = g.leading_term().ok_or(PolyError::DivisionByZero)?;
    if f.is_zero() {
        return Ok(MultiPoly::zero(f.context()));
    }
    if g.len() == 1 {
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in f.terms() {
            let q = m.div(glm).ok_or(PolyError::NotDivisible)?;
            terms.push((q, r_div(c, glc)));
        }
        return Ok(MultiPoly::from_sorted_terms(f.context(), terms));
    }
    let tail = &g.terms()[1..];
    let mut work: BTreeMap<Monomial, Rational> = f.terms().iter().cloned().collect();
    let mut quot = Vec::new();
    while let Some((m, c)) = work.pop_last() {
        let qm = m.div(glm).ok_or(PolyError::NotDivisible)?;
        let qc = r_div(&c, glc);
        sub_scaled(&mut work, tail, &qm, &qc);
        quot.push((qm, qc));
    }
    Ok(MultiPoly::from_terms(f.context(), quot))
}

/// Generalized division by an ordered list of divisors under a lex order.
///
/// At every step the leading term of the working polynomial is divided by
/// the first divisor (in list order) whose leading monomial divides it;
/// otherwise it moves to the remainder. No monomial of the remainder is
/// divisible by any divisor's leading monomial.
pub fn multivariate_division(
    f: &MultiPoly,
    divisors: &[MultiPoly],
    order: &MonomialOrder,
) -> Result<Division, PolyError> {
    for d in divisors {
        if !same_context(f.context(), d.context()) {
            return Err(PolyError::ContextMismatch);
        }
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
    }
    if order.is_natural() {
        return Ok(divide_natural(f, divisors));
    }
    let ctx = f.context().permuted(order.precedence())?;
    let f2 = f.remap(&ctx)?;
    let ds = divisors.iter().map(|d| d.remap(&ctx)).collect::<Result<Vec<_>, _>>()?;
    let Division { quotients, remainder } = divide_natural(&f2, &ds);
    Ok(Division {
        quotients: quotients.iter().map(|q| q.remap(f.context())).collect::<Result<_, _>>()?,
        remainder: remainder.remap(f.context())?,
    })
}

fn divide_natural(f: &MultiPoly, divisors: &[MultiPoly]) -> Division {
    let ctx = f.context();
    let leads: Vec<&(Monomial, Rational)> = divisors.iter().map(|d| d.leading_term().unwrap()).collect();
    let mut quots: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); divisors.len()];
    let mut rem = Vec::new();
    let mut work: BTreeMap<Monomial, Rational> = f.terms().iter().cloned().collect();
    while let Some((m, c)) = work.pop_last() {
        let hit = leads.iter().enumerate().find_map(|(i, (lm, lc))| m.div(lm).map(|q| (i, q, lc)));
        match hit {
            Some((i, qm, lc)) => {
                let qc = r_div(&c, lc);
                sub_scaled(&mut work, &divisors[i].terms()[1..], &qm, &qc);
                quots[i].push((qm, qc));
            }
            None => rem.push((m, c)),
        }
    }
    Division {
        quotients: quots.into_iter().map(|q| MultiPoly::from_terms(ctx, q)).collect(),
        remainder: MultiPoly::from_sorted_terms(ctx, rem),
    }
}

/// Remainder of `f` modulo `divisors` in context lex order. Used on hot
/// paths where quotients are not needed.
pub(crate) fn reduce_natural(f: &MultiPoly, divisors: &[MultiPoly]) -> MultiPoly {
    let leads: Vec<&(Monomial, Rational)> = divisors.iter().map(|d| d.leading_term().unwrap()).collect();
    let mut rem = Vec::new();
    let mut work: BTreeMap<Monomial, Rational> = f.terms().iter().cloned().collect();
    while let Some((m, c)) = work.pop_last() {
        let hit = leads.iter().enumerate().find_map(|(i, (lm, lc))| m.div(lm).map(|q| (i, q, lc)));
        match hit {
            Some((i, qm, lc)) => {
                let qc = r_div(&c, lc);
                sub_scaled(&mut work, &divisors[i].terms()[1..], &qm, &qc);
            }
            None => rem.push((m, c)),
        }
    }
    MultiPoly::from_sorted_terms(f.context(), rem)
}
