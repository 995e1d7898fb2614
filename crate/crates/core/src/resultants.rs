//! Sylvester resultants, the discriminant of the defining equation, and the
//! support comparison between the leading and trailing operator coefficients.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::annihilator::DiffOperator;
use crate::multipoly::{exact_divide, support, MultiPoly, PolyError};
use crate::shape::Equation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResultantError {
    #[error("polynomial has degree zero in the elimination variable")]
    DegreeZero,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Determinant of a square matrix of polynomials by Bareiss elimination.
pub fn bareiss_determinant(mut a: Vec<Vec<MultiPoly>>) -> Result<MultiPoly, PolyError> {
    let n = a.len();
    if n == 0 {
        return Err(PolyError::AllZero);
    }
    let ctx = a[0][0].context().clone();
    let mut sign_flip = false;
    let mut prev = MultiPoly::one(&ctx);
    for k in 0..n.saturating_sub(1) {
        let pivot_row = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].len());
        let Some(p) = pivot_row else {
            return Ok(MultiPoly::zero(&ctx));
        };
        if p != k {
            a.swap(p, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = exact_divide(&num, &prev)?;
            }
            a[i][k] = MultiPoly::zero(&ctx);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign_flip { det.neg() } else { det })
}

/// `Res_var(f, g)` as the determinant of the Sylvester matrix.
pub fn sylvester_resultant(f: &MultiPoly, g: &MultiPoly, var: usize) -> Result<MultiPoly, ResultantError> {
    if f.context() != g.context() {
        return Err(PolyError::ContextMismatch.into());
    }
    let (p, q) = (f.degree_in(var) as usize, g.degree_in(var) as usize);
    if p == 0 || q == 0 {
        return Err(ResultantError::DegreeZero);
    }
    let ctx = f.context();
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let n = p + q;
    let mut rows = Vec::with_capacity(n);
    // Row i holds the coefficients of var^(q-1-i)·f, highest power first.
    for i in 0..q {
        let mut row = vec![MultiPoly::zero(ctx); n];
        for (k, c) in fc.iter().enumerate() {
            row[i + p - k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..p {
        let mut row = vec![MultiPoly::zero(ctx); n];
        for (k, c) in gc.iter().enumerate() {
            row[i + q - k] = c.clone();
        }
        rows.push(row);
    }
    Ok(bareiss_determinant(rows)?)
}

/// Discriminant `(−1)^(m(m−1)/2)·Res_y(P, ∂P/∂y)` in the parameter context.
pub fn discriminant(eq: &Equation) -> Result<MultiPoly, ResultantError> {
    let base = eq.parameter_context();
    let mut names: Vec<String> = base.names().to_vec();
    names.push("y".into());
    let ctx = crate::multipoly::VarContext::new(names)?;
    let y = ctx.len() - 1;
    let p = eq.defining_polynomial(&ctx, y)?;
    let r = sylvester_resultant(&p, &p.derivative(y), y)?;
    let m = eq.shape.m() as u64;
    let r = if (m * (m - 1) / 2) % 2 == 1 { r.neg() } else { r };
    Ok(r.remap(&base)?)
}

/// Outcome of comparing `p_d / 𝔇` with `p_low`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub divisible: bool,
    pub cofactor: Option<MultiPoly>,
    pub support_equal: bool,
    pub cofactor_terms: usize,
    pub low_terms: usize,
    pub cofactor_support: BTreeSet<Vec<u32>>,
    pub low_support: BTreeSet<Vec<u32>>,
}

/// Checks whether the leading coefficient is divisible by the discriminant
/// and whether the cofactor has the same support as the lowest nonzero
/// coefficient.
pub fn leading_coefficient_check(op: &DiffOperator, disc: &MultiPoly) -> Result<ConjectureReport, ResultantError> {
    let ctx = op.context().clone();
    let disc = disc.remap(&ctx)?;
    let lead = op.leading_coefficient();
    let low = op.coeff(op.low());
    let vars: Vec<usize> = (0..ctx.len()).collect();
    let low_support = support(low, &vars);
    match exact_divide(lead, &disc) {
        Ok(cofactor) => {
            let cofactor_support = support(&cofactor, &vars);
            Ok(ConjectureReport {
                divisible: true,
                support_equal: cofactor_support == low_support,
                cofactor_terms: cofactor.len(),
                low_terms: low.len(),
                cofactor: Some(cofactor),
                cofactor_support,
                low_support,
            })
        }
        Err(PolyError::NotDivisible) => Ok(ConjectureReport {
            divisible: false,
            cofactor: None,
            support_equal: false,
            cofactor_terms: 0,
            low_terms: low.len(),
            cofactor_support: BTreeSet::new(),
            low_support,
        }),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::{int, VarContext};

    #[test]
    fn quadratic_resultant() {
        let c = VarContext::new(["a", "x", "y"]).unwrap();
        let (a, x, y) = (MultiPoly::var(&c, 0), MultiPoly::var(&c, 1), MultiPoly::var(&c, 2));
        let f = &(&y.pow(2) + &(&a * &y)) + &x;
        let g = &y.scale(&int(2)) + &a;
        assert_eq!(sylvester_resultant(&f, &g, 2).unwrap(), &x.scale(&int(4)) - &a.pow(2));
        assert_eq!(sylvester_resultant(&a, &g, 2), Err(ResultantError::DegreeZero));
    }

    #[test]
    fn linear_resultant() {
        let c = VarContext::new(["c", "d", "y"]).unwrap();
        let (cc, d, y) = (MultiPoly::var(&c, 0), MultiPoly::var(&c, 1), MultiPoly::var(&c, 2));
        let r = sylvester_resultant(&(&y - &cc), &(&y - &d), 2).unwrap();
        assert_eq!(r, &cc - &d);
    }

    #[test]
    fn known_discriminants() {
        let eq = Equation::symbolic(2, vec![1]).unwrap();
        assert_eq!(discriminant(&eq).unwrap().to_string(), "a^2 - 4*x");
        let eq = Equation::symbolic(5, vec![1]).unwrap();
        assert_eq!(discriminant(&eq).unwrap().to_string(), "256*a^5 + 3125*x^4");
        let eq = Equation::symbolic(4, vec![3]).unwrap();
        assert_eq!(discriminant(&eq).unwrap().to_string(), "-27*a^4*x^2 + 256*x^3");
    }

    #[test]
    fn determinant_with_zero_pivot() {
        let c = VarContext::new(["a"]).unwrap();
        let a = MultiPoly::var(&c, 0);
        let z = MultiPoly::zero(&c);
        let one = MultiPoly::one(&c);
        // [[0, 1], [a, 0]] has determinant -a.
        let det = bareiss_determinant(vec![vec![z.clone(), one.clone()], vec![a.clone(), z.clone()]]).unwrap();
        assert_eq!(det, a.neg());
        let det = bareiss_determinant(vec![vec![z.clone(), one], vec![z.clone(), a]]).unwrap();
        assert!(det.is_zero());
    }
}
