//! Linear differential operators `Σ p_k (d/dx)^k` with polynomial coefficients.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use super::AnnihilatorError;
use crate::multipoly::{content_primitive, MultiPoly, PolyError, VarContext};

/// A nonzero operator `Σ_{k=low}^{d} p_k (d/dx)^k`. The coefficient vector is
/// primitive and the lex-leading term of `p_d` is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator {
    var: String,
    coeffs: Vec<MultiPoly>,
}

impl DiffOperator {
    /// Normalizes `coeffs` (trailing zeros dropped, content removed, sign
    /// fixed). The derivation variable is `x`.
    pub fn new(coeffs: Vec<MultiPoly>) -> Result<Self, AnnihilatorError> {
        Self::with_var("x", coeffs)
    }

    pub fn with_var(var: &str, mut coeffs: Vec<MultiPoly>) -> Result<Self, AnnihilatorError> {
        while coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(AnnihilatorError::ZeroOperator);
        }
        let (_, mut parts) = content_primitive(&coeffs)?;
        if parts.last().unwrap().leading_coefficient().unwrap().is_negative() {
            parts = parts.iter().map(MultiPoly::neg).collect();
        }
        Ok(DiffOperator { var: var.to_string(), coeffs: parts })
    }

    /// Builds an operator from coefficients without normalizing them.
    pub fn from_raw(var: &str, coeffs: Vec<MultiPoly>) -> Result<Self, AnnihilatorError> {
        if coeffs.last().is_none_or(MultiPoly::is_zero) {
            return Err(AnnihilatorError::ZeroOperator);
        }
        let ctx = coeffs[0].context();
        if coeffs.iter().any(|c| c.context() != ctx) {
            return Err(PolyError::ContextMismatch.into());
        }
        Ok(DiffOperator { var: var.to_string(), coeffs })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.coeffs[0].context()
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &MultiPoly {
        &self.coeffs[k]
    }

    /// The order `d`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The smallest `k` with `p_k ≠ 0`.
    pub fn low(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap()
    }

    pub fn leading_coefficient(&self) -> &MultiPoly {
        self.coeffs.last().unwrap()
    }

    pub fn total_terms(&self) -> usize {
        self.coeffs.iter().map(MultiPoly::len).sum()
    }

    /// Normalized copy; two operators that differ by a nonzero scalar have
    /// identical normalizations.
    pub fn normalized(&self) -> Result<Self, AnnihilatorError> {
        Self::with_var(&self.var, self.coeffs.clone())
    }

    /// Equality up to a nonzero rational scalar.
    pub fn proportional_to(&self, other: &DiffOperator) -> bool {
        match (self.normalized(), other.normalized()) {
            (Ok(a), Ok(b)) => {
                let ctx = a.context().clone();
                a.coeffs.len() == b.coeffs.len()
                    && a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| y.remap(&ctx).is_ok_and(|y| *x == y))
            }
            _ => false,
        }
    }

    /// The same operator with coefficients moved to `ctx`.
    pub fn remap(&self, ctx: &Arc<VarContext>) -> Result<Self, AnnihilatorError> {
        let coeffs = self.coeffs.iter().map(|c| c.remap(ctx)).collect::<Result<_, _>>()?;
        Ok(DiffOperator { var: self.var.clone(), coeffs })
    }
}

/// Kernel vector to operator: content removed, sign fixed, order trimmed.
pub fn normalize_operator(vec: &[MultiPoly]) -> Result<DiffOperator, AnnihilatorError> {
    DiffOperator::new(vec.to_vec())
}

impl fmt::Display for DiffOperator {
    /// Highest derivative first, e.g. `(a^2 - 4*x)*D2 - 2*D1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg_single = c.len() == 1 && c.leading_coefficient().unwrap().is_negative();
            let shown = if neg_single { c.neg() } else { c.clone() };
            if first {
                if neg_single {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg_single { " - " } else { " + " })?;
            }
            first = false;
            let body = shown.to_string();
            if k == 0 {
                if shown.len() > 1 {
                    write!(f, "({body})")?;
                } else {
                    f.write_str(&body)?;
                }
                continue;
            }
            if shown.len() > 1 {
                write!(f, "({body})*D{k}")?;
            } else if shown.is_one() {
                write!(f, "D{k}")?;
            } else {
                write!(f, "{body}*D{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::int;

    fn quadratic() -> (Arc<VarContext>, Vec<MultiPoly>) {
        let c = VarContext::new(["a", "x"]).unwrap();
        let (a, x) = (MultiPoly::var(&c, 0), MultiPoly::var(&c, 1));
        let v = vec![MultiPoly::zero(&c), MultiPoly::from_int(&c, -2), &a.pow(2) - &x.scale(&int(4))];
        (c, v)
    }

    #[test]
    fn normalize_quadratic() {
        let (_, v) = quadratic();
        let op = normalize_operator(&v).unwrap();
        assert_eq!(op.order(), 2);
        assert_eq!(op.low(), 1);
        assert_eq!(op.to_string(), "(a^2 - 4*x)*D2 - 2*D1");
        let scaled: Vec<MultiPoly> = v.iter().map(|p| p.scale(&int(-6))).collect();
        assert_eq!(normalize_operator(&scaled).unwrap(), op);
        assert!(op.proportional_to(&DiffOperator::from_raw("x", scaled).unwrap()));
    }

    #[test]
    fn zero_operator_rejected() {
        let (c, _) = quadratic();
        assert!(matches!(normalize_operator(&[MultiPoly::zero(&c)]), Err(AnnihilatorError::ZeroOperator)));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let (c, mut v) = quadratic();
        v.push(MultiPoly::zero(&c));
        assert_eq!(normalize_operator(&v).unwrap().order(), 2);
    }
}
