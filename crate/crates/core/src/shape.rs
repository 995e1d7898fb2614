//! The input class: monic equations `y^m + c_1 y^(m_1) + … + c_n y^(m_n) + x = 0`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::multipoly::{format_rational, MultiPoly, PolyError, Rational, VarContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("leading exponent must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("secondary exponents must be strictly decreasing and lie in 1..{m}")]
    BadExponents { m: u32 },
    #[error("expected {expected} coefficient bindings, got {got}")]
    BindingLength { expected: usize, got: usize },
    #[error("coefficient name `{0}` is reserved")]
    ReservedName(String),
    #[error("coefficient name `{0}` is used twice")]
    DuplicateName(String),
    #[error("invalid coefficient name `{0}`")]
    InvalidName(String),
}

/// Exponent data `(m; m_1 > … > m_n)` of the defining equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquationShape {
    m: u32,
    exps: Vec<u32>,
}

impl EquationShape {
    pub fn new(m: u32, exps: Vec<u32>) -> Result<Self, ShapeError> {
        if m < 2 {
            return Err(ShapeError::DegreeTooSmall(m));
        }
        let decreasing = exps.windows(2).all(|w| w[0] > w[1]);
        if !decreasing || exps.iter().any(|&e| e == 0 || e >= m) {
            return Err(ShapeError::BadExponents { m });
        }
        Ok(EquationShape { m, exps })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    /// gcd of the leading and all secondary exponents.
    pub fn exponent_gcd(&self) -> u32 {
        self.exps.iter().fold(self.m, |g, &e| g.gcd(&e))
    }
}

impl fmt::Display for EquationShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {:?})", self.m, self.exps)
    }
}

/// One coefficient of the equation: a free parameter or a fixed value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Symbolic(String),
    Numeric(Rational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingMode {
    AllSymbolic,
    AllNumeric,
    Mixed,
}

/// Per-exponent coefficient bindings, parallel to [`EquationShape::exps`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientBinding {
    coeffs: Vec<Coefficient>,
}

/// Whether `name` collides with the variables the pipeline introduces.
pub fn is_reserved_name(name: &str) -> bool {
    if name == "x" || name == "y" {
        return true;
    }
    let rest = name.strip_prefix("s_").or_else(|| name.strip_prefix('s'));
    matches!(rest, Some(r) if !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit()))
}

impl CoefficientBinding {
    pub fn new(coeffs: Vec<Coefficient>) -> Result<Self, ShapeError> {
        for (i, c) in coeffs.iter().enumerate() {
            if let Coefficient::Symbolic(name) = c {
                let valid = name.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic())
                    && name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
                if !valid {
                    return Err(ShapeError::InvalidName(name.clone()));
                }
                if is_reserved_name(name) {
                    return Err(ShapeError::ReservedName(name.clone()));
                }
                if coeffs[..i].iter().any(|d| d == c) {
                    return Err(ShapeError::DuplicateName(name.clone()));
                }
            }
        }
        Ok(CoefficientBinding { coeffs })
    }

    /// Symbolic coefficients named `a`, `b`, `c`, … (or `a1`, `a2`, … beyond
    /// the alphabet minus reserved letters).
    pub fn symbolic_default(n: usize) -> Self {
        const LETTERS: &[&str] = &["a", "b", "c", "d", "e", "f", "g", "h"];
        let coeffs = (0..n)
            .map(|i| {
                let name = if n <= LETTERS.len() { LETTERS[i].to_string() } else { format!("a{}", i + 1) };
                Coefficient::Symbolic(name)
            })
            .collect();
        CoefficientBinding { coeffs }
    }

    pub fn numeric(values: Vec<Rational>) -> Self {
        CoefficientBinding { coeffs: values.into_iter().map(Coefficient::Numeric).collect() }
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mode(&self) -> BindingMode {
        let sym = self.coeffs.iter().filter(|c| matches!(c, Coefficient::Symbolic(_))).count();
        if sym == self.coeffs.len() {
            BindingMode::AllSymbolic
        } else if sym == 0 {
            BindingMode::AllNumeric
        } else {
            BindingMode::Mixed
        }
    }

    /// Names of the symbolic coefficients in equation order.
    pub fn symbol_names(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .filter_map(|c| match c {
                Coefficient::Symbolic(s) => Some(s.clone()),
                Coefficient::Numeric(_) => None,
            })
            .collect()
    }

    /// Replaces symbolic coefficients by the given values (in symbol order).
    pub fn instantiate(&self, values: &[Rational]) -> CoefficientBinding {
        let mut it = values.iter();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match c {
                Coefficient::Symbolic(_) => Coefficient::Numeric(it.next().expect("one value per symbol").clone()),
                n => n.clone(),
            })
            .collect();
        CoefficientBinding { coeffs }
    }

    /// Numeric values of all coefficients, if fully numeric.
    pub fn values(&self) -> Option<Vec<Rational>> {
        self.coeffs
            .iter()
            .map(|c| match c {
                Coefficient::Numeric(v) => Some(v.clone()),
                Coefficient::Symbolic(_) => None,
            })
            .collect()
    }
}

/// A validated pair of shape and binding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub shape: EquationShape,
    pub binding: CoefficientBinding,
}

impl Equation {
    pub fn new(shape: EquationShape, binding: CoefficientBinding) -> Result<Self, ShapeError> {
        if shape.n() != binding.len() {
            return Err(ShapeError::BindingLength { expected: shape.n(), got: binding.len() });
        }
        Ok(Equation { shape, binding })
    }

    /// All coefficients symbolic with default names.
    pub fn symbolic(m: u32, exps: Vec<u32>) -> Result<Self, ShapeError> {
        let shape = EquationShape::new(m, exps)?;
        let binding = CoefficientBinding::symbolic_default(shape.n());
        Equation::new(shape, binding)
    }

    /// Context `[names…, x]` in which operator coefficients live.
    pub fn parameter_context(&self) -> Arc<VarContext> {
        let mut names = self.binding.symbol_names();
        names.push("x".into());
        VarContext::new(names).expect("binding names are distinct and not reserved")
    }

    /// Context `[s_m, …, s_1, names…, x]` for root-symmetric computations.
    pub fn root_context(&self) -> Arc<VarContext> {
        let m = self.shape.m as usize;
        let mut names: Vec<String> = (1..=m).rev().map(|i| format!("s{i}")).collect();
        names.extend(self.binding.symbol_names());
        names.push("x".into());
        VarContext::new(names).expect("binding names are distinct and not reserved")
    }

    /// Position of `s_i` (1-based) in [`root_context`](Self::root_context).
    pub fn root_index(&self, i: usize) -> usize {
        self.shape.m as usize - i
    }

    /// The coefficient `c_j` as a polynomial in `ctx` (which must contain the
    /// symbolic names).
    pub fn coefficient_poly(&self, j: usize, ctx: &Arc<VarContext>) -> Result<MultiPoly, PolyError> {
        match &self.binding.coeffs[j] {
            Coefficient::Symbolic(name) => MultiPoly::var_named(ctx, name),
            Coefficient::Numeric(v) => Ok(MultiPoly::constant(ctx, v.clone())),
        }
    }

    /// `P(var) = var^m + Σ c_j var^(m_j) + x` in `ctx`.
    pub fn defining_polynomial(&self, ctx: &Arc<VarContext>, var: usize) -> Result<MultiPoly, PolyError> {
        let t = MultiPoly::var(ctx, var);
        let mut p = &t.pow(self.shape.m) + &MultiPoly::var_named(ctx, "x")?;
        for (j, &e) in self.shape.exps.iter().enumerate() {
            p = &p + &(&self.coefficient_poly(j, ctx)? * &t.pow(e));
        }
        Ok(p)
    }

    /// Equation text in the CLI grammar, e.g. `y^5 + a*y + x`.
    pub fn to_text(&self) -> String {
        let mut s = format!("y^{}", self.shape.m);
        for (c, &e) in self.binding.coeffs.iter().zip(&self.shape.exps) {
            let ypow = if e == 1 { "y".to_string() } else { format!("y^{e}") };
            match c {
                Coefficient::Symbolic(name) => s.push_str(&format!(" + {name}*{ypow}")),
                Coefficient::Numeric(v) => {
                    let sign = if v.is_negative() { '-' } else { '+' };
                    let a = v.abs();
                    if a.is_one() {
                        s.push_str(&format!(" {sign} {ypow}"));
                    } else if a.is_zero() {
                        s.push_str(&format!(" + 0*{ypow}"));
                    } else {
                        s.push_str(&format!(" {sign} {}*{ypow}", format_rational(&a)));
                    }
                }
            }
        }
        s.push_str(" + x");
        s
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::int;

    #[test]
    fn shape_validation() {
        assert!(EquationShape::new(5, vec![4, 3, 2, 1]).is_ok());
        assert!(EquationShape::new(3, vec![]).is_ok());
        assert_eq!(EquationShape::new(1, vec![]), Err(ShapeError::DegreeTooSmall(1)));
        assert!(EquationShape::new(5, vec![1, 2]).is_err());
        assert!(EquationShape::new(5, vec![5]).is_err());
        assert!(EquationShape::new(5, vec![3, 3]).is_err());
        assert!(EquationShape::new(5, vec![0]).is_err());
    }

    #[test]
    fn reserved_names() {
        for n in ["x", "y", "s1", "s_2", "s10"] {
            assert!(is_reserved_name(n), "{n}");
        }
        for n in ["a", "s", "sa", "b2"] {
            assert!(!is_reserved_name(n), "{n}");
        }
        let bad = CoefficientBinding::new(vec![Coefficient::Symbolic("s3".into())]);
        assert_eq!(bad, Err(ShapeError::ReservedName("s3".into())));
        let dup = CoefficientBinding::new(vec![Coefficient::Symbolic("a".into()), Coefficient::Symbolic("a".into())]);
        assert!(matches!(dup, Err(ShapeError::DuplicateName(_))));
    }

    #[test]
    fn text_and_contexts() {
        let e = Equation::symbolic(6, vec![2, 1]).unwrap();
        assert_eq!(e.to_text(), "y^6 + a*y^2 + b*y + x");
        assert_eq!(e.parameter_context().names(), ["a", "b", "x"]);
        assert_eq!(e.root_context().names(), ["s6", "s5", "s4", "s3", "s2", "s1", "a", "b", "x"]);
        assert_eq!(e.root_index(1), 5);

        let shape = EquationShape::new(5, vec![4, 3, 2, 1]).unwrap();
        let b = CoefficientBinding::numeric(vec![int(2), int(-3), int(1), int(5)]);
        let e = Equation::new(shape, b).unwrap();
        assert_eq!(e.to_text(), "y^5 + 2*y^4 - 3*y^3 + y^2 + 5*y + x");
        assert_eq!(e.binding.mode(), BindingMode::AllNumeric);
        assert_eq!(e.parameter_context().names(), ["x"]);
    }
}
