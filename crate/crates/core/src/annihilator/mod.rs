//! Minimal-order annihilating operators for the branches of the equation.
//!
//! The pipeline: residue generators `g_ℓ`, their normal forms `G_ℓ` modulo
//! the Vieta ideal, the coefficient matrix over `ℚ[a, x]`, and a polynomial
//! kernel vector normalized into a [`DiffOperator`].

mod family;
mod kernel;
mod operator;

use thiserror::Error;

pub use family::{reduced_family, reduced_generator_expanded, residue_generator, Engine, ReducedFamily};
pub use kernel::{coefficient_matrix, nullspace_ff, KernelReport, PolyMatrix};
pub use operator::{normalize_operator, DiffOperator};

use crate::groebner::GroebnerError;
use crate::multipoly::{MultiPoly, PolyError};
use crate::resultants::{discriminant, ResultantError};
use crate::shape::{BindingMode, Equation, EquationShape, ShapeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnihilatorError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Resultant(#[from] ResultantError),
    #[error("generator level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("normal form G_{level} still involves other roots or has s1-degree >= m")]
    NotReduced { level: usize },
    #[error("coefficient matrix is zero")]
    ZeroMatrix,
    #[error("kernel of the {rows}x{cols} coefficient matrix is trivial")]
    EmptyKernel { rows: usize, cols: usize },
    #[error("fraction-free elimination hit an inexact division")]
    InexactElimination,
    #[error("operator has no nonzero coefficient")]
    ZeroOperator,
    #[error("discriminant of the equation vanishes identically")]
    DegenerateEquation,
    #[error("selected kernel vector does not annihilate the reduced family")]
    SyzygyCheckFailed,
}

/// Number of linearly independent branch germs at a generic point.
pub fn determination(shape: &EquationShape) -> usize {
    let m = shape.m() as usize;
    let d = shape.exponent_gcd() as usize;
    if d > 1 {
        m / d
    } else {
        let m1 = shape.exps()[0] as usize;
        m - 1 + m1 / (m - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AnnihilateOptions {
    pub engine: Engine,
}

/// Computes the normalized minimal-order operator annihilating every branch.
pub fn annihilate(eq: &Equation, opts: &AnnihilateOptions) -> Result<(DiffOperator, KernelReport), AnnihilatorError> {
    if eq.binding.mode() != BindingMode::AllSymbolic && discriminant(eq)?.is_zero() {
        return Err(AnnihilatorError::DegenerateEquation);
    }
    let fam = reduced_family(eq, opts.engine)?;
    let mat = coefficient_matrix(&fam)?;
    let (basis, mut report) = nullspace_ff(&mat)?;
    let selected = &basis[0];
    check_syzygy(&fam, selected)?;
    let op = normalize_operator(selected)?;
    report.selected = op.coeffs().to_vec();
    report.selected.resize(selected.len(), MultiPoly::zero(op.context()));
    Ok((op, report))
}

/// Asserts `Σ_ℓ c_ℓ·G_ℓ = 0` in the root context.
pub fn check_syzygy(fam: &ReducedFamily, c: &[MultiPoly]) -> Result<(), AnnihilatorError> {
    let ctx = fam.equation.root_context();
    let mut acc = MultiPoly::zero(&ctx);
    for (cl, gl) in c.iter().zip(&fam.g) {
        acc = &acc + &(&cl.remap(&ctx)? * gl);
    }
    if acc.is_zero() {
        Ok(())
    } else {
        Err(AnnihilatorError::SyzygyCheckFailed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(m: u32, exps: &[u32]) -> EquationShape {
        EquationShape::new(m, exps.to_vec()).unwrap()
    }

    #[test]
    fn determination_examples() {
        assert_eq!(determination(&shape(5, &[1])), 4);
        assert_eq!(determination(&shape(5, &[4])), 5);
        assert_eq!(determination(&shape(6, &[2, 1])), 5);
        assert_eq!(determination(&shape(4, &[2])), 2);
        assert_eq!(determination(&shape(3, &[])), 1);
    }

    #[test]
    fn quadratic_operator() {
        let eq = Equation::symbolic(2, vec![1]).unwrap();
        let (op, report) = annihilate(&eq, &AnnihilateOptions::default()).unwrap();
        assert_eq!(op.to_string(), "(a^2 - 4*x)*D2 - 2*D1");
        assert_eq!(report.kernel_dim, 1);
        assert_eq!((report.rows, report.cols), (2, 3));
    }

    #[test]
    fn trinomial_quintic() {
        let eq = Equation::symbolic(5, vec![1]).unwrap();
        let (op, _) = annihilate(&eq, &AnnihilateOptions::default()).unwrap();
        assert_eq!(
            op.to_string(),
            "(256*a^5 + 3125*x^4)*D4 + 31250*x^3*D3 + 73125*x^2*D2 + 31875*x*D1 - 1155"
        );
    }
}
