//! Coefficient matrix of the reduced family and its polynomial kernel.

use std::time::{Duration, Instant};

use super::{AnnihilatorError, ReducedFamily};
use crate::multipoly::{content_primitive, exact_divide, MultiPoly};

pub type PolyMatrix = Vec<Vec<MultiPoly>>;

/// Diagnostics of a kernel computation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KernelReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// `(row, column)` of each pivot in elimination order.
    pub pivots: Vec<(usize, usize)>,
    /// Column index of the free variable behind the selected vector.
    pub selected_free_column: usize,
    pub selected: Vec<MultiPoly>,
    pub elapsed: Duration,
    pub warnings: Vec<String>,
}

/// `M[j][ℓ]` = coefficient of `s_1^j` in `G_ℓ`, in the parameter context.
pub fn coefficient_matrix(fam: &ReducedFamily) -> Result<PolyMatrix, AnnihilatorError> {
    let eq = &fam.equation;
    let m = eq.shape.m() as usize;
    let pctx = eq.parameter_context();
    let s1 = eq.root_index(1);
    let mut mat = vec![vec![MultiPoly::zero(&pctx); fam.g.len()]; m];
    for (l, g) in fam.g.iter().enumerate() {
        for (j, c) in g.coefficients_in(s1).into_iter().enumerate() {
            if j >= m {
                return Err(AnnihilatorError::NotReduced { level: l });
            }
            mat[j][l] = c.remap(&pctx)?;
        }
    }
    Ok(mat)
}

/// Right kernel of a polynomial matrix over the fraction field, by
/// fraction-free Gauss–Jordan elimination. Every returned vector has
/// polynomial entries with unit content. Vectors are ordered by their free
/// column, so the first one has the smallest top nonzero index.
pub fn nullspace_ff(mat: &PolyMatrix) -> Result<(Vec<Vec<MultiPoly>>, KernelReport), AnnihilatorError> {
    let start = Instant::now();
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || mat.iter().all(|r| r.iter().all(MultiPoly::is_zero)) {
        return Err(AnnihilatorError::ZeroMatrix);
    }
    let ctx = mat.iter().flatten().find(|p| !p.is_zero()).unwrap().context().clone();
    let mut a = mat.clone();
    let mut prev = MultiPoly::one(&ctx);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut free = Vec::new();
    let mut k = 0;
    for col in 0..cols {
        let pick = (k..rows).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| a[i][col].len());
        let Some(p) = pick else {
            free.push(col);
            continue;
        };
        a.swap(p, k);
        let pivot = a[k][col].clone();
        for i in 0..rows {
            if i == k {
                continue;
            }
            let factor = std::mem::replace(&mut a[i][col], MultiPoly::zero(&ctx));
            // Earlier pivot columns hold `prev` on their pivot row and zero
            // elsewhere, so they only need the pivot substituted.
            for &(r, c) in &pivots {
                if r == i {
                    a[i][c] = pivot.clone();
                }
            }
            for j in free.iter().copied().chain(col + 1..cols) {
                let num = if factor.is_zero() {
                    &pivot * &a[i][j]
                } else {
                    &(&pivot * &a[i][j]) - &(&factor * &a[k][j])
                };
                a[i][j] = exact_divide(&num, &prev).map_err(|_| AnnihilatorError::InexactElimination)?;
            }
        }
        prev = pivot;
        pivots.push((k, col));
        k += 1;
        if k == rows {
            free.extend(col + 1..cols);
            break;
        }
    }
    if free.is_empty() {
        return Err(AnnihilatorError::EmptyKernel { rows, cols });
    }
    // After elimination every pivot entry equals the last pivot `prev`.
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![MultiPoly::zero(&ctx); cols];
        v[f] = prev.clone();
        for &(r, c) in &pivots {
            if c < f {
                v[c] = a[r][f].neg();
            }
        }
        let (_, parts) = content_primitive(&v)?;
        basis.push(parts);
    }
    let mut report = KernelReport {
        rows,
        cols,
        rank: pivots.len(),
        kernel_dim: free.len(),
        pivots,
        selected_free_column: free[0],
        selected: basis[0].clone(),
        elapsed: start.elapsed(),
        warnings: Vec::new(),
    };
    if free.len() > 1 {
        report.warnings.push(format!(
            "kernel dimension {} > 1; selected the minimal-order vector (free column {})",
            free.len(),
            free[0]
        ));
    }
    Ok((basis, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::{int, VarContext};

    #[test]
    fn quadratic_matrix_kernel() {
        let c = VarContext::new(["a", "x"]).unwrap();
        let (a, x) = (MultiPoly::var(&c, 0), MultiPoly::var(&c, 1));
        let disc = &a.pow(2) - &x.scale(&int(4));
        let z = MultiPoly::zero(&c);
        let mat = vec![
            vec![(&disc * &x).scale(&int(-2)), disc.neg(), MultiPoly::from_int(&c, -2)],
            vec![(&disc * &a).neg(), z.clone(), z.clone()],
        ];
        let (basis, report) = nullspace_ff(&mat).unwrap();
        assert_eq!(report.kernel_dim, 1);
        assert_eq!(report.rank, 2);
        let v = &basis[0];
        assert!(v[0].is_zero());
        // Proportional to (0, −2, a² − 4x).
        assert_eq!(&v[1] * &disc, &v[2] * &MultiPoly::from_int(&c, -2));
    }

    #[test]
    fn identity_block_kernel() {
        let c = VarContext::new(["x"]).unwrap();
        let (o, z) = (MultiPoly::one(&c), MultiPoly::zero(&c));
        let mat = vec![vec![o.clone(), z.clone(), z.clone()], vec![z.clone(), o.clone(), z.clone()]];
        let (basis, report) = nullspace_ff(&mat).unwrap();
        assert_eq!(basis, vec![vec![z.clone(), z, o]]);
        assert_eq!(report.selected_free_column, 2);
    }

    #[test]
    fn full_rank_has_empty_kernel() {
        let c = VarContext::new(["x"]).unwrap();
        let x = MultiPoly::var(&c, 0);
        let (o, z) = (MultiPoly::one(&c), MultiPoly::zero(&c));
        let mat = vec![vec![o.clone(), x.clone()], vec![z, o]];
        assert!(matches!(nullspace_ff(&mat), Err(AnnihilatorError::EmptyKernel { .. })));
        assert!(matches!(nullspace_ff(&vec![vec![MultiPoly::zero(&c)]]), Err(AnnihilatorError::ZeroMatrix)));
    }

    #[test]
    fn two_dimensional_kernel_reports_warning() {
        let c = VarContext::new(["x"]).unwrap();
        let x = MultiPoly::var(&c, 0);
        let mat = vec![vec![x.clone(), MultiPoly::one(&c), x.pow(2)]];
        let (basis, report) = nullspace_ff(&mat).unwrap();
        assert_eq!(report.kernel_dim, 2);
        assert_eq!(report.warnings.len(), 1);
        for v in &basis {
            let dot = v.iter().zip(&mat[0]).fold(MultiPoly::zero(&c), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
    }
}
