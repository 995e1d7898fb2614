//! Singular values by one-sided (Hestenes) Jacobi rotations.

use super::bigfloat::{BigFloat, Complex};

fn dot(a: &[Complex], b: &[Complex], prec: u32) -> Complex {
    a.iter().zip(b).fold(Complex::zero(prec), |acc, (x, y)| acc.add(&x.conj().mul(y)))
}

fn norm_sqr(a: &[Complex], prec: u32) -> BigFloat {
    a.iter().fold(BigFloat::zero(prec), |acc, x| acc.add(&x.norm_sqr()))
}

/// Singular values of the matrix whose columns are `cols`, unordered.
/// Columns are rotated pairwise until mutually orthogonal; the singular
/// values are then their norms.
pub fn singular_values(mut cols: Vec<Vec<Complex>>) -> Vec<BigFloat> {
    let Some(prec) = cols.iter().flatten().next().map(Complex::prec) else {
        return Vec::new();
    };
    let n = cols.len();
    let eps_bits = -i64::from(prec) + 8;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&cols[p], prec);
                let beta = norm_sqr(&cols[q], prec);
                let gamma = dot(&cols[p], &cols[q], prec);
                let g = gamma.abs();
                if g.is_zero() || alpha.is_zero() || beta.is_zero() {
                    continue;
                }
                // |γ| ≤ eps·sqrt(αβ) means already orthogonal.
                if 2 * g.magnitude_bits() - alpha.magnitude_bits() - beta.magnitude_bits() < 2 * eps_bits {
                    continue;
                }
                rotated = true;
                let phase = gamma.scale(&BigFloat::one(prec).div(&g));
                let zeta = beta.sub(&alpha).div(&g.mul_int(2));
                let root = BigFloat::one(prec).add(&zeta.mul(&zeta)).sqrt();
                let mut t = BigFloat::one(prec).div(&zeta.abs().add(&root));
                if zeta.is_negative() {
                    t = t.neg();
                }
                let c = BigFloat::one(prec).div(&BigFloat::one(prec).add(&t.mul(&t)).sqrt());
                let s = c.mul(&t);
                // b_q = e^{−iφ}·a_q makes the inner product real.
                let bq: Vec<Complex> = cols[q].iter().map(|z| z.mul(&phase.conj())).collect();
                let ap = cols[p].clone();
                for i in 0..ap.len() {
                    let new_p = ap[i].scale(&c).sub(&bq[i].scale(&s));
                    let new_q = ap[i].scale(&s).add(&bq[i].scale(&c));
                    cols[p][i] = new_p;
                    cols[q][i] = new_q;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    cols.iter().map(|c| norm_sqr(c, prec).sqrt()).collect()
}
