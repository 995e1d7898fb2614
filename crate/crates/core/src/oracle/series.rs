//! Branch germs: truncated power series by Newton lifting, and derivatives
//! by implicit differentiation.

use super::bigfloat::{BigFloat, Complex};
use super::{OracleError, PrecisionConfig};
use crate::multipoly::{MultiPoly, Rational, VarContext};

/// One branch `y(x0 + t) = Σ c_k t^k` through a simple root.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub x0: Rational,
    pub root: Complex,
    pub coeffs: Vec<Complex>,
}

impl Branch {
    /// `y^(ℓ)(x0) = ℓ!·c_ℓ`.
    pub fn derivative(&self, l: usize) -> Complex {
        let mut d = self.coeffs[l].clone();
        for k in 2..=l as i64 {
            d = d.mul_int(k);
        }
        d
    }
}

fn series_mul(a: &[Complex], b: &[Complex], n: usize, prec: u32) -> Vec<Complex> {
    let mut out = vec![Complex::zero(prec); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

fn series_inv(a: &[Complex], n: usize, prec: u32) -> Vec<Complex> {
    let inv0 = a[0].recip();
    let mut out = vec![Complex::zero(prec); n];
    out[0] = inv0.clone();
    for k in 1..n {
        let mut s = Complex::zero(prec);
        for j in 1..=k.min(a.len() - 1) {
            s = s.add(&a[j].mul(&out[k - j]));
        }
        out[k] = s.mul(&inv0).neg();
    }
    out
}

/// `Σ coeffs[i]·y^i` in truncated series arithmetic.
fn series_compose(coeffs: &[Complex], y: &[Complex], n: usize, prec: u32) -> Vec<Complex> {
    let mut acc = vec![Complex::zero(prec); n];
    for c in coeffs.iter().rev() {
        acc = series_mul(&acc, y, n, prec);
        acc[0] = acc[0].add(c);
    }
    acc
}

/// Taylor coefficients `c_0..c_order` of the branch of
/// `base(y) + x0 + t = 0` with `y(0) = root`, by Newton iteration that
/// doubles the number of correct coefficients per step.
pub fn taylor_branch(
    base: &[Rational],
    x0: &Rational,
    root: &Complex,
    order: usize,
    cfg: &PrecisionConfig,
) -> Result<Branch, OracleError> {
    let prec = cfg.bits;
    let n_total = order + 1;
    let mut f: Vec<Complex> = base.iter().map(|c| Complex::from_rational(c, prec)).collect();
    f[0] = f[0].add(&Complex::from_rational(x0, prec));
    let fy: Vec<Complex> = (1..f.len()).map(|i| f[i].mul_int(i as i64)).collect();
    let mut y = vec![root.clone()];
    let mut n = 1;
    // One extra pass at full length cleans up rounding from the doubling.
    let mut passes_at_full = 0;
    while passes_at_full < 2 {
        n = (2 * n).min(n_total);
        if n == n_total {
            passes_at_full += 1;
        }
        y.resize(n, Complex::zero(prec));
        let mut val = series_compose(&f, &y, n, prec);
        if n > 1 {
            val[1] = val[1].add(&Complex::one(prec));
        }
        let der = series_compose(&fy, &y, n, prec);
        if der[0].is_zero() {
            return Err(OracleError::NonGenericPoint);
        }
        let step = series_mul(&val, &series_inv(&der, n, prec), n, prec);
        for (yi, si) in y.iter_mut().zip(&step) {
            *yi = yi.sub(si);
        }
    }
    // Residual of F(x0 + t, y(t)) against a magnitude bound, per coefficient.
    let mut val = series_compose(&f, &y, n_total, prec);
    if n_total > 1 {
        val[1] = val[1].add(&Complex::one(prec));
    }
    let fabs: Vec<Complex> = f.iter().map(|c| Complex::from_real(c.abs())).collect();
    let yabs: Vec<Complex> = y.iter().map(|c| Complex::from_real(c.abs())).collect();
    let bound = series_compose(&fabs, &yabs, n_total, prec);
    let tol = -i64::from(cfg.root_tol_bits);
    for (k, (v, b)) in val.iter().zip(&bound).enumerate() {
        let scale = if k == 1 { b.re.add(&BigFloat::one(prec)) } else { b.re.clone() };
        if !v.is_zero() && v.abs().magnitude_bits() - scale.magnitude_bits() > tol {
            return Err(OracleError::RootCheckFailed(format!("series residual at order {k}")));
        }
    }
    Ok(Branch { x0: x0.clone(), root: root.clone(), coeffs: y })
}

/// `y^(1)..y^(lmax)` at `root` from `y^(ℓ) = N_ℓ(y) / F_y^(2ℓ−1)` with
/// `N_1 = −1` and `N_(ℓ+1) = −(N_ℓ'·F_y − (2ℓ−1)·N_ℓ·F_yy)`. The `N_ℓ` are
/// exact polynomials in `y`; only the final evaluation is numeric.
pub fn implicit_derivatives(base: &[Rational], root: &Complex, lmax: usize, cfg: &PrecisionConfig) -> Vec<Complex> {
    let prec = cfg.bits;
    let ctx = VarContext::new(["y"]).expect("one variable");
    let y = MultiPoly::var(&ctx, 0);
    let mut p = MultiPoly::zero(&ctx);
    for (i, c) in base.iter().enumerate() {
        p = &p + &y.pow(i as u32).scale(c);
    }
    let fy = p.derivative(0);
    let fyy = fy.derivative(0);
    let eval = |q: &MultiPoly| -> Complex {
        let mut acc = Complex::zero(prec);
        for c in q.coefficients_in(0).iter().rev() {
            let c = c.constant_value().unwrap_or_default();
            acc = acc.mul(root).add(&Complex::from_rational(&c, prec));
        }
        acc
    };
    let fy_val = eval(&fy);
    let fy_sq = fy_val.mul(&fy_val);
    let mut out = Vec::with_capacity(lmax);
    let mut num = MultiPoly::from_int(&ctx, -1);
    let mut den = fy_val.clone();
    for l in 1..=lmax {
        out.push(eval(&num).div(&den));
        let lhs = &num.derivative(0) * &fy;
        let rhs = (&num * &fyy).scale(&Rational::from_integer((2 * l as i64 - 1).into()));
        num = (&lhs - &rhs).neg();
        den = den.mul(&fy_sq);
    }
    out
}
