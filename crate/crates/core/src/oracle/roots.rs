//! Simultaneous root finding by Aberth–Ehrlich iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bigfloat::{BigFloat, Complex};
use super::{OracleError, PrecisionConfig};
use crate::multipoly::{rational_to_f64, Rational};

/// `(p(z), p'(z))` by Horner's rule; `coeffs` ascending.
pub fn eval_with_derivative(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec();
    let mut p = Complex::zero(prec);
    let mut dp = Complex::zero(prec);
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

pub fn eval(coeffs: &[Complex], z: &Complex) -> Complex {
    let mut p = Complex::zero(z.prec());
    for c in coeffs.iter().rev() {
        p = p.mul(z).add(c);
    }
    p
}

/// All complex roots of a squarefree polynomial with rational coefficients
/// (ascending, nonzero leading coefficient).
pub fn roots_of(coeffs: &[Rational], cfg: &PrecisionConfig) -> Result<Vec<Complex>, OracleError> {
    let prec = cfg.bits;
    let n = coeffs.len() - 1;
    let lead = coeffs[n].clone();
    let monic: Vec<Complex> = coeffs.iter().map(|c| Complex::from_rational(&(c / &lead), prec)).collect();
    let radius = 1.0 + coeffs[..n].iter().map(|c| rational_to_f64(&(c / &lead)).abs()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64 + rng.random_range(0.0..0.25)) / n as f64 + 0.4;
            Complex::from_f64(radius * theta.cos(), radius * theta.sin(), prec)
        })
        .collect();
    let tol_bits = i64::from(cfg.root_tol_bits);
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let mut worst = i64::MIN;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(&monic, &z[k]);
            if p.is_zero() {
                continue;
            }
            let ratio = p.div(&dp);
            let mut s = Complex::zero(prec);
            for j in 0..n {
                if j != k {
                    s = s.add(&z[k].sub(&z[j]).recip());
                }
            }
            let denom = Complex::one(prec).sub(&ratio.mul(&s));
            let w = ratio.div(&denom);
            let scale = z[k].abs().magnitude_bits().max(1);
            worst = worst.max(w.abs().magnitude_bits() - scale);
            z[k] = z[k].sub(&w);
        }
        if worst < -tol_bits - 8 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(OracleError::NoConvergence { iterations: cfg.max_iter });
    }
    // Residual and separation checks. A double root splits into two
    // approximations about 2^(-prec/2) apart, so separation must beat that.
    let sep_bits = -i64::from(prec) / 2 + 8;
    for (k, zk) in z.iter().enumerate() {
        let mut bound = BigFloat::zero(prec);
        let az = zk.abs();
        for c in monic.iter().rev() {
            bound = bound.mul(&az).add(&c.abs());
        }
        let r = eval(&monic, zk).abs();
        if !r.is_zero() && r.magnitude_bits() - bound.magnitude_bits() > -tol_bits {
            return Err(OracleError::RootCheckFailed(format!("root {k} leaves residual {r}")));
        }
        for zj in &z[..k] {
            let d = zk.sub(zj).abs();
            let scale = az.magnitude_bits().max(zj.abs().magnitude_bits()).max(1);
            if d.is_zero() || d.magnitude_bits() - scale < sep_bits {
                return Err(OracleError::NonGenericPoint);
            }
        }
    }
    Ok(z)
}

/// Newton refinement of a simple root at the working precision.
pub fn polish(coeffs: &[Complex], z: &Complex, steps: usize) -> Complex {
    let mut z = z.clone();
    for _ in 0..steps {
        let (p, dp) = eval_with_derivative(coeffs, &z);
        if p.is_zero() || dp.is_zero() {
            break;
        }
        z = z.sub(&p.div(&dp));
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::int;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn sorted_real(z: &[Complex]) -> Vec<f64> {
        let mut v: Vec<f64> = z.iter().map(|c| c.re.to_f64()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn unit_square_roots() {
        let z = roots_of(&[int(-1), int(0), int(1)], &cfg()).unwrap();
        assert_eq!(sorted_real(&z), vec![-1.0, 1.0]);
        for r in &z {
            assert!(r.im.is_zero() || r.im.magnitude_bits() < -200);
        }
    }

    #[test]
    fn factorable_quadratic() {
        // y^2 + 3y + 2
        let z = roots_of(&[int(2), int(3), int(1)], &cfg()).unwrap();
        assert_eq!(sorted_real(&z), vec![-2.0, -1.0]);
    }

    #[test]
    fn quintic_vieta_closure() {
        // y^5 + y + 1
        let z = roots_of(&[int(1), int(1), int(0), int(0), int(0), int(1)], &cfg()).unwrap();
        let p = cfg().bits;
        let sum = z.iter().fold(Complex::zero(p), |a, b| a.add(b));
        let prod = z.iter().fold(Complex::one(p), |a, b| a.mul(b));
        assert!(sum.abs().log2() < -200.0);
        assert!(prod.add(&Complex::one(p)).abs().log2() < -200.0);
    }

    #[test]
    fn repeated_root_rejected() {
        // (y - 1)^2
        let r = roots_of(&[int(1), int(-2), int(1)], &cfg());
        assert!(r.is_err());
    }
}
