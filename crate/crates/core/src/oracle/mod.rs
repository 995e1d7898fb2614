//! Numeric verification at high precision: roots of the equation at a base
//! point, power-series branches, implicit derivatives, the numeric rank of
//! the branch germs, and operator residuals.
//!
//! Nothing here shares code with the symbolic pipeline beyond polynomial
//! evaluation, so agreement between the two is meaningful.

pub mod bigfloat;
pub mod roots;
pub mod series;
pub mod svd;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use bigfloat::{BigFloat, Complex};
pub use roots::roots_of;
pub use series::{implicit_derivatives, taylor_branch, Branch};
pub use svd::singular_values;

use crate::annihilator::DiffOperator;
use crate::multipoly::{PolyError, Rational};
use crate::resultants::{discriminant, ResultantError};
use crate::shape::{CoefficientBinding, Equation, EquationShape, ShapeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("discriminant vanishes at the chosen point")]
    NonGenericPoint,
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("root check failed: {0}")]
    RootCheckFailed(String),
    #[error("invalid precision configuration: {0}")]
    BadConfig(String),
    #[error("operator variable `{0}` is not a parameter of the equation")]
    UnknownVariable(String),
    #[error("expected {expected} parameter values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("equation still has symbolic coefficients")]
    NotNumeric,
    #[error("no generic point found in {tries} draws")]
    SamplingExhausted { tries: usize },
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Resultant(#[from] ResultantError),
}

/// Working precision and tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionConfig {
    /// Mantissa bits of every float.
    pub bits: u32,
    /// Roots are accepted when the relative residual and the relative
    /// pairwise separation clear `2^-root_tol_bits`.
    pub root_tol_bits: u32,
    /// Relative operator residual below which verification passes.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Seed for the Aberth starting angles.
    pub seed: u64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig::with_bits(256)
    }
}

impl PrecisionConfig {
    pub fn with_bits(bits: u32) -> Self {
        PrecisionConfig { bits, root_tol_bits: bits.saturating_sub(32), residual_tol: 1e-30, max_iter: 500, seed: 0x5eed }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.bits < 64 {
            return Err(OracleError::BadConfig(format!("precision {} < 64 bits", self.bits)));
        }
        if self.root_tol_bits == 0 || self.root_tol_bits >= self.bits {
            return Err(OracleError::BadConfig(format!("root tolerance 2^-{}", self.root_tol_bits)));
        }
        if !(self.residual_tol > 0.0 && self.residual_tol.is_finite()) {
            return Err(OracleError::BadConfig(format!("residual tolerance {}", self.residual_tol)));
        }
        if self.max_iter == 0 {
            return Err(OracleError::BadConfig("zero iteration budget".into()));
        }
        Ok(())
    }

    /// Same tolerances at twice the precision.
    pub fn doubled(&self) -> Self {
        PrecisionConfig { bits: self.bits * 2, root_tol_bits: self.root_tol_bits + self.bits, ..self.clone() }
    }
}

/// Outcome of checking one operator at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Parameter values by name, then `x`.
    pub point: Vec<(String, Rational)>,
    /// Relative residual on each branch, by root index.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub bits: u32,
    pub retried: bool,
    pub passed: bool,
}

/// Coefficients of `P(y) − x` in ascending powers of `y` for a fully numeric
/// binding.
pub fn base_polynomial(shape: &EquationShape, values: &[Rational]) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); shape.m() as usize + 1];
    c[shape.m() as usize] = Rational::one();
    for (v, &e) in values.iter().zip(shape.exps()) {
        c[e as usize] += v;
    }
    c
}

/// The equation with its symbolic coefficients replaced by `values`.
pub fn instantiate(eq: &Equation, values: &[Rational]) -> Result<Equation, OracleError> {
    let names = eq.binding.symbol_names();
    if names.len() != values.len() {
        return Err(OracleError::ValueCount { expected: names.len(), got: values.len() });
    }
    Ok(Equation::new(eq.shape.clone(), eq.binding.instantiate(values))?)
}

/// Exact test that `P(x0, ·)` is squarefree.
pub fn is_generic_point(eq_numeric: &Equation, x0: &Rational) -> Result<bool, OracleError> {
    let disc = discriminant(eq_numeric)?;
    Ok(!disc.eval(std::slice::from_ref(x0)).is_zero())
}

/// A rational with numerator in `[-50, 50]` and denominator in `[1, 50]`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, nonzero: bool) -> Rational {
    loop {
        let n: i64 = rng.random_range(-50..=50);
        if nonzero && n == 0 {
            continue;
        }
        let d: i64 = rng.random_range(1..=50);
        return Rational::new(n.into(), d.into());
    }
}

/// Draws nonzero values for the symbolic coefficients and a base point `x0`
/// off the discriminant locus.
pub fn sample_point<R: Rng + ?Sized>(eq: &Equation, rng: &mut R) -> Result<(Vec<Rational>, Rational), OracleError> {
    const TRIES: usize = 100;
    let nsym = eq.binding.symbol_names().len();
    for _ in 0..TRIES {
        let values: Vec<Rational> = (0..nsym).map(|_| random_rational(rng, true)).collect();
        let x0 = random_rational(rng, true);
        if is_generic_point(&instantiate(eq, &values)?, &x0)? {
            return Ok((values, x0));
        }
    }
    Err(OracleError::SamplingExhausted { tries: TRIES })
}

/// All `m` roots of `P(x0, ·)`.
pub fn all_roots(eq_numeric: &Equation, x0: &Rational, cfg: &PrecisionConfig) -> Result<Vec<Complex>, OracleError> {
    cfg.validate()?;
    let values = eq_numeric.binding.values().ok_or(OracleError::NotNumeric)?;
    if !is_generic_point(eq_numeric, x0)? {
        return Err(OracleError::NonGenericPoint);
    }
    let mut base = base_polynomial(&eq_numeric.shape, &values);
    base[0] += x0;
    roots_of(&base, cfg)
}

/// Checks that `op` annihilates every branch of `eq` at the point given by
/// `values` (one per symbolic coefficient) and `x0`. A residual just above
/// the tolerance triggers one retry at doubled precision.
pub fn verify_operator(
    op: &DiffOperator,
    eq: &Equation,
    values: &[Rational],
    x0: &Rational,
    cfg: &PrecisionConfig,
) -> Result<VerificationReport, OracleError> {
    cfg.validate()?;
    let first = verify_at(op, eq, values, x0, cfg)?;
    if !first.passed && first.max_residual < cfg.residual_tol * 1e6 {
        let mut again = verify_at(op, eq, values, x0, &cfg.doubled())?;
        again.retried = true;
        return Ok(again);
    }
    Ok(first)
}

/// [`verify_operator`] at `draws` random generic points.
pub fn verify_random<R: Rng + ?Sized>(
    op: &DiffOperator,
    eq: &Equation,
    draws: usize,
    rng: &mut R,
    cfg: &PrecisionConfig,
) -> Result<Vec<VerificationReport>, OracleError> {
    (0..draws)
        .map(|_| {
            let (values, x0) = sample_point(eq, rng)?;
            verify_operator(op, eq, &values, &x0, cfg)
        })
        .collect()
}

/// [`verify_random`] driven by a ChaCha8 stream seeded with `seed`.
pub fn verify_seeded(
    op: &DiffOperator,
    eq: &Equation,
    draws: usize,
    seed: u64,
    cfg: &PrecisionConfig,
) -> Result<Vec<VerificationReport>, OracleError> {
    verify_random(op, eq, draws, &mut ChaCha8Rng::seed_from_u64(seed), cfg)
}

fn verify_at(
    op: &DiffOperator,
    eq: &Equation,
    values: &[Rational],
    x0: &Rational,
    cfg: &PrecisionConfig,
) -> Result<VerificationReport, OracleError> {
    let prec = cfg.bits;
    let names = eq.binding.symbol_names();
    let num = instantiate(eq, values)?;
    let point: Vec<Rational> = op
        .context()
        .names()
        .iter()
        .map(|n| {
            if n == "x" {
                Ok(x0.clone())
            } else {
                names.iter().position(|s| s == n).map(|i| values[i].clone()).ok_or_else(|| OracleError::UnknownVariable(n.clone()))
            }
        })
        .collect::<Result<_, _>>()?;
    // p_k(a, x0)·k!, exactly.
    let mut fact = Rational::one();
    let mut weights = Vec::with_capacity(op.order() + 1);
    for (k, p) in op.coeffs().iter().enumerate() {
        if k > 0 {
            fact *= Rational::from_integer(k.into());
        }
        weights.push(Complex::from_rational(&(p.eval(&point) * &fact), prec));
    }
    let roots = all_roots(&num, x0, cfg)?;
    let base = base_polynomial(&num.shape, &num.binding.values().expect("instantiated"));
    let mut residuals = Vec::with_capacity(roots.len());
    for root in &roots {
        let br = taylor_branch(&base, x0, root, op.order(), cfg)?;
        let mut sum = Complex::zero(prec);
        let mut biggest = BigFloat::zero(prec);
        for (w, c) in weights.iter().zip(&br.coeffs) {
            let t = w.mul(c);
            let a = t.abs();
            if a.cmp_abs(&biggest).is_gt() {
                biggest = a;
            }
            sum = sum.add(&t);
        }
        let r = if sum.is_zero() {
            0.0
        } else if biggest.is_zero() {
            f64::INFINITY
        } else {
            sum.abs().div(&biggest).to_f64()
        };
        residuals.push(r);
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let mut labelled: Vec<(String, Rational)> = names.into_iter().zip(values.iter().cloned()).collect();
    labelled.push(("x".into(), x0.clone()));
    Ok(VerificationReport {
        point: labelled,
        residuals,
        max_residual,
        tolerance: cfg.residual_tol,
        bits: prec,
        retried: false,
        passed: max_residual < cfg.residual_tol,
    })
}

/// Numeric rank of the Taylor coefficients `c_0..c_m` of all `m` branches,
/// maximized over `samples` random generic points.
pub fn numeric_determination<R: Rng + ?Sized>(
    shape: &EquationShape,
    cfg: &PrecisionConfig,
    samples: usize,
    rng: &mut R,
) -> Result<usize, OracleError> {
    cfg.validate()?;
    let m = shape.m() as usize;
    let symbolic = Equation::new(shape.clone(), CoefficientBinding::symbolic_default(shape.n()))?;
    let mut best = 0;
    for _ in 0..samples.max(1) {
        let (values, x0) = sample_point(&symbolic, rng)?;
        let num = instantiate(&symbolic, &values)?;
        let roots = all_roots(&num, &x0, cfg)?;
        let base = base_polynomial(shape, &values);
        let mut cols = Vec::with_capacity(m);
        for root in &roots {
            cols.push(taylor_branch(&base, &x0, root, m, cfg)?.coeffs);
        }
        best = best.max(numeric_rank(cols, cfg.bits));
    }
    Ok(best)
}

/// [`numeric_determination`] driven by a ChaCha8 stream seeded with `seed`.
pub fn numeric_determination_seeded(
    shape: &EquationShape,
    cfg: &PrecisionConfig,
    samples: usize,
    seed: u64,
) -> Result<usize, OracleError> {
    numeric_determination(shape, cfg, samples, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Rank of the matrix with the given columns. Rows are scaled to unit max
/// entry first, which leaves the rank alone but evens out the decay of
/// Taylor coefficients.
pub fn numeric_rank(mut cols: Vec<Vec<Complex>>, prec: u32) -> usize {
    let rows = cols.first().map_or(0, Vec::len);
    for i in 0..rows {
        let mut big = BigFloat::zero(prec);
        for c in &cols {
            let a = c[i].abs();
            if a.cmp_abs(&big).is_gt() {
                big = a;
            }
        }
        if big.is_zero() {
            continue;
        }
        let inv = BigFloat::one(prec).div(&big);
        for c in cols.iter_mut() {
            c[i] = c[i].scale(&inv);
        }
    }
    let sv = singular_values(cols);
    let Some(top) = sv.iter().max_by(|a, b| a.cmp_abs(b)) else {
        return 0;
    };
    if top.is_zero() {
        return 0;
    }
    let cutoff = top.ldexp(-i64::from(prec) / 2);
    sv.iter().filter(|s| s.cmp_abs(&cutoff).is_gt() && !s.is_negative()).count()
}
