//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`MultiPoly`] lives in a [`VarContext`], an ordered list of variable
//! names. Terms are kept sorted in strictly descending lexicographic order of
//! their exponent vectors, where the first variable of the context has the
//! highest precedence. Zero coefficients are never stored.

mod division;
mod gcd;
mod modgcd;
mod symmetric;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;
use thiserror::Error;

pub use division::{exact_divide, multivariate_division, Division};
pub(crate) use division::reduce_natural;
pub use gcd::{content_primitive, gcd, Content};
pub use symmetric::{elementary_symmetric, support};

// Integer fast paths. Most coefficients in this crate are integers, and the
// generic rational operations spend their time in gcd normalization.

#[inline]
pub(crate) fn r_add(a: &Rational, b: &Rational) -> Rational {
    if a.denom().is_one() && b.denom().is_one() {
        Rational::new_raw(a.numer() + b.numer(), BigInt::one())
    } else {
        a + b
    }
}

#[inline]
pub(crate) fn r_sub(a: &Rational, b: &Rational) -> Rational {
    if a.denom().is_one() && b.denom().is_one() {
        Rational::new_raw(a.numer() - b.numer(), BigInt::one())
    } else {
        a - b
    }
}

#[inline]
pub(crate) fn r_mul(a: &Rational, b: &Rational) -> Rational {
    if a.denom().is_one() && b.denom().is_one() {
        Rational::new_raw(a.numer() * b.numer(), BigInt::one())
    } else {
        a * b
    }
}

#[inline]
pub(crate) fn r_div(a: &Rational, b: &Rational) -> Rational {
    if a.denom().is_one() && b.denom().is_one() {
        if b.numer().is_one() {
            return a.clone();
        }
        let (q, r) = a.numer().div_rem(b.numer());
        if r.is_zero() {
            return Rational::new_raw(q, BigInt::one());
        }
    }
    a / b
}

#[inline]
pub(crate) fn r_add_assign(a: &mut Rational, b: &Rational) {
    if a.denom().is_one() && b.denom().is_one() {
        let (n, _) = std::mem::take(a).into_raw();
        *a = Rational::new_raw(n + b.numer(), BigInt::one());
    } else {
        *a += b;
    }
}

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different variable contexts")]
    ContextMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible by the divisor")]
    NotDivisible,
    #[error("all inputs are zero")]
    AllZero,
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` occurs but has no slot in the target context")]
    VariableDropped(String),
    #[error("precedence is not a permutation of the context")]
    BadPrecedence,
}

/// Ordered list of distinct variable names. Position 0 has the highest
/// lexicographic precedence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(VarContext { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The same variables listed in `precedence` order.
    pub fn permuted(&self, precedence: &[usize]) -> Result<Arc<Self>, PolyError> {
        check_permutation(precedence, self.len())?;
        VarContext::new(precedence.iter().map(|&i| self.names[i].clone()))
    }
}

fn check_permutation(p: &[usize], n: usize) -> Result<(), PolyError> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(PolyError::BadPrecedence);
    }
    for &i in p {
        if i >= n || seen[i] {
            return Err(PolyError::BadPrecedence);
        }
        seen[i] = true;
    }
    Ok(())
}

/// Lexicographic monomial order given by a precedence permutation of the
/// context: `precedence[0]` is the most significant variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    precedence: Vec<usize>,
}

impl MonomialOrder {
    /// Lex order in context order.
    pub fn lex(nvars: usize) -> Self {
        MonomialOrder { precedence: (0..nvars).collect() }
    }

    pub fn lex_with_precedence(precedence: Vec<usize>) -> Result<Self, PolyError> {
        check_permutation(&precedence, precedence.len())?;
        Ok(MonomialOrder { precedence })
    }

    /// Lex order by variable names, most significant first.
    pub fn lex_by_names(ctx: &VarContext, names: &[&str]) -> Result<Self, PolyError> {
        let precedence = names
            .iter()
            .map(|n| ctx.index_of(n).ok_or_else(|| PolyError::UnknownVariable(n.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        check_permutation(&precedence, ctx.len())?;
        Ok(MonomialOrder { precedence })
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn is_natural(&self) -> bool {
        self.precedence.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        for &i in &self.precedence {
            match a.0[i].cmp(&b.0[i]) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Leading term of `f` under this order.
    pub fn leading_term<'a>(&self, f: &'a MultiPoly) -> Option<&'a (Monomial, Rational)> {
        if self.is_natural() {
            return f.terms.first();
        }
        f.terms.iter().max_by(|a, b| self.cmp(&a.0, &b.0))
    }
}

/// Exponent vector, one slot per context variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(SmallVec<[u16; 12]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents<I: IntoIterator<Item = u32>>(exps: I) -> Self {
        Monomial(exps.into_iter().map(|e| u16::try_from(e).expect("exponent overflow")).collect())
    }

    pub fn var(nvars: usize, index: usize, exp: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[index] = u16::try_from(exp).expect("exponent overflow");
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        u32::from(self.0[i])
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&e| u32::from(e))
    }

    pub fn set_exponent(&mut self, i: usize, e: u32) {
        self.0[i] = u16::try_from(e).expect("exponent overflow");
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(other.0.iter()) {
            out.push(a.checked_sub(b)?);
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }
}

/// Sparse polynomial over ℚ in a shared variable context.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    ctx: Arc<VarContext>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

pub(crate) fn same_context(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl MultiPoly {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        MultiPoly { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rational) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.push((Monomial::one(ctx.len()), c));
        }
        p
    }

    pub fn from_int(ctx: &Arc<VarContext>, c: i64) -> Self {
        Self::constant(ctx, Rational::from_integer(BigInt::from(c)))
    }

    /// The variable at position `index`.
    pub fn var(ctx: &Arc<VarContext>, index: usize) -> Self {
        Self::term(ctx, Monomial::var(ctx.len(), index, 1), Rational::one())
    }

    pub fn var_named(ctx: &Arc<VarContext>, name: &str) -> Result<Self, PolyError> {
        let i = ctx.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.into()))?;
        Ok(Self::var(ctx, i))
    }

    pub fn term(ctx: &Arc<VarContext>, mon: Monomial, c: Rational) -> Self {
        assert_eq!(mon.len(), ctx.len(), "monomial length must match context");
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.push((mon, c));
        }
        p
    }

    /// Builds a canonical polynomial from arbitrary terms: sorts, merges
    /// equal monomials and drops zeros.
    pub fn from_terms<I>(ctx: &Arc<VarContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut v: Vec<(Monomial, Rational)> = terms.into_iter().collect();
        for (m, _) in &v {
            assert_eq!(m.len(), ctx.len(), "monomial length must match context");
        }
        v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        MultiPoly { ctx: ctx.clone(), terms: out }
    }

    /// Takes terms already sorted strictly descending with nonzero
    /// coefficients.
    pub(crate) fn from_sorted_terms(ctx: &Arc<VarContext>, terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MultiPoly { ctx: ctx.clone(), terms }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending lex order.
    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    /// Leading term under the context's natural lex order.
    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn coefficient(&self, mon: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(m, _)| mon.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    /// Whether variable `var` occurs with positive exponent.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) > 0)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), r_mul(k, c))).collect(),
        }
    }

    /// `c · mon · self`.
    pub fn mul_term(&self, mon: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.mul(mon), r_mul(k, c))).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.merge(other, false)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Result<Self, PolyError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { r_sub(&a[i].1, &b[j].1) } else { r_add(&a[i].1, &b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate { -c } else { c.clone() }));
        }
        Ok(MultiPoly { ctx: self.ctx.clone(), terms: out })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return Ok(large.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(large.len() * 2);
        for (ms, cs) in &small.terms {
            for (ml, cl) in &large.terms {
                let prod = r_mul(cs, cl);
                match acc.entry(ms.mul(ml)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => r_add_assign(e.get_mut(), &prod),
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Ok(MultiPoly { ctx: self.ctx.clone(), terms })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to the variable at `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) > 0)
            .map(|(m, c)| {
                let e = m.exponent(var);
                let mut m2 = m.clone();
                m2.set_exponent(var, e - 1);
                (m2, c * Rational::from_integer(BigInt::from(e)))
            });
        MultiPoly::from_terms(&self.ctx, terms)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`;
    /// entry `k` multiplies `var^k` and does not involve `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            let mut m2 = m.clone();
            m2.set_exponent(var, 0);
            buckets[e].push((m2, c.clone()));
        }
        // Removing one variable from a descending lex list keeps each bucket
        // descending.
        buckets
            .into_iter()
            .map(|t| MultiPoly::from_sorted_terms(&self.ctx, t))
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(ctx: &Arc<VarContext>, var: usize, coeffs: &[MultiPoly]) -> Self {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                debug_assert_eq!(m.exponent(var), 0);
                let mut m2 = m.clone();
                m2.set_exponent(var, k as u32);
                terms.push((m2, v.clone()));
            }
        }
        MultiPoly::from_terms(ctx, terms)
    }

    /// Exchanges the roles of two variables.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = m.clone();
            m2.0.swap(i, j);
            (m2, c.clone())
        });
        MultiPoly::from_terms(&self.ctx, terms)
    }

    /// Substitutes a rational value for one variable.
    pub fn substitute(&self, var: usize, value: &Rational) -> Self {
        let deg = self.degree_in(var);
        let mut powers = Vec::with_capacity(deg as usize + 1);
        let mut p = Rational::one();
        for _ in 0..=deg {
            powers.push(p.clone());
            p *= value;
        }
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(var) as usize;
            let k = c * &powers[e];
            if k.is_zero() {
                return None;
            }
            let mut m2 = m.clone();
            m2.set_exponent(var, 0);
            Some((m2, k))
        });
        MultiPoly::from_terms(&self.ctx, terms)
    }

    /// Evaluates at a full assignment of rational values.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.ctx.len());
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.exponents().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(values[i].clone(), e as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Re-expresses the polynomial in another context, matching variables by
    /// name. Fails if a variable that actually occurs has no slot in `ctx`.
    pub fn remap(&self, ctx: &Arc<VarContext>) -> Result<Self, PolyError> {
        if same_context(&self.ctx, ctx) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.ctx.names.iter().map(|n| ctx.index_of(n)).collect();
        for (i, slot) in map.iter().enumerate() {
            if slot.is_none() && self.involves(i) {
                return Err(PolyError::VariableDropped(self.ctx.names[i].clone()));
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = Monomial::one(ctx.len());
            for (i, e) in m.exponents().enumerate() {
                if let Some(j) = map[i] {
                    m2.set_exponent(j, e);
                }
            }
            (m2, c.clone())
        });
        Ok(MultiPoly::from_terms(ctx, terms))
    }

    /// Multiplies by the least common denominator and divides by the gcd of
    /// the numerators, giving an integer polynomial with coprime
    /// coefficients. The sign is preserved. Returns the scalar `s` with
    /// `self = s · result`.
    pub fn primitive_scalar(&self) -> (Rational, MultiPoly) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let s = rational_content(self.terms.iter().map(|(_, c)| c));
        let inv = s.recip();
        (s, self.scale(&inv))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Largest absolute value of a numerator among the coefficients.
    pub fn max_abs_numerator(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mon = format_monomial(&self.ctx, m);
            match (abs.is_one(), mon.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mon}")?,
                (false, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{mon}")?,
            }
        }
        Ok(())
    }
}

/// Positive rational `s` such that `c / s` is an integer for every input
/// and the resulting integers are coprime.
pub fn rational_content<'a, I: IntoIterator<Item = &'a Rational>>(coeffs: I) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in coeffs {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return Rational::one();
    }
    Rational::new(num, den)
}

fn format_monomial(ctx: &VarContext, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, e) in m.exponents().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ctx.names[i].clone()),
            _ => parts.push(format!("{}^{}", ctx.names[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f)
    }
}

// Operator impls panic on context mismatch; use the `checked_*` methods to
// get a `Result` instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("polynomial context mismatch")
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$checked(&rhs).expect("polynomial context mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(&self)
    }
}

impl<'a> Neg for &'a MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

/// Formats a rational as `num` or `num/den`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num` or `num/den` (optional leading minus).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Lossy conversion used only for diagnostics.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
