//! Residue generators `g_ℓ` and their normal forms modulo the Vieta ideal.

use num_bigint::BigInt;
use num_traits::One;

use super::{determination, AnnihilatorError};
use crate::groebner::{vieta_basis_buchberger, vieta_basis_triangular, GroebnerBasis};
use crate::multipoly::{reduce_natural, MultiPoly, Rational};
use crate::shape::Equation;

/// Which construction of the Vieta Gröbner basis to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Engine {
    Buchberger,
    #[default]
    Cauchy,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Buchberger => "buchberger",
            Engine::Cauchy => "cauchy",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "buchberger" => Ok(Engine::Buchberger),
            "cauchy" => Ok(Engine::Cauchy),
            _ => Err(format!("unknown engine `{s}` (expected buchberger or cauchy)")),
        }
    }
}

/// The polynomials `G_0, …, G_R` in `ℚ[a, x][s_1]` with `deg_{s_1} < m`,
/// living in the root context of the equation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedFamily {
    pub g: Vec<MultiPoly>,
    pub r: usize,
    pub equation: Equation,
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Calls `emit` on every composition of `total` into `parts` nonnegative
/// summands, in reverse-lex order.
fn compositions(total: u32, parts: usize, emit: &mut impl FnMut(&[u32])) {
    fn rec(left: u32, slots: usize, cur: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
        if slots == 1 {
            cur.push(left);
            emit(cur);
            cur.pop();
            return;
        }
        for v in (0..=left).rev() {
            cur.push(v);
            rec(left - v, slots - 1, cur, emit);
            cur.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            emit(&[]);
        }
        return;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), emit);
}

/// `u_j = s_1 − s_j` for `j = 2..m`.
fn root_differences(eq: &Equation) -> Vec<MultiPoly> {
    let ctx = eq.root_context();
    let s1 = MultiPoly::var(&ctx, eq.root_index(1));
    (2..=eq.shape.m() as usize).map(|j| &s1 - &MultiPoly::var(&ctx, eq.root_index(j))).collect()
}

/// Expanded `g_ℓ = −(ℓ−1)! Σ ∏_j binom(ℓ+i_j−1, i_j)·(s_1 − s_j)^(2m−1−ℓ−i_j)`,
/// summed over compositions `i_2 + … + i_m = ℓ − 1`.
pub fn residue_generator(eq: &Equation, l: usize) -> Result<MultiPoly, AnnihilatorError> {
    let r = determination(&eq.shape);
    if l == 0 || l > r {
        return Err(AnnihilatorError::LevelOutOfRange { level: l, max: r });
    }
    let m = eq.shape.m();
    let l32 = l as u32;
    let ctx = eq.root_context();
    let u = root_differences(eq);
    let mut sum = MultiPoly::zero(&ctx);
    compositions(l32 - 1, u.len(), &mut |comp| {
        let mut coef = BigInt::one();
        let mut term = MultiPoly::one(&ctx);
        for (uj, &ij) in u.iter().zip(comp) {
            coef *= binomial(u64::from(l32 + ij - 1), u64::from(ij));
            term = &term * &uj.pow(2 * m - 1 - l32 - ij);
        }
        sum = &sum + &term.scale(&Rational::from_integer(coef));
    });
    let lead = Rational::from_integer(-factorial(l as u64 - 1));
    Ok(sum.scale(&lead))
}

/// Normal forms computed one linear factor at a time.
struct Reducer<'a> {
    basis: &'a [MultiPoly],
    u: Vec<MultiPoly>,
}

impl Reducer<'_> {
    fn mul(&self, p: &MultiPoly, f: &MultiPoly) -> MultiPoly {
        reduce_natural(&(p * f), self.basis)
    }

    fn mul_pow(&self, mut p: MultiPoly, f: &MultiPoly, e: u32) -> MultiPoly {
        for _ in 0..e {
            p = self.mul(&p, f);
        }
        p
    }

    /// `NF(p · D_1^e)` with `D_1 = ∏_j u_j`.
    fn mul_d(&self, mut p: MultiPoly, e: u32) -> MultiPoly {
        for uj in &self.u {
            p = self.mul_pow(p, uj, e);
        }
        p
    }

    /// `NF(S_ℓ)` with `S_ℓ = Σ_comp ∏_j binom(ℓ+i_j−1, i_j)·u_j^(ℓ−1−i_j)`,
    /// accumulated over `j` by partial sums of the composition.
    fn s_sum(&self, ctx: &std::sync::Arc<crate::multipoly::VarContext>, l: u32) -> MultiPoly {
        let b: Vec<Rational> =
            (0..l).map(|i| Rational::from_integer(binomial(u64::from(l + i - 1), u64::from(i)))).collect();
        let mut t: Vec<MultiPoly> = vec![MultiPoly::zero(ctx); l as usize];
        t[0] = MultiPoly::one(ctx);
        for (idx, uj) in self.u.iter().enumerate() {
            let last = idx + 1 == self.u.len();
            let ks: Vec<usize> = if last { vec![l as usize - 1] } else { (0..l as usize).collect() };
            let mut next = vec![MultiPoly::zero(ctx); l as usize];
            for k in ks {
                // Σ_r t_r · b_{k−r} · u^r by Horner, then times u^(ℓ−1−k).
                let mut acc = t[k].scale(&b[0]);
                for r in (0..k).rev() {
                    acc = &self.mul(&acc, uj) + &t[r].scale(&b[k - r]);
                }
                next[k] = self.mul_pow(acc, uj, l - 1 - k as u32);
            }
            t = next;
        }
        t.pop().unwrap()
    }
}

fn vieta_basis(eq: &Equation, engine: Engine) -> Result<GroebnerBasis, AnnihilatorError> {
    Ok(match engine {
        Engine::Buchberger => vieta_basis_buchberger(eq)?,
        Engine::Cauchy => vieta_basis_triangular(eq)?,
    })
}

/// Runs the reduction stage: `G_ℓ = NF(g_ℓ)` for `ℓ = 1..R` and
/// `G_0 = NF(s_1·D_1^(2m−1))`.
pub fn reduced_family(eq: &Equation, engine: Engine) -> Result<ReducedFamily, AnnihilatorError> {
    let gb = vieta_basis(eq, engine)?;
    let ctx = eq.root_context();
    let m = eq.shape.m();
    let r = determination(&eq.shape);
    let red = Reducer { basis: &gb.basis, u: root_differences(eq) };
    let s1 = MultiPoly::var(&ctx, eq.root_index(1));
    let mut g = Vec::with_capacity(r + 1);
    g.push(red.mul_d(reduce_natural(&s1, &gb.basis), 2 * m - 1));
    for l in 1..=r as u32 {
        let s = red.s_sum(&ctx, l);
        let full = red.mul_d(s, 2 * m - 2 * l);
        g.push(full.scale(&Rational::from_integer(-factorial(u64::from(l) - 1))));
    }
    let fam = ReducedFamily { g, r, equation: eq.clone() };
    check_family(&fam)?;
    Ok(fam)
}

/// Normal form of the expanded generator; slow, kept for cross-checks.
pub fn reduced_generator_expanded(eq: &Equation, l: usize, engine: Engine) -> Result<MultiPoly, AnnihilatorError> {
    let gb = vieta_basis(eq, engine)?;
    Ok(reduce_natural(&residue_generator(eq, l)?, &gb.basis))
}

fn check_family(fam: &ReducedFamily) -> Result<(), AnnihilatorError> {
    let eq = &fam.equation;
    let m = eq.shape.m() as usize;
    let s1 = eq.root_index(1);
    for (l, g) in fam.g.iter().enumerate() {
        let stray = (2..=m).any(|j| g.involves(eq.root_index(j)));
        if stray || g.degree_in(s1) as usize >= m {
            return Err(AnnihilatorError::NotReduced { level: l });
        }
    }
    Ok(())
}
