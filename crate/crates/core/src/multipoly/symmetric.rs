use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::One;

use super::{Monomial, MultiPoly, PolyError, Rational, VarContext};

/// Elementary symmetric polynomial of order `j` in the variables at the
/// given context positions. Order 0 is the constant 1.
pub fn elementary_symmetric(ctx: &Arc<VarContext>, j: usize, vars: &[usize]) -> Result<MultiPoly, PolyError> {
    if j > vars.len() {
        return Err(PolyError::OutOfRange { index: j, max: vars.len() });
    }
    let mut terms = Vec::new();
    let mut chosen = Vec::with_capacity(j);
    subsets(vars, j, 0, &mut chosen, &mut |idx| {
        let mut m = Monomial::one(ctx.len());
        for &v in idx {
            m.set_exponent(v, 1);
        }
        terms.push((m, Rational::one()));
    });
    Ok(MultiPoly::from_terms(ctx, terms))
}

fn subsets(vars: &[usize], k: usize, start: usize, chosen: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        emit(chosen);
        return;
    }
    for i in start..vars.len() {
        if vars.len() - i < k - chosen.len() {
            break;
        }
        chosen.push(vars[i]);
        subsets(vars, k, i + 1, chosen, emit);
        chosen.pop();
    }
}

/// Exponent vectors of `f` projected to the given variables.
pub fn support(f: &MultiPoly, vars: &[usize]) -> BTreeSet<Vec<u32>> {
    f.terms()
        .iter()
        .map(|(m, _)| vars.iter().map(|&v| m.exponent(v)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::int;

    #[test]
    fn low_orders() {
        let c = VarContext::new(["s1", "s2", "a"]).unwrap();
        let s1 = MultiPoly::var(&c, 0);
        let s2 = MultiPoly::var(&c, 1);
        assert_eq!(elementary_symmetric(&c, 1, &[0, 1]).unwrap(), &s1 + &s2);
        assert_eq!(elementary_symmetric(&c, 2, &[0, 1]).unwrap(), &s1 * &s2);
        assert!(elementary_symmetric(&c, 0, &[0, 1]).unwrap().is_one());
        assert!(elementary_symmetric(&c, 3, &[0, 1]).is_err());
    }

    #[test]
    fn generating_identity() {
        // prod (t + s_i) = sum_j e_j t^(m-j) for m <= 5
        for m in 1..=5usize {
            let mut names: Vec<String> = (1..=m).map(|i| format!("s{i}")).collect();
            names.push("t".into());
            let c = VarContext::new(names).unwrap();
            let vars: Vec<usize> = (0..m).collect();
            let t = MultiPoly::var(&c, m);
            let mut lhs = MultiPoly::one(&c);
            for i in 0..m {
                lhs = &lhs * &(&t + &MultiPoly::var(&c, i));
            }
            let mut rhs = MultiPoly::zero(&c);
            for j in 0..=m {
                rhs = &rhs + &(&elementary_symmetric(&c, j, &vars).unwrap() * &t.pow((m - j) as u32));
            }
            assert_eq!(lhs, rhs, "m = {m}");
        }
    }

    #[test]
    fn support_sets() {
        let c = VarContext::new(["a", "x"]).unwrap();
        let a = MultiPoly::var(&c, 0);
        let x = MultiPoly::var(&c, 1);
        let d = &a.pow(5).scale(&int(256)) + &x.pow(4).scale(&int(3125));
        let s = support(&d, &[0, 1]);
        assert_eq!(s, [vec![5, 0], vec![0, 4]].into_iter().collect());
        assert!(support(&MultiPoly::zero(&c), &[0, 1]).is_empty());
        let k = MultiPoly::from_int(&c, -1155);
        assert_eq!(support(&k, &[0, 1]), [vec![0, 0]].into_iter().collect());
    }
}
