//! Brute-force algebraic model counting straight from the definition:
//! `AMC(φ; α) = ⊕_{I ∈ M(φ)} ⊗_{l ∈ I} α(l)`.
//!
//! Conditioning on a literal removes its variable from the scope, so the
//! gradient entry for `l` sums over interpretations of the remaining
//! variables. Conditioning twice on the same variable yields `⊥`. Nothing
//! here touches circuits; it is the reference the engine is tested against.

use crate::error::Result;
use crate::formula::{check_scale, models_over, Formula};
use crate::literal::{GradientVector, Labeling, Literal, Var};
use crate::semiring::Semiring;

fn amc_over<S: Semiring>(
    phi: &Formula,
    scope: &[Var],
    alpha: &Labeling<S::Value>,
    s: &S,
) -> Result<S::Value> {
    let mut total = s.zero();
    for mask in models_over(phi, scope)? {
        let mut weight = s.one();
        for &v in scope {
            let lit = Literal::new(v, (mask >> (v - 1)) & 1 == 1);
            weight = s.mul(&weight, alpha.get(lit));
        }
        total = s.add(&total, &weight);
    }
    Ok(total)
}

fn full_scope<V: Clone>(phi: &Formula, alpha: &Labeling<V>) -> Result<Vec<Var>> {
    let n = alpha.num_vars();
    check_scale(n)?;
    if phi.max_var() as usize > n {
        return Err(crate::Error::Invalid(format!(
            "formula mentions x{} but the labeling covers {n} variables",
            phi.max_var()
        )));
    }
    Ok((1..=n as Var).collect())
}

/// Conditions on `lit` and drops its variable from `scope`; `None` when the
/// variable is not in scope (the conditioned formula is then `⊥`).
fn condition_in_scope(phi: &Formula, scope: &[Var], lit: Literal) -> Option<(Formula, Vec<Var>)> {
    if !scope.contains(&lit.var()) {
        return None;
    }
    let rest = scope.iter().copied().filter(|&v| v != lit.var()).collect();
    Some((phi.condition(lit), rest))
}

/// `AMC(φ; α)` over the variables `1..=n` of the labeling.
pub fn oracle_amc<S: Semiring>(phi: &Formula, alpha: &Labeling<S::Value>, s: &S) -> Result<S::Value> {
    let scope = full_scope(phi, alpha)?;
    amc_over(phi, &scope, alpha, s)
}

/// `[AMC(φ|l; α)]` for every literal, in slot order.
pub fn oracle_grad<S: Semiring>(
    phi: &Formula,
    alpha: &Labeling<S::Value>,
    s: &S,
) -> Result<GradientVector<S::Value>> {
    let scope = full_scope(phi, alpha)?;
    let n = alpha.num_vars();
    let values = Literal::all(n)
        .map(|lit| match condition_in_scope(phi, &scope, lit) {
            Some((cond, rest)) => amc_over(&cond, &rest, alpha, s),
            None => Ok(s.zero()),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GradientVector::new(n, values))
}

/// The `2n × 2n` matrix `AMC(φ | l_i, l_j)` in slot order.
pub fn oracle_hessian<S: Semiring>(
    phi: &Formula,
    alpha: &Labeling<S::Value>,
    s: &S,
) -> Result<Vec<Vec<S::Value>>> {
    let scope = full_scope(phi, alpha)?;
    let n = alpha.num_vars();
    Literal::all(n)
        .map(|li| {
            let first = condition_in_scope(phi, &scope, li);
            Literal::all(n)
                .map(|lj| {
                    let second = first
                        .as_ref()
                        .and_then(|(f, sc)| condition_in_scope(f, sc, lj));
                    match second {
                        Some((f, sc)) => amc_over(&f, &sc, alpha, s),
                        None => Ok(s.zero()),
                    }
                })
                .collect()
        })
        .collect()
}

/// The `n × n` block of [`oracle_hessian`] for positive literals.
pub fn oracle_hessian_positive<S: Semiring>(
    phi: &Formula,
    alpha: &Labeling<S::Value>,
    s: &S,
) -> Result<Vec<Vec<S::Value>>> {
    let n = alpha.num_vars();
    let full = oracle_hessian(phi, alpha, s)?;
    Ok(full
        .into_iter()
        .take(n)
        .map(|row| row.into_iter().take(n).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{Bool, Nat, Prob, Viterbi};

    fn example() -> Formula {
        Formula::and(Formula::or(Formula::var(1), Formula::var(2)), Formula::var(3))
    }

    fn weights() -> Labeling<f64> {
        Labeling::from_pairs([(0.5, 0.5), (0.1, 0.9), (0.8, 0.2)])
    }

    #[test]
    fn amc_examples() {
        let wmc = oracle_amc(&example(), &weights(), &Prob).unwrap();
        assert!((wmc - 0.44).abs() < 1e-12);
        let count = oracle_amc(&example(), &Labeling::constant(3, 1u128), &Nat).unwrap();
        assert_eq!(count, 3);
        let mpe = oracle_amc(&example(), &weights(), &Viterbi).unwrap();
        assert!((mpe - 0.36).abs() < 1e-12);
        assert!(oracle_amc(&example(), &Labeling::constant(3, true), &Bool).unwrap());
    }

    #[test]
    fn grad_examples() {
        let g = oracle_grad(&example(), &weights(), &Prob).unwrap();
        let want = [0.8, 0.8, 0.55, 0.08, 0.4, 0.0];
        for (got, want) in g.as_slice().iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert_eq!(*g.get(Literal::neg(3)), 0.0);

        let counts = oracle_grad(&example(), &Labeling::constant(3, 1u128), &Nat).unwrap();
        assert_eq!(counts.as_slice(), &[2, 2, 3, 1, 1, 0]);
    }

    #[test]
    fn hessian_examples() {
        let h = oracle_hessian(&example(), &weights(), &Prob).unwrap();
        let (x, z, nx) = (0, 2, 3);
        assert!((h[x][z] - 1.0).abs() < 1e-12);
        assert_eq!(h[x][nx], 0.0);
        // a second conditioning on the same variable leaves nothing to sum
        assert_eq!(h[x][x], 0.0);
        for i in 0..6 {
            for j in 0..6 {
                assert!((h[i][j] - h[j][i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn literal_outside_scope_conditions_to_false() {
        let alpha = Labeling::constant(3, 1u128);
        let phi = Formula::var(1);
        let g = oracle_grad(&phi, &alpha, &Nat).unwrap();
        // x1 ∧ (anything over x2, x3)
        assert_eq!(g.as_slice(), &[4, 2, 2, 0, 2, 2]);
        assert!(oracle_amc(&Formula::var(4), &alpha, &Nat).is_err());
    }
}
