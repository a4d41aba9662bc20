//! Propositional formulas, conditioning and model enumeration.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::literal::{Literal, Var};

/// Largest variable count the enumeration routines accept.
pub const MAX_ORACLE_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Lit(Literal),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn lit(l: Literal) -> Self {
        Formula::Lit(l)
    }

    pub fn var(v: Var) -> Self {
        Formula::Lit(Literal::pos(v))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `⊤` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `⊥` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Lit(l) => {
                out.insert(l.var());
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Largest variable index mentioned, 0 for a constant formula.
    pub fn max_var(&self) -> Var {
        self.vars().last().copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Lit(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Truth value under an assignment (`truth(v)` for each variable).
    pub fn eval_with(&self, truth: &impl Fn(Var) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Lit(l) => truth(l.var()) == l.is_positive(),
            Formula::Not(f) => !f.eval_with(truth),
            Formula::And(a, b) => a.eval_with(truth) && b.eval_with(truth),
            Formula::Or(a, b) => a.eval_with(truth) || b.eval_with(truth),
        }
    }

    pub fn eval(&self, interp: &Interpretation) -> bool {
        self.eval_with(&|v| interp.value(v))
    }

    /// `φ | x`: every occurrence of `x` becomes `⊤` and every occurrence of
    /// `¬x` becomes `⊥`. No further simplification.
    pub fn condition(&self, x: Literal) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Lit(l) if *l == x => Formula::True,
            Formula::Lit(l) if *l == x.negated() => Formula::False,
            Formula::Lit(l) => Formula::Lit(*l),
            Formula::Not(f) => Formula::not(f.condition(x)),
            Formula::And(a, b) => Formula::and(a.condition(x), b.condition(x)),
            Formula::Or(a, b) => Formula::or(a.condition(x), b.condition(x)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("⊤"),
            Formula::False => f.write_str("⊥"),
            Formula::Lit(l) if l.is_positive() => write!(f, "x{}", l.var()),
            Formula::Lit(l) => write!(f, "¬x{}", l.var()),
            Formula::Not(a) => write!(f, "¬({a})"),
            Formula::And(a, b) => write!(f, "({a} ∧ {b})"),
            Formula::Or(a, b) => write!(f, "({a} ∨ {b})"),
        }
    }
}

/// A total truth assignment over variables `1..=n`, stored as a bitmask
/// (bit `v - 1` is the value of `x_v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interpretation {
    mask: u64,
    num_vars: usize,
}

impl Interpretation {
    pub fn new(mask: u64, num_vars: usize) -> Self {
        Interpretation { mask, num_vars }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn value(&self, v: Var) -> bool {
        v >= 1 && (self.mask >> (v - 1)) & 1 == 1
    }

    /// The literals of this interpretation, one per variable.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        (1..=self.num_vars as Var).map(|v| Literal::new(v, self.value(v)))
    }
}

pub(crate) fn check_scale(vars: usize) -> Result<()> {
    if vars > MAX_ORACLE_VARS {
        Err(Error::OracleScale {
            vars,
            limit: MAX_ORACLE_VARS,
        })
    } else {
        Ok(())
    }
}

/// Assignments over `scope` satisfying `phi`, as masks over the full
/// variable range. Lexicographic order: the first scope variable is the most
/// significant, `⊥` before `⊤`.
pub(crate) fn models_over(phi: &Formula, scope: &[Var]) -> Result<Vec<u64>> {
    check_scale(scope.len())?;
    let k = scope.len();
    let mut out = Vec::new();
    for code in 0u64..(1u64 << k) {
        let mut mask = 0u64;
        for (i, &v) in scope.iter().enumerate() {
            if (code >> (k - 1 - i)) & 1 == 1 {
                mask |= 1 << (v - 1);
            }
        }
        if phi.eval_with(&|v| (mask >> (v - 1)) & 1 == 1) {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Every model of `phi` over the variables `1..=num_vars`.
pub fn enumerate_models(phi: &Formula, num_vars: usize) -> Result<Vec<Interpretation>> {
    check_scale(num_vars)?;
    if phi.max_var() as usize > num_vars {
        return Err(Error::Invalid(format!(
            "formula mentions x{} outside the {num_vars} enumerated variables",
            phi.max_var()
        )));
    }
    let scope: Vec<Var> = (1..=num_vars as Var).collect();
    Ok(models_over(phi, &scope)?
        .into_iter()
        .map(|m| Interpretation::new(m, num_vars))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Formula {
        // (x ∨ y) ∧ z
        Formula::and(Formula::or(Formula::var(1), Formula::var(2)), Formula::var(3))
    }

    #[test]
    fn condition_substitutes_only() {
        let f = example().condition(Literal::pos(1));
        assert_eq!(
            f,
            Formula::and(Formula::or(Formula::True, Formula::var(2)), Formula::var(3))
        );
        let g = example().condition(Literal::neg(3));
        assert_eq!(
            g,
            Formula::and(Formula::or(Formula::var(1), Formula::var(2)), Formula::False)
        );
        let h = Formula::var(1).condition(Literal::neg(1));
        assert_eq!(h, Formula::False);
        assert!(enumerate_models(&h, 1).unwrap().is_empty());
    }

    #[test]
    fn example_has_three_models() {
        let models = enumerate_models(&example(), 3).unwrap();
        let sets: Vec<Vec<i32>> = models
            .iter()
            .map(|m| m.literals().map(Literal::dimacs).collect())
            .collect();
        assert_eq!(sets, vec![vec![-1, 2, 3], vec![1, -2, 3], vec![1, 2, 3]]);
    }

    #[test]
    fn constants() {
        assert!(enumerate_models(&Formula::False, 3).unwrap().is_empty());
        assert_eq!(enumerate_models(&Formula::True, 1).unwrap().len(), 2);
    }

    #[test]
    fn scale_guard() {
        assert!(matches!(
            enumerate_models(&Formula::True, 25),
            Err(Error::OracleScale { vars: 25, .. })
        ));
    }

    #[test]
    fn conditioning_selects_models() {
        // models of φ|x over the other variables are the models of φ containing x
        let phi = example();
        let all = enumerate_models(&phi, 3).unwrap();
        for lit in Literal::all(3) {
            let cond = phi.condition(lit);
            let with_lit = all.iter().filter(|m| m.value(lit.var()) == lit.is_positive()).count();
            let scope: Vec<Var> = (1..=3).filter(|&v| v != lit.var()).collect();
            assert_eq!(models_over(&cond, &scope).unwrap().len(), with_lit, "{lit}");
        }
    }
}
