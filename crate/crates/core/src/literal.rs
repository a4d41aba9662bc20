//! Variables, literals, labelings and gradient vectors.
//!
//! Variables are dense 1-based indices. Per-literal vectors are laid out as
//! `x1 .. xn, ¬x1 .. ¬xn`.

use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::Semiring;

/// A propositional variable, indexed from 1.
pub type Var = u32;

/// A signed variable reference in DIMACS convention: `3` is `x3`, `-3` is `¬x3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(i32);

impl Literal {
    pub fn new(var: Var, positive: bool) -> Self {
        assert!(var >= 1 && var <= i32::MAX as u32, "variable index out of range: {var}");
        let v = var as i32;
        Literal(if positive { v } else { -v })
    }

    pub fn pos(var: Var) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: Var) -> Self {
        Self::new(var, false)
    }

    /// Parses a DIMACS literal; zero is rejected.
    pub fn from_dimacs(code: i64) -> Option<Self> {
        if code == 0 || code.unsigned_abs() > i32::MAX as u64 {
            None
        } else {
            Some(Literal(code as i32))
        }
    }

    pub fn dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Self {
        Literal(-self.0)
    }

    /// Position in a per-literal vector over `num_vars` variables.
    pub fn slot(self, num_vars: usize) -> usize {
        let v = self.var() as usize - 1;
        if self.is_positive() {
            v
        } else {
            num_vars + v
        }
    }

    /// Inverse of [`Literal::slot`].
    pub fn from_slot(slot: usize, num_vars: usize) -> Self {
        if slot < num_vars {
            Literal::pos(slot as Var + 1)
        } else {
            Literal::neg((slot - num_vars) as Var + 1)
        }
    }

    /// All `2n` literals in slot order.
    pub fn all(num_vars: usize) -> impl Iterator<Item = Literal> {
        (0..2 * num_vars).map(move |s| Literal::from_slot(s, num_vars))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Total map from the `2n` literals to semiring values.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeling<V> {
    num_vars: usize,
    values: Vec<V>,
}

impl<V: Clone> Labeling<V> {
    /// Every literal mapped to `value`.
    pub fn constant(num_vars: usize, value: V) -> Self {
        Labeling {
            num_vars,
            values: vec![value; 2 * num_vars],
        }
    }

    /// The semiring's default labeling (`e⊗` everywhere, or the symbolic
    /// labels for the sensitivity semiring).
    pub fn default_for<S: Semiring<Value = V>>(semiring: &S, num_vars: usize) -> Self {
        Labeling {
            num_vars,
            values: Literal::all(num_vars).map(|l| semiring.default_label(l)).collect(),
        }
    }

    /// Builds a labeling from `(α(v), α(¬v))` pairs for `v = 1..n`.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, V)>) -> Self {
        let (pos, neg): (Vec<V>, Vec<V>) = pairs.into_iter().unzip();
        let num_vars = pos.len();
        let mut values = pos;
        values.extend(neg);
        Labeling { num_vars, values }
    }

    /// Builds a labeling from a slot-ordered vector of length `2n`.
    pub fn from_slots(values: Vec<V>) -> Result<Self> {
        if values.len() % 2 != 0 {
            return Err(Error::Invalid(format!(
                "labeling needs an even number of entries, got {}",
                values.len()
            )));
        }
        Ok(Labeling {
            num_vars: values.len() / 2,
            values,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Label of a literal. Panics if its variable is out of scope.
    pub fn get(&self, lit: Literal) -> &V {
        &self.values[self.slot_checked(lit)]
    }

    pub fn set(&mut self, lit: Literal, value: V) {
        let s = self.slot_checked(lit);
        self.values[s] = value;
    }

    pub fn contains(&self, lit: Literal) -> bool {
        (lit.var() as usize) <= self.num_vars
    }

    /// Grows the scope to `num_vars`, filling new literals with `fill`.
    pub fn extend_to(&mut self, num_vars: usize, mut fill: impl FnMut(Literal) -> V) {
        if num_vars <= self.num_vars {
            return;
        }
        let old = self.num_vars;
        let mut values = Vec::with_capacity(2 * num_vars);
        for slot in 0..2 * num_vars {
            let lit = Literal::from_slot(slot, num_vars);
            if (lit.var() as usize) <= old {
                values.push(self.values[lit.slot(old)].clone());
            } else {
                values.push(fill(lit));
            }
        }
        self.values = values;
        self.num_vars = num_vars;
    }

    pub fn as_slice(&self) -> &[V] {
        &self.values
    }

    fn slot_checked(&self, lit: Literal) -> usize {
        assert!(
            self.contains(lit),
            "literal {lit} outside labeling scope of {} variables",
            self.num_vars
        );
        lit.slot(self.num_vars)
    }
}

/// One semiring value per literal, ordered `x1 .. xn, ¬x1 .. ¬xn`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientVector<V> {
    num_vars: usize,
    values: Vec<V>,
}

impl<V> GradientVector<V> {
    pub fn new(num_vars: usize, values: Vec<V>) -> Self {
        assert_eq!(values.len(), 2 * num_vars, "gradient length must be 2n");
        GradientVector { num_vars, values }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, lit: Literal) -> &V {
        &self.values[lit.slot(self.num_vars)]
    }

    pub fn as_slice(&self) -> &[V] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<V> {
        self.values
    }

    /// `(literal, value)` pairs in slot order.
    pub fn iter(&self) -> impl Iterator<Item = (Literal, &V)> {
        let n = self.num_vars;
        self.values
            .iter()
            .enumerate()
            .map(move |(s, v)| (Literal::from_slot(s, n), v))
    }

    pub fn map<W>(&self, f: impl FnMut(&V) -> W) -> GradientVector<W> {
        GradientVector {
            num_vars: self.num_vars,
            values: self.values.iter().map(f).collect(),
        }
    }
}

/// Gradient towards variables, `∇[v] ⊕ −∇[¬v]`. Only defined for semirings
/// with additive inverses.
pub fn variable_gradient<S: Semiring>(
    grad: &GradientVector<S::Value>,
    semiring: &S,
) -> Result<Vec<S::Value>> {
    let n = grad.num_vars();
    (1..=n as Var)
        .map(|v| {
            let neg = semiring.negate(grad.get(Literal::neg(v))).ok_or_else(|| {
                Error::Unsupported(format!(
                    "variable gradients need additive inverses; the {} semiring is not a ring",
                    semiring.name()
                ))
            })?;
            Ok(semiring.add(grad.get(Literal::pos(v)), &neg))
        })
        .collect()
}
