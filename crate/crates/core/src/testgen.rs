//! Random formulas, circuits and labelings for tests and benchmarks.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::error::Result;
use crate::formula::{enumerate_models, Formula};
use crate::literal::{Labeling, Literal, Var};
use crate::semiring::{
    Bool, DualValue, Fuzzy, Gf2, Gf2Value, Grad, Log, Nat, Prob, Semiring, Sens, SparsePolynomial, Tropical, Viterbi,
};

/// Random formula over `x1..x_num_vars` with about `size` connectives.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, num_vars: usize, size: usize) -> Formula {
    if size == 0 || num_vars == 0 {
        return match rng.random_range(0..20) {
            0 => Formula::True,
            1 => Formula::False,
            _ if num_vars == 0 => Formula::True,
            _ => Formula::lit(Literal::new(rng.random_range(1..=num_vars as Var), rng.random())),
        };
    }
    let left = rng.random_range(0..size);
    match rng.random_range(0..10) {
        0 => Formula::not(random_formula(rng, num_vars, size - 1)),
        1..=4 => Formula::and(
            random_formula(rng, num_vars, left),
            random_formula(rng, num_vars, size - 1 - left),
        ),
        _ => Formula::or(
            random_formula(rng, num_vars, left),
            random_formula(rng, num_vars, size - 1 - left),
        ),
    }
}

/// DNF with one cube per model: smooth, deterministic and decomposable.
pub fn compile_mods(phi: &Formula, num_vars: usize) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let models = enumerate_models(phi, num_vars)?;
    let cubes: Vec<NodeId> = models
        .iter()
        .map(|m| {
            let lits: Vec<NodeId> = m.literals().map(|l| b.literal(l)).collect();
            if lits.is_empty() {
                b.constant(true)
            } else {
                b.product(&lits)
            }
        })
        .collect();
    let root = if cubes.is_empty() { b.constant(false) } else { b.sum(&cubes) };
    Ok(b.finish_with_vars(root, num_vars))
}

/// Shape of [`random_ddnnf`] circuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdnnfConfig {
    pub num_vars: usize,
    /// Chance that a node splits its variables into independent factors
    /// instead of deciding on one variable.
    pub split: f64,
    /// Chance that a decision keeps both branches.
    pub both_branches: f64,
    /// Chance of reusing an existing node over the same variables.
    pub share: f64,
    /// Chance of replacing a branch by `⊥` times gadgets.
    pub zero: f64,
    /// Chance of repeating the decision literal inside a branch. Such
    /// circuits are no longer decomposable; evaluate them without the
    /// structural gate.
    pub duplicate: f64,
}

impl DdnnfConfig {
    pub fn new(num_vars: usize) -> Self {
        DdnnfConfig {
            num_vars,
            split: 0.35,
            both_branches: 0.8,
            share: 0.3,
            zero: 0.0,
            duplicate: 0.0,
        }
    }
}

/// Random smooth d-DNNF whose root mentions every variable.
pub fn random_ddnnf<R: Rng + ?Sized>(rng: &mut R, cfg: &DdnnfConfig) -> Circuit {
    let mut g = Generator { rng, cfg, b: CircuitBuilder::new(), seen: HashMap::new(), gadgets: HashMap::new() };
    let mut vars: Vec<Var> = (1..=cfg.num_vars as Var).collect();
    let root = if vars.is_empty() { g.b.constant(true) } else { g.node(&mut vars) };
    g.b.finish_with_vars(root, cfg.num_vars)
}

struct Generator<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    cfg: &'a DdnnfConfig,
    b: CircuitBuilder,
    seen: HashMap<Vec<Var>, Vec<NodeId>>,
    gadgets: HashMap<Var, NodeId>,
}

impl<R: Rng + ?Sized> Generator<'_, R> {
    /// Node over exactly `vars` (sorted on return).
    fn node(&mut self, vars: &mut [Var]) -> NodeId {
        vars.sort_unstable();
        if let Some(prev) = self.seen.get(vars) {
            if self.rng.random_bool(self.cfg.share) {
                return prev[self.rng.random_range(0..prev.len())];
            }
        }
        let id = if vars.len() == 1 {
            let v = vars[0];
            match self.rng.random_range(0..4) {
                0 => self.gadget(v),
                1 => self.b.literal(Literal::neg(v)),
                _ => self.b.literal(Literal::pos(v)),
            }
        } else if self.rng.random_bool(self.cfg.split) {
            vars.shuffle(self.rng);
            let cut = self.rng.random_range(1..vars.len());
            let (left, right) = vars.split_at_mut(cut);
            let kids = [self.node(left), self.node(right)];
            self.b.product(&kids)
        } else {
            let pick = self.rng.random_range(0..vars.len());
            vars.swap(0, pick);
            let v = vars[0];
            let rest = &mut vars[1..];
            let mut branches = Vec::with_capacity(2);
            let keep_both = self.rng.random_bool(self.cfg.both_branches);
            let first_positive = self.rng.random::<bool>();
            for (i, positive) in [first_positive, !first_positive].into_iter().enumerate() {
                if i == 1 && !keep_both {
                    break;
                }
                let lit = self.b.literal(Literal::new(v, positive));
                let sub = self.branch(rest);
                let mut kids = vec![lit, sub];
                if self.rng.random_bool(self.cfg.duplicate) {
                    kids.push(lit);
                }
                branches.push(self.b.product(&kids));
            }
            if branches.len() == 1 {
                // keep the decision variable's scope on a single branch
                branches[0]
            } else {
                self.b.sum(&branches)
            }
        };
        vars.sort_unstable();
        self.seen.entry(vars.to_vec()).or_default().push(id);
        id
    }

    fn branch(&mut self, vars: &mut [Var]) -> NodeId {
        if self.rng.random_bool(self.cfg.zero) {
            let bottom = self.b.constant(false);
            let mut kids = vec![bottom];
            for &v in vars.iter() {
                kids.push(self.gadget(v));
            }
            self.b.product(&kids)
        } else {
            self.node(vars)
        }
    }

    fn gadget(&mut self, v: Var) -> NodeId {
        if let Some(&g) = self.gadgets.get(&v) {
            return g;
        }
        let g = self.b.gadget(v);
        self.gadgets.insert(v, g);
        g
    }
}

/// A product of `x1..x_arity`.
pub fn star_product(arity: usize) -> Circuit {
    let mut b = CircuitBuilder::new();
    let leaves: Vec<NodeId> = (1..=arity as Var).map(|v| b.literal(Literal::pos(v))).collect();
    let root = b.product(&leaves);
    b.finish(root)
}

/// Semirings that can draw random literal labels.
pub trait RandomLabel: Semiring {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, lit: Literal) -> Self::Value;
}

/// A probability that is exactly zero now and then.
fn prob<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(0.1) {
        0.0
    } else {
        rng.random_range(0.01..0.99)
    }
}

impl RandomLabel for Bool {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> bool {
        rng.random_bool(0.7)
    }
}

impl RandomLabel for Gf2 {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> Gf2Value {
        Gf2Value(rng.random())
    }
}

impl RandomLabel for Nat {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> u128 {
        rng.random_range(0..4)
    }
}

impl RandomLabel for Prob {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> f64 {
        prob(rng)
    }
}

impl RandomLabel for Viterbi {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> f64 {
        prob(rng)
    }
}

impl RandomLabel for Fuzzy {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> f64 {
        // coarse grid so that ties occur
        rng.random_range(0..=10) as f64 / 10.0
    }
}

impl RandomLabel for Log {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> f64 {
        prob(rng).ln()
    }
}

impl RandomLabel for Tropical {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> f64 {
        prob(rng).ln()
    }
}

impl RandomLabel for Grad {
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, _: Literal) -> DualValue {
        DualValue::new(prob(rng), rng.random_range(-1.0..1.0))
    }
}

impl RandomLabel for Sens {
    /// `a·X_v` with a small integer `a` for positive literals, a small
    /// constant for negative ones.
    fn random_label<R: Rng + ?Sized>(&self, rng: &mut R, lit: Literal) -> SparsePolynomial {
        let a = rng.random_range(0..4) as f64;
        if lit.is_positive() {
            SparsePolynomial::var(lit.var()).mul(&SparsePolynomial::constant(a))
        } else {
            SparsePolynomial::constant(a)
        }
    }
}

pub fn random_labeling<S: RandomLabel, R: Rng + ?Sized>(s: &S, rng: &mut R, num_vars: usize) -> Labeling<S::Value> {
    Labeling::from_slots(Literal::all(num_vars).map(|l| s.random_label(rng, l)).collect())
        .expect("two labels per variable")
}
