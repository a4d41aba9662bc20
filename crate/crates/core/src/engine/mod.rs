//! Forward evaluation and algebraic backpropagation.
//!
//! The backward pass fills one adjoint per node, visiting parents before
//! children, and then folds the adjoints of literal leaves into a gradient
//! vector indexed by literal slot.

mod backward;

use std::fmt;
use std::str::FromStr;

use crate::circuit::{validate, Circuit, Determinism, NodeKind, StructureReport, DEFAULT_DETERMINISM_BUDGET};
use crate::error::{Error, Result};
use crate::literal::{GradientVector, Labeling};
use crate::semiring::Semiring;

/// Backward-pass variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Leave-one-out products recomputed per child.
    Naive,
    /// Division by the child's value, naive where division fails.
    Cancel,
    /// Prefix and suffix products.
    Dynamic,
    /// Division, then ordering, then prefix and suffix products.
    Optimized,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Naive,
        Algorithm::Cancel,
        Algorithm::Dynamic,
        Algorithm::Optimized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Cancel => "cancel",
            Algorithm::Dynamic => "dynamic",
            Algorithm::Optimized => "opt",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Algorithm::Naive),
            "cancel" => Ok(Algorithm::Cancel),
            "dynamic" => Ok(Algorithm::Dynamic),
            "opt" | "optimized" => Ok(Algorithm::Optimized),
            other => Err(Error::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// How the structural gate treats determinism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateOptions {
    /// Largest variable count for which determinism is checked.
    pub determinism_budget: usize,
    /// Accept circuits whose determinism could not be checked, e.g. output
    /// of a compiler that guarantees it. A refuted check still fails.
    pub trust_deterministic: bool,
}

impl Default for GateOptions {
    fn default() -> Self {
        GateOptions {
            determinism_budget: DEFAULT_DETERMINISM_BUDGET,
            trust_deterministic: false,
        }
    }
}

/// Checks that `c` may be evaluated in `semiring`: smooth and decomposable
/// always, deterministic when the semiring is not additively idempotent.
pub fn check_structure<S: Semiring>(c: &Circuit, semiring: &S, opts: GateOptions) -> Result<StructureReport> {
    let needs = semiring.needs_determinism();
    let report = validate(c, if needs { opts.determinism_budget } else { 0 });
    let reason = if !report.decomposable {
        Some(format!(
            "not decomposable (product node {} has children sharing a variable)",
            report.first_overlap.unwrap_or_default()
        ))
    } else if !report.smooth {
        Some(format!(
            "not smooth (sum node {} has children over different variables); smooth the circuit first",
            report.first_unsmooth.unwrap_or_default()
        ))
    } else if !needs {
        None
    } else {
        match report.deterministic {
            Determinism::Verified => None,
            Determinism::Refuted { node } => Some(format!(
                "not deterministic (children of sum node {node} share a model)"
            )),
            Determinism::Unverified if opts.trust_deterministic => None,
            Determinism::Unverified => Some(format!(
                "determinism unverified: {} variables exceed the budget of {}; attest it to proceed",
                report.num_vars, opts.determinism_budget
            )),
        }
    };
    match reason {
        None => Ok(report),
        Some(reason) => Err(Error::Structure {
            semiring: semiring.name(),
            reason,
            report: Box::new(report),
        }),
    }
}

/// Node values from a forward pass, in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTape<V> {
    values: Vec<V>,
    root: usize,
}

impl<V> ForwardTape<V> {
    /// The circuit's AMC value.
    pub fn root_value(&self) -> &V {
        &self.values[self.root]
    }

    pub fn value(&self, id: crate::circuit::NodeId) -> &V {
        &self.values[id as usize]
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_root(mut self) -> V {
        self.values.swap_remove(self.root)
    }
}

/// Counters from the most recent backward pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BackwardStats {
    /// Bytes held by the adjoint array and scratch buffers.
    pub peak_aux_bytes: usize,
    /// Children (cancel) or product nodes (opt) that needed a fallback.
    pub fallbacks: usize,
}

fn forward_values<S: Semiring>(c: &Circuit, alpha: &Labeling<S::Value>, s: &S) -> Result<ForwardTape<S::Value>> {
    if alpha.num_vars() < c.num_vars() {
        return Err(Error::Invalid(format!(
            "labeling covers {} variables but the circuit uses {}",
            alpha.num_vars(),
            c.num_vars()
        )));
    }
    let mut values: Vec<S::Value> = Vec::with_capacity(c.num_nodes());
    for id in c.ids() {
        let v = match c.kind(id) {
            NodeKind::Literal(l) => alpha.get(l).clone(),
            NodeKind::True => s.one(),
            NodeKind::False => s.zero(),
            NodeKind::Sum => {
                let mut acc = s.zero();
                for &k in c.children(id) {
                    s.add_assign(&mut acc, &values[k as usize]);
                }
                acc
            }
            NodeKind::Product => {
                let mut acc = s.one();
                for &k in c.children(id) {
                    s.mul_assign(&mut acc, &values[k as usize]);
                }
                acc
            }
        };
        values.push(v);
    }
    Ok(ForwardTape { values, root: c.root() as usize })
}

/// Reusable evaluator for one circuit and semiring. Buffers persist across
/// calls, so repeated gradients do not reallocate.
#[derive(Debug)]
pub struct Engine<'c, S: Semiring> {
    circuit: &'c Circuit,
    semiring: S,
    adjoint: Vec<S::Value>,
    scratch: Vec<S::Value>,
    stats: BackwardStats,
}

impl<'c, S: Semiring> Engine<'c, S> {
    /// Builds an engine after checking the circuit's structure.
    pub fn new(circuit: &'c Circuit, semiring: S, opts: GateOptions) -> Result<Self> {
        check_structure(circuit, &semiring, opts)?;
        Ok(Self::unchecked(circuit, semiring))
    }

    /// Builds an engine without the structural gate. Results are only
    /// meaningful on circuits that satisfy it.
    pub fn unchecked(circuit: &'c Circuit, semiring: S) -> Self {
        Engine {
            circuit,
            semiring,
            adjoint: Vec::new(),
            scratch: Vec::new(),
            stats: BackwardStats::default(),
        }
    }

    pub fn circuit(&self) -> &'c Circuit {
        self.circuit
    }

    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn stats(&self) -> BackwardStats {
        self.stats
    }

    pub fn forward(&self, alpha: &Labeling<S::Value>) -> Result<ForwardTape<S::Value>> {
        forward_values(self.circuit, alpha, &self.semiring)
    }

    /// Runs one backward pass over a tape from [`Engine::forward`].
    pub fn backward(&mut self, tape: &ForwardTape<S::Value>, algo: Algorithm) -> Result<GradientVector<S::Value>> {
        let (c, s) = (self.circuit, &self.semiring);
        if tape.values.len() != c.num_nodes() {
            return Err(Error::Invalid("forward tape belongs to a different circuit".into()));
        }
        if algo == Algorithm::Cancel && !s.has_division() {
            return Err(Error::Unsupported(format!(
                "the {} semiring has no division; use dynamic or opt",
                s.name()
            )));
        }

        self.adjoint.clear();
        self.adjoint.resize(c.num_nodes(), s.zero());
        self.adjoint[c.root() as usize] = s.one();
        let scratch_len = match algo {
            Algorithm::Dynamic | Algorithm::Optimized => c.max_product_arity(),
            Algorithm::Naive | Algorithm::Cancel => 0,
        };
        if self.scratch.len() < scratch_len {
            self.scratch.resize(scratch_len, s.one());
        }

        let mut fallbacks = 0;
        let values = &tape.values;
        for id in c.ids().rev() {
            let gamma = &self.adjoint[id as usize];
            if *gamma == s.zero() {
                continue;
            }
            let gamma = gamma.clone();
            let kids = c.children(id);
            match c.kind(id) {
                NodeKind::Sum => {
                    for &k in kids {
                        s.add_assign(&mut self.adjoint[k as usize], &gamma);
                    }
                }
                NodeKind::Product => {
                    let adj = &mut self.adjoint;
                    match algo {
                        Algorithm::Naive => backward::naive(s, &gamma, kids, values, adj),
                        Algorithm::Cancel => {
                            fallbacks += backward::cancel(s, &gamma, &values[id as usize], kids, values, adj)
                        }
                        Algorithm::Dynamic => backward::dynamic(s, &gamma, kids, values, adj, &mut self.scratch),
                        Algorithm::Optimized => {
                            if !backward::optimized(s, &gamma, &values[id as usize], kids, values, adj) {
                                fallbacks += 1;
                                backward::dynamic(s, &gamma, kids, values, adj, &mut self.scratch);
                            }
                        }
                    }
                }
                _ => {}
            }
        }

        let n = c.num_vars();
        let mut grad = vec![s.zero(); 2 * n];
        for (id, lit) in c.literal_leaves() {
            s.add_assign(&mut grad[lit.slot(n)], &self.adjoint[id as usize]);
        }
        let width = std::mem::size_of::<S::Value>();
        self.stats = BackwardStats {
            peak_aux_bytes: (self.adjoint.len() + scratch_len) * width,
            fallbacks,
        };
        Ok(GradientVector::new(n, grad))
    }

    /// Forward and backward pass: the AMC value and its gradient.
    pub fn grad(&mut self, alpha: &Labeling<S::Value>, algo: Algorithm) -> Result<(S::Value, GradientVector<S::Value>)> {
        let tape = self.forward(alpha)?;
        let grad = self.backward(&tape, algo)?;
        Ok((tape.into_root(), grad))
    }
}

/// AMC of a circuit after the structural gate.
pub fn amc<S: Semiring>(c: &Circuit, alpha: &Labeling<S::Value>, semiring: &S, opts: GateOptions) -> Result<S::Value> {
    check_structure(c, semiring, opts)?;
    Ok(forward_values(c, alpha, semiring)?.into_root())
}

/// AMC and ∇AMC of a circuit after the structural gate.
pub fn grad_amc<S: Semiring>(
    c: &Circuit,
    alpha: &Labeling<S::Value>,
    semiring: &S,
    algo: Algorithm,
    opts: GateOptions,
) -> Result<(S::Value, GradientVector<S::Value>)> {
    Engine::new(c, semiring.clone(), opts)?.grad(alpha, algo)
}
