//! Applications of ∇AMC: EM conditionals, entropy, MPE gradients, sampled
//! gradients, Hessian rows and the GF(2) Hessian constructions.

mod gf2;
mod indecater;

use crate::circuit::Circuit;
use crate::engine::{check_structure, Algorithm, Engine, GateOptions};
use crate::error::{Error, Result};
use crate::literal::{GradientVector, Labeling, Literal};
use crate::semiring::{DualValue, Grad, Log, Prob, Semiring, Tropical, Viterbi};

pub use gf2::{matrix_to_circuit, matrix_vec_to_circuit, BinaryMatrix};
pub use indecater::{indecater_estimate, Estimate, SampleBatch};

/// Independent Bernoulli parameters, one per variable: `α(v) = p(v)` and
/// `α(¬v) = 1 − p(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliParams {
    probs: Vec<f64>,
}

impl BernoulliParams {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Domain {
                semiring: "prob",
                message: format!("p(x{}) = {p} is not a probability", i + 1),
            });
        }
        Ok(BernoulliParams { probs })
    }

    /// Reads the positive-literal labels of a probability labeling.
    pub fn from_labeling(alpha: &Labeling<f64>) -> Result<Self> {
        Self::new(
            (1..=alpha.num_vars() as u32)
                .map(|v| *alpha.get(Literal::pos(v)))
                .collect(),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of a literal.
    pub fn prob(&self, lit: Literal) -> f64 {
        let p = self.probs[lit.var() as usize - 1];
        if lit.is_positive() {
            p
        } else {
            1.0 - p
        }
    }

    /// Labels under any semiring, from the probability of each literal.
    pub fn labeling<V: Clone>(&self, mut f: impl FnMut(Literal, f64) -> V) -> Labeling<V> {
        let n = self.num_vars();
        Labeling::from_slots(Literal::all(n).map(|l| f(l, self.prob(l))).collect())
            .expect("two labels per variable")
    }

    pub fn prob_labels(&self) -> Labeling<f64> {
        self.labeling(|_, p| p)
    }

    pub fn log_labels(&self) -> Labeling<f64> {
        self.labeling(|_, p| p.ln())
    }

    fn covering(&self, c: &Circuit) -> Result<()> {
        if self.num_vars() < c.num_vars() {
            return Err(Error::Invalid(format!(
                "{} parameters given for a circuit over {} variables",
                self.num_vars(),
                c.num_vars()
            )));
        }
        Ok(())
    }
}

/// `p(l | φ)` for every literal, from one backward pass in the log semiring.
pub fn em_conditionals(c: &Circuit, params: &BernoulliParams, opts: GateOptions) -> Result<GradientVector<f64>> {
    params.covering(c)?;
    let logs = params.log_labels();
    let (total, grad) = Engine::new(c, Log, opts)?.grad(&logs, Algorithm::Optimized)?;
    if total == f64::NEG_INFINITY {
        return Err(Error::ZeroProbability);
    }
    let n = grad.num_vars();
    let values = grad
        .iter()
        .map(|(lit, g)| (g + logs.get(lit) - total).exp().clamp(0.0, 1.0))
        .collect();
    Ok(GradientVector::new(n, values))
}

/// Entropy of the model distribution restricted to `φ`, and its conditioned
/// counterparts.
#[derive(Debug, Clone, PartialEq)]
pub struct Entropy {
    /// `p(φ)`
    pub probability: f64,
    /// `−Σ p(I) ln p(I)` over the models of `φ`, in nats.
    pub entropy: f64,
    /// The same sum over the models of `φ|l`, unnormalized.
    pub per_literal: GradientVector<f64>,
}

pub fn conditional_entropy(c: &Circuit, params: &BernoulliParams, opts: GateOptions) -> Result<Entropy> {
    params.covering(c)?;
    let alpha = params.labeling(|_, p| DualValue::new(p, if p > 0.0 { -p * p.ln() } else { 0.0 }));
    let (root, grad) = Engine::new(c, Grad, opts)?.grad(&alpha, Algorithm::Optimized)?;
    Ok(Entropy {
        probability: root.primal,
        entropy: root.tangent,
        per_literal: grad.map(|d| d.tangent),
    })
}

/// Per literal, the largest probability (or log probability) of a model of
/// `φ|l`, along with the MPE value itself.
pub fn mpe_gradient(
    c: &Circuit,
    params: &BernoulliParams,
    logspace: bool,
    opts: GateOptions,
) -> Result<(f64, GradientVector<f64>)> {
    params.covering(c)?;
    if logspace {
        Engine::new(c, Tropical, opts)?.grad(&params.log_labels(), Algorithm::Optimized)
    } else {
        Engine::new(c, Viterbi, opts)?.grad(&params.prob_labels(), Algorithm::Optimized)
    }
}

/// Row `y` of the Hessian of the WMC with respect to the literal labels,
/// from one pass in the dual-number semiring.
pub fn hessian_row(c: &Circuit, params: &BernoulliParams, y: Literal, opts: GateOptions) -> Result<Vec<f64>> {
    params.covering(c)?;
    check_structure(c, &Prob, opts)?;
    let alpha = params.labeling(|l, p| DualValue::new(p, if l == y { 1.0 } else { 0.0 }));
    let (_, grad) = Engine::new(c, Grad, opts)?.grad(&alpha, Algorithm::Optimized)?;
    Ok(grad.as_slice().iter().map(|d| d.tangent).collect())
}

/// Row `y` of `AMC(φ | y, l)` in any semiring: the gradient of the circuit
/// with `y` fixed true. Entries for `y`'s own variable are `e⊕`. The root
/// must cover `y`'s variable.
pub fn conditioned_hessian_row<S: Semiring>(
    c: &Circuit,
    alpha: &Labeling<S::Value>,
    semiring: &S,
    y: Literal,
    algo: Algorithm,
    opts: GateOptions,
) -> Result<GradientVector<S::Value>> {
    let mut fixed = alpha.clone();
    fixed.set(y, semiring.one());
    fixed.set(y.negated(), semiring.zero());
    let (_, grad) = Engine::new(c, semiring.clone(), opts)?.grad(&fixed, algo)?;
    let n = grad.num_vars();
    let mut row = grad.into_vec();
    row[y.slot(n)] = semiring.zero();
    row[y.negated().slot(n)] = semiring.zero();
    Ok(GradientVector::new(n, row))
}
