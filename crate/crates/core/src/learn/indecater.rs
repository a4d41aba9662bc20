use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::BernoulliParams;
use crate::circuit::Circuit;
use crate::engine::{check_structure, Algorithm, Engine, GateOptions};
use crate::error::{Error, Result};
use crate::literal::{GradientVector, Labeling, Literal};
use crate::semiring::Bool;

const CHUNK: u64 = 512;

/// A reproducible batch of joint samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleBatch {
    pub seed: u64,
    pub count: u64,
}

/// Sampled estimate of `p(φ)` and its gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub probability: f64,
    pub gradient: GradientVector<f64>,
    /// Binomial standard error of each gradient entry.
    pub stderr: Vec<f64>,
}

/// Draws `w ~ α` per sample and averages `∇AMC_Bool(φ; w)`.
///
/// Sample `i` uses the ChaCha8 stream `i` under `seed`, drawing variables in
/// order, so results do not depend on how the batch is split across threads.
pub fn indecater_estimate(
    c: &Circuit,
    params: &BernoulliParams,
    batch: SampleBatch,
    opts: GateOptions,
) -> Result<Estimate> {
    if batch.count == 0 {
        return Err(Error::EmptyBatch);
    }
    params.covering(c)?;
    check_structure(c, &Bool, opts)?;
    let n = c.num_vars();

    let chunks = batch.count.div_ceil(CHUNK);
    let (hits, grad_hits) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut engine = Engine::unchecked(c, Bool);
            let mut alpha = Labeling::constant(n, false);
            let mut hits = 0u64;
            let mut counts = vec![0u64; 2 * n];
            let end = ((chunk + 1) * CHUNK).min(batch.count);
            for sample in chunk * CHUNK..end {
                let mut rng = ChaCha8Rng::seed_from_u64(batch.seed);
                rng.set_stream(sample);
                for v in 1..=n as u32 {
                    let w = rng.random::<f64>() < params.prob(Literal::pos(v));
                    alpha.set(Literal::pos(v), w);
                    alpha.set(Literal::neg(v), !w);
                }
                let (sat, grad) = engine.grad(&alpha, Algorithm::Optimized)?;
                hits += sat as u64;
                for (count, &g) in counts.iter_mut().zip(grad.as_slice()) {
                    *count += g as u64;
                }
            }
            Ok((hits, counts))
        })
        .reduce(
            || Ok((0, vec![0u64; 2 * n])),
            |a: Result<(u64, Vec<u64>)>, b| {
                let (mut ha, mut ca) = a?;
                let (hb, cb) = b?;
                ha += hb;
                for (x, y) in ca.iter_mut().zip(cb) {
                    *x += y;
                }
                Ok((ha, ca))
            },
        )?;

    let total = batch.count as f64;
    let gradient: Vec<f64> = grad_hits.iter().map(|&h| h as f64 / total).collect();
    let stderr = gradient.iter().map(|&g| (g * (1.0 - g) / total).sqrt()).collect();
    Ok(Estimate {
        probability: hits as f64 / total,
        gradient: GradientVector::new(n, gradient),
        stderr,
    })
}
