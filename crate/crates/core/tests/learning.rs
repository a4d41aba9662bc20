use amcgrad::circuit::{validate, Determinism};
use amcgrad::engine::GateOptions;
use amcgrad::formula::enumerate_models;
use amcgrad::learn::{
    conditional_entropy, em_conditionals, indecater_estimate, matrix_to_circuit, BernoulliParams, BinaryMatrix,
    SampleBatch,
};
use amcgrad::oracle::oracle_grad;
use amcgrad::semiring::Prob;
use amcgrad::testgen::{random_ddnnf, DdnnfConfig};
use amcgrad::Literal;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng, n: usize) -> BernoulliParams {
    BernoulliParams::new((0..n).map(|_| rng.random_range(0.05..0.95)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn em_is_consistent_with_the_oracle(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_ddnnf(&mut rng, &DdnnfConfig::new(n));
        let p = random_params(&mut rng, n);
        let models = enumerate_models(&c.to_formula(), n).unwrap();
        let weights: Vec<f64> = models.iter().map(|m| m.literals().map(|l| p.prob(l)).product()).collect();
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 0.0);
        let q = em_conditionals(&c, &p, GateOptions::default()).unwrap();
        for (lit, value) in q.iter() {
            let joint: f64 = models
                .iter()
                .zip(&weights)
                .filter(|(m, _)| m.value(lit.var()) == lit.is_positive())
                .map(|(_, w)| w)
                .sum();
            prop_assert!((value * total - joint).abs() < 1e-9, "{}: {} vs {}", lit, value * total, joint);
        }
        for v in 1..=n as u32 {
            prop_assert!((q.get(Literal::pos(v)) + q.get(Literal::neg(v)) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn entropy_is_bounded_and_exact(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_ddnnf(&mut rng, &DdnnfConfig::new(n));
        let p = random_params(&mut rng, n);
        let h = conditional_entropy(&c, &p, GateOptions::default()).unwrap();
        let models = enumerate_models(&c.to_formula(), n).unwrap();
        let brute: f64 = models
            .iter()
            .map(|m| {
                let q: f64 = m.literals().map(|l| p.prob(l)).product();
                -q * q.ln()
            })
            .sum();
        prop_assert!((h.entropy - brute).abs() < 1e-9);
        prop_assert!(h.entropy >= -1e-12);
        // the bound holds for the entropy of the distribution renormalized over φ
        let normalized = h.entropy / h.probability + h.probability.ln();
        prop_assert!(normalized >= -1e-9);
        prop_assert!(normalized <= (models.len() as f64).ln() + 1e-9);
    }
}

#[test]
fn indecater_tracks_the_exact_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let n = rng.random_range(2..=8);
        let c = random_ddnnf(&mut rng, &DdnnfConfig::new(n));
        let p = random_params(&mut rng, n);
        let est = indecater_estimate(&c, &p, SampleBatch { seed: 5, count: 20_000 }, GateOptions::default()).unwrap();
        let exact = oracle_grad(&c.to_formula(), &p.prob_labels(), &Prob).unwrap();
        let inside = exact
            .as_slice()
            .iter()
            .zip(est.gradient.as_slice().iter().zip(&est.stderr))
            .filter(|(want, (got, se))| (*got - *want).abs() <= 4.0 * *se + 1e-12)
            .count();
        assert!(inside as f64 >= 0.9 * (2 * n) as f64, "{inside} of {}", 2 * n);
    }
}

#[test]
fn gf2_construction_size_is_quadratic() {
    let mut ratios = Vec::new();
    for n in [4, 8, 16, 32] {
        let mut m = BinaryMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, i != j);
            }
        }
        let c = matrix_to_circuit(&m).unwrap();
        if n <= 8 {
            let r = validate(&c, 20);
            assert!(r.smooth && r.decomposable && r.deterministic == Determinism::Verified);
        }
        ratios.push(c.num_nodes() as f64 / (n * n) as f64);
    }
    assert!(ratios.iter().all(|&r| r <= 2.0), "{ratios:?}");
}
