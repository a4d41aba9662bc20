#![allow(dead_code)]

use amcgrad::circuit::Circuit;
use amcgrad::engine::{Algorithm, Engine, GateOptions};
use amcgrad::oracle::{oracle_amc, oracle_grad};
use amcgrad::testgen::{compile_mods, random_ddnnf, random_formula, random_labeling, DdnnfConfig, RandomLabel};
use amcgrad::{GradientVector, Labeling, Semiring};
use rand::Rng;

/// Calls `$f(&semiring, $args...)` once per semiring and collects the
/// results as `(name, result)` pairs.
#[macro_export]
macro_rules! for_all_semirings {
    ($f:ident $(, $arg:expr)*) => {{
        use amcgrad::semiring::*;
        vec![
            ("bool", $f(&Bool $(, $arg)*)),
            ("nat", $f(&Nat $(, $arg)*)),
            ("prob", $f(&Prob $(, $arg)*)),
            ("log", $f(&Log $(, $arg)*)),
            ("viterbi", $f(&Viterbi $(, $arg)*)),
            ("tropical", $f(&Tropical $(, $arg)*)),
            ("fuzzy", $f(&Fuzzy $(, $arg)*)),
            ("grad", $f(&Grad $(, $arg)*)),
            ("gf2", $f(&Gf2 $(, $arg)*)),
            ("sens", $f(&Sens $(, $arg)*)),
        ]
    }};
}

pub fn same<S: Semiring>(s: &S, a: &GradientVector<S::Value>, b: &GradientVector<S::Value>) -> bool {
    a.len() == b.len() && a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| s.approx_eq(x, y))
}

/// Largest variable count per semiring for which the symbolic semiring
/// stays cheap.
pub fn var_cap<S: Semiring>(s: &S, max_vars: usize) -> usize {
    if s.name() == "sens" {
        max_vars.min(8)
    } else {
        max_vars
    }
}

fn variants<S: Semiring>(s: &S) -> impl Iterator<Item = Algorithm> + '_ {
    Algorithm::ALL.into_iter().filter(move |a| *a != Algorithm::Cancel || s.has_division())
}

/// One random formula compiled to a MODS circuit; every variant must match
/// the brute-force oracle.
pub fn oracle_case<S: RandomLabel, R: Rng>(s: &S, rng: &mut R, max_vars: usize) -> Result<(), String> {
    let n = rng.random_range(1..=var_cap(s, max_vars));
    let size = rng.random_range(1..=3 * n);
    let phi = random_formula(rng, n, size);
    let c = compile_mods(&phi, n).map_err(|e| e.to_string())?;
    let alpha = random_labeling(s, rng, n);
    let want_amc = oracle_amc(&phi, &alpha, s).map_err(|e| e.to_string())?;
    let want = oracle_grad(&phi, &alpha, s).map_err(|e| e.to_string())?;
    let mut engine = Engine::new(&c, s.clone(), GateOptions::default()).map_err(|e| e.to_string())?;
    for algo in variants(s) {
        let (got_amc, got) = engine.grad(&alpha, algo).map_err(|e| e.to_string())?;
        if !s.approx_eq(&got_amc, &want_amc) || !same(s, &got, &want) {
            return Err(format!(
                "{algo} on {phi} ({n} vars): amc {got_amc:?} vs {want_amc:?}, grad {:?} vs {:?}",
                got.as_slice(),
                want.as_slice()
            ));
        }
    }
    Ok(())
}

pub fn oracle_suite<S: RandomLabel, R: Rng>(s: &S, rng: &mut R, cases: usize, max_vars: usize) -> Result<(), String> {
    (0..cases).try_for_each(|_| oracle_case(s, rng, max_vars))
}

/// Random circuit shapes for variant agreement: smooth d-DNNFs, some with
/// `⊥` branches and some with repeated product children.
pub fn random_test_circuit<R: Rng>(rng: &mut R, n: usize) -> (Circuit, bool) {
    let mut cfg = DdnnfConfig::new(n);
    cfg.zero = if rng.random_bool(0.5) { 0.2 } else { 0.0 };
    let duplicated = rng.random_bool(0.3);
    if duplicated {
        cfg.duplicate = 0.3;
    }
    (random_ddnnf(rng, &cfg), duplicated)
}

/// All variants agree with naive on one random circuit.
pub fn variant_case<S: RandomLabel, R: Rng>(s: &S, rng: &mut R, max_vars: usize) -> Result<(), String> {
    let n = rng.random_range(1..=var_cap(s, max_vars));
    let (c, duplicated) = random_test_circuit(rng, n);
    let mut alpha: Labeling<S::Value> = random_labeling(s, rng, n);
    if rng.random_bool(0.2) {
        // force a zero-valued child
        alpha.set(amcgrad::Literal::pos(rng.random_range(1..=n as u32)), s.zero());
    }
    let mut engine = if duplicated {
        Engine::unchecked(&c, s.clone())
    } else {
        Engine::new(&c, s.clone(), GateOptions::default()).map_err(|e| e.to_string())?
    };
    let (base_amc, base) = engine.grad(&alpha, Algorithm::Naive).map_err(|e| e.to_string())?;
    for algo in variants(s).skip(1) {
        let (amc, g) = engine.grad(&alpha, algo).map_err(|e| e.to_string())?;
        if !s.approx_eq(&amc, &base_amc) || !same(s, &g, &base) {
            return Err(format!(
                "{algo} disagrees with naive on {} nodes: {:?} vs {:?}",
                c.num_nodes(),
                g.as_slice(),
                base.as_slice()
            ));
        }
    }
    Ok(())
}

pub fn variant_suite<S: RandomLabel, R: Rng>(s: &S, rng: &mut R, cases: usize, max_vars: usize) -> Result<(), String> {
    (0..cases).try_for_each(|_| variant_case(s, rng, max_vars))
}

/// Central-difference check of prob gradients on one random circuit.
/// Returns the largest absolute deviation.
pub fn finite_difference_gap<R: Rng>(rng: &mut R, n: usize) -> f64 {
    use amcgrad::semiring::Prob;
    let c = random_ddnnf(rng, &DdnnfConfig::new(n));
    let alpha: Labeling<f64> = Labeling::from_slots((0..2 * n).map(|_| rng.random_range(0.05..0.95)).collect()).unwrap();
    let mut engine = Engine::new(&c, Prob, GateOptions::default()).unwrap();
    let (_, g) = engine.grad(&alpha, Algorithm::Optimized).unwrap();
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for (lit, want) in g.iter() {
        let at = |d: f64| {
            let mut a = alpha.clone();
            a.set(lit, a.get(lit) + d);
            *engine.forward(&a).unwrap().root_value()
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        worst = worst.max((fd - want).abs());
    }
    worst
}
