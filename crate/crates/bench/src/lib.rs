//! Timing harness for the backpropagation variants.
//!
//! Each repetition runs one forward pass and then every requested variant on
//! that same tape, so variants are compared on identical inputs. Parsing and
//! label construction are never timed.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use amcgrad::circuit::read_d4;
use amcgrad::engine::{check_structure, Algorithm, Engine, GateOptions};
use amcgrad::testgen::{random_ddnnf, star_product, DdnnfConfig};
use amcgrad::{with_semiring, Circuit, Labeling, Literal, Semiring, SemiringKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Column names, in order. `error` is empty unless the circuit failed.
pub const CSV_HEADER: [&str; 10] = [
    "circuit",
    "n",
    "e",
    "semiring",
    "variant",
    "rep",
    "forward_ms",
    "backward_ms",
    "peak_aux_bytes",
    "error",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub circuit: String,
    pub n: usize,
    pub e: usize,
    pub semiring: String,
    pub variant: String,
    pub rep: usize,
    pub forward_ms: f64,
    pub backward_ms: f64,
    pub peak_aux_bytes: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub algos: Vec<Algorithm>,
    pub repeat: usize,
    pub warmup: usize,
    /// Seed for the random literal weights.
    pub seed: u64,
    pub gate: GateOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algos: Algorithm::ALL.to_vec(),
            repeat: 10,
            warmup: 1,
            seed: 0,
            gate: GateOptions::default(),
        }
    }
}

/// A named circuit to benchmark.
#[derive(Debug, Clone)]
pub struct BenchCase {
    pub id: String,
    pub circuit: Circuit,
}

/// Products of `x1..xk` for each arity.
pub fn star_suite(arities: &[usize]) -> Vec<BenchCase> {
    arities
        .iter()
        .map(|&k| BenchCase { id: format!("star-{k}"), circuit: star_product(k) })
        .collect()
}

/// Random smooth d-DNNFs over `num_vars` variables.
pub fn random_suite(seed: u64, count: usize, num_vars: usize) -> Vec<BenchCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| BenchCase {
            id: format!("random-{num_vars}-{i}"),
            circuit: random_ddnnf(&mut rng, &DdnnfConfig::new(num_vars)),
        })
        .collect()
}

/// Every `*.nnf` file in `dir`, sorted by name. Unreadable files are
/// returned as errors so that callers can record them.
pub fn load_suite(dir: &Path) -> std::io::Result<Vec<(String, amcgrad::Result<Circuit>)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "nnf"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let id = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            (id, read_d4(&p))
        })
        .collect())
}

/// Labels from probabilities drawn uniformly from [0.01, 0.99], in the
/// semiring's natural encoding. Semirings that cannot encode a probability
/// keep their default labels.
pub fn bench_labels<S: Semiring>(s: &S, num_vars: usize, seed: u64) -> Labeling<S::Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alpha = Labeling::default_for(s, num_vars);
    for v in 1..=num_vars as u32 {
        let p: f64 = rng.random_range(0.01..0.99);
        if let (Ok(pos), Ok(neg)) = (s.from_weight(p), s.from_weight(1.0 - p)) {
            alpha.set(Literal::pos(v), pos);
            alpha.set(Literal::neg(v), neg);
        }
    }
    alpha
}

fn ms(start: Instant) -> f64 {
    // never report exactly zero
    (start.elapsed().as_nanos() as f64 / 1e6).max(1e-6)
}

fn error_record(id: &str, c: Option<&Circuit>, semiring: &str, message: String) -> BenchRecord {
    BenchRecord {
        circuit: id.to_string(),
        n: c.map_or(0, Circuit::num_nodes),
        e: c.map_or(0, Circuit::num_edges),
        semiring: semiring.to_string(),
        variant: String::new(),
        rep: 0,
        forward_ms: 0.0,
        backward_ms: 0.0,
        peak_aux_bytes: 0,
        error: message,
    }
}

/// Times one circuit in one semiring. Failures become a single record with
/// the `error` field set.
pub fn bench_case<S: Semiring>(
    s: &S,
    id: &str,
    c: &Circuit,
    alpha: &Labeling<S::Value>,
    cfg: &BenchConfig,
) -> Vec<BenchRecord> {
    if let Err(e) = check_structure(c, s, cfg.gate) {
        return vec![error_record(id, Some(c), s.name(), e.to_string())];
    }
    let algos: Vec<Algorithm> = cfg
        .algos
        .iter()
        .copied()
        .filter(|&a| a != Algorithm::Cancel || s.has_division())
        .collect();
    let mut engine = Engine::unchecked(c, s.clone());
    let mut records = Vec::with_capacity(cfg.repeat * algos.len());
    for rep in 0..cfg.warmup + cfg.repeat {
        let start = Instant::now();
        let tape = match engine.forward(alpha) {
            Ok(t) => t,
            Err(e) => return vec![error_record(id, Some(c), s.name(), e.to_string())],
        };
        let forward_ms = ms(start);
        for &algo in &algos {
            let start = Instant::now();
            let result = engine.backward(&tape, algo);
            let backward_ms = ms(start);
            if let Err(e) = result {
                return vec![error_record(id, Some(c), s.name(), e.to_string())];
            }
            if rep >= cfg.warmup {
                records.push(BenchRecord {
                    circuit: id.to_string(),
                    n: c.num_nodes(),
                    e: c.num_edges(),
                    semiring: s.name().to_string(),
                    variant: algo.name().to_string(),
                    rep: rep - cfg.warmup,
                    forward_ms,
                    backward_ms,
                    peak_aux_bytes: engine.stats().peak_aux_bytes,
                    error: String::new(),
                });
            }
        }
    }
    records
}

/// [`bench_case`] with the semiring chosen at run time and benchmark labels.
pub fn bench_kind(kind: SemiringKind, id: &str, c: &Circuit, cfg: &BenchConfig) -> Vec<BenchRecord> {
    with_semiring!(kind, |s| {
        let alpha = bench_labels(&s, c.num_vars(), cfg.seed);
        bench_case(&s, id, c, &alpha, cfg)
    })
}

/// Benchmarks every case, optionally on worker threads. Output order follows
/// the input order either way.
pub fn run_suite(cases: &[(String, amcgrad::Result<Circuit>)], kind: SemiringKind, cfg: &BenchConfig, parallel: bool) -> Vec<BenchRecord> {
    let one = |(id, c): &(String, amcgrad::Result<Circuit>)| match c {
        Ok(c) => bench_kind(kind, id, c, cfg),
        Err(e) => vec![error_record(id, None, kind.name(), e.to_string())],
    };
    if parallel {
        use rayon::prelude::*;
        cases.par_iter().map(one).collect::<Vec<_>>().concat()
    } else {
        cases.iter().flat_map(one).collect()
    }
}

pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Mean backward time per (circuit, variant), ignoring error rows.
pub fn mean_backward_ms(records: &[BenchRecord]) -> Vec<(String, String, f64)> {
    let mut out: Vec<(String, String, f64, usize)> = Vec::new();
    for r in records.iter().filter(|r| r.error.is_empty()) {
        match out.iter_mut().find(|(c, v, _, _)| *c == r.circuit && *v == r.variant) {
            Some(entry) => {
                entry.2 += r.backward_ms;
                entry.3 += 1;
            }
            None => out.push((r.circuit.clone(), r.variant.clone(), r.backward_ms, 1)),
        }
    }
    out.into_iter().map(|(c, v, total, k)| (c, v, total / k as f64)).collect()
}

#[cfg(test)]
mod tests {
    use amcgrad::semiring::{Fuzzy, Nat, Prob};

    use super::*;

    fn quick(repeat: usize) -> BenchConfig {
        BenchConfig { repeat, warmup: 0, ..BenchConfig::default() }
    }

    #[test]
    fn one_row_per_variant_and_repetition() {
        let c = star_product(8);
        let records = bench_kind(SemiringKind::Prob, "star", &c, &quick(10));
        assert_eq!(records.len(), 40);
        for algo in Algorithm::ALL {
            assert_eq!(records.iter().filter(|r| r.variant == algo.name()).count(), 10);
        }
        assert!(records.iter().all(|r| r.backward_ms > 0.0 && r.error.is_empty()));
        assert!(records.iter().all(|r| r.n == 9 && r.e == 8));
    }

    #[test]
    fn cancel_is_skipped_without_division() {
        let c = star_product(4);
        let alpha = bench_labels(&Fuzzy, 4, 0);
        let records = bench_case(&Fuzzy, "star", &c, &alpha, &quick(2));
        assert_eq!(records.len(), 6);
        assert!(records.iter().all(|r| r.variant != "cancel"));
    }

    #[test]
    fn failures_become_error_rows() {
        let mut b = amcgrad::CircuitBuilder::new();
        let x = b.literal(Literal::pos(1));
        let s = b.sum(&[x, x]);
        let c = b.finish(s);
        let records = bench_kind(SemiringKind::Nat, "bad", &c, &quick(3));
        assert_eq!(records.len(), 1);
        assert!(records[0].error.contains("deterministic"));
    }

    #[test]
    fn labels_follow_the_semiring() {
        let p = bench_labels(&Prob, 3, 5);
        for v in 1..=3 {
            let (a, b) = (p.get(Literal::pos(v)), p.get(Literal::neg(v)));
            assert!((0.01..0.99).contains(a));
            assert!((a + b - 1.0).abs() < 1e-12);
        }
        assert!(bench_labels(&Nat, 3, 5).as_slice().iter().all(|&x| x == 1));
        assert_eq!(bench_labels(&Prob, 3, 5), p);
    }

    #[test]
    fn csv_schema_is_stable() {
        let c = star_product(2);
        let records = bench_kind(SemiringKind::Bool, "star-2", &c, &quick(1));
        let mut buf = Vec::new();
        write_csv(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "circuit,n,e,semiring,variant,rep,forward_ms,backward_ms,peak_aux_bytes,error"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 10);
        assert_eq!(&first[..6], ["star-2", "3", "2", "bool", "naive", "0"]);
        assert_eq!(text.lines().count(), 1 + records.len());
    }

    #[test]
    fn suites_run_in_order() {
        let cases: Vec<_> = star_suite(&[2, 4]).into_iter().map(|c| (c.id, Ok(c.circuit))).collect();
        let seq = run_suite(&cases, SemiringKind::Nat, &quick(1), false);
        let par = run_suite(&cases, SemiringKind::Nat, &quick(1), true);
        let key = |rs: &[BenchRecord]| rs.iter().map(|r| (r.circuit.clone(), r.variant.clone())).collect::<Vec<_>>();
        assert_eq!(key(&seq), key(&par));
        assert_eq!(mean_backward_ms(&seq).len(), 8);
    }
}
