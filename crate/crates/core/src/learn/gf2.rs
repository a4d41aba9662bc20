//! Circuits whose GF(2) Hessian (and gradient) are prescribed bit patterns.

use std::collections::HashMap;
use std::fmt;

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::error::{Error, Result};
use crate::literal::{Literal, Var};

/// Square bit matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize) -> Self {
        BinaryMatrix { n, bits: vec![false; n * n] }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Invalid(format!("row {bad} has {} entries, expected {n}", rows[bad].len())));
        }
        Ok(BinaryMatrix { n, bits: rows.concat() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.bits[i * self.n + j] = bit;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `⊕_j M[i][j]` per row.
    pub fn row_parities(&self) -> Vec<bool> {
        (0..self.n)
            .map(|i| (0..self.n).fold(false, |acc, j| acc ^ self.get(i, j)))
            .collect()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: String = (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Builds a smooth deterministic DNF over `x1..xn` whose GF(2) Hessian over
/// the positive literals, with every label `1`, equals `m`.
///
/// A Hessian is symmetric and, since conditioning twice on one variable is
/// empty, has a zero diagonal; other matrices are rejected.
pub fn matrix_to_circuit(m: &BinaryMatrix) -> Result<Circuit> {
    build(m, None)
}

/// As [`matrix_to_circuit`], with the GF(2) gradient over the positive
/// literals additionally equal to `v`.
pub fn matrix_vec_to_circuit(m: &BinaryMatrix, v: &[bool]) -> Result<Circuit> {
    if v.len() != m.n() {
        return Err(Error::Invalid(format!("vector has {} entries, matrix is {}×{}", v.len(), m.n(), m.n())));
    }
    build(m, Some(v))
}

fn build(m: &BinaryMatrix, v: Option<&[bool]>) -> Result<Circuit> {
    let n = m.n();
    if n < 2 {
        return Err(Error::Invalid("need at least two variables".into()));
    }
    if !m.is_symmetric() {
        return Err(Error::Invalid("a Hessian matrix must be symmetric".into()));
    }
    if (0..n).any(|i| m.get(i, i)) {
        return Err(Error::Invalid("a Hessian matrix has a zero diagonal".into()));
    }

    let mut cubes = Cubes::new(n);
    let mut models = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j) {
                models.push(cubes.cube(&[i, j]));
            }
        }
    }
    if let Some(v) = v {
        for (i, (&want, have)) in v.iter().zip(m.row_parities()).enumerate() {
            if want != have {
                models.push(cubes.cube(&[i]));
            }
        }
    }
    let mut b = cubes.builder;
    let root = if models.is_empty() { b.constant(false) } else { b.sum(&models) };
    Ok(b.finish_with_vars(root, n))
}

/// Cubes with a few positive literals, sharing runs of negative literals.
struct Cubes {
    builder: CircuitBuilder,
    n: usize,
    runs: HashMap<(usize, usize), NodeId>,
}

impl Cubes {
    fn new(n: usize) -> Self {
        Cubes { builder: CircuitBuilder::new(), n, runs: HashMap::new() }
    }

    /// `¬x_a ∧ … ∧ ¬x_(b-1)` over 0-based indices, built from the run one
    /// shorter.
    fn run(&mut self, a: usize, b: usize) -> Option<NodeId> {
        if a >= b {
            return None;
        }
        if let Some(&id) = self.runs.get(&(a, b)) {
            return Some(id);
        }
        let last = self.builder.literal(Literal::neg(b as Var));
        let id = match self.run(a, b - 1) {
            Some(prev) => self.builder.product(&[prev, last]),
            None => last,
        };
        self.runs.insert((a, b), id);
        Some(id)
    }

    /// The single model with exactly the listed (sorted) indices positive.
    fn cube(&mut self, positive: &[usize]) -> NodeId {
        let mut items = Vec::new();
        let mut start = 0;
        for &i in positive {
            items.extend(self.run(start, i));
            items.push(self.builder.literal(Literal::pos(i as Var + 1)));
            start = i + 1;
        }
        items.extend(self.run(start, self.n));
        self.builder.product(&items)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{validate, Determinism};
    use crate::formula::enumerate_models;

    fn matrix(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::from_rows(&rows.iter().map(|r| r.chars().map(|c| c == '1').collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cubes_are_the_expected_models() {
        let m = matrix(&["011", "100", "100"]);
        let c = matrix_to_circuit(&m).unwrap();
        let models: Vec<Vec<i32>> = enumerate_models(&c.to_formula(), 3)
            .unwrap()
            .iter()
            .map(|i| i.literals().map(|l| l.dimacs()).collect())
            .collect();
        assert_eq!(models, [vec![1, -2, 3], vec![1, 2, -3]]);
        let r = validate(&c, 20);
        assert!(r.smooth && r.decomposable);
        assert_eq!(r.deterministic, Determinism::Verified);
    }

    #[test]
    fn zero_matrix_is_false() {
        let c = matrix_to_circuit(&BinaryMatrix::zeros(4)).unwrap();
        assert!(enumerate_models(&c.to_formula(), 4).unwrap().is_empty());
        assert_eq!(c.num_vars(), 4);
    }

    #[test]
    fn rejects_non_hessians() {
        assert!(matrix_to_circuit(&matrix(&["01", "00"])).is_err());
        assert!(matrix_to_circuit(&matrix(&["10", "00"])).is_err());
        assert!(matrix_to_circuit(&matrix(&["0"])).is_err());
        assert!(matrix_vec_to_circuit(&matrix(&["01", "10"]), &[true]).is_err());
    }

    #[test]
    fn runs_are_shared() {
        let n = 6;
        let mut full = BinaryMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                full.set(i, j, i != j);
            }
        }
        let c = matrix_to_circuit(&full).unwrap();
        // 2n literals, at most n²/2 runs and n²/2 cubes, one root
        assert!(c.num_nodes() <= n * n + 2 * n + 1, "{}", c.num_nodes());
    }
}
