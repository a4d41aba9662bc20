use std::fmt;

use super::scope::{compute_scopes, VarSet};
use super::{Circuit, NodeId, NodeKind};

/// Largest variable count for which determinism is checked by enumeration
/// unless configured otherwise.
pub const DEFAULT_DETERMINISM_BUDGET: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Determinism {
    Verified,
    /// Two children of this sum node share a model.
    Refuted { node: NodeId },
    /// Too many variables to enumerate.
    Unverified,
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub smooth: bool,
    pub decomposable: bool,
    pub deterministic: Determinism,
    /// First sum node whose children have differing scopes.
    pub first_unsmooth: Option<NodeId>,
    /// First product node whose children share a variable.
    pub first_overlap: Option<NodeId>,
    pub scopes: Vec<VarSet>,
    pub num_nodes: usize,
    pub num_edges: usize,
    pub num_sums: usize,
    pub num_products: usize,
    pub num_vars: usize,
}

impl StructureReport {
    /// Whether the root's scope covers every variable in `1..=num_vars`.
    pub fn root_complete(&self, root: NodeId) -> bool {
        self.scopes[root as usize].count_ones(1..) == self.num_vars
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes: {}", self.num_nodes)?;
        writeln!(f, "edges: {}", self.num_edges)?;
        writeln!(f, "sums: {}", self.num_sums)?;
        writeln!(f, "products: {}", self.num_products)?;
        writeln!(f, "variables: {}", self.num_vars)?;
        writeln!(f, "smooth: {}", self.smooth)?;
        writeln!(f, "decomposable: {}", self.decomposable)?;
        let det = match self.deterministic {
            Determinism::Verified => "true".to_string(),
            Determinism::Refuted { node } => format!("false (node {node})"),
            Determinism::Unverified => "unverified".to_string(),
        };
        write!(f, "deterministic: {det}")
    }
}

/// Checks smoothness and decomposability exactly from the scopes, and
/// determinism by enumerating all assignments when the circuit has at most
/// `budget` variables.
pub fn validate(c: &Circuit, budget: usize) -> StructureReport {
    let scopes = compute_scopes(c);
    let mut first_unsmooth = None;
    let mut first_overlap = None;
    let (mut num_sums, mut num_products) = (0, 0);

    for id in c.ids() {
        let kids = c.children(id);
        match c.kind(id) {
            NodeKind::Sum => {
                num_sums += 1;
                let own = &scopes[id as usize];
                if first_unsmooth.is_none() && kids.iter().any(|&k| scopes[k as usize] != *own) {
                    first_unsmooth = Some(id);
                }
            }
            NodeKind::Product => {
                num_products += 1;
                if first_overlap.is_none() {
                    let mut seen = VarSet::with_capacity(c.num_vars() + 1);
                    for &k in kids {
                        if !seen.is_disjoint(&scopes[k as usize]) {
                            first_overlap = Some(id);
                            break;
                        }
                        seen.union_with(&scopes[k as usize]);
                    }
                }
            }
            _ => {}
        }
    }

    let deterministic = if num_sums == 0 {
        Determinism::Verified
    } else if c.num_vars() <= budget.min(crate::formula::MAX_ORACLE_VARS) {
        check_determinism(c)
    } else {
        Determinism::Unverified
    };

    StructureReport {
        smooth: first_unsmooth.is_none(),
        decomposable: first_overlap.is_none(),
        deterministic,
        first_unsmooth,
        first_overlap,
        scopes,
        num_nodes: c.num_nodes(),
        num_edges: c.num_edges(),
        num_sums,
        num_products,
        num_vars: c.num_vars(),
    }
}

/// Evaluates the circuit on 64 assignments at a time and looks for a sum
/// node with two children true on the same assignment.
fn check_determinism(c: &Circuit) -> Determinism {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let n = c.num_vars();
    let total = 1u64 << n;
    let words = total.div_ceil(64);
    let valid = if total >= 64 { u64::MAX } else { (1u64 << total) - 1 };
    let mut value = vec![0u64; c.num_nodes()];

    for word in 0..words {
        for id in c.ids() {
            let kids = c.children(id);
            value[id as usize] = match c.kind(id) {
                NodeKind::True => valid,
                NodeKind::False => 0,
                NodeKind::Literal(l) => {
                    let bit = l.var() as usize - 1;
                    let pattern = if bit < 6 {
                        LOW[bit]
                    } else if (word >> (bit - 6)) & 1 == 1 {
                        u64::MAX
                    } else {
                        0
                    };
                    let pattern = pattern & valid;
                    if l.is_positive() {
                        pattern
                    } else {
                        !pattern & valid
                    }
                }
                NodeKind::Product => kids.iter().fold(valid, |acc, &k| acc & value[k as usize]),
                NodeKind::Sum => {
                    let mut seen = 0u64;
                    for &k in kids {
                        let v = value[k as usize];
                        if seen & v != 0 {
                            return Determinism::Refuted { node: id };
                        }
                        seen |= v;
                    }
                    seen
                }
            };
        }
    }
    Determinism::Verified
}
