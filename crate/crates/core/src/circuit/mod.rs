//! Flat algebraic circuits.
//!
//! Nodes live in one array in topological order: every child id is smaller
//! than its parent's id, so a forward pass in array order never reads an
//! uncomputed child and a backward pass in reverse order visits parents
//! before children. Child lists are stored in a single arena and keep their
//! multiplicity and order.

mod d4;
mod scope;
mod smooth;
mod validate;
mod weights;

use std::collections::HashMap;

use crate::formula::Formula;
use crate::literal::{Literal, Var};

pub use d4::{parse_d4, read_d4, write_d4};
pub use scope::{compute_scopes, VarSet};
pub use smooth::{smooth, smooth_to};
pub use validate::{validate, Determinism, StructureReport, DEFAULT_DETERMINISM_BUDGET};
pub use weights::{parse_weights, read_weights};

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Literal(Literal),
    True,
    False,
    Sum,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NodeRecord {
    kind: NodeKind,
    start: u32,
    len: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    nodes: Vec<NodeRecord>,
    children: Vec<NodeId>,
    root: NodeId,
    num_vars: usize,
}

impl Circuit {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.children.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Number of variables in scope: at least the largest variable index
    /// mentioned by a leaf.
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.nodes[id as usize].kind
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        let r = &self.nodes[id as usize];
        &self.children[r.start as usize..(r.start + r.len) as usize]
    }

    /// Node ids in forward (children first) order.
    pub fn ids(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        0..self.nodes.len() as NodeId
    }

    pub fn literal_leaves(&self) -> impl Iterator<Item = (NodeId, Literal)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, r)| match r.kind {
            NodeKind::Literal(l) => Some((i as NodeId, l)),
            _ => None,
        })
    }

    pub fn max_product_arity(&self) -> usize {
        self.nodes
            .iter()
            .filter(|r| r.kind == NodeKind::Product)
            .map(|r| r.len as usize)
            .max()
            .unwrap_or(0)
    }

    /// Widens the variable scope without touching the structure.
    pub fn with_num_vars(mut self, num_vars: usize) -> Self {
        self.num_vars = self.num_vars.max(num_vars);
        self
    }

    /// Expands the DAG into a formula tree. Shared subcircuits are copied, so
    /// this is only meant for small circuits handed to the oracle.
    pub fn to_formula(&self) -> Formula {
        let mut memo: Vec<Option<Formula>> = vec![None; self.num_nodes()];
        for id in self.ids() {
            let f = match self.kind(id) {
                NodeKind::Literal(l) => Formula::lit(l),
                NodeKind::True => Formula::True,
                NodeKind::False => Formula::False,
                NodeKind::Sum => Formula::or_all(
                    self.children(id).iter().map(|&c| memo[c as usize].clone().unwrap()),
                ),
                NodeKind::Product => Formula::and_all(
                    self.children(id).iter().map(|&c| memo[c as usize].clone().unwrap()),
                ),
            };
            memo[id as usize] = Some(f);
        }
        memo[self.root as usize].take().unwrap()
    }
}

/// Incremental circuit construction. Children must already exist, which
/// keeps ids topologically ordered by construction. Literal leaves and the
/// constants are shared.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    nodes: Vec<NodeRecord>,
    children: Vec<NodeId>,
    literals: HashMap<Literal, NodeId>,
    true_node: Option<NodeId>,
    false_node: Option<NodeId>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, kind: NodeKind, children: &[NodeId]) -> NodeId {
        let id = self.nodes.len() as NodeId;
        for &c in children {
            assert!(c < id, "child {c} must be created before its parent {id}");
        }
        self.nodes.push(NodeRecord {
            kind,
            start: self.children.len() as u32,
            len: children.len() as u32,
        });
        self.children.extend_from_slice(children);
        id
    }

    pub fn literal(&mut self, lit: Literal) -> NodeId {
        if let Some(&id) = self.literals.get(&lit) {
            return id;
        }
        let id = self.push(NodeKind::Literal(lit), &[]);
        self.literals.insert(lit, id);
        id
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        let slot = if value { self.true_node } else { self.false_node };
        if let Some(id) = slot {
            return id;
        }
        let id = self.push(if value { NodeKind::True } else { NodeKind::False }, &[]);
        if value {
            self.true_node = Some(id);
        } else {
            self.false_node = Some(id);
        }
        id
    }

    pub fn sum(&mut self, children: &[NodeId]) -> NodeId {
        self.push(NodeKind::Sum, children)
    }

    pub fn product(&mut self, children: &[NodeId]) -> NodeId {
        self.push(NodeKind::Product, children)
    }

    /// `v ∨ ¬v`, the smoothing gadget for one variable.
    pub fn gadget(&mut self, v: Var) -> NodeId {
        let pos = self.literal(Literal::pos(v));
        let neg = self.literal(Literal::neg(v));
        self.sum(&[pos, neg])
    }

    /// Finalizes with `root`, dropping nodes the root cannot reach.
    pub fn finish(self, root: NodeId) -> Circuit {
        self.finish_with_vars(root, 0)
    }

    /// Like [`CircuitBuilder::finish`] with a variable scope of at least
    /// `num_vars`.
    pub fn finish_with_vars(self, root: NodeId, num_vars: usize) -> Circuit {
        assert!((root as usize) < self.nodes.len(), "root {root} does not exist");
        let mut reachable = vec![false; root as usize + 1];
        reachable[root as usize] = true;
        for id in (0..=root).rev() {
            if reachable[id as usize] {
                let r = self.nodes[id as usize];
                for &c in &self.children[r.start as usize..(r.start + r.len) as usize] {
                    reachable[c as usize] = true;
                }
            }
        }

        let mut remap = vec![NodeId::MAX; root as usize + 1];
        let mut nodes = Vec::new();
        let mut children = Vec::new();
        let mut max_var = 0usize;
        for id in 0..=root as usize {
            if !reachable[id] {
                continue;
            }
            let r = self.nodes[id];
            if let NodeKind::Literal(l) = r.kind {
                max_var = max_var.max(l.var() as usize);
            }
            remap[id] = nodes.len() as NodeId;
            let start = children.len() as u32;
            children.extend(
                self.children[r.start as usize..(r.start + r.len) as usize]
                    .iter()
                    .map(|&c| remap[c as usize]),
            );
            nodes.push(NodeRecord {
                kind: r.kind,
                start,
                len: r.len,
            });
        }
        Circuit {
            root: remap[root as usize],
            nodes,
            children,
            num_vars: max_var.max(num_vars),
        }
    }
}
