use fixedbitset::FixedBitSet;

use super::{Circuit, NodeKind};

/// A set of variables; bit `v` stands for `x_v` (bit 0 is unused).
pub type VarSet = FixedBitSet;

/// Variable scope of every node in one bottom-up pass: a leaf's scope is its
/// variable (empty for constants), an inner node's is the union over its
/// children.
pub fn compute_scopes(c: &Circuit) -> Vec<VarSet> {
    let width = c.num_vars() + 1;
    let mut scopes: Vec<VarSet> = Vec::with_capacity(c.num_nodes());
    for id in c.ids() {
        let mut s = VarSet::with_capacity(width);
        match c.kind(id) {
            NodeKind::Literal(l) => s.insert(l.var() as usize),
            NodeKind::True | NodeKind::False => {}
            NodeKind::Sum | NodeKind::Product => {
                for &ch in c.children(id) {
                    s.union_with(&scopes[ch as usize]);
                }
            }
        }
        scopes.push(s);
    }
    scopes
}
