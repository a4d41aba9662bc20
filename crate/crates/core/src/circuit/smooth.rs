use std::collections::HashMap;

use super::scope::compute_scopes;
use super::validate::validate;
use super::{Circuit, CircuitBuilder, NodeId, NodeKind};
use crate::error::{Error, Result};
use crate::literal::Var;

/// Makes a decomposable circuit smooth over its own variable scope.
pub fn smooth(c: &Circuit) -> Result<Circuit> {
    smooth_to(c, c.num_vars())
}

/// Makes a decomposable circuit smooth and extends the root to cover every
/// variable in `1..=num_vars`.
///
/// Each sum child missing variables of its parent is multiplied with one
/// `v ∨ ¬v` gadget per missing variable; gadgets are shared between all
/// gaps. Model-equivalent over the widened scope.
pub fn smooth_to(c: &Circuit, num_vars: usize) -> Result<Circuit> {
    let num_vars = num_vars.max(c.num_vars());
    let report = validate(c, 0);
    if !report.decomposable {
        return Err(Error::Invalid(format!(
            "cannot smooth a non-decomposable circuit (product node {} has overlapping children)",
            report.first_overlap.unwrap_or_default()
        )));
    }
    let widened = c.clone().with_num_vars(num_vars);
    if report.smooth && validate(&widened, 0).root_complete(c.root()) {
        return Ok(widened);
    }

    let scopes = compute_scopes(&widened);
    let mut b = CircuitBuilder::new();
    let mut gadgets: HashMap<Var, NodeId> = HashMap::new();
    let mut gadget = |b: &mut CircuitBuilder, v: Var| *gadgets.entry(v).or_insert_with(|| b.gadget(v));
    let mut map: Vec<NodeId> = Vec::with_capacity(c.num_nodes());

    for id in c.ids() {
        let kids = c.children(id);
        let new = match c.kind(id) {
            NodeKind::Literal(l) => b.literal(l),
            NodeKind::True => b.constant(true),
            NodeKind::False => b.constant(false),
            NodeKind::Product => {
                let mapped: Vec<NodeId> = kids.iter().map(|&k| map[k as usize]).collect();
                b.product(&mapped)
            }
            NodeKind::Sum => {
                let own = &scopes[id as usize];
                let mut mapped = Vec::with_capacity(kids.len());
                for &k in kids {
                    let child = map[k as usize];
                    let missing: Vec<usize> = own.difference(&scopes[k as usize]).collect();
                    if missing.is_empty() {
                        mapped.push(child);
                    } else {
                        let mut items = vec![child];
                        items.extend(missing.into_iter().map(|v| gadget(&mut b, v as Var)));
                        mapped.push(b.product(&items));
                    }
                }
                b.sum(&mapped)
            }
        };
        map.push(new);
    }

    let mut root = map[c.root() as usize];
    let root_scope = &scopes[c.root() as usize];
    let missing: Vec<Var> = (1..=num_vars)
        .filter(|&v| !root_scope.contains(v))
        .map(|v| v as Var)
        .collect();
    if !missing.is_empty() {
        let mut items = vec![root];
        items.extend(missing.into_iter().map(|v| gadget(&mut b, v)));
        root = b.product(&items);
    }
    Ok(b.finish_with_vars(root, num_vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::tests::example_circuit;
    use crate::circuit::validate::Determinism;
    use crate::formula::enumerate_models;
    use crate::literal::Literal;

    #[test]
    fn smooth_circuit_is_a_fixpoint() {
        let once = smooth(&example_circuit()).unwrap();
        let twice = smooth(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn example_gains_one_gadget() {
        let c = example_circuit();
        let s = smooth(&c).unwrap();
        assert_eq!(s.num_nodes(), c.num_nodes() + 3);
        assert_eq!(
            enumerate_models(&s.to_formula(), 3).unwrap(),
            enumerate_models(&c.to_formula(), 3).unwrap()
        );
    }

    #[test]
    fn fills_gaps_with_gadgets() {
        // (x ∧ y) ∨ (¬x), missing y in the second branch
        let mut b = CircuitBuilder::new();
        let x = b.literal(Literal::pos(1));
        let nx = b.literal(Literal::neg(1));
        let y = b.literal(Literal::pos(2));
        let xy = b.product(&[x, y]);
        let root = b.sum(&[xy, nx]);
        let c = b.finish(root);
        assert!(!validate(&c, 20).smooth);

        let s = smooth(&c).unwrap();
        let r = validate(&s, 20);
        assert!(r.smooth && r.decomposable);
        assert_eq!(r.deterministic, Determinism::Verified);
        assert_eq!(
            enumerate_models(&s.to_formula(), 2).unwrap(),
            enumerate_models(&c.to_formula(), 2).unwrap()
        );
    }

    #[test]
    fn root_is_widened() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(Literal::pos(1));
        let c = b.finish(x);
        let s = smooth_to(&c, 3).unwrap();
        assert_eq!(s.num_vars(), 3);
        assert!(validate(&s, 20).root_complete(s.root()));
        assert_eq!(enumerate_models(&s.to_formula(), 3).unwrap().len(), 4);
    }

    #[test]
    fn gadgets_are_shared() {
        // two sums both missing x3
        let mut b = CircuitBuilder::new();
        let x1 = b.literal(Literal::pos(1));
        let nx1 = b.literal(Literal::neg(1));
        let x2 = b.literal(Literal::pos(2));
        let nx2 = b.literal(Literal::neg(2));
        let x3 = b.literal(Literal::pos(3));
        let p1 = b.product(&[x1, x3]);
        let s1 = b.sum(&[p1, nx1]);
        let p2 = b.product(&[x2, x3]);
        let s2 = b.sum(&[p2, nx2]);
        let root = b.product(&[s1, s2]);
        let c = b.finish(root);
        // not decomposable: both halves mention x3
        assert!(smooth(&c).is_err());

        let mut b = CircuitBuilder::new();
        let x1 = b.literal(Literal::pos(1));
        let nx1 = b.literal(Literal::neg(1));
        let x3 = b.literal(Literal::pos(3));
        let x4 = b.literal(Literal::pos(4));
        let p1 = b.product(&[x1, x3, x4]);
        let s1 = b.sum(&[p1, nx1]);
        let c = b.finish(s1);
        let s = smooth(&c).unwrap();
        let sums = s.ids().filter(|&i| s.kind(i) == NodeKind::Sum).count();
        // the original sum, gadgets for x3 and x4, and one for x2 at the root
        assert_eq!(sums, 4);
    }
}
