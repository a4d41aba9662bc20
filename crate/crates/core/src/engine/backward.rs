//! Adjoint propagation through one product node.

use crate::circuit::NodeId;
use crate::semiring::{Semiring, Side};

/// Recomputes each leave-one-out product from scratch.
pub(super) fn naive<S: Semiring>(s: &S, gamma: &S::Value, kids: &[NodeId], values: &[S::Value], adj: &mut [S::Value]) {
    for (i, &k) in kids.iter().enumerate() {
        let contrib = leave_one_out(s, gamma, i, kids, values);
        s.add_assign(&mut adj[k as usize], &contrib);
    }
}

fn leave_one_out<S: Semiring>(s: &S, gamma: &S::Value, skip: usize, kids: &[NodeId], values: &[S::Value]) -> S::Value {
    let mut acc = gamma.clone();
    for (j, &other) in kids.iter().enumerate() {
        if j != skip {
            s.mul_assign(&mut acc, &values[other as usize]);
        }
    }
    acc
}

/// Divides the node value by each child; falls back to [`naive`] per child
/// where division is impossible. Returns the number of fallbacks.
pub(super) fn cancel<S: Semiring>(
    s: &S,
    gamma: &S::Value,
    node: &S::Value,
    kids: &[NodeId],
    values: &[S::Value],
    adj: &mut [S::Value],
) -> usize {
    let mut fallbacks = 0;
    for (i, &k) in kids.iter().enumerate() {
        let contrib = match s.try_divide(node, &values[k as usize]) {
            Some(q) => s.mul(gamma, &q),
            None => {
                fallbacks += 1;
                leave_one_out(s, gamma, i, kids, values)
            }
        };
        s.add_assign(&mut adj[k as usize], &contrib);
    }
    fallbacks
}

/// Prefix products in `scratch`, suffix products carried in one value.
pub(super) fn dynamic<S: Semiring>(
    s: &S,
    gamma: &S::Value,
    kids: &[NodeId],
    values: &[S::Value],
    adj: &mut [S::Value],
    scratch: &mut [S::Value],
) {
    let k = kids.len();
    let prefix = &mut scratch[..k];
    let mut acc = s.one();
    for (slot, &c) in prefix.iter_mut().zip(kids) {
        *slot = acc.clone();
        s.mul_assign(&mut acc, &values[c as usize]);
    }
    let mut suffix = gamma.clone();
    for i in (0..k).rev() {
        let c = kids[i] as usize;
        let contrib = s.mul(&prefix[i], &suffix);
        s.add_assign(&mut adj[c], &contrib);
        if i > 0 {
            s.mul_assign(&mut suffix, &values[c]);
        }
    }
}

/// Division where every child is cancellative, otherwise the two most
/// extremal children under an ordered product. Returns false, touching
/// nothing, when neither applies.
pub(super) fn optimized<S: Semiring>(
    s: &S,
    gamma: &S::Value,
    node: &S::Value,
    kids: &[NodeId],
    values: &[S::Value],
    adj: &mut [S::Value],
) -> bool {
    let value = |i: usize| &values[kids[i] as usize];
    let all_cancel = kids.iter().all(|&c| s.is_cancellative(&values[c as usize]));
    let ordered = if all_cancel { None } else { extremal_pair(s, kids, values) };
    if !all_cancel && ordered.is_none() {
        return false;
    }

    let at_node = s.mul(gamma, node);
    for (i, &c) in kids.iter().enumerate() {
        let divided = if s.is_cancellative(value(i)) { s.try_divide(node, value(i)) } else { None };
        let contrib = match (divided, &ordered) {
            (Some(q), _) => s.mul(gamma, &q),
            (None, Some((first, second))) if *first == i => s.mul(gamma, second),
            (None, Some(_)) => at_node.clone(),
            (None, None) => leave_one_out(s, gamma, i, kids, values),
        };
        s.add_assign(&mut adj[c as usize], &contrib);
    }
    true
}

/// Index of the child equal to the whole product and the product of the
/// others, when every pair of children is ordered.
fn extremal_pair<S: Semiring>(s: &S, kids: &[NodeId], values: &[S::Value]) -> Option<(usize, S::Value)> {
    let mut first = 0;
    let mut second = s.one();
    for (i, &c) in kids.iter().enumerate().skip(1) {
        let v = &values[c as usize];
        match s.ordered_mul(v, &values[kids[first] as usize])? {
            Side::Left => {
                second = values[kids[first] as usize].clone();
                first = i;
            }
            Side::Right => {
                if s.ordered_mul(v, &second)? == Side::Left {
                    second = v.clone();
                }
            }
        }
    }
    Some((first, second))
}
