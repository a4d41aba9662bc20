//! The d4 NNF text format.
//!
//! ```text
//! o <id> 0            or-node
//! a <id> 0            and-node
//! t <id> 0            true
//! f <id> 0            false
//! <p> <c> [lits] 0    arc from p to c; the literals are conjoined onto it
//! ```
//!
//! The first declared node is the root. Literals on an arc out of an and-node
//! are added to that node's children; on an arc out of an or-node they form a
//! product with the child. Arcs into a `t` node that carry literals contribute
//! only the literals.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{Circuit, CircuitBuilder, NodeId, NodeKind};
use crate::error::{Error, Result};
use crate::literal::Literal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DeclKind {
    Or,
    And,
    True,
    False,
}

struct Arc {
    child: u64,
    literals: Vec<Literal>,
    line: usize,
}

struct Decl {
    kind: DeclKind,
    arcs: Vec<Arc>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_int(tok: &str, line: usize) -> Result<i64> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not an integer")))
}

pub fn read_d4(path: impl AsRef<Path>) -> Result<Circuit> {
    parse_d4(&std::fs::read_to_string(path)?)
}

pub fn parse_d4(text: &str) -> Result<Circuit> {
    let mut decls: HashMap<u64, Decl> = HashMap::new();
    let mut root: Option<u64> = None;
    let mut pending: Vec<(u64, Arc)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&first) = toks.first() else { continue };
        if first == "c" {
            continue;
        }
        if toks.last() != Some(&"0") {
            return Err(parse_err(line, "line must end with 0"));
        }
        let kind = match first {
            "o" => Some(DeclKind::Or),
            "a" => Some(DeclKind::And),
            "t" => Some(DeclKind::True),
            "f" => Some(DeclKind::False),
            _ => None,
        };
        if let Some(kind) = kind {
            if toks.len() != 3 {
                return Err(parse_err(line, format!("expected `{first} <id> 0`")));
            }
            let id = parse_int(toks[1], line)?;
            if id <= 0 {
                return Err(parse_err(line, "node ids must be positive"));
            }
            let id = id as u64;
            if decls.contains_key(&id) {
                return Err(parse_err(line, format!("node {id} declared twice")));
            }
            decls.insert(id, Decl { kind, arcs: Vec::new() });
            root.get_or_insert(id);
            continue;
        }

        if toks.len() < 3 {
            return Err(parse_err(line, "expected `<parent> <child> [literals] 0`"));
        }
        let parent = parse_int(toks[0], line)?;
        let child = parse_int(toks[1], line)?;
        if parent <= 0 || child <= 0 {
            return Err(parse_err(line, "node ids must be positive"));
        }
        let literals = toks[2..toks.len() - 1]
            .iter()
            .map(|t| {
                let code = parse_int(t, line)?;
                Literal::from_dimacs(code).ok_or_else(|| parse_err(line, "literal 0 inside an arc"))
            })
            .collect::<Result<Vec<_>>>()?;
        pending.push((parent as u64, Arc { child: child as u64, literals, line }));
    }

    for (parent, arc) in pending {
        if !decls.contains_key(&arc.child) {
            return Err(parse_err(arc.line, format!("arc to undeclared node {}", arc.child)));
        }
        let line = arc.line;
        let decl = decls
            .get_mut(&parent)
            .ok_or_else(|| parse_err(line, format!("arc from undeclared node {parent}")))?;
        if matches!(decl.kind, DeclKind::True | DeclKind::False) {
            return Err(parse_err(line, format!("constant node {parent} cannot have children")));
        }
        decl.arcs.push(arc);
    }

    let root = root.ok_or_else(|| parse_err(0, "no nodes declared"))?;
    build(&decls, root)
}

/// Post-order translation from the root with cycle detection.
fn build(decls: &HashMap<u64, Decl>, root: u64) -> Result<Circuit> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Open,
        Done(NodeId),
    }
    let mut state: HashMap<u64, State> = HashMap::new();
    let mut b = CircuitBuilder::new();
    let mut stack: Vec<(u64, usize)> = vec![(root, 0)];
    state.insert(root, State::Open);

    while let Some(&mut (id, ref mut next)) = stack.last_mut() {
        let decl = &decls[&id];
        if let Some(arc) = decl.arcs.get(*next) {
            *next += 1;
            match state.get(&arc.child) {
                Some(State::Open) => {
                    return Err(parse_err(arc.line, format!("cycle through node {}", arc.child)))
                }
                Some(State::Done(_)) => {}
                None => {
                    state.insert(arc.child, State::Open);
                    stack.push((arc.child, 0));
                }
            }
            continue;
        }
        stack.pop();
        let node = match decl.kind {
            DeclKind::True => b.constant(true),
            DeclKind::False => b.constant(false),
            DeclKind::And | DeclKind::Or => {
                let mut kids = Vec::with_capacity(decl.arcs.len());
                for arc in &decl.arcs {
                    let State::Done(child) = state[&arc.child] else {
                        unreachable!("children finish before their parents")
                    };
                    let mut items: Vec<NodeId> =
                        arc.literals.iter().map(|&l| b.literal(l)).collect();
                    let elide_true = !items.is_empty() && decls[&arc.child].kind == DeclKind::True;
                    if !elide_true {
                        items.push(child);
                    }
                    if decl.kind == DeclKind::And {
                        kids.extend(items);
                    } else if items.len() == 1 {
                        kids.push(items[0]);
                    } else {
                        kids.push(b.product(&items));
                    }
                }
                if decl.kind == DeclKind::And {
                    b.product(&kids)
                } else {
                    b.sum(&kids)
                }
            }
        };
        state.insert(id, State::Done(node));
    }

    let State::Done(root_node) = state[&root] else { unreachable!() };
    Ok(b.finish(root_node))
}

/// Serializes a circuit in the d4 format. Literal leaves become literal arcs
/// into a shared `t` node.
pub fn write_d4(c: &Circuit) -> String {
    let mut out = String::new();
    let root = c.root();
    match c.kind(root) {
        NodeKind::True => return "t 1 0\n".to_string(),
        NodeKind::False => return "f 1 0\n".to_string(),
        NodeKind::Literal(l) => return format!("a 1 0\nt 2 0\n1 2 {l} 0\n"),
        _ => {}
    }

    // d4 ids: inner nodes in reverse topological order so the root is 1
    let mut ids = vec![0u64; c.num_nodes()];
    let mut next = 1u64;
    for id in c.ids().rev() {
        match c.kind(id) {
            NodeKind::Sum | NodeKind::Product => {
                ids[id as usize] = next;
                next += 1;
            }
            _ => {}
        }
    }
    let true_id = next;
    let false_id = next + 1;

    let mut arcs = String::new();
    let mut uses_false = false;
    for id in c.ids().rev() {
        let tag = match c.kind(id) {
            NodeKind::Sum => 'o',
            NodeKind::Product => 'a',
            _ => continue,
        };
        let me = ids[id as usize];
        writeln!(out, "{tag} {me} 0").unwrap();
        for &ch in c.children(id) {
            match c.kind(ch) {
                NodeKind::Literal(l) => writeln!(arcs, "{me} {true_id} {l} 0"),
                NodeKind::True => writeln!(arcs, "{me} {true_id} 0"),
                NodeKind::False => {
                    uses_false = true;
                    writeln!(arcs, "{me} {false_id} 0")
                }
                _ => writeln!(arcs, "{me} {} 0", ids[ch as usize]),
            }
            .unwrap();
        }
    }
    writeln!(out, "t {true_id} 0").unwrap();
    if uses_false {
        writeln!(out, "f {false_id} 0").unwrap();
    }
    out.push_str(&arcs);
    out
}
