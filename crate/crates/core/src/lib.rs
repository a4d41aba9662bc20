//! Algebraic model counting and its gradient over d-DNNF circuits.
//!
//! A [`Circuit`] is evaluated in any [`Semiring`]; one backward pass then
//! yields `AMC(φ | l)` for every literal `l` at once.
//!
//! ```
//! use amcgrad::circuit::{parse_d4, smooth};
//! use amcgrad::engine::{grad_amc, Algorithm, GateOptions};
//! use amcgrad::semiring::Prob;
//! use amcgrad::{Labeling, Literal};
//!
//! let c = parse_d4("a 1 0\no 2 0\nt 3 0\n1 2 0\n1 3 3 0\n2 3 1 0\n2 3 -1 2 0\n").unwrap();
//! let c = smooth(&c).unwrap();
//! let alpha = Labeling::from_pairs([(0.5, 0.5), (0.1, 0.9), (0.8, 0.2)]);
//! let (wmc, grad) = grad_amc(&c, &alpha, &Prob, Algorithm::Optimized, GateOptions::default()).unwrap();
//! assert!((wmc - 0.44).abs() < 1e-12);
//! assert!((grad.get(Literal::pos(3)) - 0.55).abs() < 1e-12);
//! ```

pub mod circuit;
pub mod dimacs;
pub mod engine;
pub mod error;
pub mod formula;
pub mod learn;
pub mod literal;
pub mod oracle;
pub mod semiring;
pub mod testgen;

pub use circuit::{Circuit, CircuitBuilder, NodeId, NodeKind};
pub use engine::{amc, grad_amc, Algorithm, Engine, GateOptions};
pub use error::{Error, Result};
pub use formula::Formula;
pub use literal::{variable_gradient, GradientVector, Labeling, Literal, Var};
pub use semiring::{make_semiring, Semiring, SemiringKind};
