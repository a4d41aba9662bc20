//! Commutative semirings.
//!
//! A semiring `(A, ⊕, ⊗, e⊕, e⊗)` has commutative, associative `⊕` and `⊗`,
//! `⊗` distributes over `⊕`, and `e⊕` absorbs under `⊗`. Besides the
//! operations, each instance reports the capabilities the optimized backward
//! pass can exploit: which elements are multiplicatively cancellative (so a
//! leave-one-out product can be obtained by division) and which pairs are
//! multiplicatively ordered (`a ⊗ b ∈ {a, b}`).
//!
//! The engine is generic over [`Semiring`], so the numeric instances run on
//! plain `f64`/`bool`/`u128` values. [`SemiringKind`] and [`with_semiring!`]
//! select an instance by name at runtime.

mod boolean;
mod counting;
mod dual;
mod log;
mod poly;
mod real;

use std::fmt::Debug;
use std::str::FromStr;

use crate::error::Error;
use crate::literal::Literal;

pub use boolean::{Bool, Gf2, Gf2Value};
pub use counting::Nat;
pub use dual::{DualValue, Grad};
pub use log::{logaddexp, Log, Tropical};
pub use poly::{Monomial, Sens, SparsePolynomial};
pub use real::{Fuzzy, Prob, Viterbi};

/// Which operand an ordered product returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `a ⊗ b = a`
    Left,
    /// `a ⊗ b = b`
    Right,
}

pub trait Semiring: Clone + Debug + Send + Sync {
    type Value: Clone + Debug + PartialEq + Send + Sync;

    fn name(&self) -> &'static str;

    /// Additive identity `e⊕`.
    fn zero(&self) -> Self::Value;

    /// Multiplicative identity `e⊗`.
    fn one(&self) -> Self::Value;

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn add_assign(&self, acc: &mut Self::Value, b: &Self::Value) {
        *acc = self.add(acc, b);
    }

    fn mul_assign(&self, acc: &mut Self::Value, b: &Self::Value) {
        *acc = self.mul(acc, b);
    }

    /// `a ⊕ a = a` for every `a`.
    fn additively_idempotent(&self) -> bool;

    /// Evaluation over circuits is only sound on deterministic circuits.
    fn needs_determinism(&self) -> bool {
        !self.additively_idempotent()
    }

    /// Whether [`Semiring::try_divide`] can ever succeed.
    fn has_division(&self) -> bool {
        true
    }

    /// `c ⊗ b = c ⊗ b'` implies `b = b'`.
    fn is_cancellative(&self, _c: &Self::Value) -> bool {
        false
    }

    /// `a ⊘ c` for a cancellative `c` and an `a` known to be a multiple of
    /// `c`. The result is unspecified otherwise.
    fn divide(&self, a: &Self::Value, _c: &Self::Value) -> Self::Value {
        a.clone()
    }

    /// Returns `b` with `a = c ⊗ b` when `c` is cancellative and such a `b`
    /// exists.
    fn try_divide(&self, a: &Self::Value, c: &Self::Value) -> Option<Self::Value> {
        self.is_cancellative(c).then(|| self.divide(a, c))
    }

    /// Reports whether `a ⊗ b` is `a` or `b`. The default only recognises
    /// the identities: `e⊕` absorbs and `e⊗` is neutral.
    fn ordered_mul(&self, a: &Self::Value, b: &Self::Value) -> Option<Side> {
        let (zero, one) = (self.zero(), self.one());
        if *a == zero || *b == one {
            Some(Side::Left)
        } else if *b == zero || *a == one {
            Some(Side::Right)
        } else {
            None
        }
    }

    /// Additive inverse, for semirings that are rings.
    fn negate(&self, _a: &Self::Value) -> Option<Self::Value> {
        None
    }

    /// Encodes a non-negative weight (usually a probability) in the
    /// semiring's natural representation.
    fn from_weight(&self, w: f64) -> Result<Self::Value, String>;

    /// Parses an explicit literal value as written in weight files.
    fn parse_value(&self, text: &str) -> Result<Self::Value, String> {
        let w: f64 = text
            .parse()
            .map_err(|_| format!("`{text}` is not a number"))?;
        self.from_weight(w)
    }

    /// Label used for literals a weight file leaves unspecified.
    fn default_label(&self, _lit: Literal) -> Self::Value {
        self.one()
    }

    fn format_value(&self, v: &Self::Value) -> String;

    /// Equality up to the numeric tolerance appropriate for the domain.
    /// Exact for discrete semirings.
    fn approx_eq(&self, a: &Self::Value, b: &Self::Value) -> bool {
        a == b
    }
}

/// Relative comparison used by the real-valued semirings.
pub(crate) fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn format_real(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

pub(crate) fn parse_real(text: &str) -> Result<f64, String> {
    match text {
        "-inf" => Ok(f64::NEG_INFINITY),
        "inf" => Ok(f64::INFINITY),
        _ => text.parse().map_err(|_| format!("`{text}` is not a number")),
    }
}

/// Runtime selector for the built-in semirings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiringKind {
    Bool,
    Nat,
    Prob,
    Log,
    Viterbi,
    Tropical,
    Fuzzy,
    Grad,
    Gf2,
    Sens,
}

impl SemiringKind {
    pub const ALL: [SemiringKind; 10] = [
        SemiringKind::Bool,
        SemiringKind::Nat,
        SemiringKind::Prob,
        SemiringKind::Log,
        SemiringKind::Viterbi,
        SemiringKind::Tropical,
        SemiringKind::Fuzzy,
        SemiringKind::Grad,
        SemiringKind::Gf2,
        SemiringKind::Sens,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemiringKind::Bool => "bool",
            SemiringKind::Nat => "nat",
            SemiringKind::Prob => "prob",
            SemiringKind::Log => "log",
            SemiringKind::Viterbi => "viterbi",
            SemiringKind::Tropical => "tropical",
            SemiringKind::Fuzzy => "fuzzy",
            SemiringKind::Grad => "grad",
            SemiringKind::Gf2 => "gf2",
            SemiringKind::Sens => "sens",
        }
    }

    pub fn additively_idempotent(self) -> bool {
        crate::with_semiring!(self, |s| s.additively_idempotent())
    }

    pub fn needs_determinism(self) -> bool {
        crate::with_semiring!(self, |s| s.needs_determinism())
    }
}

impl std::fmt::Display for SemiringKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemiringKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SemiringKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownSemiring {
                name: s.to_string(),
                valid: SemiringKind::ALL.map(|k| k.name()).join(", "),
            })
    }
}

/// Looks up a semiring by name.
pub fn make_semiring(name: &str) -> Result<SemiringKind, Error> {
    name.parse()
}

/// Runs `body` with `s` bound to the concrete semiring selected by `kind`.
///
/// ```
/// use amcgrad::{with_semiring, Semiring, SemiringKind};
/// let one = with_semiring!(SemiringKind::Prob, |s| s.format_value(&s.one()));
/// assert_eq!(one, "1");
/// ```
#[macro_export]
macro_rules! with_semiring {
    ($kind:expr, |$s:ident| $body:expr) => {
        match $kind {
            $crate::SemiringKind::Bool => { let $s = $crate::semiring::Bool; $body }
            $crate::SemiringKind::Nat => { let $s = $crate::semiring::Nat; $body }
            $crate::SemiringKind::Prob => { let $s = $crate::semiring::Prob; $body }
            $crate::SemiringKind::Log => { let $s = $crate::semiring::Log; $body }
            $crate::SemiringKind::Viterbi => { let $s = $crate::semiring::Viterbi; $body }
            $crate::SemiringKind::Tropical => { let $s = $crate::semiring::Tropical; $body }
            $crate::SemiringKind::Fuzzy => { let $s = $crate::semiring::Fuzzy; $body }
            $crate::SemiringKind::Grad => { let $s = $crate::semiring::Grad; $body }
            $crate::SemiringKind::Gf2 => { let $s = $crate::semiring::Gf2; $body }
            $crate::SemiringKind::Sens => { let $s = $crate::semiring::Sens; $body }
        }
    };
}

#[cfg(test)]
mod tests;
