use std::fmt;
use std::ops::{Add, Mul};

use super::{format_real, parse_real, Semiring};

/// A dual number `(p, ∂p)`: a primal value with one tangent component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualValue {
    pub primal: f64,
    pub tangent: f64,
}

impl DualValue {
    pub const fn new(primal: f64, tangent: f64) -> Self {
        DualValue { primal, tangent }
    }

    pub const fn constant(primal: f64) -> Self {
        DualValue { primal, tangent: 0.0 }
    }
}

impl Add for DualValue {
    type Output = DualValue;

    #[inline]
    fn add(self, rhs: DualValue) -> DualValue {
        DualValue::new(self.primal + rhs.primal, self.tangent + rhs.tangent)
    }
}

impl Mul for DualValue {
    type Output = DualValue;

    /// Product rule: `(a, b) ⊗ (c, d) = (ac, ad + cb)`.
    #[inline]
    fn mul(self, rhs: DualValue) -> DualValue {
        DualValue::new(
            self.primal * rhs.primal,
            self.primal * rhs.tangent + rhs.primal * self.tangent,
        )
    }
}

impl fmt::Display for DualValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", format_real(self.primal), format_real(self.tangent))
    }
}

/// The expectation (gradient) semiring over dual numbers. Computes first
/// derivatives in the forward direction, entropies with `(p, -p ln p)`
/// labels, and rows of the probability Hessian through backpropagation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Grad;

impl Semiring for Grad {
    type Value = DualValue;

    fn name(&self) -> &'static str {
        "grad"
    }

    fn zero(&self) -> DualValue {
        DualValue::new(0.0, 0.0)
    }

    fn one(&self) -> DualValue {
        DualValue::new(1.0, 0.0)
    }

    #[inline]
    fn add(&self, a: &DualValue, b: &DualValue) -> DualValue {
        *a + *b
    }

    #[inline]
    fn mul(&self, a: &DualValue, b: &DualValue) -> DualValue {
        *a * *b
    }

    fn additively_idempotent(&self) -> bool {
        false
    }

    #[inline]
    fn is_cancellative(&self, c: &DualValue) -> bool {
        c.primal != 0.0
    }

    /// Solves `c ⊗ x = a` for `x`.
    #[inline]
    fn divide(&self, a: &DualValue, c: &DualValue) -> DualValue {
        let primal = a.primal / c.primal;
        DualValue::new(primal, (a.tangent - primal * c.tangent) / c.primal)
    }

    fn negate(&self, a: &DualValue) -> Option<DualValue> {
        Some(DualValue::new(-a.primal, -a.tangent))
    }

    fn from_weight(&self, w: f64) -> Result<DualValue, String> {
        if w.is_finite() && w >= 0.0 {
            Ok(DualValue::constant(w))
        } else {
            Err(format!("{w} is not a finite non-negative weight"))
        }
    }

    /// Accepts `p`, `p,t` or `(p,t)`.
    fn parse_value(&self, text: &str) -> Result<DualValue, String> {
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(text);
        match inner.split_once(',') {
            Some((p, t)) => Ok(DualValue::new(parse_real(p.trim())?, parse_real(t.trim())?)),
            None => self.from_weight(parse_real(inner)?),
        }
    }

    fn format_value(&self, v: &DualValue) -> String {
        v.to_string()
    }

    /// Both components within `1e-9` relative to the largest component.
    fn approx_eq(&self, a: &DualValue, b: &DualValue) -> bool {
        let scale = a
            .primal
            .abs()
            .max(b.primal.abs())
            .max(a.tangent.abs())
            .max(b.tangent.abs());
        let tol = 1e-9 * scale;
        (a.primal - b.primal).abs() <= tol && (a.tangent - b.tangent).abs() <= tol
    }
}
