use super::{format_real, parse_real, rel_close, Semiring, Side};

const REL_TOL: f64 = 1e-9;

fn non_negative(w: f64) -> Result<f64, String> {
    if w.is_finite() && w >= 0.0 {
        Ok(w)
    } else {
        Err(format!("{w} is not a finite non-negative weight"))
    }
}

/// `(ℝ≥0, +, ×, 0, 1)`: weighted model counting and its gradient.
///
/// Negation is available, so the same instance doubles as the signed ring
/// used for variable gradients.
#[derive(Debug, Clone, Copy, Default)]
pub struct Prob;

impl Semiring for Prob {
    type Value = f64;

    fn name(&self) -> &'static str {
        "prob"
    }

    fn zero(&self) -> f64 {
        0.0
    }

    fn one(&self) -> f64 {
        1.0
    }

    #[inline]
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    #[inline]
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }

    #[inline]
    fn add_assign(&self, acc: &mut f64, b: &f64) {
        *acc += b;
    }

    #[inline]
    fn mul_assign(&self, acc: &mut f64, b: &f64) {
        *acc *= b;
    }

    fn additively_idempotent(&self) -> bool {
        false
    }

    #[inline]
    fn is_cancellative(&self, c: &f64) -> bool {
        *c != 0.0
    }

    #[inline]
    fn divide(&self, a: &f64, c: &f64) -> f64 {
        a / c
    }

    fn negate(&self, a: &f64) -> Option<f64> {
        Some(-a)
    }

    fn from_weight(&self, w: f64) -> Result<f64, String> {
        non_negative(w)
    }

    fn parse_value(&self, text: &str) -> Result<f64, String> {
        parse_real(text)
    }

    fn format_value(&self, v: &f64) -> String {
        format_real(*v)
    }

    fn approx_eq(&self, a: &f64, b: &f64) -> bool {
        rel_close(*a, *b, REL_TOL)
    }
}

/// `(ℝ≥0, max, ×, 0, 1)`: most probable explanation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Viterbi;

impl Semiring for Viterbi {
    type Value = f64;

    fn name(&self) -> &'static str {
        "viterbi"
    }

    fn zero(&self) -> f64 {
        0.0
    }

    fn one(&self) -> f64 {
        1.0
    }

    #[inline]
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a.max(*b)
    }

    #[inline]
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }

    fn additively_idempotent(&self) -> bool {
        true
    }

    #[inline]
    fn is_cancellative(&self, c: &f64) -> bool {
        *c != 0.0
    }

    #[inline]
    fn divide(&self, a: &f64, c: &f64) -> f64 {
        a / c
    }

    fn from_weight(&self, w: f64) -> Result<f64, String> {
        non_negative(w)
    }

    fn parse_value(&self, text: &str) -> Result<f64, String> {
        parse_real(text)
    }

    fn format_value(&self, v: &f64) -> String {
        format_real(*v)
    }

    fn approx_eq(&self, a: &f64, b: &f64) -> bool {
        rel_close(*a, *b, REL_TOL)
    }
}

/// `([0, 1], max, min, 0, 1)`: fuzzy logic. Every pair is multiplicatively
/// ordered and nothing but `1` cancels, so there is no division.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fuzzy;

impl Semiring for Fuzzy {
    type Value = f64;

    fn name(&self) -> &'static str {
        "fuzzy"
    }

    fn zero(&self) -> f64 {
        0.0
    }

    fn one(&self) -> f64 {
        1.0
    }

    #[inline]
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a.max(*b)
    }

    #[inline]
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a.min(*b)
    }

    fn additively_idempotent(&self) -> bool {
        true
    }

    fn has_division(&self) -> bool {
        false
    }

    #[inline]
    fn ordered_mul(&self, a: &f64, b: &f64) -> Option<Side> {
        Some(if a <= b { Side::Left } else { Side::Right })
    }

    fn from_weight(&self, w: f64) -> Result<f64, String> {
        if (0.0..=1.0).contains(&w) {
            Ok(w)
        } else {
            Err(format!("{w} is outside [0, 1]"))
        }
    }

    fn format_value(&self, v: &f64) -> String {
        format_real(*v)
    }
}
