use super::{Semiring, Side};

/// `({⊥, ⊤}, ∨, ∧, ⊥, ⊤)`: satisfiability and conditional satisfiability.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bool;

impl Semiring for Bool {
    type Value = bool;

    fn name(&self) -> &'static str {
        "bool"
    }

    fn zero(&self) -> bool {
        false
    }

    fn one(&self) -> bool {
        true
    }

    fn add(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }

    fn mul(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }

    fn additively_idempotent(&self) -> bool {
        true
    }

    fn is_cancellative(&self, c: &bool) -> bool {
        *c
    }

    fn divide(&self, a: &bool, _c: &bool) -> bool {
        *a
    }

    fn ordered_mul(&self, a: &bool, b: &bool) -> Option<Side> {
        Some(if !*a || *b { Side::Left } else { Side::Right })
    }

    /// Any positive weight maps to `⊤`, so weight files describe the support.
    fn from_weight(&self, w: f64) -> Result<bool, String> {
        if w.is_nan() || w < 0.0 {
            return Err(format!("{w} is not a non-negative weight"));
        }
        Ok(w > 0.0)
    }

    fn parse_value(&self, text: &str) -> Result<bool, String> {
        match text {
            "T" | "t" | "true" | "1" => Ok(true),
            "F" | "f" | "false" | "0" => Ok(false),
            _ => Err(format!("`{text}` is not a boolean (use T/F)")),
        }
    }

    fn format_value(&self, v: &bool) -> String {
        if *v { "T" } else { "F" }.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf2Value(pub bool);

/// The binary field `𝔽₂`: XOR and AND.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gf2;

impl Semiring for Gf2 {
    type Value = Gf2Value;

    fn name(&self) -> &'static str {
        "gf2"
    }

    fn zero(&self) -> Gf2Value {
        Gf2Value(false)
    }

    fn one(&self) -> Gf2Value {
        Gf2Value(true)
    }

    fn add(&self, a: &Gf2Value, b: &Gf2Value) -> Gf2Value {
        Gf2Value(a.0 ^ b.0)
    }

    fn mul(&self, a: &Gf2Value, b: &Gf2Value) -> Gf2Value {
        Gf2Value(a.0 && b.0)
    }

    fn additively_idempotent(&self) -> bool {
        false
    }

    fn is_cancellative(&self, c: &Gf2Value) -> bool {
        c.0
    }

    fn divide(&self, a: &Gf2Value, _c: &Gf2Value) -> Gf2Value {
        *a
    }

    fn ordered_mul(&self, a: &Gf2Value, b: &Gf2Value) -> Option<Side> {
        Some(if !a.0 || b.0 { Side::Left } else { Side::Right })
    }

    fn negate(&self, a: &Gf2Value) -> Option<Gf2Value> {
        Some(*a)
    }

    fn from_weight(&self, w: f64) -> Result<Gf2Value, String> {
        match w {
            0.0 => Ok(Gf2Value(false)),
            1.0 => Ok(Gf2Value(true)),
            _ => Err(format!("{w} is not 0 or 1")),
        }
    }

    fn format_value(&self, v: &Gf2Value) -> String {
        if v.0 { "1" } else { "0" }.to_string()
    }
}
