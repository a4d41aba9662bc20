use super::Semiring;

/// `(ℕ, +, ×, 0, 1)`: model counting.
///
/// Values are `u128`; arithmetic is checked and overflow panics rather than
/// silently wrapping.
#[derive(Debug, Clone, Copy, Default)]
pub struct Nat;

impl Semiring for Nat {
    type Value = u128;

    fn name(&self) -> &'static str {
        "nat"
    }

    fn zero(&self) -> u128 {
        0
    }

    fn one(&self) -> u128 {
        1
    }

    fn add(&self, a: &u128, b: &u128) -> u128 {
        a.checked_add(*b).expect("nat semiring overflow in addition")
    }

    fn mul(&self, a: &u128, b: &u128) -> u128 {
        a.checked_mul(*b).expect("nat semiring overflow in multiplication")
    }

    fn additively_idempotent(&self) -> bool {
        false
    }

    fn is_cancellative(&self, c: &u128) -> bool {
        *c != 0
    }

    fn divide(&self, a: &u128, c: &u128) -> u128 {
        a / c
    }

    fn try_divide(&self, a: &u128, c: &u128) -> Option<u128> {
        (*c != 0 && a % c == 0).then(|| a / c)
    }

    fn from_weight(&self, w: f64) -> Result<u128, String> {
        if w >= 0.0 && w.fract() == 0.0 && w < u128::MAX as f64 {
            Ok(w as u128)
        } else {
            Err(format!("{w} is not a natural number"))
        }
    }

    fn parse_value(&self, text: &str) -> Result<u128, String> {
        text.parse()
            .map_err(|_| format!("`{text}` is not a natural number"))
    }

    fn format_value(&self, v: &u128) -> String {
        v.to_string()
    }
}
