use super::{format_real, parse_real, Semiring};

const ABS_TOL: f64 = 1e-7;

/// `log(exp(a) + exp(b))`, computed as `max + log1p(exp(-|a - b|))`.
/// `-∞` is the identity and NaN propagates.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        return f64::NAN;
    }
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a == b {
        return a + std::f64::consts::LN_2;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn log_weight(w: f64) -> Result<f64, String> {
    if w.is_finite() && w >= 0.0 {
        Ok(w.ln())
    } else {
        Err(format!("{w} is not a finite non-negative weight"))
    }
}

fn log_close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= ABS_TOL
}

fn format_log(v: f64) -> String {
    format!("log:{}", format_real(v))
}

fn parse_log(text: &str) -> Result<f64, String> {
    match text.strip_prefix("log:") {
        Some(raw) => parse_real(raw),
        None => log_weight(parse_real(text)?),
    }
}

/// `({-∞} ∪ ℝ, logaddexp, +, -∞, 0)`: weighted model counting in log space.
///
/// Weight files hold probabilities; the semiring stores their logarithms.
#[derive(Debug, Clone, Copy, Default)]
pub struct Log;

impl Semiring for Log {
    type Value = f64;

    fn name(&self) -> &'static str {
        "log"
    }

    fn zero(&self) -> f64 {
        f64::NEG_INFINITY
    }

    fn one(&self) -> f64 {
        0.0
    }

    #[inline]
    fn add(&self, a: &f64, b: &f64) -> f64 {
        logaddexp(*a, *b)
    }

    #[inline]
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    fn additively_idempotent(&self) -> bool {
        false
    }

    #[inline]
    fn is_cancellative(&self, c: &f64) -> bool {
        *c != f64::NEG_INFINITY
    }

    #[inline]
    fn divide(&self, a: &f64, c: &f64) -> f64 {
        a - c
    }

    fn from_weight(&self, w: f64) -> Result<f64, String> {
        log_weight(w)
    }

    /// Plain numbers are probabilities; `log:<x>` gives a raw log-weight.
    fn parse_value(&self, text: &str) -> Result<f64, String> {
        parse_log(text)
    }

    fn format_value(&self, v: &f64) -> String {
        format_log(*v)
    }

    fn approx_eq(&self, a: &f64, b: &f64) -> bool {
        log_close(*a, *b)
    }
}

/// `({-∞} ∪ ℝ, max, +, -∞, 0)`: the log-space counterpart of Viterbi.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tropical;

impl Semiring for Tropical {
    type Value = f64;

    fn name(&self) -> &'static str {
        "tropical"
    }

    fn zero(&self) -> f64 {
        f64::NEG_INFINITY
    }

    fn one(&self) -> f64 {
        0.0
    }

    #[inline]
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a.max(*b)
    }

    #[inline]
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    fn additively_idempotent(&self) -> bool {
        true
    }

    #[inline]
    fn is_cancellative(&self, c: &f64) -> bool {
        *c != f64::NEG_INFINITY
    }

    #[inline]
    fn divide(&self, a: &f64, c: &f64) -> f64 {
        a - c
    }

    fn from_weight(&self, w: f64) -> Result<f64, String> {
        log_weight(w)
    }

    fn parse_value(&self, text: &str) -> Result<f64, String> {
        parse_log(text)
    }

    fn format_value(&self, v: &f64) -> String {
        format_log(*v)
    }

    fn approx_eq(&self, a: &f64, b: &f64) -> bool {
        log_close(*a, *b)
    }
}
