use std::collections::BTreeMap;
use std::fmt;

use super::{format_real, parse_real, Semiring};
use crate::literal::{Literal, Var};

/// A product of indeterminates `X_v^k`, kept sorted by variable with
/// positive exponents only. The empty monomial is the constant `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, k) in powers {
            *acc.entry(v).or_default() += k;
        }
        Monomial(acc.into_iter().filter(|&(_, k)| k > 0).collect())
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k).sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    fn over(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, k) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                j += 1;
                match k.cmp(&d) {
                    std::cmp::Ordering::Less => return None,
                    std::cmp::Ordering::Equal => continue,
                    std::cmp::Ordering::Greater => out.push((v, k - d)),
                }
            } else {
                out.push((v, k));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    fn evaluate(&self, point: &dyn Fn(Var) -> f64) -> f64 {
        self.0
            .iter()
            .map(|&(v, k)| point(v).powi(k as i32))
            .product()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(v, k)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{v}")?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `ℝ[X_1, …, X_n]` stored as a canonical sparse term map:
/// no zero coefficients are ever stored, so equal polynomials compare equal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, f64>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::term(Monomial::one(), c)
    }

    /// The indeterminate `X_v`.
    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), 1.0)
    }

    pub fn term(m: Monomial, c: f64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(m, c);
        }
        SparsePolynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn add(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        out.add_in_place(other);
        out
    }

    pub fn add_in_place(&mut self, other: &SparsePolynomial) {
        for (m, &c) in &other.terms {
            self.accumulate(m.clone(), c);
        }
    }

    pub fn mul(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.accumulate(ma.times(mb), ca * cb);
            }
        }
        out
    }

    pub fn neg(&self) -> SparsePolynomial {
        SparsePolynomial {
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), -c)).collect(),
        }
    }

    /// Evaluates at the point `X_v = point(v)`.
    pub fn evaluate(&self, point: impl Fn(Var) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, &c)| c * m.evaluate(&point))
            .sum()
    }

    fn accumulate(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = *e.get() + c;
                if sum == 0.0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn single_term(&self) -> Option<(&Monomial, f64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, &c)| (m, c))
        } else {
            None
        }
    }

    /// Parses the textual form produced by `Display`, e.g. `0.5 + 2*x1^2*x3 - x2`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err("empty polynomial".into());
        }
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            let split = (bytes[i] == b'+' || bytes[i] == b'-')
                && !matches!(bytes[i - 1], b'e' | b'E' | b'*' | b'^');
            if split {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);

        let mut out = SparsePolynomial::zero();
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'+' => (1.0, &piece[1..]),
                b'-' => (-1.0, &piece[1..]),
                _ => (1.0, piece),
            };
            let mut coef = sign;
            let mut powers = Vec::new();
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (v, k) = match rest.split_once('^') {
                        Some((v, k)) => (v, k),
                        None => (rest, "1"),
                    };
                    let v: Var = v.parse().map_err(|_| format!("bad variable in `{factor}`"))?;
                    let k: u32 = k.parse().map_err(|_| format!("bad exponent in `{factor}`"))?;
                    if v == 0 {
                        return Err("variables are numbered from 1".into());
                    }
                    powers.push((v, k));
                } else {
                    coef *= parse_real(factor)?;
                }
            }
            out.accumulate(Monomial::from_powers(powers), coef);
        }
        Ok(out)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c < 0.0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0.0 { " - " } else { " + " })?;
            }
            if m.0.is_empty() {
                f.write_str(&format_real(mag))?;
            } else if mag == 1.0 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_real(mag))?;
            }
        }
        Ok(())
    }
}

/// `(ℝ[𝒱], +, ×, 0, 1)`: sensitivity polynomials.
///
/// Unlabelled literals default to `X_v` for `v` and `1 - X_v` for `¬v`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sens;

impl Semiring for Sens {
    type Value = SparsePolynomial;

    fn name(&self) -> &'static str {
        "sens"
    }

    fn zero(&self) -> SparsePolynomial {
        SparsePolynomial::zero()
    }

    fn one(&self) -> SparsePolynomial {
        SparsePolynomial::constant(1.0)
    }

    fn add(&self, a: &SparsePolynomial, b: &SparsePolynomial) -> SparsePolynomial {
        a.add(b)
    }

    fn mul(&self, a: &SparsePolynomial, b: &SparsePolynomial) -> SparsePolynomial {
        a.mul(b)
    }

    fn add_assign(&self, acc: &mut SparsePolynomial, b: &SparsePolynomial) {
        acc.add_in_place(b);
    }

    fn additively_idempotent(&self) -> bool {
        false
    }

    /// Only single-term divisors are divided exactly; general multivariate
    /// division is left to the fallback paths.
    fn is_cancellative(&self, c: &SparsePolynomial) -> bool {
        c.single_term().is_some()
    }

    fn divide(&self, a: &SparsePolynomial, c: &SparsePolynomial) -> SparsePolynomial {
        self.try_divide(a, c)
            .expect("divisor must be a single term dividing every term of the dividend")
    }

    fn try_divide(&self, a: &SparsePolynomial, c: &SparsePolynomial) -> Option<SparsePolynomial> {
        let (cm, cc) = c.single_term()?;
        let mut out = SparsePolynomial::zero();
        for (m, &k) in &a.terms {
            out.accumulate(m.over(cm)?, k / cc);
        }
        Some(out)
    }

    fn negate(&self, a: &SparsePolynomial) -> Option<SparsePolynomial> {
        Some(a.neg())
    }

    fn from_weight(&self, w: f64) -> Result<SparsePolynomial, String> {
        if w.is_finite() {
            Ok(SparsePolynomial::constant(w))
        } else {
            Err(format!("{w} is not a finite coefficient"))
        }
    }

    fn parse_value(&self, text: &str) -> Result<SparsePolynomial, String> {
        SparsePolynomial::parse(text)
    }

    fn default_label(&self, lit: Literal) -> SparsePolynomial {
        let x = SparsePolynomial::var(lit.var());
        if lit.is_positive() {
            x
        } else {
            SparsePolynomial::constant(1.0).add(&x.neg())
        }
    }

    fn format_value(&self, v: &SparsePolynomial) -> String {
        v.to_string()
    }

    /// Coefficient-wise, `1e-9` relative to the larger coefficient magnitude
    /// of the two polynomials.
    fn approx_eq(&self, a: &SparsePolynomial, b: &SparsePolynomial) -> bool {
        let scale = a
            .terms
            .values()
            .chain(b.terms.values())
            .fold(0.0_f64, |m, c| m.max(c.abs()));
        let tol = 1e-9 * scale;
        a.terms
            .keys()
            .chain(b.terms.keys())
            .all(|m| (a.coefficient(m) - b.coefficient(m)).abs() <= tol)
    }
}
