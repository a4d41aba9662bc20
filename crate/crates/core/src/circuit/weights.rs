use std::path::Path;

use crate::error::{Error, Result};
use crate::literal::{Labeling, Literal};
use crate::semiring::Semiring;

/// Reads a weight file. See [`parse_weights`].
pub fn read_weights<S: Semiring>(
    path: impl AsRef<Path>,
    num_vars: usize,
    semiring: &S,
) -> Result<Labeling<S::Value>> {
    parse_weights(&std::fs::read_to_string(path)?, num_vars, semiring)
}

/// Parses `v <var> <p>` and `l <±var> <value>` lines into a labeling over at
/// least `num_vars` variables. Literals not mentioned get the semiring's
/// default label.
pub fn parse_weights<S: Semiring>(
    text: &str,
    num_vars: usize,
    semiring: &S,
) -> Result<Labeling<S::Value>> {
    let mut assigned: Vec<(Literal, S::Value, usize)> = Vec::new();
    let mut seen = std::collections::HashMap::new();
    let mut record = |lit: Literal, value: S::Value, line: usize| -> Result<()> {
        if let Some(first) = seen.insert(lit, line) {
            return Err(parse_error(
                line,
                format!("literal {lit} already assigned on line {first}"),
            ));
        }
        assigned.push((lit, value, line));
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields.as_slice() {
            ["v", var, p] => {
                let var: i64 = var
                    .parse()
                    .map_err(|_| parse_error(line, format!("bad variable `{var}`")))?;
                let lit = Literal::from_dimacs(var)
                    .filter(|l| l.is_positive())
                    .ok_or_else(|| parse_error(line, format!("bad variable `{var}`")))?;
                let p: f64 = p
                    .parse()
                    .map_err(|_| parse_error(line, format!("bad probability `{p}`")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(domain(semiring, line, format!("probability {p} outside [0, 1]")));
                }
                let pos = semiring.from_weight(p).map_err(|m| domain(semiring, line, m))?;
                let neg = semiring
                    .from_weight(1.0 - p)
                    .map_err(|m| domain(semiring, line, m))?;
                record(lit, pos, line)?;
                record(lit.negated(), neg, line)?;
            }
            ["l", lit, value] => {
                let code: i64 = lit
                    .parse()
                    .map_err(|_| parse_error(line, format!("bad literal `{lit}`")))?;
                let lit = Literal::from_dimacs(code)
                    .ok_or_else(|| parse_error(line, format!("bad literal `{code}`")))?;
                let value = semiring
                    .parse_value(value)
                    .map_err(|m| domain(semiring, line, m))?;
                record(lit, value, line)?;
            }
            _ => return Err(parse_error(line, format!("unrecognised line `{trimmed}`"))),
        }
    }

    let width = assigned
        .iter()
        .map(|(l, _, _)| l.var() as usize)
        .max()
        .unwrap_or(0)
        .max(num_vars);
    let mut labels = Labeling::default_for(semiring, width);
    for (lit, value, _) in assigned {
        labels.set(lit, value);
    }
    Ok(labels)
}

fn parse_error(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}

fn domain<S: Semiring>(semiring: &S, line: usize, message: String) -> Error {
    Error::Domain {
        semiring: semiring.name(),
        message: format!("line {line}: {message}"),
    }
}
