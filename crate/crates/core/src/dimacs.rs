//! DIMACS CNF reader (`p cnf <vars> <clauses>`, clauses terminated by `0`).

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::literal::Literal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    pub fn to_formula(&self) -> Formula {
        Formula::and_all(
            self.clauses
                .iter()
                .map(|c| Formula::or_all(c.iter().map(|&l| Formula::lit(l)))),
        )
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(parse_err(line_no, "duplicate problem line"));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match fields.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| parse_err(line_no, "bad variable count"))?;
                    let c = c.parse().map_err(|_| parse_err(line_no, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(parse_err(line_no, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(parse_err(line_no, "clause before the problem line"));
        };
        for tok in line.split_whitespace() {
            let code: i64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, format!("`{tok}` is not a literal")))?;
            match Literal::from_dimacs(code) {
                None => clauses.push(std::mem::take(&mut current)),
                Some(lit) if lit.var() as usize > num_vars => {
                    return Err(parse_err(
                        line_no,
                        format!("literal {code} exceeds the declared {num_vars} variables"),
                    ))
                }
                Some(lit) => current.push(lit),
            }
        }
    }

    let (num_vars, num_clauses) = header.ok_or_else(|| parse_err(last_line, "missing problem line"))?;
    if !current.is_empty() {
        return Err(parse_err(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != num_clauses {
        return Err(parse_err(
            last_line,
            format!("header declares {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Cnf { num_vars, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::enumerate_models;

    #[test]
    fn reads_example_cnf() {
        let cnf = parse_dimacs("c (x ∨ y) ∧ z\np cnf 3 2\n1 2 0\n3 0\n").unwrap();
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(cnf.clauses.len(), 2);
        let models = enumerate_models(&cnf.to_formula(), cnf.num_vars).unwrap();
        assert_eq!(models.len(), 3);
    }

    #[test]
    fn clauses_may_span_lines() {
        let cnf = parse_dimacs("p cnf 2 1\n1\n-2 0\n").unwrap();
        assert_eq!(cnf.clauses, vec![vec![Literal::pos(1), Literal::neg(2)]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_dimacs("p cnf 2 1\n1 3 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 x 0\n").is_err());
    }
}
