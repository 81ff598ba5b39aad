//! The line-oriented problem format.
//!
//! ```text
//! # comment
//! field = QQ            # or: Fp 32003
//! vars  = x, y
//! I     = [x^2, x*y, y^2]
//! J     = [x^2, y^2]    # or: auto
//! seed  = 7             # optional
//! rmax  = 30            # optional
//! pmax  = 3             # optional
//! ```

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::parse::parse_polynomial_at;
use crate::polynomial::Polynomial;
use crate::scalar::{is_prime, Field, MAX_PRIME};

/// Smallest modulus accepted for `Fp`.
pub const MIN_PRIME: u64 = 32003;

#[derive(Clone, Debug, PartialEq)]
pub enum ReductionSpec {
    Given(Vec<Polynomial>),
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub field: Field,
    pub vars: Vec<String>,
    pub i: Vec<Polynomial>,
    pub j: ReductionSpec,
    pub seed: Option<u64>,
    pub r_max: Option<u32>,
    pub p_max: Option<u32>,
}

impl ProblemSpec {
    pub fn i_ideal(&self) -> Result<Ideal> {
        Ideal::new(self.vars.len(), self.field, self.i.clone())
    }

    pub fn is_monomial(&self) -> bool {
        let j_monomial = match &self.j {
            ReductionSpec::Given(gens) => gens.iter().all(Polynomial::is_monomial),
            ReductionSpec::Auto => false,
        };
        j_monomial && self.i.iter().all(Polynomial::is_monomial)
    }
}

const KEYS: [&str; 7] = ["field", "vars", "I", "J", "seed", "rmax", "pmax"];

/// A value with the 1-based line and column where it starts.
struct Entry<'a> {
    line: usize,
    column: usize,
    value: &'a str,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    let mut entries: HashMap<&str, Entry> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let key_col = content.len() - content.trim_start().len() + 1;
        let Some(eq) = content.find('=') else {
            return Err(parse_err(line, key_col, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        if !KEYS.contains(&key) {
            return Err(parse_err(
                line,
                key_col,
                format!("unknown key `{key}`; expected one of {}", KEYS.join(", ")),
            ));
        }
        let after = &content[eq + 1..];
        let value = after.trim();
        let column = eq + 2 + (after.len() - after.trim_start().len());
        if entries.contains_key(key) {
            return Err(parse_err(line, key_col, format!("duplicate key `{key}`")));
        }
        entries.insert(key, Entry { line, column, value });
    }
    let last_line = text.lines().count().max(1);
    let required = |key: &str| {
        entries
            .get(key)
            .ok_or_else(|| parse_err(last_line, 1, format!("missing required key `{key}`")))
    };

    let field = parse_field(required("field")?)?;
    let vars = parse_vars(required("vars")?)?;
    let i = parse_list(required("I")?, &vars, field)?;
    if i.is_empty() {
        let e = required("I")?;
        return Err(parse_err(e.line, e.column, "I needs at least one generator"));
    }
    let j_entry = required("J")?;
    let j = if j_entry.value == "auto" {
        ReductionSpec::Auto
    } else {
        ReductionSpec::Given(parse_list(j_entry, &vars, field)?)
    };
    Ok(ProblemSpec {
        field,
        vars,
        i,
        j,
        seed: entries.get("seed").map(parse_number).transpose()?,
        r_max: entries.get("rmax").map(parse_number).transpose()?,
        p_max: entries.get("pmax").map(parse_number).transpose()?,
    })
}

fn parse_field(e: &Entry) -> Result<Field> {
    if e.value == "QQ" {
        return Ok(Field::Rationals);
    }
    let Some(rest) = e.value.strip_prefix("Fp") else {
        return Err(parse_err(e.line, e.column, "field must be `QQ` or `Fp <prime>`"));
    };
    let col = e.column + 2 + (rest.len() - rest.trim_start().len());
    let p: u64 = rest
        .trim()
        .parse()
        .map_err(|_| parse_err(e.line, col, "expected a prime modulus after `Fp`"))?;
    if !is_prime(p) {
        return Err(parse_err(e.line, col, format!("modulus {p} is not prime")));
    }
    if !(MIN_PRIME..=MAX_PRIME).contains(&p) {
        return Err(parse_err(
            e.line,
            col,
            format!("prime modulus must lie in [{MIN_PRIME}, {MAX_PRIME}], got {p}"),
        ));
    }
    Ok(Field::Prime(p))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_vars(e: &Entry) -> Result<Vec<String>> {
    let mut vars: Vec<String> = Vec::new();
    let mut offset = 0;
    for piece in e.value.split(',') {
        let name = piece.trim();
        let col = e.column + offset + (piece.len() - piece.trim_start().len());
        if !is_identifier(name) {
            return Err(parse_err(e.line, col, format!("invalid variable name `{name}`")));
        }
        if vars.iter().any(|v| v == name) {
            return Err(parse_err(e.line, col, format!("variable `{name}` declared twice")));
        }
        vars.push(name.to_string());
        offset += piece.len() + 1;
    }
    Ok(vars)
}

fn parse_list(e: &Entry, vars: &[String], field: Field) -> Result<Vec<Polynomial>> {
    let inner = e
        .value
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(e.line, e.column, "expected a bracketed list `[f1, f2, ...]`"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 1;
    for piece in inner.split(',') {
        if piece.trim().is_empty() {
            return Err(parse_err(e.line, e.column + offset, "empty list entry"));
        }
        out.push(parse_polynomial_at(piece, vars, field, e.line, e.column + offset)?);
        offset += piece.len() + 1;
    }
    Ok(out)
}

fn parse_number<T: std::str::FromStr>(e: &Entry) -> Result<T> {
    e.value
        .parse()
        .map_err(|_| parse_err(e.line, e.column, format!("expected a non-negative integer, got `{}`", e.value)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E2: &str = "field = QQ\nvars = x, y\nI = [x^2, x*y, y^2]\nJ = [x^2, y^2]\n";

    #[test]
    fn parses_pair() {
        let spec = parse_problem(E2).unwrap();
        assert_eq!(spec.field, Field::Rationals);
        assert_eq!(spec.vars, vec!["x", "y"]);
        assert_eq!(spec.i.len(), 3);
        assert!(matches!(spec.j, ReductionSpec::Given(ref g) if g.len() == 2));
        assert!(spec.is_monomial());
    }

    #[test]
    fn auto_and_prime_field_with_comments() {
        let text = "# pair\nfield = Fp 32003  # speed mode\nvars = x,y\nI = [x^2, x*y, y^2]\nJ = auto\nseed = 9\npmax = 2\n";
        let spec = parse_problem(text).unwrap();
        assert_eq!(spec.field, Field::Prime(32003));
        assert_eq!(spec.j, ReductionSpec::Auto);
        assert_eq!((spec.seed, spec.p_max, spec.r_max), (Some(9), Some(2), None));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_problem("field = QQ\nvars = x, y\nI = [x^2, w]\nJ = auto\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 11, .. }), "{err:?}");
        let err = parse_problem("field = QQ\nvars = x\ncolour = red\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 1, .. }));
        let err = parse_problem("field = Fp 32001\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 12, .. }), "{err:?}");
        let err = parse_problem("field = Fp 101\nvars = x\nI = [x]\nJ = [x]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_problem("field = QQ\nvars = x, x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 11, .. }), "{err:?}");
        let err = parse_problem("field = QQ\nvars = x\nI = [x]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_problem("field = QQ\nfield = QQ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
