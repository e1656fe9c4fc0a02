//! JSON file formats.
//!
//! Algebra files look like
//!
//! ```json
//! { "dim": 3, "name": "heisenberg3",
//!   "brackets": [ { "i": 1, "j": 2, "c": [[3, "1"]] } ] }
//! ```
//!
//! with 1-based indices, `i < j`, and rationals written as `"p/q"` or `"p"`.
//! Omitted pairs are zero brackets; a repeated `(i, j)` pair is rejected.
//! Matrix files are row-major arrays of rational strings.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, RatMatrix, RatVector};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    dim: usize,
    #[serde(default)]
    name: String,
    #[serde(default)]
    brackets: Vec<BracketEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketEntry {
    i: usize,
    j: usize,
    c: Vec<(usize, RationalText)>,
}

/// Accepts `"p/q"` strings as well as bare JSON integers.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    fn value(&self) -> Result<Rational> {
        match self {
            RationalText::Text(s) => parse_rational(s),
            RationalText::Int(i) => Ok(Rational::from_integer((*i).into())),
        }
    }
}

pub fn algebra_from_json(text: &str) -> Result<LieAlgebra> {
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra file: {e}")))?;
    let n = file.dim;
    if n == 0 {
        return Err(Error::Parse("dim must be positive".into()));
    }
    let mut entries = Vec::with_capacity(file.brackets.len());
    for b in &file.brackets {
        if b.i == 0 || b.j == 0 || b.i >= b.j || b.j > n {
            return Err(Error::InvalidBracket {
                i: b.i,
                j: b.j,
                reason: format!("need 1 <= i < j <= {n}"),
            });
        }
        let mut v = zero_vector(n);
        for (k, c) in &b.c {
            if *k == 0 || *k > n {
                return Err(Error::InvalidBracket {
                    i: b.i,
                    j: b.j,
                    reason: format!("coefficient index {k} out of range"),
                });
            }
            v[k - 1] += c.value()?;
        }
        entries.push(((b.i - 1, b.j - 1), v));
    }
    // LieAlgebra::new rejects duplicate pairs.
    LieAlgebra::new(file.name, n, entries)
}

pub fn algebra_to_value(g: &LieAlgebra) -> Value {
    let brackets: Vec<Value> = g
        .brackets()
        .map(|((i, j), v)| {
            let c: Vec<Value> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
                .map(|(k, x)| serde_json::json!([k + 1, format_rational(x)]))
                .collect();
            serde_json::json!({ "i": i + 1, "j": j + 1, "c": c })
        })
        .collect();
    serde_json::json!({ "dim": g.dim(), "name": g.name(), "brackets": brackets })
}

pub fn algebra_to_json(g: &LieAlgebra) -> String {
    serde_json::to_string_pretty(&algebra_to_value(g)).expect("json values always serialize")
}

pub fn matrix_from_json(text: &str) -> Result<RatMatrix> {
    let rows: Vec<Vec<RationalText>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix file: {e}")))?;
    let rows = rows
        .iter()
        .map(|r| r.iter().map(RationalText::value).collect::<Result<RatVector>>())
        .collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(rows)
}

pub fn matrix_to_value(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(format_rational(x))).collect()))
            .collect(),
    )
}

pub fn vector_to_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

pub(crate) fn serialize_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

pub(crate) fn serialize_vector<S: Serializer>(v: &RatVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    vector_to_value(v).serialize(s)
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub(crate) fn serialize_displays<T: std::fmt::Display, S: Serializer>(
    xs: &[T],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

pub(crate) fn serialize_matrix<S: Serializer>(m: &RatMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    matrix_to_value(m).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parse_algebra_file() {
        let text = r#"{"dim": 3, "name": "h", "brackets": [{"i": 1, "j": 2, "c": [[3, "1/2"]]}]}"#;
        let g = algebra_from_json(text).unwrap();
        assert_eq!(g.structure_constant(0, 1, 2), rat(1, 2));
        assert_eq!(g.structure_constant(1, 0, 2), rat(-1, 2));
        let back = algebra_from_json(&algebra_to_json(&g)).unwrap();
        assert!(back.same_structure(&g));
        assert_eq!(back.name(), "h");
    }

    #[test]
    fn reject_bad_files() {
        let dup = r#"{"dim": 3, "name": "", "brackets": [{"i":1,"j":2,"c":[[3,"1"]]},{"i":1,"j":2,"c":[[3,"2"]]}]}"#;
        assert!(algebra_from_json(dup).is_err());
        let order = r#"{"dim": 3, "brackets": [{"i":2,"j":1,"c":[[3,"1"]]}]}"#;
        assert!(algebra_from_json(order).is_err());
        let range = r#"{"dim": 3, "brackets": [{"i":1,"j":2,"c":[[4,"1"]]}]}"#;
        assert!(algebra_from_json(range).is_err());
        let bad_rat = r#"{"dim": 3, "brackets": [{"i":1,"j":2,"c":[[3,"1/0"]]}]}"#;
        assert!(algebra_from_json(bad_rat).is_err());
        assert!(algebra_from_json("not json").is_err());
    }

    #[test]
    fn matrix_files() {
        let m = matrix_from_json(r#"[["1", "2/3"], [0, "-4"]]"#).unwrap();
        assert_eq!(m[(0, 1)], rat(2, 3));
        assert_eq!(matrix_from_json(&matrix_to_value(&m).to_string()).unwrap(), m);
        assert!(matrix_from_json(r#"[["1"], ["1", "2"]]"#).is_err());
    }
}
