//! JSON file formats. Rationals are written as `"p/q"` strings; on input a
//! rational may also be a JSON integer or an integer string. Sequence entries
//! and coordinates in these documents are 1-based.

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exchange::{ExchangeMatrix, ExtendedExchangeMatrix};
use crate::fanviz::FanApproximation;
use crate::mutmap::LinearRelation;
use crate::scalar::{fmt_rational, parse_rational, to_rational_vec};
use crate::specialize::{SpecializationSolution, VerificationReport};
use crate::{Int, RatVec, Rational};

pub fn one_based(seq: &[usize]) -> Vec<usize> {
    seq.iter().map(|k| k + 1).collect()
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| bad(format!("not an integer: {n}"))),
        other => Err(bad(format!("expected a rational, found {other}"))),
    }
}

pub fn vector_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

pub fn int_vector_to_json(v: &[Int]) -> Value {
    vector_to_json(&to_rational_vec(v))
}

pub fn vector_from_json(v: &Value) -> Result<RatVec> {
    v.as_array()
        .ok_or_else(|| bad("expected an array"))?
        .iter()
        .map(rational_from_json)
        .collect()
}

fn int_from_json(v: &Value) -> Result<Int> {
    let r = rational_from_json(v)?;
    if !r.is_integer() {
        return Err(bad(format!("expected an integer, found {}", fmt_rational(&r))));
    }
    Ok(r.to_integer())
}

/// A JSON number when it fits in `i64`, a decimal string otherwise.
fn int_to_json(x: &Int) -> Value {
    x.to_i64().map(Value::from).unwrap_or_else(|| Value::String(x.to_string()))
}

/// An integer matrix as nested arrays of JSON numbers.
pub fn int_matrix_to_json(rows: &[Vec<Int>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(int_to_json).collect())).collect())
}

pub fn matrix_to_json(m: &ExtendedExchangeMatrix) -> Value {
    let b = int_matrix_to_json(m.base().rows());
    let rows: Map<String, Value> = m.rows().iter().map(|(l, r)| (l.clone(), vector_to_json(r))).collect();
    json!({ "n": m.n(), "B": b, "rows": rows })
}

pub fn matrix_from_json(v: &Value) -> Result<ExtendedExchangeMatrix> {
    let obj = v.as_object().ok_or_else(|| bad("matrix file must be an object"))?;
    let b = obj.get("B").and_then(Value::as_array).ok_or_else(|| bad("missing \"B\""))?;
    let entries = b
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("rows of \"B\" must be arrays"))?
                .iter()
                .map(int_from_json)
                .collect::<Result<Vec<Int>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let base = ExchangeMatrix::new(entries)?;
    if let Some(n) = obj.get("n") {
        let n = n.as_u64().ok_or_else(|| bad("\"n\" must be a nonnegative integer"))?;
        if n as usize != base.n() {
            return Err(Error::DimensionMismatch { expected: n as usize, found: base.n() });
        }
    }
    let rows = match obj.get("rows") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Object(map)) => map
            .iter()
            .map(|(l, r)| Ok((l.clone(), vector_from_json(r)?)))
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(bad("\"rows\" must be an object")),
    };
    ExtendedExchangeMatrix::new(base, rows)
}

pub fn parse_matrix(text: &str) -> Result<ExtendedExchangeMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    matrix_from_json(&v)
}

pub fn relation_to_json(rel: &LinearRelation<Rational>) -> Value {
    json!({
        "coeffs": rel.coefficients().iter().map(rational_to_json).collect::<Vec<_>>(),
        "vectors": rel.vectors().iter().map(|v| vector_to_json(v)).collect::<Vec<_>>(),
    })
}

pub fn relation_from_json(v: &Value) -> Result<LinearRelation<Rational>> {
    let coeffs = vector_from_json(v.get("coeffs").ok_or_else(|| bad("missing \"coeffs\""))?)?;
    let vectors = v
        .get("vectors")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"vectors\""))?
        .iter()
        .map(vector_from_json)
        .collect::<Result<Vec<_>>>()?;
    LinearRelation::new(coeffs, vectors)
}

pub fn parse_relation(text: &str) -> Result<LinearRelation<Rational>> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    relation_from_json(&v)
}

/// `{"rows": {"k": {"i": "p/q"}}}`.
pub fn specialization_to_json(sol: &SpecializationSolution) -> Value {
    let rows: Map<String, Value> = sol
        .per_row_support
        .iter()
        .map(|(k, support)| {
            let inner: Map<String, Value> = support.iter().map(|(i, p)| (i.clone(), rational_to_json(p))).collect();
            (k.clone(), Value::Object(inner))
        })
        .collect();
    json!({ "rows": rows })
}

pub fn verification_to_json(r: &VerificationReport) -> Value {
    let failure = match &r.failure {
        None => Value::Null,
        Some(f) => json!({
            "seq": one_based(&f.sequence),
            "row": f.row,
            "j": f.coordinate + 1,
            "condition": format!("{:?}", f.condition).to_lowercase(),
        }),
    };
    json!({ "depth": r.depth, "ok": r.is_ok(), "vertices": r.vertices, "failure": failure })
}

/// One entry per pulled-back hyperplane:
/// `{"seq": [int], "j": int, "pieces": [{"normal": ["p/q"], "cell": [["p/q"]]}]}`.
pub fn walls_to_json(fan: &FanApproximation) -> Value {
    Value::Array(
        fan.walls
            .iter()
            .map(|w| {
                let pieces: Vec<Value> = w
                    .pieces
                    .iter()
                    .map(|p| {
                        json!({
                            "normal": int_vector_to_json(&p.normal),
                            "cell": p.cell.iter().map(|g| int_vector_to_json(g)).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                json!({ "seq": one_based(&w.sequence), "j": w.coordinate + 1, "pieces": pieces })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rvec};

    #[test]
    fn matrix_round_trip() {
        let text = r#"{"n": 2, "B": [[0, 1], [-2, 0]], "rows": {"a": ["1/1", "0"], "b": [0, "-3/2"]}}"#;
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.row("b").unwrap(), &vec![rat(0, 1), rat(-3, 2)]);
        let out = matrix_to_json(&m);
        assert_eq!(
            out.to_string(),
            r#"{"n":2,"B":[[0,1],[-2,0]],"rows":{"a":["1/1","0/1"],"b":["0/1","-3/2"]}}"#
        );
        assert_eq!(matrix_from_json(&out).unwrap(), m);
    }

    #[test]
    fn malformed_matrices() {
        assert!(parse_matrix("{").is_err());
        assert!(parse_matrix(r#"{"B": [[0, 1], [1, 0]]}"#).is_err());
        assert!(parse_matrix(r#"{"n": 3, "B": [[0, 1], [-1, 0]]}"#).is_err());
        assert!(parse_matrix(r#"{"B": [[0, 1], [-1, 0]], "rows": {"a": [1]}}"#).is_err());
        assert!(parse_matrix(r#"{"B": [[0, "1/2"], [-1, 0]]}"#).is_err());
    }

    #[test]
    fn relation_round_trip() {
        let rel = parse_relation(r#"{"coeffs": ["1/1", 1, "-1"], "vectors": [[1, 0], [-1, 1], [0, 1]]}"#).unwrap();
        assert_eq!(rel.vectors()[1], rvec(&[-1, 1]));
        assert_eq!(relation_from_json(&relation_to_json(&rel)).unwrap(), rel);
    }
}
