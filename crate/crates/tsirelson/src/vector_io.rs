//! Vector documents and inline vector expressions.
//!
//! A document looks like
//!
//! ```json
//! {"coeffs": {"1": [[[1, 0]]], "3": [[[0, 0], [0.5, -1]], [[0, 0], [0, 0]]]}}
//! ```
//!
//! Keys are decimal basis indices (from 1), each coefficient is a list of rows
//! and each entry a `[re, im]` pair. Coefficients of smaller shape are
//! zero-padded to the largest shape present.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use tsirelson_core::{CMatrix, OpVector};

/// Why a vector could not be read. Each variant has its own [`code`](VectorError::code).
#[derive(Debug, thiserror::Error)]
pub enum VectorError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document must be an object with a \"coeffs\" object")]
    Schema,
    #[error("index {0:?} is not a positive decimal integer")]
    Index(String),
    #[error("coefficient {index}: {detail}")]
    Entry { index: String, detail: String },
    #[error("coefficient {index}: rows have lengths {lengths:?}")]
    Ragged { index: String, lengths: Vec<usize> },
    #[error("the vector has empty support")]
    EmptySupport,
    #[error("inline expression {expr:?}: {detail}")]
    Inline { expr: String, detail: String },
}

impl VectorError {
    pub fn code(&self) -> &'static str {
        match self {
            VectorError::Json(_) => "E_JSON",
            VectorError::Schema => "E_SCHEMA",
            VectorError::Index(_) => "E_INDEX",
            VectorError::Entry { .. } => "E_ENTRY",
            VectorError::Ragged { .. } => "E_SHAPE",
            VectorError::EmptySupport => "E_EMPTY",
            VectorError::Inline { .. } => "E_INLINE",
        }
    }
}

fn parse_index(key: &str) -> Result<usize, VectorError> {
    if key.is_empty() || !key.bytes().all(|b| b.is_ascii_digit()) {
        return Err(VectorError::Index(key.to_string()));
    }
    match key.parse::<usize>() {
        Ok(i) if i > 0 => Ok(i),
        _ => Err(VectorError::Index(key.to_string())),
    }
}

fn parse_entry(v: &Value, index: &str) -> Result<Complex64, VectorError> {
    let bad = |detail: String| VectorError::Entry {
        index: index.to_string(),
        detail,
    };
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad(format!("entry {v} is not a [re, im] pair")))?;
    let num = |x: &Value| {
        x.as_f64()
            .filter(|f| f.is_finite())
            .ok_or_else(|| bad(format!("{x} is not a finite number")))
    };
    Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?))
}

fn parse_matrix(v: &Value, index: &str) -> Result<CMatrix, VectorError> {
    let bad = |detail: &str| VectorError::Entry {
        index: index.to_string(),
        detail: detail.to_string(),
    };
    let rows = v.as_array().ok_or_else(|| bad("a coefficient must be a list of rows"))?;
    if rows.is_empty() {
        return Err(bad("a coefficient needs at least one row"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| bad("each row must be a list of entries"))?;
        let row = row.iter().map(|e| parse_entry(e, index)).collect::<Result<Vec<_>, _>>()?;
        parsed.push(row);
    }
    let lengths: Vec<usize> = parsed.iter().map(Vec::len).collect();
    if lengths[0] == 0 || lengths.iter().any(|&l| l != lengths[0]) {
        return Err(VectorError::Ragged {
            index: index.to_string(),
            lengths,
        });
    }
    Ok(CMatrix::from_rows(&parsed).expect("rectangular finite data"))
}

/// Reads a vector from a parsed document.
pub fn vector_from_value(doc: &Value) -> Result<OpVector, VectorError> {
    let coeffs = doc
        .as_object()
        .and_then(|o| o.get("coeffs"))
        .and_then(Value::as_object)
        .ok_or(VectorError::Schema)?;
    let mut pairs = Vec::with_capacity(coeffs.len());
    for (key, m) in coeffs {
        pairs.push((parse_index(key)?, parse_matrix(m, key)?));
    }
    if pairs.is_empty() {
        return Err(VectorError::EmptySupport);
    }
    let x = OpVector::from_pairs(pairs).expect("indices and shapes validated");
    if x.is_zero() {
        return Err(VectorError::EmptySupport);
    }
    Ok(x)
}

/// Reads a vector from document text.
pub fn parse_vector(text: &str) -> Result<OpVector, VectorError> {
    vector_from_value(&serde_json::from_str(text)?)
}

/// The document of `x`; every coefficient is written at the full shape.
pub fn emit_vector(x: &OpVector) -> Value {
    let mut coeffs = Map::new();
    for (i, m) in x.iter() {
        let rows: Vec<Value> = (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| json!([m[(r, c)].re, m[(r, c)].im])).collect()))
            .collect();
        coeffs.insert(i.to_string(), Value::Array(rows));
    }
    json!({ "coeffs": coeffs })
}

/// Parses `t1+t2`, `0.5*t3 - 2*t4`, `1.5i*t2`: a signed sum of optionally
/// scaled basis vectors with scalar coefficients.
pub fn parse_inline(expr: &str) -> Result<OpVector, VectorError> {
    let fail = |detail: String| VectorError::Inline {
        expr: expr.to_string(),
        detail,
    };
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(fail("empty expression".to_string()));
    }
    // Split at + and - that start a term, keeping the sign.
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for k in 1..bytes.len() {
        let prev = bytes[k - 1];
        if (bytes[k] == b'+' || bytes[k] == b'-') && prev != b'e' && prev != b'E' && prev != b'*' {
            terms.push(&compact[start..k]);
            start = k;
        }
    }
    terms.push(&compact[start..]);

    let mut sum: BTreeMap<usize, Complex64> = BTreeMap::new();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'+') => (1.0, &term[1..]),
            Some(b'-') => (-1.0, &term[1..]),
            _ => (1.0, term),
        };
        let (coef, basis) = match body.rsplit_once('*') {
            Some((c, b)) => (parse_scalar(c).ok_or_else(|| fail(format!("bad coefficient {c:?}")))?, b),
            None => (Complex64::new(1.0, 0.0), body),
        };
        let index = basis
            .strip_prefix('t')
            .ok_or_else(|| fail(format!("term {term:?} must name a basis vector t<index>")))?;
        let index = parse_index(index).map_err(|_| fail(format!("bad index in {term:?}")))?;
        *sum.entry(index).or_insert(Complex64::new(0.0, 0.0)) += coef * sign;
    }
    let x = OpVector::from_scalars(sum).map_err(|e| fail(e.to_string()))?;
    if x.is_zero() {
        return Err(VectorError::EmptySupport);
    }
    Ok(x)
}

/// A real number, or an imaginary one with a trailing `i`.
fn parse_scalar(s: &str) -> Option<Complex64> {
    let (num, imaginary) = match s.strip_suffix('i') {
        Some(rest) => (rest, true),
        None => (s, false),
    };
    let v: f64 = if num.is_empty() && imaginary { 1.0 } else { num.parse().ok()? };
    if !v.is_finite() {
        return None;
    }
    Some(if imaginary { Complex64::new(0.0, v) } else { Complex64::new(v, 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_document() {
        let x = parse_vector(r#"{"coeffs": {"1": [[[1,0]]]}}"#).unwrap();
        assert_eq!(x.support(), vec![1]);
        assert!(x.is_scalar());
    }

    #[test]
    fn inline_terms() {
        let x = parse_inline("t1 + 0.5*t3 - 2i*t3").unwrap();
        assert_eq!(x.support(), vec![1, 3]);
        assert_eq!(x.get(3).unwrap()[(0, 0)], Complex64::new(0.5, -2.0));
        assert!(parse_inline("1e-1*t2").is_ok());
        assert!(parse_inline("t0").is_err());
        assert!(parse_inline("x1").is_err());
        assert_eq!(parse_inline("t1-t1").unwrap_err().code(), "E_EMPTY");
    }
}
