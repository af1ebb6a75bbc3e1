//! JSON forms of elements and matrices.
//!
//! An element is `{n, terms: [{mu, nu, coeff: {a_re, a_im, b_re, b_im}}]}`
//! with each coefficient part written `"p/q"`; a symbolic matrix is
//! `{dim, entries}` with row-major element entries (or expression strings on
//! input); a numeric matrix is `{dim, entries}` with `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::scalar::{fraction_string, parse_fraction};
use crate::algebra::{CuntzAlgebra, CuntzElement, ExactScalar};
use crate::dsl::eval_str;
use crate::error::{Error, Result};
use crate::iso::CuntzMatrix;
use crate::matalg::StarMatrix;
use crate::numeric::{complex_matrix, values, ComplexMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub a_re: String,
    pub a_im: String,
    pub b_re: String,
    pub b_im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub mu: Vec<u8>,
    pub nu: Vec<u8>,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub n: u8,
    pub terms: Vec<TermJson>,
}

pub fn coeff_to_json(c: &ExactScalar) -> CoeffJson {
    let [a_re, a_im, b_re, b_im] = c.parts().map(fraction_string);
    CoeffJson {
        a_re,
        a_im,
        b_re,
        b_im,
    }
}

pub fn coeff_from_json(c: &CoeffJson) -> Result<ExactScalar> {
    Ok(ExactScalar::from_parts([
        parse_fraction(&c.a_re)?,
        parse_fraction(&c.a_im)?,
        parse_fraction(&c.b_re)?,
        parse_fraction(&c.b_im)?,
    ]))
}

pub fn element_json(x: &CuntzElement) -> ElementJson {
    ElementJson {
        n: x.n(),
        terms: x
            .terms()
            .map(|(mu, nu, c)| TermJson {
                mu: mu.letters().to_vec(),
                nu: nu.letters().to_vec(),
                coeff: coeff_to_json(c),
            })
            .collect(),
    }
}

pub fn element_to_value(x: &CuntzElement) -> Value {
    serde_json::to_value(element_json(x)).expect("element JSON is always serializable")
}

pub fn element_from_json(e: &ElementJson, budget: usize) -> Result<CuntzElement> {
    let alg = CuntzAlgebra::new(e.n as usize)?.with_budget(budget);
    let terms = e
        .terms
        .iter()
        .map(|t| Ok((t.mu.clone(), t.nu.clone(), coeff_from_json(&t.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    alg.from_terms(terms)
}

/// An element from either its JSON object or an expression string.
pub fn element_from_value(v: &Value, alg: CuntzAlgebra) -> Result<CuntzElement> {
    match v {
        Value::String(s) => eval_str(s, alg),
        other => {
            let e: ElementJson =
                serde_json::from_value(other.clone()).map_err(|e| Error::Format(e.to_string()))?;
            if e.n != alg.n() {
                return Err(Error::AlphabetMismatch {
                    left: alg.n(),
                    right: e.n,
                });
            }
            element_from_json(&e, alg.budget())
        }
    }
}

pub fn matrix_to_value(m: &CuntzMatrix) -> Value {
    json!({
        "dim": m.dim(),
        "entries": m.entries().iter().map(element_to_value).collect::<Vec<_>>(),
    })
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| Error::Format(format!("missing field {name:?}")))
}

fn dim_of(v: &Value) -> Result<usize> {
    field(v, "dim")?
        .as_u64()
        .map(|d| d as usize)
        .ok_or_else(|| Error::Format("dim must be a non-negative integer".into()))
}

fn entries_of(v: &Value) -> Result<&Vec<Value>> {
    field(v, "entries")?
        .as_array()
        .ok_or_else(|| Error::Format("entries must be an array".into()))
}

pub fn matrix_from_value(v: &Value, alg: CuntzAlgebra) -> Result<CuntzMatrix> {
    let dim = dim_of(v)?;
    let entries = entries_of(v)?
        .iter()
        .map(|e| element_from_value(e, alg))
        .collect::<Result<Vec<_>>>()?;
    if entries.is_empty() {
        return Err(Error::Format("matrix has no entries".into()));
    }
    StarMatrix::from_entries(dim, entries)
}

pub fn numeric_to_value(m: &ComplexMatrix) -> Value {
    json!({
        "dim": m.dim(),
        "entries": values(m).iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
    })
}

fn complex_from_value(v: &Value) -> Result<Complex64> {
    let num = |x: &Value| {
        x.as_f64()
            .ok_or_else(|| Error::Format(format!("not a number: {x}")))
    };
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?)),
        Value::Number(_) => Ok(Complex64::new(num(v)?, 0.0)),
        other => Err(Error::Format(format!("expected [re, im], found {other}"))),
    }
}

pub fn numeric_from_value(v: &Value, tol: f64) -> Result<ComplexMatrix> {
    let dim = dim_of(v)?;
    let entries = entries_of(v)?
        .iter()
        .map(complex_from_value)
        .collect::<Result<Vec<_>>>()?;
    complex_matrix(dim, &entries, tol)
}
