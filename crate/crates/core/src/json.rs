//! JSON formats shared by the library and the command line.
//!
//! Rationals are written as strings `"n/d"` (or `"n"`), prime-field elements
//! as integers in `[0, p)`, matrices as arrays of rows. On input, rationals
//! may also be given as JSON integers and prime-field elements as strings.

use serde_json::{json, Map, Value};

use crate::adhm::{Monomial, QuotDatum, RawDatum};
use crate::deform::ConnectCertificate;
use crate::error::{Error, Result};
use crate::jordan::JordanFrame;
use crate::linalg::{FieldSpec, Matrix, Scalar, Vector};
use crate::modbridge::{SubmodulePresentation, TruncatedFreeModule};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn field_to_json(field: FieldSpec) -> Value {
    match field {
        FieldSpec::Rational => json!({ "kind": "rational" }),
        FieldSpec::Prime(p) => json!({ "kind": "prime", "p": p }),
    }
}

pub fn field_from_json(v: &Value) -> Result<FieldSpec> {
    match v.get("kind").and_then(Value::as_str) {
        Some("rational") => Ok(FieldSpec::Rational),
        Some("prime") => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| parse_err("prime field needs an integer \"p\""))?;
            FieldSpec::prime(p)
        }
        _ => Err(parse_err(
            "field must be {\"kind\":\"rational\"} or {\"kind\":\"prime\",\"p\":...}",
        )),
    }
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    match x {
        Scalar::Rational(_) => Value::String(x.to_text()),
        Scalar::Prime { value, .. } => json!(value),
    }
}

pub fn scalar_from_json(field: FieldSpec, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => field.parse(&n.to_string()),
        _ => Err(parse_err(format!("expected a scalar, found {v}"))),
    }
}

pub fn vector_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn vector_from_json(field: FieldSpec, v: &Value) -> Result<Vector> {
    v.as_array()
        .ok_or_else(|| parse_err("expected an array of scalars"))?
        .iter()
        .map(|x| scalar_from_json(field, x))
        .collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(m.row(i))).collect())
}

fn rows_from_json(field: FieldSpec, v: &Value) -> Result<Vec<Vector>> {
    v.as_array()
        .ok_or_else(|| parse_err("expected an array of rows"))?
        .iter()
        .map(|row| vector_from_json(field, row))
        .collect()
}

pub fn matrix_from_json(field: FieldSpec, v: &Value) -> Result<Matrix> {
    Matrix::from_rows(field, rows_from_json(field, v)?)
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("missing non-negative integer \"{key}\"")))
}

/// `{"field", "d", "r", "B1", "B2", "vectors"}`; shapes are checked later by
/// [`crate::adhm::validate`].
pub fn datum_from_json(v: &Value) -> Result<RawDatum> {
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| parse_err("missing \"field\""))?,
    )?;
    let get = |key: &str| {
        v.get(key)
            .ok_or_else(|| parse_err(format!("missing \"{key}\"")))
    };
    Ok(RawDatum {
        field,
        d: usize_field(v, "d")?,
        r: usize_field(v, "r")?,
        b1: rows_from_json(field, get("B1")?)?,
        b2: rows_from_json(field, get("B2")?)?,
        vectors: rows_from_json(field, get("vectors")?)?,
    })
}

pub fn datum_to_json(x: &QuotDatum) -> Value {
    json!({
        "field": field_to_json(x.field()),
        "d": x.d(),
        "r": x.r(),
        "B1": matrix_to_json(x.b1()),
        "B2": matrix_to_json(x.b2()),
        "vectors": Value::Array(x.vectors().iter().map(|v| vector_to_json(v)).collect()),
    })
}

/// `{"mu": [...], "basis": [...]}` with basis columns in level order.
pub fn frame_to_json(frame: &JordanFrame) -> Value {
    json!({
        "mu": frame.mu(),
        "basis": Value::Array(frame.basis().iter().map(|v| vector_to_json(v)).collect()),
    })
}

pub fn certificate_to_json(cert: &ConnectCertificate) -> Value {
    json!({
        "witness_t": cert.witness_t.to_text(),
        "samples": cert.samples.iter().map(|s| json!({
            "t": s.t.to_text(),
            "class": s.class,
        })).collect::<Vec<_>>(),
        "failures": cert.failures,
        "bound": cert.bound,
    })
}

fn monomial_key(m: &Monomial) -> String {
    format!("{},{},{}", m.x, m.y, m.generator + 1)
}

fn monomial_from_key(key: &str) -> Result<Monomial> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    let bad = || parse_err(format!("monomial key {key:?} is not \"a,b,j\""));
    let [a, b, j] = parts.as_slice() else {
        return Err(bad());
    };
    let j: usize = j.parse().map_err(|_| bad())?;
    if j == 0 {
        return Err(parse_err(format!("generator index in {key:?} starts at 1")));
    }
    Ok(Monomial {
        x: a.parse().map_err(|_| bad())?,
        y: b.parse().map_err(|_| bad())?,
        generator: j - 1,
    })
}

/// `{"field", "r", "d", "generators": [{"monomial_coeffs": {"a,b,j": scalar}}]}`.
pub fn presentation_to_json(pres: &SubmodulePresentation) -> Value {
    let module = &pres.module;
    let generators: Vec<Value> = pres
        .generators
        .iter()
        .map(|g| {
            let coeffs: Map<String, Value> = module
                .monomials()
                .iter()
                .zip(g)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (monomial_key(m), Value::String(c.to_text())))
                .collect();
            json!({ "monomial_coeffs": coeffs })
        })
        .collect();
    json!({
        "field": field_to_json(module.field()),
        "r": module.r(),
        "d": module.d(),
        "generators": generators,
    })
}

/// Reads a presentation's module and generator vectors. The field defaults
/// to the rationals when absent.
pub fn presentation_from_json(v: &Value) -> Result<(TruncatedFreeModule, Vec<Vector>)> {
    let field = match v.get("field") {
        Some(f) => field_from_json(f)?,
        None => FieldSpec::Rational,
    };
    let module = TruncatedFreeModule::new(field, usize_field(v, "r")?, usize_field(v, "d")?);
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"generators\" array"))?;
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        let coeffs = g
            .get("monomial_coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| parse_err("generator needs a \"monomial_coeffs\" object"))?;
        let mut vector = vec![field.zero(); module.dim()];
        for (key, c) in coeffs {
            let m = monomial_from_key(key)?;
            let idx = match module.index_of(&m) {
                Some(i) => i,
                // monomials of degree >= d vanish in the truncation
                None if m.generator < module.r() && m.degree() >= module.d() => continue,
                None => return Err(parse_err(format!("monomial {key:?} is outside the module"))),
            };
            vector[idx] = &vector[idx] + &scalar_from_json(field, c)?;
        }
        out.push(vector);
    }
    Ok((module, out))
}
