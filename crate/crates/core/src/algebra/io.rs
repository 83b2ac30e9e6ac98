//! JSON algebra files and textual elements.
//!
//! ```json
//! { "name": "H", "field": "real", "dim": 4, "basis": ["1", "i", "j", "k"],
//!   "unit": ["1", "0", "0", "0"], "table": [[1, 2, 3, "1"], ...] }
//! ```
//!
//! Values are strings or JSON numbers, read exactly (`"3/2"` allowed). For
//! complex algebras a value may also be a pair `[re, im]`. Optional keys:
//! `"involution"` (`[[row, col, value], ...]` on real algebras) and
//! `"profile"` (identity name to expected boolean).

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{Algebra, Element, Field, Profile};
use crate::error::{Error, ParseError, Result};
use crate::scalar::{Coef, Number};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::Algebra(msg.into()))
}

fn number(v: &Value) -> Result<Number> {
    match v {
        Value::String(s) => Ok(s.parse::<Number>()?),
        Value::Number(n) => Ok(n.to_string().parse::<Number>()?),
        other => Err(perr(format!("expected a number, got {other}"))),
    }
}

fn coef(v: &Value, field: Field) -> Result<Coef> {
    match (v, field) {
        (Value::Array(p), Field::Complex) if p.len() == 2 => Ok(Coef {
            re: number(&p[0])?,
            im: number(&p[1])?,
        }),
        (Value::Array(_), Field::Real) => Err(perr("complex value in a real algebra")),
        _ => Ok(Coef::real(number(v)?)),
    }
}

fn index(v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| perr(format!("expected a nonnegative index, got {v}")))
}

/// Parses an algebra definition, returning the declared profile if present.
pub fn parse_algebra_json(text: &str) -> Result<(Algebra, Option<Profile>)> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(ParseError::Json(e.to_string())))?;
    algebra_from_value(&v)
}

pub fn algebra_from_value(v: &Value) -> Result<(Algebra, Option<Profile>)> {
    let obj = v.as_object().ok_or_else(|| perr("top level must be an object"))?;
    let get = |k: &str| obj.get(k).ok_or_else(|| perr(format!("missing key `{k}`")));
    let name = get("name")?
        .as_str()
        .ok_or_else(|| perr("`name` must be a string"))?;
    let field = match get("field")?.as_str() {
        Some("real") => Field::Real,
        Some("complex") => Field::Complex,
        _ => return Err(perr("`field` must be \"real\" or \"complex\"")),
    };
    let dim = index(get("dim")?)?;
    let mut b = Algebra::builder(name, field, dim);
    if let Some(basis) = obj.get("basis") {
        let labels = basis
            .as_array()
            .ok_or_else(|| perr("`basis` must be an array"))?
            .iter()
            .map(|l| l.as_str().map(String::from).ok_or_else(|| perr("basis labels must be strings")))
            .collect::<Result<Vec<_>>>()?;
        b = b.labels(labels);
    }
    let unit = get("unit")?
        .as_array()
        .ok_or_else(|| perr("`unit` must be an array"))?
        .iter()
        .map(|x| coef(x, field))
        .collect::<Result<Vec<_>>>()?;
    for row in get("table")?
        .as_array()
        .ok_or_else(|| perr("`table` must be an array"))?
    {
        let r = row
            .as_array()
            .filter(|r| r.len() == 4)
            .ok_or_else(|| perr("table rows are [i, j, k, value]"))?;
        b.push_entry(index(&r[0])?, index(&r[1])?, index(&r[2])?, coef(&r[3], field)?);
    }
    if let Some(inv) = obj.get("involution") {
        let ents = inv
            .as_array()
            .ok_or_else(|| perr("`involution` must be an array"))?
            .iter()
            .map(|row| {
                let r = row
                    .as_array()
                    .filter(|r| r.len() == 3)
                    .ok_or_else(|| perr("involution rows are [row, col, value]"))?;
                Ok((index(&r[0])?, index(&r[1])?, number(&r[2])?))
            })
            .collect::<Result<Vec<_>>>()?;
        b = b.involution(ents);
    }
    let profile = match obj.get("profile") {
        None => None,
        Some(p) => {
            let m = p.as_object().ok_or_else(|| perr("`profile` must be an object"))?;
            let mut out = BTreeMap::new();
            for (k, v) in m {
                let flag = v
                    .as_bool()
                    .ok_or_else(|| perr(format!("profile entry `{k}` must be a boolean")))?;
                out.insert(k.clone(), flag);
            }
            Some(Profile(out))
        }
    };
    Ok((b.unit(unit).build()?, profile))
}

pub fn load_algebra(path: &Path) -> Result<(Algebra, Option<Profile>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_algebra_json(&text)
}

fn add_numbers(a: &Number, b: &Number) -> Number {
    match (a, b) {
        (Number::Exact(x), Number::Exact(y)) => Number::Exact(x + y),
        _ => Number::Float(a.to_f64() + b.to_f64()),
    }
}

fn number_value(n: &Number) -> Value {
    Value::String(n.to_string())
}

fn coef_value(c: &Coef, field: Field) -> Value {
    match field {
        Field::Real => number_value(&c.re),
        Field::Complex => json!([number_value(&c.re), number_value(&c.im)]),
    }
}

/// Canonical JSON: merged table entries in index order, values as strings.
pub fn algebra_to_value(a: &Algebra, profile: Option<&Profile>) -> Value {
    let mut merged: BTreeMap<(usize, usize, usize), Coef> = BTreeMap::new();
    for (i, j, k, c) in a.entries() {
        merged
            .entry((*i, *j, *k))
            .and_modify(|acc| {
                acc.re = add_numbers(&acc.re, &c.re);
                acc.im = add_numbers(&acc.im, &c.im);
            })
            .or_insert_with(|| c.clone());
    }
    let table: Vec<Value> = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((i, j, k), c)| json!([i, j, k, coef_value(&c, a.field())]))
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("name".into(), json!(a.name()));
    obj.insert("field".into(), json!(a.field().to_string()));
    obj.insert("dim".into(), json!(a.dim()));
    obj.insert("basis".into(), json!(a.labels()));
    obj.insert(
        "unit".into(),
        Value::Array(a.unit_base().iter().map(|c| coef_value(c, a.field())).collect()),
    );
    obj.insert("table".into(), Value::Array(table));
    if let Some(inv) = a.involution() {
        let mut rows = Vec::new();
        for col in 0..a.real_dim() {
            match &inv.exact {
                Some(s) => {
                    for (row, v) in s.column(col) {
                        rows.push(json!([row, col, number_value(&Number::Exact(v.clone()))]));
                    }
                }
                None => {
                    for (row, v) in inv.num.column(col) {
                        rows.push(json!([row, col, number_value(&Number::Float(*v))]));
                    }
                }
            }
        }
        obj.insert("involution".into(), Value::Array(rows));
    }
    if let Some(p) = profile {
        obj.insert("profile".into(), json!(p.0));
    }
    Value::Object(obj)
}

/// Element as JSON: real coordinates, or `[re, im]` pairs for complex algebras.
pub fn element_to_value(e: &Element) -> Value {
    match e.algebra().field() {
        Field::Real => json!(e.coords()),
        Field::Complex => Value::Array(
            e.base_coords()
                .into_iter()
                .map(|c| json!([c.re, c.im]))
                .collect(),
        ),
    }
}

pub fn element_from_value(a: &Algebra, v: &Value) -> Result<Element> {
    let bad = |why: &str| {
        Error::Parse(ParseError::Element {
            text: v.to_string(),
            reason: why.into(),
        })
    };
    let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
    let as_f = |x: &Value| -> Result<f64> {
        match x {
            Value::Number(n) => n.as_f64().ok_or_else(|| bad("not a number")),
            Value::String(s) => s
                .parse::<Number>()
                .map(|n| n.to_f64())
                .map_err(|_| bad("not a number")),
            _ => Err(bad("not a number")),
        }
    };
    let coords = arr
        .iter()
        .map(|x| match x {
            Value::Array(p) if p.len() == 2 => Ok(Complex64::new(as_f(&p[0])?, as_f(&p[1])?)),
            _ => Ok(Complex64::new(as_f(x)?, 0.0)),
        })
        .collect::<Result<Vec<_>>>()?;
    if coords.len() == a.real_dim() && a.field() == Field::Complex {
        return a.element(coords.iter().map(|c| c.re).collect());
    }
    a.element_from_base(&coords)
}

/// Parses an element: a comma-separated coordinate list (base or realified
/// length), or a signed sum of labelled terms such as `1 + e1`, `-j`,
/// `0.5*i*E12`. A bare number is a multiple of the unit.
pub fn parse_element(a: &Algebra, text: &str) -> Result<Element> {
    let t = text.trim();
    let bad = |why: String| {
        Error::Parse(ParseError::Element {
            text: text.to_string(),
            reason: why,
        })
    };
    if t.contains(',') {
        let vals = t
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']'])
            .split(',')
            .map(|s| s.trim().parse::<Number>().map(|n| n.to_f64()))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?;
        if vals.len() == a.real_dim() {
            return a.element(vals);
        }
        if vals.len() == a.dim() {
            let c: Vec<Complex64> = vals.iter().map(|x| Complex64::new(*x, 0.0)).collect();
            return a.element_from_base(&c);
        }
        return Err(bad(format!(
            "{} coordinates; expected {} or {}",
            vals.len(),
            a.dim(),
            a.real_dim()
        )));
    }
    let labels = a.real_labels();
    let mut coords = vec![0.0; a.real_dim()];
    let mut rest = t.replace(' ', "");
    if rest.is_empty() {
        return Err(bad("empty element".into()));
    }
    if !rest.starts_with(['+', '-']) {
        rest.insert(0, '+');
    }
    // Split on top-level signs, keeping exponents like 1e-3 intact.
    let bytes = rest.as_bytes();
    let mut starts = vec![0];
    for p in 1..bytes.len() {
        let prev = bytes[p - 1];
        let exp = (prev == b'e' || prev == b'E')
            && p >= 2
            && bytes[p - 2].is_ascii_digit()
            && rest[..p - 1]
                .rfind(|c: char| !(c.is_ascii_digit() || c == '.'))
                .map_or(true, |q| matches!(bytes[q], b'+' | b'-' | b'*'));
        if (bytes[p] == b'+' || bytes[p] == b'-') && prev != b'*' && !exp {
            starts.push(p);
        }
    }
    starts.push(bytes.len());
    for w in starts.windows(2) {
        let term = &rest[w[0]..w[1]];
        let (sign, body) = (if term.starts_with('-') { -1.0 } else { 1.0 }, &term[1..]);
        if body.is_empty() {
            return Err(bad("dangling sign".into()));
        }
        let (coef, label) = match body.split_once('*') {
            Some((c, l)) if c.parse::<Number>().is_ok() => (c.parse::<Number>().unwrap().to_f64(), l),
            _ => match body.parse::<Number>() {
                Ok(n) => {
                    for (x, u) in coords.iter_mut().zip(a.unit_coords()) {
                        *x += sign * n.to_f64() * u;
                    }
                    continue;
                }
                Err(_) => (1.0, body),
            },
        };
        let idx = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| bad(format!("unknown basis label `{label}`")))?;
        coords[idx] += sign * coef;
    }
    a.element(coords)
}
