//! JSON serialization of algebra data.
//!
//! Schema: {"name", "dim", "basis": [label...], "field": {"kind": "Q"} |
//! {"kind": "cyclotomic", "n": N} | {"kind": "Fp", "p": P},
//! "unit"/"counit"/"ribbon": [scalar-string...] with one entry per basis
//! element, "mult"/"comult": [[i, j, k, scalar]...], "antipode"/"rmatrix":
//! [[i, j, scalar]...]. Indices are 0-based into the basis list and the
//! last index of every structure-constant row is the output leg; for the
//! antipode that means S(e_i) = sum_j s * e_j for rows [i, j, s]. Duplicate
//! index rows accumulate. serialize/parse round-trips are exact.

use crate::error::{EngineError, Result};
use crate::hopf::Hopf;
use crate::linalg::Mat;
use crate::scalar::{FieldDesc, Scalar};
use crate::tensor::Tensor;
use serde_json::{json, Map, Value};

fn field_to_json(f: FieldDesc) -> Value {
    match f {
        FieldDesc::Q => json!({"kind": "Q"}),
        FieldDesc::Cyc(n) => json!({"kind": "cyclotomic", "n": n}),
        FieldDesc::Fp(p) => json!({"kind": "Fp", "p": p}),
    }
}

fn field_from_json(v: &Value) -> Result<FieldDesc> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| EngineError::Input("field.kind missing".into()))?;
    match kind {
        "Q" => Ok(FieldDesc::Q),
        "cyclotomic" => {
            let n = v
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| EngineError::Input("cyclotomic field needs n".into()))?;
            if n == 0 {
                return Err(EngineError::Input("cyclotomic order must be positive".into()));
            }
            Ok(FieldDesc::Cyc(n as u32))
        }
        "Fp" => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| EngineError::Input("prime field needs p".into()))?;
            FieldDesc::parse(&format!("Fp:{}", p))
                .ok_or_else(|| EngineError::Input(format!("{} is not prime", p)))
        }
        other => Err(EngineError::Input(format!("unknown field kind {:?}", other))),
    }
}

fn vec_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.serialize())).collect())
}

fn vec_from_json(field: FieldDesc, v: &Value, dim: usize, what: &str) -> Result<Vec<Scalar>> {
    let arr = v
        .as_array()
        .ok_or_else(|| EngineError::Input(format!("{} must be an array", what)))?;
    if arr.len() != dim {
        return Err(EngineError::Input(format!(
            "{} has {} entries, expected {}",
            what,
            arr.len(),
            dim
        )));
    }
    arr.iter()
        .map(|s| {
            let st = s
                .as_str()
                .ok_or_else(|| EngineError::Input(format!("{} entries must be strings", what)))?;
            Scalar::parse(field, st).map_err(EngineError::Input)
        })
        .collect()
}

fn tensor_to_json(t: &Tensor) -> Value {
    let mut rows = Vec::new();
    for (idx, v) in t.iter() {
        let mut row: Vec<Value> = idx.iter().map(|&i| json!(i)).collect();
        row.push(Value::String(v.serialize()));
        rows.push(Value::Array(row));
    }
    Value::Array(rows)
}

fn tensor_from_json(field: FieldDesc, v: &Value, shape: Vec<usize>, what: &str) -> Result<Tensor> {
    let arr = v
        .as_array()
        .ok_or_else(|| EngineError::Input(format!("{} must be an array of rows", what)))?;
    let rank = shape.len();
    let mut t = Tensor::zeros(field, shape.clone());
    for row in arr {
        let row = row
            .as_array()
            .ok_or_else(|| EngineError::Input(format!("{} rows must be arrays", what)))?;
        if row.len() != rank + 1 {
            return Err(EngineError::Input(format!(
                "{} rows need {} indices plus a scalar",
                what, rank
            )));
        }
        let mut idx = Vec::with_capacity(rank);
        for (axis, iv) in row[..rank].iter().enumerate() {
            let i = iv
                .as_u64()
                .ok_or_else(|| EngineError::Input(format!("{} indices must be integers", what)))?
                as usize;
            if i >= shape[axis] {
                return Err(EngineError::Input(format!(
                    "{} index {} out of range (dim {})",
                    what, i, shape[axis]
                )));
            }
            idx.push(i);
        }
        let s = row[rank]
            .as_str()
            .ok_or_else(|| EngineError::Input(format!("{} scalar must be a string", what)))?;
        let c = Scalar::parse(field, s).map_err(EngineError::Input)?;
        t.add_at(&idx, &c);
    }
    Ok(t)
}

fn mat_to_json(m: &Mat) -> Value {
    // rows [i, j, s] meaning column i (input) maps to row j (output)
    let mut rows = Vec::new();
    for i in 0..m.cols {
        for j in 0..m.rows {
            let v = m.get(j, i);
            if !v.is_zero() {
                rows.push(json!([i, j, v.serialize()]));
            }
        }
    }
    Value::Array(rows)
}

fn mat_from_json(field: FieldDesc, v: &Value, dim: usize, what: &str) -> Result<Mat> {
    let t = tensor_from_json(field, v, vec![dim, dim], what)?;
    let mut m = Mat::zeros(field, dim, dim);
    for (idx, c) in t.iter() {
        m.set(idx[1], idx[0], c.clone()); // [in, out] row -> M[out][in]
    }
    Ok(m)
}

pub fn hopf_to_json(h: &Hopf) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), Value::String(h.name.clone()));
    obj.insert("dim".into(), json!(h.dim));
    obj.insert(
        "basis".into(),
        Value::Array(h.basis.iter().map(|l| Value::String(l.clone())).collect()),
    );
    obj.insert("field".into(), field_to_json(h.field));
    obj.insert("unit".into(), vec_to_json(&h.unit));
    obj.insert("counit".into(), vec_to_json(&h.counit));
    obj.insert("mult".into(), tensor_to_json(&h.mult));
    obj.insert("comult".into(), tensor_to_json(&h.comult));
    obj.insert("antipode".into(), mat_to_json(&h.antipode));
    if let Some(r) = &h.rmatrix {
        obj.insert("rmatrix".into(), tensor_to_json(r));
    }
    if let Some(v) = &h.ribbon {
        obj.insert("ribbon".into(), {
            let mut rows = Vec::new();
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    rows.push(json!([i, c.serialize()]));
                }
            }
            Value::Array(rows)
        });
    }
    Value::Object(obj)
}

pub fn hopf_from_json(v: &Value) -> Result<Hopf> {
    let obj = v
        .as_object()
        .ok_or_else(|| EngineError::Input("top level must be an object".into()))?;
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or("unnamed")
        .to_string();
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| EngineError::Input("dim missing".into()))? as usize;
    if dim == 0 {
        return Err(EngineError::Input("dim must be positive".into()));
    }
    let field = field_from_json(
        obj.get("field")
            .ok_or_else(|| EngineError::Input("field missing".into()))?,
    )?;
    let basis = match obj.get("basis") {
        Some(Value::Array(a)) => {
            if a.len() != dim {
                return Err(EngineError::Input("basis label count != dim".into()));
            }
            a.iter()
                .map(|l| {
                    l.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| EngineError::Input("basis labels must be strings".into()))
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => crate::hopf::default_labels(dim),
        Some(_) => return Err(EngineError::Input("basis must be an array".into())),
    };
    let unit = vec_from_json(
        field,
        obj.get("unit").ok_or_else(|| EngineError::Input("unit missing".into()))?,
        dim,
        "unit",
    )?;
    let counit = vec_from_json(
        field,
        obj.get("counit")
            .ok_or_else(|| EngineError::Input("counit missing".into()))?,
        dim,
        "counit",
    )?;
    let mult = tensor_from_json(
        field,
        obj.get("mult").ok_or_else(|| EngineError::Input("mult missing".into()))?,
        vec![dim, dim, dim],
        "mult",
    )?;
    let comult = tensor_from_json(
        field,
        obj.get("comult")
            .ok_or_else(|| EngineError::Input("comult missing".into()))?,
        vec![dim, dim, dim],
        "comult",
    )?;
    let antipode = mat_from_json(
        field,
        obj.get("antipode")
            .ok_or_else(|| EngineError::Input("antipode missing".into()))?,
        dim,
        "antipode",
    )?;
    let rmatrix = match obj.get("rmatrix") {
        Some(r) => Some(tensor_from_json(field, r, vec![dim, dim], "rmatrix")?),
        None => None,
    };
    let ribbon = match obj.get("ribbon") {
        Some(r) => {
            let arr = r
                .as_array()
                .ok_or_else(|| EngineError::Input("ribbon must be an array".into()))?;
            let mut v = vec![Scalar::zero(field); dim];
            for row in arr {
                let row = row
                    .as_array()
                    .ok_or_else(|| EngineError::Input("ribbon rows must be arrays".into()))?;
                if row.len() != 2 {
                    return Err(EngineError::Input("ribbon rows are [index, scalar]".into()));
                }
                let i = row[0]
                    .as_u64()
                    .ok_or_else(|| EngineError::Input("ribbon index must be an integer".into()))?
                    as usize;
                if i >= dim {
                    return Err(EngineError::Input(format!("ribbon index {} out of range", i)));
                }
                let s = row[1]
                    .as_str()
                    .ok_or_else(|| EngineError::Input("ribbon scalar must be a string".into()))?;
                v[i] = v[i].add(&Scalar::parse(field, s).map_err(EngineError::Input)?);
            }
            Some(v)
        }
        None => None,
    };
    Ok(Hopf {
        name,
        field,
        dim,
        basis,
        unit,
        counit,
        mult,
        comult,
        antipode,
        rmatrix,
        ribbon,
    })
}

/// Resolve a fixture argument: a bundled name first, then a filesystem path.
pub fn load_hopf(spec: &str) -> Result<Hopf> {
    if let Some(h) = crate::fixtures::by_name(spec) {
        return Ok(h);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| EngineError::Input(format!("cannot read {:?}: {}", spec, e)))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| EngineError::Input(format!("invalid JSON in {:?}: {}", spec, e)))?;
    hopf_from_json(&v)
}

pub fn hopf_to_string(h: &Hopf) -> String {
    let mut s = serde_json::to_string_pretty(&hopf_to_json(h)).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn roundtrip_all_fixtures() {
        for name in fixtures::BUNDLED {
            let h = fixtures::by_name(name).unwrap();
            let j = hopf_to_json(&h);
            let back = hopf_from_json(&j).unwrap();
            assert_eq!(back.name, h.name);
            assert_eq!(back.dim, h.dim);
            assert_eq!(back.basis, h.basis);
            assert_eq!(back.unit, h.unit);
            assert_eq!(back.counit, h.counit);
            assert_eq!(back.mult, h.mult);
            assert_eq!(back.comult, h.comult);
            assert_eq!(back.antipode, h.antipode);
            assert_eq!(back.rmatrix, h.rmatrix);
            assert_eq!(back.ribbon, h.ribbon);
            // serialized form is reproducible
            assert_eq!(hopf_to_string(&h), hopf_to_string(&back));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let h = fixtures::kz2();
        let mut j = hopf_to_json(&h);
        j["mult"][0][0] = serde_json::json!(99);
        assert!(hopf_from_json(&j).is_err());
        let mut j2 = hopf_to_json(&h);
        j2["unit"][0] = serde_json::json!("1/0");
        assert!(hopf_from_json(&j2).is_err());
        let mut j3 = hopf_to_json(&h);
        j3.as_object_mut().unwrap().remove("comult");
        assert!(hopf_from_json(&j3).is_err());
    }

    #[test]
    fn bundled_fixture_files_match_constructors() {
        // fixtures/ JSON files are generated from the constructors; this
        // test regenerates and compares, and writes them when absent so the
        // bundle can be (re)materialized by running the test suite
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        std::fs::create_dir_all(&dir).unwrap();
        for name in fixtures::BUNDLED {
            let h = fixtures::by_name(name).unwrap();
            let text = hopf_to_string(&h);
            let path = dir.join(format!("{}.json", name));
            if path.exists() {
                let on_disk = std::fs::read_to_string(&path).unwrap();
                assert_eq!(on_disk, text, "fixture file {} is stale", name);
            } else {
                std::fs::write(&path, &text).unwrap();
            }
        }
    }
}
