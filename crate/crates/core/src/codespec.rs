//! JSON code-spec files, pair documents and report serialization.
//!
//! Conventions, shared by every document:
//!
//! - field spec: `{"q": 2, "k": 3, "poly": [1, 1, 0, 1]}` (ascending monic
//!   coefficients; `poly` may be omitted over GF(2) for k <= 16, where the
//!   built-in default applies);
//! - vectors over GF(q): digit strings like `"0110101"` when q <= 10,
//!   integer arrays otherwise; matrices are arrays of such rows;
//! - extension-field elements: `"z"` for zero, `"<i>e"` for alpha^i, e.g.
//!   `"0e"`, `"5e"`;
//! - a spec with an `"outer"` object describes a concatenated pair; without
//!   one it describes a single conjugate pair.
//!
//! Inner codes may be spelled as explicit matrices (`{"G": ...}` or
//! `{"H": ...}`) or as the named presets `hamming7`, `even7`, `trivial:n`.
//! Validation failures carry the JSON path they were found at.

use crate::codes::{GrsCode, LinearCode};
use crate::concat::ConcatenatedPair;
use crate::conjugate::ConjugateCodePair;
use crate::decoder::DecodeReport;
use crate::galois::{Ext, FieldTower};
use serde_json::{json, Map, Value};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl SpecError {
    fn at(path: impl Into<String>, message: impl ToString) -> SpecError {
        SpecError::Invalid { path: path.into(), message: message.to_string() }
    }
}

/// A parsed code-spec document.
#[derive(Debug)]
pub enum CodeSpec {
    Concatenated(Box<ConcatenatedPair>),
    Single { tower: Arc<FieldTower>, pair: Box<ConjugateCodePair> },
}

// ---- scalar and vector conversions ----

pub fn ext_to_string(tower: &FieldTower, x: Ext) -> String {
    match tower.log(x) {
        None => "z".to_string(),
        Some(i) => format!("{i}e"),
    }
}

pub fn ext_from_str(tower: &FieldTower, s: &str) -> Result<Ext, String> {
    if s == "z" {
        return Ok(Ext::ZERO);
    }
    let digits = s.strip_suffix('e').ok_or_else(|| format!("bad element {s:?}"))?;
    let i: u32 = digits.parse().map_err(|_| format!("bad exponent {s:?}"))?;
    Ok(tower.exp(i))
}

pub fn vec_to_value(q: u32, v: &[u32]) -> Value {
    if q <= 10 {
        Value::String(v.iter().map(|&d| char::from_digit(d, 10).unwrap()).collect())
    } else {
        Value::Array(v.iter().map(|&d| Value::from(d)).collect())
    }
}

pub fn vec_from_value(q: u32, value: &Value, path: &str) -> Result<Vec<u32>, SpecError> {
    let out: Vec<u32> = match value {
        Value::String(s) => s
            .chars()
            .map(|c| c.to_digit(10).ok_or_else(|| SpecError::at(path, "non-digit character")))
            .collect::<Result<_, _>>()?,
        Value::Array(items) => items
            .iter()
            .map(|item| {
                item.as_u64()
                    .map(|x| x as u32)
                    .ok_or_else(|| SpecError::at(path, "expected an integer"))
            })
            .collect::<Result<_, _>>()?,
        _ => return Err(SpecError::at(path, "expected a digit string or integer array")),
    };
    if let Some(bad) = out.iter().find(|&&d| d >= q) {
        return Err(SpecError::at(path, format!("digit {bad} out of range for GF({q})")));
    }
    Ok(out)
}

pub fn matrix_to_value(q: u32, rows: &[Vec<u32>]) -> Value {
    Value::Array(rows.iter().map(|r| vec_to_value(q, r)).collect())
}

pub fn matrix_from_value(q: u32, value: &Value, path: &str) -> Result<Vec<Vec<u32>>, SpecError> {
    let arr = value
        .as_array()
        .ok_or_else(|| SpecError::at(path, "expected an array of rows"))?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| vec_from_value(q, row, &format!("{path}[{i}]")))
        .collect()
}

pub fn ext_vec_to_value(tower: &FieldTower, v: &[Ext]) -> Value {
    Value::Array(v.iter().map(|&x| Value::String(ext_to_string(tower, x))).collect())
}

pub fn ext_vec_from_value(
    tower: &FieldTower,
    value: &Value,
    path: &str,
) -> Result<Vec<Ext>, SpecError> {
    let arr = value
        .as_array()
        .ok_or_else(|| SpecError::at(path, "expected an array of field elements"))?;
    arr.iter()
        .enumerate()
        .map(|(i, item)| {
            let s = item
                .as_str()
                .ok_or_else(|| SpecError::at(format!("{path}[{i}]"), "expected a string"))?;
            ext_from_str(tower, s).map_err(|m| SpecError::at(format!("{path}[{i}]"), m))
        })
        .collect()
}

// ---- field spec ----

pub fn field_to_value(tower: &FieldTower) -> Value {
    json!({ "q": tower.q(), "k": tower.k(), "poly": tower.modulus() })
}

pub fn field_from_value(value: &Value, path: &str) -> Result<Arc<FieldTower>, SpecError> {
    let obj = value
        .as_object()
        .ok_or_else(|| SpecError::at(path, "expected a field object"))?;
    let q = obj
        .get("q")
        .and_then(Value::as_u64)
        .ok_or_else(|| SpecError::at(format!("{path}.q"), "missing or non-integer"))?
        as u32;
    let k = obj
        .get("k")
        .and_then(Value::as_u64)
        .ok_or_else(|| SpecError::at(format!("{path}.k"), "missing or non-integer"))?
        as usize;
    let tower = match obj.get("poly") {
        Some(poly_val) => {
            let poly: Vec<u32> = poly_val
                .as_array()
                .ok_or_else(|| SpecError::at(format!("{path}.poly"), "expected an array"))?
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|x| x as u32)
                        .ok_or_else(|| SpecError::at(format!("{path}.poly"), "expected integers"))
                })
                .collect::<Result<_, _>>()?;
            FieldTower::new(q, k, &poly)
        }
        None if q == 2 => FieldTower::gf2_default(k),
        None => {
            return Err(SpecError::at(
                format!("{path}.poly"),
                "required unless q = 2 with k <= 16",
            ))
        }
    }
    .map_err(|e| SpecError::at(path.to_string(), e))?;
    Ok(Arc::new(tower))
}

// ---- linear codes and presets ----

fn hamming7() -> LinearCode {
    LinearCode::from_parity_check(
        2,
        &[
            vec![0, 0, 0, 1, 1, 1, 1],
            vec![0, 1, 1, 0, 0, 1, 1],
            vec![1, 0, 1, 0, 1, 0, 1],
        ],
    )
}

fn even7() -> LinearCode {
    LinearCode::from_parity_check(2, &[vec![1; 7]])
}

/// A code from a preset name or explicit matrices.
pub fn code_from_value(q: u32, value: &Value, path: &str) -> Result<LinearCode, SpecError> {
    match value {
        Value::String(name) => match name.as_str() {
            "hamming7" if q == 2 => Ok(hamming7()),
            "even7" if q == 2 => Ok(even7()),
            other => {
                if let Some(n) = other.strip_prefix("trivial:") {
                    let n: usize = n
                        .parse()
                        .map_err(|_| SpecError::at(path, format!("bad preset {other:?}")))?;
                    Ok(LinearCode::full_space(q, n))
                } else {
                    Err(SpecError::at(path, format!("unknown preset {other:?} over GF({q})")))
                }
            }
        },
        Value::Object(obj) => {
            if let Some(g) = obj.get("G") {
                let rows = matrix_from_value(q, g, &format!("{path}.G"))?;
                Ok(LinearCode::from_generator(q, &rows))
            } else if let Some(h) = obj.get("H") {
                let rows = matrix_from_value(q, h, &format!("{path}.H"))?;
                Ok(LinearCode::from_parity_check(q, &rows))
            } else {
                Err(SpecError::at(path, "expected a \"G\" or \"H\" matrix"))
            }
        }
        _ => Err(SpecError::at(path, "expected a preset name or a matrix object")),
    }
}

fn pair_from_object(q: u32, obj: &Map<String, Value>, path: &str) -> Result<ConjugateCodePair, SpecError> {
    let c1 = match (obj.get("C1"), obj.get("C1_G")) {
        (Some(v), _) => code_from_value(q, v, &format!("{path}.C1"))?,
        (None, Some(g)) => LinearCode::from_generator(
            q,
            &matrix_from_value(q, g, &format!("{path}.C1_G"))?,
        ),
        (None, None) => return Err(SpecError::at(path, "missing \"C1\"")),
    };
    let c2 = match (obj.get("C2"), obj.get("C2_G")) {
        (Some(v), _) => code_from_value(q, v, &format!("{path}.C2"))?,
        (None, Some(g)) => LinearCode::from_generator(
            q,
            &matrix_from_value(q, g, &format!("{path}.C2_G"))?,
        ),
        (None, None) => return Err(SpecError::at(path, "missing \"C2\"")),
    };
    match (obj.get("g"), obj.get("g_dual")) {
        (Some(g), Some(gd)) => {
            let gens = matrix_from_value(q, g, &format!("{path}.g"))?;
            let dual_gens = matrix_from_value(q, gd, &format!("{path}.g_dual"))?;
            ConjugateCodePair::with_generators(c1, c2, gens, dual_gens)
                .map_err(|e| SpecError::at(path, e))
        }
        (None, None) => ConjugateCodePair::new(c1, c2).map_err(|e| SpecError::at(path, e)),
        _ => Err(SpecError::at(path, "\"g\" and \"g_dual\" must be given together")),
    }
}

pub fn pair_to_value(pair: &ConjugateCodePair) -> Value {
    let q = pair.q();
    json!({
        "C1_G": matrix_to_value(q, &pair.c1().gen().row_vecs()),
        "C2_G": matrix_to_value(q, &pair.c2().gen().row_vecs()),
        "g": matrix_to_value(q, pair.gens()),
        "g_dual": matrix_to_value(q, pair.dual_gens()),
    })
}

// ---- whole documents ----

/// Parse a code-spec document (concatenated when an `"outer"` is present).
pub fn parse_spec(text: &str) -> Result<CodeSpec, SpecError> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| SpecError::at("$", "expected a JSON object"))?;
    let tower = field_from_value(
        obj.get("field").ok_or_else(|| SpecError::at("$.field", "missing"))?,
        "$.field",
    )?;
    if obj.contains_key("outer") {
        parse_concatenated(tower, obj).map(|cp| CodeSpec::Concatenated(Box::new(cp)))
    } else {
        let pair = pair_from_object(tower.q(), obj, "$")?;
        Ok(CodeSpec::Single { tower, pair: Box::new(pair) })
    }
}

fn parse_concatenated(
    tower: Arc<FieldTower>,
    obj: &Map<String, Value>,
) -> Result<ConcatenatedPair, SpecError> {
    let inners_val = obj
        .get("inners")
        .and_then(Value::as_array)
        .ok_or_else(|| SpecError::at("$.inners", "expected an array"))?;
    let mut inners = Vec::new();
    for (i, entry) in inners_val.iter().enumerate() {
        let path = format!("$.inners[{i}]");
        let entry_obj = entry
            .as_object()
            .ok_or_else(|| SpecError::at(&path, "expected an object"))?;
        let count = match entry_obj.get("count") {
            None => 1,
            Some(c) => c
                .as_u64()
                .filter(|&c| c >= 1)
                .ok_or_else(|| SpecError::at(format!("{path}.count"), "expected a positive integer"))?
                as usize,
        };
        let pair = pair_from_object(tower.q(), entry_obj, &path)?;
        inners.extend(std::iter::repeat_n(pair, count));
    }

    let outer = obj
        .get("outer")
        .and_then(Value::as_object)
        .ok_or_else(|| SpecError::at("$.outer", "expected an object"))?;
    let points = ext_vec_from_value(
        &tower,
        outer.get("a").ok_or_else(|| SpecError::at("$.outer.a", "missing"))?,
        "$.outer.a",
    )?;
    let n = points.len();
    let mults = match outer.get("v") {
        Some(v) => ext_vec_from_value(&tower, v, "$.outer.v")?,
        None => vec![Ext::ONE; n],
    };
    let k1 = outer
        .get("K1")
        .and_then(Value::as_u64)
        .ok_or_else(|| SpecError::at("$.outer.K1", "missing or non-integer"))? as usize;
    let k2 = outer
        .get("K2")
        .and_then(Value::as_u64)
        .ok_or_else(|| SpecError::at("$.outer.K2", "missing or non-integer"))? as usize;
    let d1 = GrsCode::new(tower.clone(), n, k1, points.clone(), mults)
        .map_err(|e| SpecError::at("$.outer", e))?;
    let mults2 = match outer.get("v2") {
        Some(v) => ext_vec_from_value(&tower, v, "$.outer.v2")?,
        // Dual-multiplier recipe: guarantees the outer CSS condition by
        // nesting whenever K2 >= N - K1.
        None => d1.dual_mults().to_vec(),
    };
    let d2 = GrsCode::new(tower.clone(), n, k2, points, mults2)
        .map_err(|e| SpecError::at("$.outer", e))?;

    let basis = match (obj.get("basis"), obj.get("lambda")) {
        (Some(b), None) => Some(ext_vec_from_value(&tower, b, "$.basis")?),
        // Change-of-basis matrix: column i holds the power-basis coordinates
        // of the i-th basis element.
        (None, Some(l)) => {
            let rows = matrix_from_value(tower.q(), l, "$.lambda")?;
            if rows.len() != tower.k() || rows.iter().any(|r| r.len() != tower.k()) {
                return Err(SpecError::at(
                    "$.lambda",
                    format!("expected a {k} x {k} matrix", k = tower.k()),
                ));
            }
            let basis = (0..tower.k())
                .map(|i| {
                    let col: Vec<u32> = rows.iter().map(|r| r[i]).collect();
                    tower.from_coords(&col)
                })
                .collect();
            Some(basis)
        }
        (None, None) => None,
        (Some(_), Some(_)) => {
            return Err(SpecError::at("$", "give \"basis\" or \"lambda\", not both"))
        }
    };

    let cp = ConcatenatedPair::new(tower, inners, d1, d2, basis)
        .map_err(|e| SpecError::at("$", e))?;

    // When the document carries the assembled matrices, they must match the
    // rebuilt ones bit for bit.
    for (key, built) in
        [("H_L1", cp.parity_check_l1()), ("H_L2", cp.parity_check_l2())]
    {
        if let Some(given) = obj.get(key) {
            let rows = matrix_from_value(cp.tower().q(), given, &format!("$.{key}"))?;
            if rows != built.row_vecs() {
                return Err(SpecError::at(
                    format!("$.{key}"),
                    "stored parity-check matrix disagrees with the rebuilt one",
                ));
            }
        }
    }
    Ok(cp)
}

/// Serialize a concatenated pair; `with_matrices` includes both assembled
/// block parity-check matrices.
pub fn concat_to_value(cp: &ConcatenatedPair, with_matrices: bool) -> Value {
    let tower = cp.tower();
    let q = tower.q();
    let inners: Vec<Value> = cp
        .inners()
        .iter()
        .map(|p| {
            let mut v = pair_to_value(p);
            let obj = v.as_object_mut().unwrap();
            obj.insert("count".into(), json!(1));
            v
        })
        .collect();
    let mut doc = json!({
        "field": field_to_value(tower),
        "inners": inners,
        "outer": {
            "a": ext_vec_to_value(tower, cp.outer1().points()),
            "v": ext_vec_to_value(tower, cp.outer1().mults()),
            "v2": ext_vec_to_value(tower, cp.outer2().mults()),
            "K1": cp.outer1().k(),
            "K2": cp.outer2().k(),
        },
        "basis": ext_vec_to_value(tower, cp.bases().basis()),
        "params": {
            "n": cp.n_total(),
            "k": cp.k_total(),
            "blocks": cp.n_blocks(),
        },
    });
    if with_matrices {
        let obj = doc.as_object_mut().unwrap();
        obj.insert("H_L1".into(), matrix_to_value(q, &cp.parity_check_l1().row_vecs()));
        obj.insert("H_L2".into(), matrix_to_value(q, &cp.parity_check_l2().row_vecs()));
    }
    doc
}

pub fn report_to_value(tower: &FieldTower, report: &DecodeReport) -> Value {
    let q = tower.q();
    json!({
        "inner_estimates": matrix_to_value(q, &report.inner_estimates),
        "interim": vec_to_value(q, &report.interim),
        "extracted": ext_vec_to_value(tower, &report.extracted),
        "outer_symbol_errors": ext_vec_to_value(tower, &report.outer_symbol_errors),
        "message_coset": ext_vec_to_value(tower, &report.message_coset),
        "inner_syndrome_nonzero": report.inner_syndrome_nonzero,
        "outer_ok": report.outer_ok,
        "ok": report.ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate::CosetRandomness;

    pub(crate) const SPEC_49_9: &str = r#"{
        "field": {"q": 2, "k": 3, "poly": [1, 1, 0, 1]},
        "inners": [{"C1": "hamming7", "C2": "even7", "count": 7}],
        "outer": {"a": ["0e", "1e", "2e", "3e", "4e", "5e", "6e"], "K1": 5, "K2": 5}
    }"#;

    #[test]
    fn parse_concatenated_spec() {
        let spec = parse_spec(SPEC_49_9).unwrap();
        let CodeSpec::Concatenated(cp) = spec else {
            panic!("expected a concatenated spec");
        };
        assert_eq!(cp.n_total(), 49);
        assert_eq!(cp.k_total(), 9);
        cp.verify_duality().unwrap();
    }

    #[test]
    fn concat_round_trip() {
        let CodeSpec::Concatenated(cp) = parse_spec(SPEC_49_9).unwrap() else {
            panic!();
        };
        for with_matrices in [false, true] {
            let doc = concat_to_value(&cp, with_matrices).to_string();
            let CodeSpec::Concatenated(back) = parse_spec(&doc).unwrap() else {
                panic!();
            };
            assert_eq!(back.l1(), cp.l1());
            assert_eq!(back.l2(), cp.l2());
            assert_eq!(back.parity_check_l1(), cp.parity_check_l1());
            for (a, b) in back.inners().iter().zip(cp.inners()) {
                assert_eq!(a.gens(), b.gens());
                assert_eq!(a.dual_gens(), b.dual_gens());
            }
        }
    }

    #[test]
    fn corrupted_matrix_detected() {
        let CodeSpec::Concatenated(cp) = parse_spec(SPEC_49_9).unwrap() else {
            panic!();
        };
        let mut doc = concat_to_value(&cp, true);
        // Flip one bit of the stored matrix.
        let row = doc["H_L1"][0].as_str().unwrap().to_string();
        let flipped: String = row
            .chars()
            .enumerate()
            .map(|(i, c)| if i == 0 { if c == '0' { '1' } else { '0' } } else { c })
            .collect();
        doc["H_L1"][0] = Value::String(flipped);
        let err = parse_spec(&doc.to_string()).unwrap_err();
        assert!(err.to_string().contains("H_L1"), "{err}");
    }

    #[test]
    fn parse_single_pair_and_round_trip() {
        let text = r#"{
            "field": {"q": 2, "k": 1, "poly": [1, 1]},
            "C1": "hamming7",
            "C2": "even7"
        }"#;
        let CodeSpec::Single { tower, pair } = parse_spec(text).unwrap() else {
            panic!("expected a single pair");
        };
        assert_eq!(tower.q(), 2);
        assert_eq!(pair.k(), 3);

        let mut doc = pair_to_value(&pair);
        doc.as_object_mut()
            .unwrap()
            .insert("field".into(), json!({"q": 2, "k": 1, "poly": [1, 1]}));
        let CodeSpec::Single { pair: back, .. } = parse_spec(&doc.to_string()).unwrap() else {
            panic!();
        };
        assert_eq!(back.gens(), pair.gens());
        assert_eq!(back.dual_gens(), pair.dual_gens());
        // The round-tripped generators reproduce encodings exactly.
        let w1 = pair.coset_encode(&[1, 0, 1], &CosetRandomness::Seed(3)).unwrap();
        let w2 = back.coset_encode(&[1, 0, 1], &CosetRandomness::Seed(3)).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn css_violation_reported_with_location() {
        let text = r#"{
            "field": {"q": 2, "k": 1, "poly": [1, 1]},
            "C1": "even7",
            "C2": "even7"
        }"#;
        let err = parse_spec(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("witness"), "{msg}");
    }

    #[test]
    fn reducible_polynomial_reported_with_location() {
        let text = r#"{
            "field": {"q": 2, "k": 2, "poly": [1, 0, 1]},
            "C1": "trivial:2",
            "C2": "trivial:2"
        }"#;
        let err = parse_spec(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("$.field") && msg.contains("reducible"), "{msg}");
    }

    #[test]
    fn quantum_rs_spec_with_identical_outer_codes() {
        let text = r#"{
            "field": {"q": 2, "k": 3},
            "inners": [{"C1": "trivial:3", "C2": "trivial:3", "count": 7}],
            "outer": {
                "a": ["0e", "1e", "2e", "3e", "4e", "5e", "6e"],
                "v": ["0e", "0e", "0e", "0e", "0e", "0e", "0e"],
                "v2": ["0e", "0e", "0e", "0e", "0e", "0e", "0e"],
                "K1": 5, "K2": 5
            }
        }"#;
        let CodeSpec::Concatenated(cp) = parse_spec(text).unwrap() else {
            panic!();
        };
        assert_eq!(cp.outer1().mults(), cp.outer2().mults());
        assert_eq!(cp.n_total(), 21);
        cp.verify_duality().unwrap();
    }

    #[test]
    fn lambda_matrix_selects_the_basis() {
        // Swapping the first two power-basis elements via an explicit
        // change-of-basis matrix must match the element-list spelling.
        let with_lambda = r#"{
            "field": {"q": 2, "k": 3, "poly": [1, 1, 0, 1]},
            "inners": [{"C1": "hamming7", "C2": "even7", "count": 7}],
            "outer": {"a": ["0e", "1e", "2e", "3e", "4e", "5e", "6e"], "K1": 5, "K2": 5},
            "lambda": ["010", "100", "001"]
        }"#;
        let with_basis = r#"{
            "field": {"q": 2, "k": 3, "poly": [1, 1, 0, 1]},
            "inners": [{"C1": "hamming7", "C2": "even7", "count": 7}],
            "outer": {"a": ["0e", "1e", "2e", "3e", "4e", "5e", "6e"], "K1": 5, "K2": 5},
            "basis": ["1e", "0e", "2e"]
        }"#;
        let CodeSpec::Concatenated(a) = parse_spec(with_lambda).unwrap() else { panic!() };
        let CodeSpec::Concatenated(b) = parse_spec(with_basis).unwrap() else { panic!() };
        assert_eq!(a.bases().basis(), b.bases().basis());
        assert_eq!(a.parity_check_l1(), b.parity_check_l1());
        a.verify_duality().unwrap();
    }

    #[test]
    fn vector_and_element_codecs() {
        let t = FieldTower::new(2, 3, &[1, 1, 0, 1]).unwrap();
        assert_eq!(ext_to_string(&t, Ext::ZERO), "z");
        assert_eq!(ext_to_string(&t, Ext::ONE), "0e");
        assert_eq!(ext_from_str(&t, "4e").unwrap(), t.exp(4));
        assert!(ext_from_str(&t, "4x").is_err());

        let v = vec![0, 1, 1, 0, 1];
        let val = vec_to_value(2, &v);
        assert_eq!(val, json!("01101"));
        assert_eq!(vec_from_value(2, &val, "$").unwrap(), v);
        assert!(vec_from_value(2, &json!("012"), "$").is_err()); // 2 out of range

        let big = vec![0, 11, 7];
        let val = vec_to_value(13, &big);
        assert_eq!(val, json!([0, 11, 7]));
        assert_eq!(vec_from_value(13, &val, "$").unwrap(), big);
    }
}
