//! Test-only oracles, written without touching the library's code paths.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::Value;

/// `t_n = Σ a_i t_{n−i}` by plain `i128` iteration. Panics on overflow.
pub fn iterate_i128(coef: &[i128], init: &[i128], count: usize) -> Vec<i128> {
    let k = coef.len();
    let mut out: Vec<i128> = init.iter().copied().take(count).collect();
    while out.len() < count {
        let n = out.len();
        let mut t: i128 = 0;
        for i in 0..k {
            t = t
                .checked_add(coef[i].checked_mul(out[n - 1 - i]).expect("overflow"))
                .expect("overflow");
        }
        out.push(t);
    }
    out
}

pub fn fibonacci(count: usize) -> Vec<i128> {
    iterate_i128(&[1, 1], &[0, 1], count)
}
pub fn lucas(count: usize) -> Vec<i128> {
    iterate_i128(&[1, 1], &[2, 1], count)
}
pub fn pell(count: usize) -> Vec<i128> {
    iterate_i128(&[2, 1], &[0, 1], count)
}
pub fn perrin(count: usize) -> Vec<i128> {
    iterate_i128(&[0, 1, 1], &[3, 0, 2], count)
}

/// Arbitrary-precision terms, built with a two-register/three-register loop
/// specific to each sequence rather than the generic engine.
pub fn big_terms(name: &str, count: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(count);
    match name {
        "fibonacci" | "lucas" | "pell" => {
            let (mut a, mut b, m) = match name {
                "fibonacci" => (BigInt::from(0), BigInt::from(1), 1),
                "lucas" => (BigInt::from(2), BigInt::from(1), 1),
                _ => (BigInt::from(0), BigInt::from(1), 2),
            };
            for _ in 0..count {
                out.push(a.clone());
                let next = &b * m + &a;
                a = std::mem::replace(&mut b, next);
            }
        }
        "perrin" => {
            let (mut a, mut b, mut c) = (BigInt::from(3), BigInt::from(0), BigInt::from(2));
            for _ in 0..count {
                out.push(a.clone());
                let next = &a + &b;
                a = std::mem::replace(&mut b, std::mem::replace(&mut c, next));
            }
        }
        other => panic!("no oracle for {other}"),
    }
    out
}

/// Dense `circ(row)` with entry `row[(j − i) mod n]`.
pub fn dense(row: &[i128]) -> Vec<Vec<i128>> {
    let n = row.len();
    (0..n)
        .map(|i| (0..n).map(|j| row[(j + n - i) % n]).collect())
        .collect()
}

pub fn dense_matvec(m: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    m.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// `λ_k = Σ_j c_j exp(+2πi jk/n)` by direct O(n²) summation.
pub fn direct_dft(row: &[f64]) -> Vec<Complex64> {
    let n = row.len();
    (0..n)
        .map(|k| {
            row.iter()
                .enumerate()
                .map(|(j, &c)| {
                    let angle = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    Complex64::from_polar(c, angle)
                })
                .sum()
        })
        .collect()
}

/// Largest eigenvalue of the symmetric PSD matrix `AᵀA` by power iteration
/// from a non-uniform seed, on the explicitly formed dense product.
pub fn gram_top_eigenvalue(a: &[Vec<i128>]) -> f64 {
    let n = a.len();
    let g: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[k][i] * a[k][j]).sum::<i128>() as f64)
                .collect()
        })
        .collect();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / n as f64).collect();
    let mut theta = 0.0;
    for _ in 0..20_000 {
        let w: Vec<f64> = g
            .iter()
            .map(|r| r.iter().zip(&v).map(|(x, y)| x * y).sum())
            .collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next: f64 = w.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>()
            / v.iter().map(|x| x * x).sum::<f64>();
        v = w.iter().map(|x| x / norm).collect();
        if (next - theta).abs() <= 1e-15 * next {
            return next;
        }
        theta = next;
    }
    theta
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Validates `value` against the subset of JSON Schema used by the checked-in
/// schema: type, enum, const, properties, required, additionalProperties,
/// items, oneOf, $ref into `#/$defs`, minimum, pattern.
pub struct SchemaValidator {
    root: Value,
}

impl SchemaValidator {
    pub fn new(root: Value) -> Self {
        Self { root }
    }

    pub fn validate(&self, value: &Value) -> Result<(), String> {
        self.check(&self.root, value, "$")
    }

    fn check(&self, schema: &Value, value: &Value, path: &str) -> Result<(), String> {
        let obj = schema.as_object().ok_or(format!("{path}: schema is not an object"))?;
        for key in obj.keys() {
            let known = [
                "$schema", "$id", "title", "$defs", "$ref", "type", "enum", "const",
                "properties", "required", "additionalProperties", "items", "oneOf",
                "minimum", "pattern",
            ];
            if !known.contains(&key.as_str()) {
                return Err(format!("{path}: unsupported schema keyword `{key}`"));
            }
        }
        if let Some(r) = obj.get("$ref").and_then(Value::as_str) {
            let name = r.strip_prefix("#/$defs/").ok_or(format!("bad $ref {r}"))?;
            let target = self.root["$defs"]
                .get(name)
                .ok_or(format!("missing def {name}"))?;
            self.check(target, value, path)?;
        }
        if let Some(t) = obj.get("type") {
            let types: Vec<&str> = match t {
                Value::String(s) => vec![s.as_str()],
                Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
                _ => return Err(format!("{path}: bad type keyword")),
            };
            if !types.iter().any(|t| type_matches(t, value)) {
                return Err(format!("{path}: {value} is not of type {types:?}"));
            }
        }
        if let Some(Value::Array(options)) = obj.get("enum") {
            if !options.contains(value) {
                return Err(format!("{path}: {value} not in enum"));
            }
        }
        if let Some(c) = obj.get("const") {
            if c != value {
                return Err(format!("{path}: {value} != const {c}"));
            }
        }
        if let Some(min) = obj.get("minimum").and_then(Value::as_f64) {
            if let Some(x) = value.as_f64() {
                if x < min {
                    return Err(format!("{path}: {x} < minimum {min}"));
                }
            }
        }
        if let Some(p) = obj.get("pattern").and_then(Value::as_str) {
            if let Some(s) = value.as_str() {
                if !regex::Regex::new(p).unwrap().is_match(s) {
                    return Err(format!("{path}: `{s}` does not match {p}"));
                }
            }
        }
        if let Some(Value::Array(options)) = obj.get("oneOf") {
            let passing = options
                .iter()
                .filter(|o| self.check(o, value, path).is_ok())
                .count();
            if passing != 1 {
                return Err(format!("{path}: {passing} oneOf branches match"));
            }
        }
        if let Value::Object(map) = value {
            let props = obj.get("properties").and_then(Value::as_object);
            if let Some(Value::Array(req)) = obj.get("required") {
                for r in req.iter().filter_map(Value::as_str) {
                    if !map.contains_key(r) {
                        return Err(format!("{path}: missing required `{r}`"));
                    }
                }
            }
            for (k, v) in map {
                let sub = format!("{path}.{k}");
                match props.and_then(|p| p.get(k)) {
                    Some(s) => self.check(s, v, &sub)?,
                    None => match obj.get("additionalProperties") {
                        Some(Value::Bool(false)) => {
                            return Err(format!("{path}: unexpected property `{k}`"))
                        }
                        Some(s @ Value::Object(_)) => self.check(s, v, &sub)?,
                        _ => {}
                    },
                }
            }
        }
        if let (Value::Array(items), Some(item_schema)) = (value, obj.get("items")) {
            for (i, item) in items.iter().enumerate() {
                self.check(item_schema, item, &format!("{path}[{i}]"))?;
            }
        }
        Ok(())
    }
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        _ => false,
    }
}
