#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn mcsa(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcsa"))
        .current_dir(dir)
        .env("MCSA_NO_COLOR", "1")
        .args(args)
        .output()
        .expect("spawn mcsa")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn schema() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Checks `doc` against the subset of JSON Schema used by the report schema:
/// `$ref` into `$defs`, `oneOf`, `type`, `const`, `enum`, `required`,
/// `properties`, `additionalProperties: false`, `items`, `minItems` and the
/// numeric bounds.
pub fn validate(doc: &Value, schema: &Value) -> Result<(), String> {
    check(doc, schema, schema, "$")
}

fn resolve<'a>(root: &'a Value, node: &'a Value) -> &'a Value {
    match node.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let name = r.strip_prefix("#/$defs/").expect("local $defs reference");
            resolve(root, &root["$defs"][name])
        }
        None => node,
    }
}

fn type_matches(v: &Value, t: &str) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        other => panic!("unsupported type {other}"),
    }
}

fn check(v: &Value, node: &Value, root: &Value, at: &str) -> Result<(), String> {
    let s = resolve(root, node);
    if let Some(options) = s.get("oneOf").and_then(Value::as_array) {
        let ok = options
            .iter()
            .filter(|o| check(v, o, root, at).is_ok())
            .count();
        if ok != 1 {
            return Err(format!("{at}: matches {ok} of the oneOf branches"));
        }
    }
    if let Some(t) = s.get("type") {
        let types: Vec<&str> = match t {
            Value::String(one) => vec![one.as_str()],
            Value::Array(many) => many.iter().filter_map(Value::as_str).collect(),
            _ => panic!("bad type keyword"),
        };
        if !types.iter().any(|t| type_matches(v, t)) {
            return Err(format!("{at}: expected {types:?}, got {v}"));
        }
    }
    if let Some(c) = s.get("const") {
        if v != c {
            return Err(format!("{at}: expected {c}, got {v}"));
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            return Err(format!("{at}: {v} not in {e:?}"));
        }
    }
    if let Some(x) = v.as_f64() {
        let bound = |k: &str| s.get(k).and_then(Value::as_f64);
        let fails = [
            bound("minimum").filter(|&m| x < m),
            bound("maximum").filter(|&m| x > m),
            bound("exclusiveMinimum").filter(|&m| x <= m),
            bound("exclusiveMaximum").filter(|&m| x >= m),
        ];
        if fails.iter().any(Option::is_some) {
            return Err(format!("{at}: {x} out of bounds"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in s
            .get("required")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
        {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{at}: missing `{key}`"));
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (key, value) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => check(value, sub, root, &format!("{at}.{key}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{at}: unexpected `{key}`"))
                }
                None => {}
            }
        }
    }
    if let Some(arr) = v.as_array() {
        if let Some(min) = s.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                return Err(format!("{at}: fewer than {min} items"));
            }
        }
        if let Some(items) = s.get("items") {
            for (i, item) in arr.iter().enumerate() {
                check(item, items, root, &format!("{at}[{i}]"))?;
            }
        }
    }
    Ok(())
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// Small capture (2 s at 250 Hz) for tests that do not need full length.
pub const SMALL_SIM: &str = "\
name = small
supply_frequency = 23
sample_rate = 250
duration = 2
noise_rms = 0.02
seed = 5
harmonic.3 = 0.05
";
