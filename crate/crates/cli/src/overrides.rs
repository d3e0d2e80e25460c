//! Merging command-line flags into a manifest document.

use serde_json::{Map, Value};

fn same(a: &Value, b: &Value) -> bool {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => x == y,
        _ => a == b,
    }
}

/// Apply `(dotted path, value)` overrides to `doc`. A field already present
/// in the manifest keeps its value; a differing flag only produces a
/// warning, which is returned so callers can surface it.
pub fn apply(doc: &mut Value, overrides: &[(String, Value)]) -> Result<Vec<String>, String> {
    let mut warnings = Vec::new();
    for (path, value) in overrides {
        let keys: Vec<&str> = path.split('.').collect();
        if keys.iter().any(|k| k.is_empty()) {
            return Err(format!("invalid field path {path:?}"));
        }
        let mut node = &mut *doc;
        for key in &keys[..keys.len() - 1] {
            let obj = node
                .as_object_mut()
                .ok_or_else(|| format!("cannot set {path}: {key} is inside a non-object"))?;
            node = obj.entry(key.to_string()).or_insert_with(|| Value::Object(Map::new()));
        }
        let obj = node
            .as_object_mut()
            .ok_or_else(|| format!("cannot set {path}: parent is not an object"))?;
        let last = keys[keys.len() - 1];
        match obj.get(last) {
            Some(existing) if !same(existing, value) => {
                let msg = format!("manifest sets {path} = {existing}; ignoring flag value {value}");
                log::warn!("{msg}");
                warnings.push(msg);
            }
            Some(_) => {}
            None => {
                obj.insert(last.to_string(), value.clone());
            }
        }
    }
    Ok(warnings)
}
