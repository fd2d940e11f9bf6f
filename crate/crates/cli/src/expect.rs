//! Expectation documents: `{ "<command>": { "<path>": <value>, … }, … }`
//! where a path is a dot-separated key sequence into the result, with
//! numeric segments indexing arrays.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::CliError;

pub type Expectations = BTreeMap<String, BTreeMap<String, Value>>;

pub fn parse(text: &str) -> Result<Expectations, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(format!("expectation file: {e}")))
}

pub fn lookup<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(value, |v, key| match v {
        Value::Object(map) => map.get(key),
        Value::Array(items) => key.parse::<usize>().ok().and_then(|i| items.get(i)),
        _ => None,
    })
}

/// Human-readable descriptions of every violated expectation.
pub fn violations(result: &Value, expected: &BTreeMap<String, Value>) -> Vec<String> {
    expected
        .iter()
        .filter_map(|(path, want)| match lookup(result, path) {
            Some(got) if got == want => None,
            Some(got) => Some(format!("{path}: expected {want}, got {got}")),
            None => Some(format!("{path}: expected {want}, but the result has no such field")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn paths_and_violations() {
        let result = json!({"a": {"b": [1, 2, 3]}, "ok": true});
        assert_eq!(lookup(&result, "a.b.1"), Some(&json!(2)));
        assert_eq!(lookup(&result, "a.c"), None);
        let expected = BTreeMap::from([("ok".to_string(), json!(true)), ("a.b".to_string(), json!([1, 2]))]);
        let v = violations(&result, &expected);
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("a.b: expected [1,2]"));
    }
}
