//! JSON ingestion with field paths and line numbers in every diagnostic.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Deserializes `text`, reporting the failing field path and position.
pub fn parse<T: DeserializeOwned>(origin: &str, text: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." => "<root>".to_owned(),
            p => p,
        };
        let inner = e.inner();
        CliError::Schema {
            path: origin.to_owned(),
            field,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| CliError::Schema {
        path: origin.to_owned(),
        field: "<root>".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(value)
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse(&path.display().to_string(), &read_text(path)?)
}

/// Top-level object keys, used to tell input kinds apart.
pub fn keys(origin: &str, text: &str) -> Result<Vec<String>, CliError> {
    let v: serde_json::Value = parse(origin, text)?;
    Ok(match v {
        serde_json::Value::Object(m) => m.keys().cloned().collect(),
        _ => Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use conifold::zigzag::ZigZagData;

    #[test]
    fn schema_errors_name_field_and_line() {
        let text = "{\n  \"hm\": 1,\n  \"h0\": 1,\n  \"a\": 0,\n  \"b\": 0,\n  \"alpha\": [[\"x\"]],\n  \"beta\": [],\n  \"gamma\": []\n}";
        match parse::<ZigZagData>("t.json", text) {
            Err(CliError::Schema { field, line, .. }) => {
                assert_eq!(field, "alpha");
                assert_eq!(line, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
