//! Profile and class-structure documents.
//!
//! * Profile JSON: `{"n": int, "values": [[int; n]; n]}`
//! * Class JSON: `{"k": int, "sizes": [int; k], "matrix": [[int; k]; k]}`
//! * CSV: `n` lines of `n` comma-separated integers
//!
//! Output is UTF-8 with a trailing line feed.

use serde_json::Value;

use super::{ClassStructure, PreferenceProfile};
use crate::error::{Error, Result};

/// Parses a profile in JSON or CSV form; JSON is recognized by a leading `{`.
pub fn parse_profile(text: &str) -> Result<PreferenceProfile> {
    let trimmed = text.trim_start_matches('\u{feff}').trim();
    if trimmed.starts_with('{') {
        parse_profile_json(trimmed)
    } else {
        parse_profile_csv(trimmed)
    }
}

fn parse_profile_json(text: &str) -> Result<PreferenceProfile> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("profile document must be an object".into()))?;
    let rows = integer_matrix(
        obj.get("values")
            .ok_or_else(|| Error::Parse("missing `values`".into()))?,
    )?;
    if let Some(n) = obj.get("n") {
        let n = n
            .as_u64()
            .ok_or_else(|| Error::Parse("`n` must be a non-negative integer".into()))?;
        if n as usize != rows.len() {
            return Err(Error::Parse(format!(
                "`n` is {n} but `values` has {} rows",
                rows.len()
            )));
        }
    }
    PreferenceProfile::from_rows(&rows)
}

fn parse_profile_csv(text: &str) -> Result<PreferenceProfile> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .enumerate()
                .map(|(j, cell)| {
                    let cell = cell.trim();
                    cell.parse::<i64>().map_err(|_| Error::NonInteger {
                        row: i,
                        col: j,
                        text: cell.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PreferenceProfile::from_rows(&rows)
}

fn integer_matrix(v: &Value) -> Result<Vec<Vec<i64>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
            row.iter()
                .enumerate()
                .map(|(j, cell)| {
                    cell.as_i64().ok_or_else(|| Error::NonInteger {
                        row: i,
                        col: j,
                        text: cell.to_string(),
                    })
                })
                .collect()
        })
        .collect()
}

pub fn emit_profile(p: &PreferenceProfile) -> String {
    let doc = serde_json::json!({ "n": p.n(), "values": p.rows() });
    let mut s = doc.to_string();
    s.push('\n');
    s
}

pub fn parse_classes(text: &str) -> Result<ClassStructure> {
    let doc: Value = serde_json::from_str(text.trim())?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("class document must be an object".into()))?;
    let sizes = obj
        .get("sizes")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing `sizes`".into()))?
        .iter()
        .map(|s| {
            s.as_u64()
                .map(|s| s as usize)
                .ok_or_else(|| Error::Parse(format!("bad class size {s}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = integer_matrix(
        obj.get("matrix")
            .ok_or_else(|| Error::Parse("missing `matrix`".into()))?,
    )?;
    if let Some(k) = obj.get("k") {
        if k.as_u64() != Some(sizes.len() as u64) {
            return Err(Error::Parse(format!(
                "`k` is {k} but {} sizes were given",
                sizes.len()
            )));
        }
    }
    ClassStructure::new(sizes, matrix)
}

pub fn emit_classes(c: &ClassStructure) -> String {
    let doc = serde_json::json!({ "k": c.k(), "sizes": c.sizes(), "matrix": c.matrix() });
    let mut s = doc.to_string();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_json() {
        let p = parse_profile(r#"{"n": 2, "values": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.get(0, 1), 1);
    }

    #[test]
    fn csv_and_errors() {
        let p = parse_profile("0,1,0\n0,0,1\n1,0,0\n").unwrap();
        assert_eq!(p.get(2, 0), 1);
        assert!(matches!(
            parse_profile("0,0.5,0\n0,0,1\n1,0,0\n"),
            Err(Error::NonInteger { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            parse_profile(r#"{"n":3,"values":[[0,0.5,0],[0,0,1],[1,0,0]]}"#),
            Err(Error::NonInteger { .. })
        ));
        assert!(matches!(
            parse_profile("0,1\n1,0,0\n"),
            Err(Error::NonSquare { .. })
        ));
        assert!(matches!(
            parse_profile("1,1\n1,0\n"),
            Err(Error::NonZeroDiagonal(0))
        ));
        assert!(parse_profile(r#"{"n":3,"values":[[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn class_document() {
        let c = parse_classes(r#"{"k":2,"sizes":[1,3],"matrix":[[0,1],[-1,2]]}"#).unwrap();
        assert_eq!(c.n(), 4);
        assert_eq!(parse_classes(&emit_classes(&c)).unwrap(), c);
        assert!(parse_classes(r#"{"k":3,"sizes":[1,3],"matrix":[[0,1],[-1,2]]}"#).is_err());
    }

    #[test]
    fn emitted_text_is_line_terminated() {
        let s = emit_profile(&PreferenceProfile::zeros(2));
        assert_eq!(s, "{\"n\":2,\"values\":[[0,0],[0,0]]}\n");
    }
}
