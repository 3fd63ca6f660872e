//! Text formats for matrices.
//!
//! * CSV: one row per line, comma-separated decimals.
//! * JSON: `{"rows": [[...], [...]]}`.
//!
//! Both accept rational literals such as `1/3` (as a bare CSV field, or as a
//! JSON string), parsed to the nearest double.

use std::path::Path;

use thiserror::Error;

use super::{Matrix, MatrixError};
use crate::Scalar;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("row {row}, column {col}: cannot parse {text:?} as a number")]
    Entry { row: usize, col: usize, text: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("json: expected an object with a \"rows\" array of arrays")]
    JsonShape,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Parses a decimal or `p/q` literal.
pub fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: f64 = num.trim().parse().ok()?;
        let den: f64 = den.trim().parse().ok()?;
        let v = num / den;
        return v.is_finite().then_some(v);
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn parse_csv<T: Scalar>(text: &str) -> Result<Matrix<T>, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<T>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                parse_number(field).map(T::lit).ok_or_else(|| ParseError::Entry {
                    row: rows.len(),
                    col,
                    text: field.to_string(),
                })
            })
            .collect::<Result<Vec<T>, _>>()?;
        rows.push(row);
    }
    Ok(Matrix::from_rows(&rows)?)
}

pub fn parse_json<T: Scalar>(text: &str) -> Result<Matrix<T>, ParseError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let rows = value
        .get("rows")
        .and_then(|r| r.as_array())
        .ok_or(ParseError::JsonShape)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or(ParseError::JsonShape)?;
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let x = match v {
                    serde_json::Value::Number(n) => n.as_f64(),
                    serde_json::Value::String(s) => parse_number(s),
                    _ => None,
                };
                x.map(T::lit).ok_or_else(|| ParseError::Entry {
                    row: i,
                    col: j,
                    text: v.to_string(),
                })
            })
            .collect::<Result<Vec<T>, _>>()?;
        out.push(parsed);
    }
    Ok(Matrix::from_rows(&out)?)
}

/// Picks the format from the extension (`.json` → JSON, anything else → CSV).
pub fn read_matrix<T: Scalar>(path: impl AsRef<Path>) -> Result<Matrix<T>, ParseError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

/// CSV text using shortest round-trip formatting of each entry.
pub fn to_csv<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let fields: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json<T: Scalar>(m: &Matrix<T>) -> String {
    serde_json::to_string(m).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_in_csv_and_json() {
        let m: Matrix<f64> = parse_csv("1/3, 2/3\n0.5,0.5\n").unwrap();
        assert_eq!(m[(0, 0)], 1.0 / 3.0);
        let j: Matrix<f64> = parse_json(r#"{"rows": [["1/3", 0.25], [1, "-2/4"]]}"#).unwrap();
        assert_eq!(j[(0, 0)], 1.0 / 3.0);
        assert_eq!(j[(1, 1)], -0.5);
    }

    #[test]
    fn bad_entry_names_row() {
        let err = parse_csv::<f64>("1,2\n3,abc\n").unwrap_err();
        assert!(matches!(err, ParseError::Entry { row: 1, col: 1, .. }), "{err}");
        assert!(parse_csv::<f64>("1,2\n3\n").is_err());
        assert!(parse_json::<f64>(r#"{"cols": []}"#).is_err());
        assert!(parse_number("1/0").is_none());
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let m: Matrix<f64> = parse_csv("# header\n1,0\n\n0,1\n").unwrap();
        assert_eq!(m, Matrix::identity(2));
    }

    #[test]
    fn csv_round_trip_exact() {
        let m = Matrix::<f64>::from_fn(3, 4, |i, j| ((i * 7 + j * 13) as f64).sin() / 3.0);
        let back: Matrix<f64> = parse_csv(&to_csv(&m)).unwrap();
        assert_eq!(back, m);
        let back: Matrix<f64> = parse_json(&to_json(&m)).unwrap();
        assert_eq!(back, m);
    }
}
