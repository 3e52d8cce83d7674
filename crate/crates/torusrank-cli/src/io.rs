//! Matrix file formats.
//!
//! Text: first line `n`, then n lines of n whitespace-separated integers.
//! JSON: `{"n": 3, "rows": [[0, 1, 0], ...]}` — entries may be JSON
//! integers or decimal strings (strings never truncate). Parsing rejects
//! ragged rows, non-integer tokens and n < 1.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::Value;
use torusrank::Mat;

/// Parses either format, sniffing JSON by a leading `{`.
pub fn parse_matrix_str(s: &str) -> Result<Mat, String> {
    if s.trim_start().starts_with('{') {
        parse_matrix_json(s)
    } else {
        parse_matrix_text(s)
    }
}

pub fn parse_matrix_text(s: &str) -> Result<Mat, String> {
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or("empty matrix file")?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| format!("bad dimension header {header:?}"))?;
    if n < 1 {
        return Err("dimension must be at least 1".into());
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        let line = lines.next().ok_or_else(|| format!("missing row {}", i + 1))?;
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != n {
            return Err(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            ));
        }
        for tok in row {
            entries.push(
                BigInt::from_str(tok).map_err(|_| format!("non-integer token {tok:?}"))?,
            );
        }
    }
    if lines.next().is_some() {
        return Err("trailing content after matrix rows".into());
    }
    Mat::new(n, n, entries).map_err(|e| e.to_string())
}

fn value_to_bigint(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = num.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(format!("non-integer numeric token {num}"))
            }
        }
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| format!("non-integer token {s:?}")),
        other => Err(format!("unexpected entry {other}")),
    }
}

pub fn parse_matrix_json(s: &str) -> Result<Mat, String> {
    let v: Value = serde_json::from_str(s).map_err(|e| format!("invalid JSON: {e}"))?;
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or("missing or invalid \"n\"")? as usize;
    if n < 1 {
        return Err("dimension must be at least 1".into());
    }
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or("missing \"rows\" array")?;
    if rows.len() != n {
        return Err(format!("{} rows, expected {n}", rows.len()));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| format!("row {} is not an array", i + 1))?;
        if row.len() != n {
            return Err(format!("row {} has {} entries, expected {n}", i + 1, row.len()));
        }
        for e in row {
            entries.push(value_to_bigint(e)?);
        }
    }
    Mat::new(n, n, entries).map_err(|e| e.to_string())
}

/// Canonical text form: round-trips exactly through [`parse_matrix_text`].
pub fn matrix_to_text(m: &Mat) -> String {
    let mut out = format!("{}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// JSON form with entries as decimal strings.
pub fn matrix_to_json_value(m: &Mat) -> Value {
    serde_json::json!({
        "n": m.rows(),
        "rows": (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m = Mat::from_i64_rows(&[&[0, -3, 1], &[7, 0, 0], &[2, 5, -9]]);
        let t = matrix_to_text(&m);
        assert_eq!(parse_matrix_text(&t).unwrap(), m);
        assert_eq!(parse_matrix_str(&t).unwrap(), m);
    }

    #[test]
    fn json_round_trip_and_mixed_entries() {
        let m = Mat::from_i64_rows(&[&[1, 2], &[-3, 4]]);
        let j = matrix_to_json_value(&m).to_string();
        assert_eq!(parse_matrix_str(&j).unwrap(), m);
        let mixed = r#"{"n": 2, "rows": [[1, "2"], ["-3", 4]]}"#;
        assert_eq!(parse_matrix_json(mixed).unwrap(), m);
    }

    #[test]
    fn huge_entries_survive_as_strings() {
        let big = "123456789012345678901234567890";
        let j = format!(r#"{{"n": 1, "rows": [["{big}"]]}}"#);
        let m = parse_matrix_json(&j).unwrap();
        assert_eq!(m.at(0, 0).to_string(), big);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_matrix_text("").is_err());
        assert!(parse_matrix_text("0\n").is_err());
        assert!(parse_matrix_text("2\n1 2\n3").is_err()); // ragged
        assert!(parse_matrix_text("2\n1 2\n3 x").is_err()); // non-integer
        assert!(parse_matrix_text("1\n5\n6").is_err()); // trailing rows
        assert!(parse_matrix_json(r#"{"n": 2, "rows": [[1.5, 2], [3, 4]]}"#).is_err());
        assert!(parse_matrix_json(r#"{"n": 2, "rows": [[1, 2]]}"#).is_err());
    }
}
