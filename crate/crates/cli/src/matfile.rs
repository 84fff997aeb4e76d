//! Matrix and phase-vector file formats.
//!
//! Text matrix format: first line `dim <d>`, then d rows of d
//! whitespace-separated `<re>,<im>` tokens. `#` starts a comment, LF
//! endings. The JSON alternative is
//! `{"dim": d, "re": [[...]], "im": [[...]]}`. Values are written with
//! shortest round-trip formatting, so write → read is exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qcsd::linalg::ComplexMatrix;
use qcsd::{Error, Result};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

/// Parses either the text or the JSON matrix format, deciding by the first
/// non-whitespace byte.
pub fn parse_matrix(input: &str) -> Result<ComplexMatrix> {
    if input.trim_start().starts_with('{') {
        parse_matrix_json(input)
    } else {
        parse_matrix_text(input)
    }
}

fn parse_matrix_text(input: &str) -> Result<ComplexMatrix> {
    let mut lines = input.lines().enumerate();
    let dim = loop {
        let (idx, raw) = lines
            .next()
            .ok_or_else(|| syntax(1, 1, "missing `dim <d>` header"))?;
        let text = strip_comment(raw).trim();
        if text.is_empty() {
            continue;
        }
        let mut parts = text.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some("dim"), Some(value), None) => {
                let dim: usize = value
                    .parse()
                    .map_err(|_| syntax(idx + 1, 1, "invalid dimension"))?;
                if dim == 0 {
                    return Err(syntax(idx + 1, 1, "dimension must be positive"));
                }
                break dim;
            }
            _ => return Err(syntax(idx + 1, 1, "expected `dim <d>` header")),
        }
    };

    let mut entries: Vec<Complex64> = Vec::with_capacity(dim * dim);
    for (idx, raw) in lines {
        let text = strip_comment(raw);
        for token in text.split_whitespace() {
            let (re_text, im_text) = token.split_once(',').ok_or_else(|| {
                syntax(idx + 1, 1, format!("expected `<re>,<im>`, found `{token}`"))
            })?;
            let re: f64 = re_text
                .parse()
                .map_err(|_| syntax(idx + 1, 1, format!("invalid number `{re_text}`")))?;
            let im: f64 = im_text
                .parse()
                .map_err(|_| syntax(idx + 1, 1, format!("invalid number `{im_text}`")))?;
            entries.push(Complex64::new(re, im));
        }
    }
    if entries.len() != dim * dim {
        return Err(Error::LengthMismatch {
            len: entries.len(),
            expected: dim * dim,
        });
    }
    Ok(ComplexMatrix::new(dim, dim, entries))
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn parse_matrix_json(input: &str) -> Result<ComplexMatrix> {
    let doc: MatrixJson = serde_json::from_str(input).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let d = doc.dim;
    if doc.re.len() != d || doc.im.len() != d {
        return Err(Error::LengthMismatch {
            len: doc.re.len().min(doc.im.len()),
            expected: d,
        });
    }
    for row in doc.re.iter().chain(doc.im.iter()) {
        if row.len() != d {
            return Err(Error::LengthMismatch {
                len: row.len(),
                expected: d,
            });
        }
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| {
        Complex64::new(doc.re[i][j], doc.im[i][j])
    }))
}

/// Writes the text matrix format.
pub fn emit_matrix_text(m: &ComplexMatrix) -> String {
    let mut out = format!("dim {}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m.get(i, j);
                format!("{},{}", z.re, z.im)
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a phase vector: whitespace-separated reals, `#` comments.
pub fn parse_phases(input: &str) -> Result<Vec<f64>> {
    let mut phases = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        for token in strip_comment(raw).split_whitespace() {
            let value: f64 = token
                .parse()
                .map_err(|_| syntax(idx + 1, 1, format!("invalid number `{token}`")))?;
            phases.push(value);
        }
    }
    if phases.is_empty() {
        return Err(syntax(1, 1, "no phases found"));
    }
    Ok(phases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m =
            ComplexMatrix::from_fn(2, 2, |i, j| Complex64::new(i as f64 + 0.25, j as f64 - 0.5));
        let text = emit_matrix_text(&m);
        let parsed = parse_matrix(&text).unwrap();
        assert_eq!(parsed, m);
        assert_eq!(emit_matrix_text(&parsed), text);
    }

    #[test]
    fn text_with_comments() {
        let text = "# a matrix\ndim 2\n1,0 0,0 # row one\n0,0 1,0\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(1, 1), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn entry_count_is_checked() {
        let text = "dim 2\n1,0 0,0\n";
        assert!(matches!(
            parse_matrix(text),
            Err(Error::LengthMismatch {
                len: 2,
                expected: 4
            })
        ));
    }

    #[test]
    fn json_form_parses() {
        let text = r#"{"dim": 2, "re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}"#;
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(0, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn bad_token_reports_line() {
        let text = "dim 2\n1,0 nope\n0,0 1,0\n";
        assert!(matches!(
            parse_matrix(text),
            Err(Error::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn phases_parse() {
        let text = "0.1 0.2 # trailing\n0.3\n0.4\n";
        assert_eq!(parse_phases(text).unwrap(), vec![0.1, 0.2, 0.3, 0.4]);
        assert!(parse_phases("# nothing\n").is_err());
    }
}
