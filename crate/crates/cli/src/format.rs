//! Matrix file formats.
//!
//! Two encodings are accepted, told apart by the first non-space byte:
//!
//! * JSON (`{` or `[`): `{"n": 2, "data": [[re, im], ...]}` with `data`
//!   either a flat row-major list of `n*n` pairs or a list of `n` rows of `n`
//!   pairs. A bare list of rows is also accepted. A plain number stands for a
//!   real entry.
//! * Grid (anything else): one row per line, entries separated by
//!   whitespace, each written `re+imj`, `re-imj`, `re` or `imj`. Blank lines
//!   and lines starting with `#` are skipped.
//!
//! Numbers are parsed with correct rounding and printed in shortest
//! round-trip form, so `parse(print(m))` reproduces `m` bit for bit.

use loewner::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dimension error: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Json,
    Grid,
}

/// Sniffs the encoding from the first non-space byte.
pub fn detect(bytes: &[u8]) -> Encoding {
    match bytes.iter().find(|b| !b.is_ascii_whitespace()) {
        Some(b'{') | Some(b'[') => Encoding::Json,
        _ => Encoding::Grid,
    }
}

pub fn parse_matrix(bytes: &[u8]) -> Result<ComplexMatrix, FormatError> {
    match detect(bytes) {
        Encoding::Json => parse_json(bytes),
        Encoding::Grid => {
            let text = std::str::from_utf8(bytes).map_err(|e| {
                let (line, column) = position(bytes, e.valid_up_to());
                FormatError::Parse {
                    line,
                    column,
                    message: "invalid UTF-8".into(),
                }
            })?;
            parse_grid(text)
        }
    }
}

fn position(bytes: &[u8], offset: usize) -> (usize, usize) {
    let before = &bytes[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = offset
        - before
            .iter()
            .rposition(|&b| b == b'\n')
            .map_or(0, |p| p + 1)
        + 1;
    (line, column)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(&self) -> Complex64 {
        match *self {
            Entry::Pair([re, im]) => Complex64::new(re, im),
            Entry::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Data {
    Flat(Vec<Entry>),
    Rows(Vec<Vec<Entry>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sized {
    n: usize,
    data: Data,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Document {
    Sized(Sized),
    Rows(Vec<Vec<Entry>>),
}

fn parse_json(bytes: &[u8]) -> Result<ComplexMatrix, FormatError> {
    let doc: Document = serde_json::from_slice(bytes).map_err(|e| FormatError::Parse {
        line: e.line(),
        column: e.column(),
        message: {
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            full.strip_suffix(&suffix).unwrap_or(&full).to_owned()
        },
    })?;
    let (n, entries) = match doc {
        Document::Sized(Sized {
            n,
            data: Data::Flat(flat),
        }) => {
            if flat.len() != n * n {
                return Err(FormatError::Dimension(format!(
                    "n = {n} needs {} entries, found {}",
                    n * n,
                    flat.len()
                )));
            }
            (n, flat)
        }
        Document::Sized(Sized {
            n,
            data: Data::Rows(rows),
        }) => (n, flatten_rows(n, rows)?),
        Document::Rows(rows) => (rows.len(), flatten_rows(rows.len(), rows)?),
    };
    build(n, entries.iter().map(Entry::value).collect())
}

fn flatten_rows(n: usize, rows: Vec<Vec<Entry>>) -> Result<Vec<Entry>, FormatError> {
    if rows.len() != n {
        return Err(FormatError::Dimension(format!(
            "n = {n} but found {} rows",
            rows.len()
        )));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(FormatError::Dimension(format!(
            "row {} has {} entries, expected {n}",
            i + 1,
            row.len()
        )));
    }
    Ok(rows.into_iter().flatten().collect())
}

fn build(n: usize, data: Vec<Complex64>) -> Result<ComplexMatrix, FormatError> {
    if n == 0 {
        return Err(FormatError::Dimension(
            "matrix dimension must be positive".into(),
        ));
    }
    // Entries are finite here: JSON has no spelling for infinities or NaN, and
    // the grid parser rejects them token by token.
    ComplexMatrix::new(n, data).map_err(|e| FormatError::Dimension(e.to_string()))
}

fn parse_grid(text: &str) -> Result<ComplexMatrix, FormatError> {
    let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let len = rest[start..]
                .find(char::is_whitespace)
                .unwrap_or(rest.len() - start);
            let token = &rest[start..start + len];
            let value = parse_token(token).ok_or_else(|| FormatError::Parse {
                line: index + 1,
                column: line[..offset + start].chars().count() + 1,
                message: format!("invalid entry `{token}`"),
            })?;
            row.push(value);
            offset += start + len;
            rest = &rest[start + len..];
        }
        rows.push((index + 1, row));
    }
    let n = rows.len();
    if n == 0 {
        return Err(FormatError::Dimension("no rows".into()));
    }
    for (line, row) in &rows {
        if row.len() != n {
            return Err(FormatError::Dimension(format!(
                "line {line} has {} entries, expected {n}",
                row.len()
            )));
        }
    }
    build(n, rows.into_iter().flat_map(|(_, r)| r).collect())
}

fn parse_token(token: &str) -> Option<Complex64> {
    let value = match token.strip_suffix(['j', 'i']) {
        None => Complex64::new(parse_real(token)?, 0.0),
        Some(body) => {
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
            match split {
                Some(k) => Complex64::new(parse_real(&body[..k])?, parse_real(&body[k..])?),
                None => Complex64::new(0.0, parse_real(body)?),
            }
        }
    };
    Some(value)
}

fn parse_real(s: &str) -> Option<f64> {
    // `f64::from_str` also accepts "inf" and "nan"; the format does not.
    if !s.bytes().any(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Shortest decimal that parses back to exactly `x`.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

/// Grid token for one entry, e.g. `1.5-0.25j`.
pub fn token(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}j", real(z.re), real(z.im.abs()))
}

pub fn to_grid(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| token(m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Canonical JSON: one object, one matrix row per line.
pub fn to_json(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = format!("{{\"n\": {n}, \"data\": [\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let z = m[(i, j)];
                format!("[{}, {}]", real(z.re), real(z.im))
            })
            .collect();
        out.push_str("  ");
        out.push_str(&row.join(", "));
        out.push_str(if i + 1 < n { ",\n" } else { "\n" });
    }
    out.push_str("]}\n");
    out
}

pub fn print_matrix(m: &ComplexMatrix, encoding: Encoding) -> String {
    match encoding {
        Encoding::Json => to_json(m),
        Encoding::Grid => to_grid(m),
    }
}

/// The JSON shape of a matrix, for embedding in machine-readable reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson {
            n: m.dim(),
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tokens() {
        assert_eq!(parse_token("1.5-0.25j"), Some(c(1.5, -0.25)));
        assert_eq!(parse_token("-2"), Some(c(-2.0, 0.0)));
        assert_eq!(parse_token("3j"), Some(c(0.0, 3.0)));
        assert_eq!(parse_token("-1e-3+2E+4j"), Some(c(-1e-3, 2e4)));
        assert_eq!(parse_token("1e5i"), Some(c(0.0, 1e5)));
        assert_eq!(parse_token("inf"), None);
        assert_eq!(parse_token("1e400"), None);
        assert_eq!(parse_token("nan+1j"), None);
        assert_eq!(parse_token("j"), None);
        assert_eq!(parse_token("1+"), None);
    }

    #[test]
    fn negative_zero_survives() {
        let z = c(-0.0, -0.0);
        let back = parse_token(&token(z)).unwrap();
        assert!(back.re.is_sign_negative() && back.im.is_sign_negative());
    }

    #[test]
    fn grid_error_positions() {
        let err = parse_matrix(b"1 0\n0  x1\n").unwrap_err();
        assert_eq!(
            err,
            FormatError::Parse {
                line: 2,
                column: 4,
                message: "invalid entry `x1`".into()
            }
        );
    }

    #[test]
    fn json_error_positions() {
        match parse_matrix(b"{\"n\": 1,\n \"data\": [[1, 0]]\n").unwrap_err() {
            FormatError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn position_counts_from_line_start() {
        assert_eq!(position(b"ab\ncd", 4), (2, 2));
        assert_eq!(position(b"ab", 0), (1, 1));
    }
}
