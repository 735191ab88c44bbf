//! Plain-text formats.
//!
//! A triangle of size `n` is `n` lines, line `i` holding `i` integers
//! separated by single spaces. A matrix is `n` lines of `n` integers. Several
//! objects in one stream are separated by a single blank line, and output
//! always ends with one newline.

use std::fmt::Display;

use crate::error::{Error, Result};
use crate::triangle::MonotoneTriangle;

/// Splits a stream into blocks of parsed integer rows, with the 1-based line
/// number of each block's first line.
pub fn parse_blocks(text: &str) -> Result<Vec<(usize, Vec<Vec<i64>>)>> {
    let mut blocks = Vec::new();
    let mut current: Vec<Vec<i64>> = Vec::new();
    let mut start = 1;
    let mut blank_run = 0;
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Ok(blocks);
    }
    for (idx, line) in body.split('\n').enumerate() {
        let ln = idx + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            blank_run += 1;
            if blank_run > 1 || current.is_empty() {
                return Err(Error::Parse {
                    line: ln,
                    detail: "objects must be separated by exactly one blank line".into(),
                });
            }
            blocks.push((start, std::mem::take(&mut current)));
            continue;
        }
        if current.is_empty() {
            start = ln;
        }
        blank_run = 0;
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>().map_err(|_| Error::Parse {
                    line: ln,
                    detail: format!("not an integer: {tok:?}"),
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        current.push(row);
    }
    if current.is_empty() {
        return Err(Error::Parse {
            line: body.split('\n').count(),
            detail: "trailing blank line".into(),
        });
    }
    blocks.push((start, current));
    Ok(blocks)
}

pub fn parse_triangles(text: &str) -> Result<Vec<MonotoneTriangle>> {
    parse_blocks(text)?
        .into_iter()
        .map(|(_, rows)| MonotoneTriangle::from_rows(&rows))
        .collect()
}

/// Matrices as raw integer rows; validation is left to the matrix types.
pub fn parse_matrices(text: &str) -> Result<Vec<Vec<Vec<i64>>>> {
    Ok(parse_blocks(text)?
        .into_iter()
        .map(|(_, rows)| rows)
        .collect())
}

/// Joins displayed objects with blank lines and a final newline.
pub fn format_all<T: Display>(items: &[T]) -> String {
    let mut s = String::new();
    for (k, item) in items.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        s.push_str(&item.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::enumerate_triangles;

    #[test]
    fn round_trip() {
        let all: Vec<_> = enumerate_triangles(4).unwrap().collect();
        let text = format_all(&all);
        assert!(text.ends_with("1 2 3 4\n"));
        assert!(!text.ends_with("\n\n"));
        assert_eq!(parse_triangles(&text).unwrap(), all);
    }

    #[test]
    fn exact_bytes() {
        let ts = parse_triangles("1\n1 2\n\n2\n1 2\n").unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(format_all(&ts), "1\n1 2\n\n2\n1 2\n");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_triangles("1\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_triangles("1\n1 2\n\n\n1\n1 2\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(parse_triangles("1\n1 2\n\n").is_err());
        assert!(matches!(
            parse_triangles("2\n2 1\n"),
            Err(Error::BadBottomRow { col: 1 })
        ));
        assert!(parse_triangles("").unwrap().is_empty());
    }
}
