//! Plain-text family and Steiner block files.
//!
//! Family file:
//!
//! ```text
//! # comment
//! n=5
//! 1 2 3
//! empty
//! ```
//!
//! The first non-comment line is the header; each following non-empty line
//! is one set of 1-based labels, with the literal `empty` for ∅. Steiner
//! block files use the header `n=<n> k=<k> t=<t>` and one block per line.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::BitSubset;
use crate::setfamily::SetFamily;

fn parse_error(path: Option<&Path>, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.map(Path::to_path_buf),
        line,
        message: message.into(),
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(
    line: &str,
    keys: &[&str],
    path: Option<&Path>,
    lineno: usize,
) -> Result<Vec<usize>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != keys.len() {
        return Err(parse_error(
            path,
            lineno,
            format!(
                "expected header `{}`",
                keys.iter()
                    .map(|k| format!("{k}=<int>"))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        ));
    }
    fields
        .iter()
        .zip(keys)
        .map(|(field, key)| {
            field
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| {
                    parse_error(
                        path,
                        lineno,
                        format!("bad header field `{field}`, expected `{key}=<int>`"),
                    )
                })
        })
        .collect()
}

fn parse_set(line: &str, n: usize, path: Option<&Path>, lineno: usize) -> Result<BitSubset> {
    if line == "empty" {
        return Ok(BitSubset::empty(n));
    }
    let labels = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_error(path, lineno, format!("bad element `{tok}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    BitSubset::from_labels(n, &labels).map_err(|e| parse_error(path, lineno, e.to_string()))
}

fn parse_sets<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    n: usize,
    path: Option<&Path>,
) -> Result<SetFamily> {
    let mut fam = SetFamily::empty(n)?;
    for (lineno, line) in lines {
        let set = parse_set(line, n, path, lineno)?;
        fam.push(set)
            .map_err(|e| parse_error(path, lineno, e.to_string()))?;
    }
    Ok(fam)
}

/// Parses a family file. `path` is only used in error messages.
pub fn parse_family(text: &str, path: Option<&Path>) -> Result<SetFamily> {
    let mut lines = content_lines(text);
    let Some((lineno, header)) = lines.next() else {
        return Err(parse_error(path, 1, "missing `n=<ground_size>` header"));
    };
    let n = parse_header(header, &["n"], path, lineno)?[0];
    if n == 0 {
        return Err(parse_error(path, lineno, "ground size must be at least 1"));
    }
    parse_sets(lines, n, path)
}

pub fn read_family(path: &Path) -> Result<SetFamily> {
    let text = std::fs::read_to_string(path)?;
    parse_family(&text, Some(path))
}

fn write_set(out: &mut String, set: &BitSubset) {
    if set.is_empty() {
        out.push_str("empty");
    } else {
        let labels: Vec<String> = set.labels().iter().map(usize::to_string).collect();
        out.push_str(&labels.join(" "));
    }
    out.push('\n');
}

/// Renders a family file.
pub fn format_family(family: &SetFamily) -> String {
    let mut out = String::new();
    writeln!(out, "n={}", family.ground_size()).unwrap();
    for m in family.members() {
        write_set(&mut out, m);
    }
    out
}

pub fn write_family(path: &Path, family: &SetFamily) -> Result<()> {
    std::fs::write(path, format_family(family))?;
    Ok(())
}

/// Parses a Steiner block file into its declared parameters and blocks,
/// without validating the cover property.
pub fn parse_steiner(text: &str, path: Option<&Path>) -> Result<(usize, usize, usize, SetFamily)> {
    let mut lines = content_lines(text);
    let Some((lineno, header)) = lines.next() else {
        return Err(parse_error(path, 1, "missing `n=<n> k=<k> t=<t>` header"));
    };
    let p = parse_header(header, &["n", "k", "t"], path, lineno)?;
    if p[0] == 0 {
        return Err(parse_error(path, lineno, "ground size must be at least 1"));
    }
    let blocks = parse_sets(lines, p[0], path)?;
    Ok((p[0], p[1], p[2], blocks))
}

pub fn format_steiner(n: usize, k: usize, t: usize, blocks: &SetFamily) -> String {
    let mut out = String::new();
    writeln!(out, "n={n} k={k} t={t}").unwrap();
    for b in blocks.members() {
        write_set(&mut out, b);
    }
    out
}
