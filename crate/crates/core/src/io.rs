//! Text formats.
//!
//! `.asc` (scheme): first line `n r`, then `n` lines of `n` space-separated
//! colors. `.perm` (group): first line `n g`, then `g` lines of `n`
//! space-separated 0-based images. Writers use LF endings and no trailing
//! whitespace.

use std::fmt::Write as _;

use thiserror::Error;

use crate::groups::{GroupError, PermGroup, Permutation};
use crate::scheme::{Scheme, SchemeError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Reads the header and `rows` lines of `width` integers each.
fn read_table(text: &str, width_from_header: bool) -> Result<(usize, usize, Vec<Vec<usize>>), FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(hl + 1, format!("bad integer {t:?}"))))
        .collect::<Result<_, _>>()?;
    let [n, second] = nums[..] else {
        return Err(parse_err(hl + 1, "header must be two integers"));
    };
    let rows = if width_from_header { n } else { second };
    let mut table = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(hl + 2 + table.len(), "unexpected end of file"))?;
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(ln + 1, format!("bad integer {t:?}"))))
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(parse_err(ln + 1, format!("expected {n} entries, found {}", row.len())));
        }
        table.push(row);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln + 1, "trailing data"));
    }
    Ok((n, second, table))
}

/// Parses an `.asc` file into `(n, r, cells)` without validating axioms.
pub fn parse_asc(text: &str) -> Result<(usize, usize, Vec<u32>), FormatError> {
    let (n, r, table) = read_table(text, true)?;
    if n == 0 {
        return Err(parse_err(1, "n must be positive"));
    }
    let mut cells = Vec::with_capacity(n * n);
    for (i, row) in table.iter().enumerate() {
        for &c in row {
            if c >= r {
                return Err(parse_err(i + 2, format!("color {c} outside 0..{r}")));
            }
            cells.push(c as u32);
        }
    }
    Ok((n, r, cells))
}

/// Parses and validates an `.asc` file. The dual map is derived from the
/// matrix; a non-function transpose is a `DualViolation`.
pub fn read_asc(text: &str) -> Result<Scheme, FormatError> {
    let (n, r, cells) = parse_asc(text)?;
    let mut dual: Vec<Option<usize>> = vec![None; r];
    for x in 0..n {
        for y in 0..n {
            let c = cells[x * n + y] as usize;
            let tc = cells[y * n + x] as usize;
            match dual[c] {
                None => dual[c] = Some(tc),
                Some(d) if d != tc => {
                    return Err(SchemeError::DualViolation {
                        x,
                        y,
                        color: c,
                        transposed: tc,
                        expected: d,
                    }
                    .into())
                }
                _ => {}
            }
        }
    }
    if let Some(c) = dual.iter().position(Option::is_none) {
        return Err(SchemeError::UnusedColor(c).into());
    }
    let dual = dual.into_iter().map(Option::unwrap).collect();
    Ok(Scheme::validate(n, r, cells, dual)?)
}

pub fn write_asc(scheme: &Scheme) -> String {
    let n = scheme.n();
    let mut out = String::with_capacity(n * n * 3 + 16);
    writeln!(out, "{} {}", n, scheme.rank()).unwrap();
    for x in 0..n {
        let row: Vec<String> = scheme.colors().row(x).iter().map(u32::to_string).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn read_perm(text: &str) -> Result<PermGroup, FormatError> {
    let (n, _, table) = read_table(text, false)?;
    let gens = table
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PermGroup::new(n, gens)?)
}

pub fn write_perm(group: &PermGroup) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", group.degree(), group.generators().len()).unwrap();
    for g in group.generators() {
        let row: Vec<String> = g.images().iter().map(usize::to_string).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}
