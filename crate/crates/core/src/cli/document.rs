//! Line-oriented text format for weighted IFSs.
//!
//! ```text
//! # comment
//! name: cantor
//! basis: s2=1.41421356237309504880, s3=1.73205080756887729352
//! map: r=1/3 b=0 p=1/2
//! map: r=1/3 b=2/3 p=1/2
//! ```
//!
//! Full-line comments are kept and printed first. `r` and `b` take ℚ-span
//! numbers over the declared basis, `p` a rational.

use std::fmt;
use std::sync::Arc;

use num::BigRational;
use thiserror::Error;

use crate::algebraic::{format_rational, parse_number, parse_rational, AlgebraicError, BasisContext};
use crate::ifs_core::{IfsError, Similitude, WeightedIFS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid system: {0}")]
    Invariant(#[from] IfsError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> DocumentError {
    DocumentError::Syntax { line, column, message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfsDocument {
    pub name: Option<String>,
    pub comments: Vec<String>,
    pub ifs: WeightedIFS,
}

impl IfsDocument {
    pub fn new(name: Option<String>, ifs: WeightedIFS) -> Self {
        Self { name, comments: Vec::new(), ifs }
    }

    pub fn ctx(&self) -> &Arc<BasisContext> {
        self.ifs.ctx()
    }
}

/// Column (1-based, in characters) of byte offset `at` in `line`.
fn column(line: &str, at: usize) -> usize {
    line[..at].chars().count() + 1
}

/// Splits `r=... b=... p=...` into its three values with their byte offsets.
fn map_fields(body: &str, offset: usize, line_no: usize, line: &str) -> Result<[(String, usize); 3], DocumentError> {
    let bytes = body.as_bytes();
    let mut keys = Vec::new();
    for i in 0..bytes.len().saturating_sub(1) {
        let at_start = i == 0 || bytes[i - 1].is_ascii_whitespace();
        if at_start && matches!(bytes[i], b'r' | b'b' | b'p') && bytes[i + 1] == b'=' {
            keys.push((bytes[i], i));
        }
    }
    let mut out: [Option<(String, usize)>; 3] = [None, None, None];
    for (k, &(key, start)) in keys.iter().enumerate() {
        let end = keys.get(k + 1).map_or(body.len(), |&(_, e)| e);
        let slot = match key {
            b'r' => 0,
            b'b' => 1,
            _ => 2,
        };
        if out[slot].is_some() {
            return Err(syntax(line_no, column(line, offset + start), format!("duplicate field `{}`", key as char)));
        }
        let raw = &body[start + 2..end];
        let lead = raw.len() - raw.trim_start().len();
        out[slot] = Some((raw.trim().to_string(), offset + start + 2 + lead));
    }
    if let Some(&(_, first)) = keys.first() {
        if !body[..first].trim().is_empty() {
            return Err(syntax(line_no, column(line, offset), "expected `r=`, `b=` or `p=`"));
        }
    }
    let missing = ["r", "b", "p"].iter().zip(&out).find(|(_, v)| v.is_none()).map(|(k, _)| *k);
    if let Some(k) = missing {
        return Err(syntax(line_no, column(line, line.len()), format!("missing field `{k}=`")));
    }
    Ok(out.map(|v| v.expect("checked")))
}

fn lift(line: usize, col: usize, e: AlgebraicError) -> DocumentError {
    match e {
        AlgebraicError::Parse { column, message } => syntax(line, col + column - 1, message),
        other => syntax(line, col, other.to_string()),
    }
}

fn parse_basis(body: &str, offset: usize, line_no: usize, line: &str) -> Result<Arc<BasisContext>, DocumentError> {
    let mut decls = Vec::new();
    let mut pos = offset;
    for part in body.split(',') {
        let lead = part.len() - part.trim_start().len();
        let col = column(line, pos + lead);
        let Some((name, value)) = part.trim().split_once('=') else {
            return Err(syntax(line_no, col, "expected `<name>=<decimal>`"));
        };
        decls.push((name.trim().to_string(), value.trim().to_string()));
        pos += part.len() + 1;
    }
    BasisContext::with_symbols(&decls).map_err(|e| syntax(line_no, column(line, offset), e.to_string()))
}

/// Parses a document; the basis line may appear anywhere.
pub fn parse_document(text: &str) -> Result<IfsDocument, DocumentError> {
    let mut name = None;
    let mut comments = Vec::new();
    let mut basis: Option<(usize, &str)> = None;
    let mut map_lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.strip_prefix(' ').unwrap_or(c).trim_end().to_string());
            continue;
        }
        let Some((key, _)) = trimmed.split_once(':') else {
            return Err(syntax(no, column(line, line.len() - line.trim_start().len()), "expected `name:`, `basis:` or `map:`"));
        };
        match key.trim() {
            "name" => {
                if name.is_some() {
                    return Err(syntax(no, 1, "duplicate `name:` line"));
                }
                let v = trimmed.split_once(':').expect("has colon").1.trim();
                name = Some(v.to_string());
            }
            "basis" => {
                if basis.is_some() {
                    return Err(syntax(no, 1, "duplicate `basis:` line"));
                }
                basis = Some((no, line));
            }
            "map" => map_lines.push((no, line)),
            other => {
                let col = column(line, line.find(other).unwrap_or(0));
                return Err(syntax(no, col, format!("unknown key `{other}`")));
            }
        }
    }
    let ctx = match basis {
        Some((no, line)) => {
            let offset = line.find(':').expect("has colon") + 1;
            parse_basis(&line[offset..], offset, no, line)?
        }
        None => BasisContext::rational(),
    };
    let mut maps = Vec::new();
    let mut weights: Vec<BigRational> = Vec::new();
    for (no, line) in map_lines {
        let offset = line.find(':').expect("has colon") + 1;
        let [(r, rc), (b, bc), (p, pc)] = map_fields(&line[offset..], offset, no, line)?;
        let (rc, bc, pc) = (column(line, rc), column(line, bc), column(line, pc));
        let r = parse_number(&r, &ctx).map_err(|e| lift(no, rc, e))?;
        let b = parse_number(&b, &ctx).map_err(|e| lift(no, bc, e))?;
        let p = parse_rational(&p).map_err(|e| lift(no, pc, e))?;
        maps.push(Similitude::new(r, b).map_err(|e| match e {
            IfsError::Algebraic(a) => lift(no, rc, a),
            other => syntax(no, rc, other.to_string()),
        })?);
        weights.push(p);
    }
    let ifs = WeightedIFS::new(maps, weights)?;
    Ok(IfsDocument { name, comments, ifs })
}

impl fmt::Display for IfsDocument {
    /// Canonical form: comments, name, basis, maps.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.comments {
            if c.is_empty() {
                writeln!(f, "#")?;
            } else {
                writeln!(f, "# {c}")?;
            }
        }
        if let Some(n) = &self.name {
            writeln!(f, "name: {n}")?;
        }
        let decls = self.ctx().declarations();
        if !decls.is_empty() {
            let parts: Vec<String> = decls.iter().map(|(n, d)| format!("{n}={d}")).collect();
            writeln!(f, "basis: {}", parts.join(", "))?;
        }
        for (m, p) in self.ifs.maps().iter().zip(self.ifs.weights()) {
            writeln!(f, "map: r={} b={} p={}", m.ratio(), m.translation(), format_rational(p))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_document() {
        let d = parse_document("map: r=1/3 b=0 p=1/2\nmap: r=1/3 b=2/3 p=1/2").unwrap();
        let c = WeightedIFS::rational(&[((1, 3), (0, 1), (1, 2)), ((1, 3), (2, 3), (1, 2))]).unwrap();
        assert_eq!(d.ifs, c);
        assert_eq!(d.to_string(), "map: r=1/3 b=0 p=1/2\nmap: r=1/3 b=2/3 p=1/2\n");
    }

    #[test]
    fn irrational_document() {
        let text = "basis: s2=1.41421356237309504880168872420969807857\nmap: r=1/2 b=1*s2 p=1/2\nmap: r=1/2 b=0 p=1/2";
        let d = parse_document(text).unwrap();
        assert_eq!(d.ctx().dim(), 2);
        assert_eq!(d.ifs.maps()[0].translation().to_string(), "1*s2");
        assert_eq!(parse_document(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn spaced_numbers_and_comments() {
        let text = "# a comment\nname: spaced\nbasis: s2=1.41421356237309504880\nmap: p=1/2 r=1/4 b=1/2 + 1*s2\nmap: r=1/4 b=0 p=1/2\n";
        let d = parse_document(text).unwrap();
        assert_eq!(d.name.as_deref(), Some("spaced"));
        assert_eq!(d.comments, vec!["a comment".to_string()]);
        let printed = d.to_string();
        assert!(printed.contains("map: r=1/4 b=1/2+1*s2 p=1/2"));
        assert_eq!(parse_document(&printed).unwrap(), d);
    }

    #[test]
    fn errors() {
        let e = parse_document("map: r=1/3 b=0 p=1/2\nmap: r=1/3 b=2/3 p=2/5").unwrap_err();
        assert!(matches!(&e, DocumentError::Invariant(IfsError::WeightSum(_))), "{e}");
        assert!(e.to_string().contains("weights sum to 9/10"));
        let e = parse_document("map: r=1/3 b=0 p=1/2\nmap: r=1/3 b=0 p=1/2").unwrap_err();
        assert!(matches!(e, DocumentError::Invariant(IfsError::DuplicateMap(..))));
        let e = parse_document("map: r=1/3 b=0 p=1/2\nmap: r=1/3 b=2/x p=1/2").unwrap_err();
        assert_eq!(e, syntax(2, 16, "expected denominator digits"));
        let e = parse_document("map: r=1/3 b=0\n").unwrap_err();
        assert!(matches!(e, DocumentError::Syntax { line: 1, message, .. } if message.contains("`p=`")));
        let e = parse_document("map: r=1/3 b=s9 p=1/2\nmap: r=1/3 b=0 p=1/2").unwrap_err();
        assert!(matches!(e, DocumentError::Syntax { line: 1, column: 14, .. }), "{e:?}");
        assert!(matches!(parse_document("mop: x").unwrap_err(), DocumentError::Syntax { line: 1, column: 1, .. }));
        assert!(matches!(parse_document("map: r=2 b=0 p=1/2\nmap: r=1/3 b=0 p=1/2").unwrap_err(), DocumentError::Syntax { .. }));
    }
}
