//! Plain-text facet lists: one facet per line, whitespace-separated vertex
//! labels, `#` starts a comment line.

use std::fmt::Write as _;

use thiserror::Error;

use super::{ComplexError, SimplicialComplex};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: invalid vertex label {token:?}")]
    BadLabel { line: usize, token: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Parses a facet list into a complex. Comment lines are returned separately
/// (without the leading `#`) so callers can reproduce the header.
pub fn parse_facet_list(text: &str) -> Result<(SimplicialComplex, Vec<String>), ParseError> {
    let mut comments = Vec::new();
    let mut facets: Vec<Vec<u32>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            comments.push(c.trim_start().to_string());
            continue;
        }
        let mut facet = Vec::new();
        for tok in t.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| ParseError::BadLabel { line: i + 1, token: tok.to_string() })?;
            facet.push(v);
        }
        facets.push(facet);
    }
    let k = SimplicialComplex::from_labeled_facets(facets)?;
    Ok((k, comments))
}

/// Writes the facets of `k` in external labels, one per line, sorted, preceded
/// by `# comment` lines.
pub fn format_facet_list(k: &SimplicialComplex, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let mut rows = k.labeled_facets();
    for r in &mut rows {
        r.sort_unstable();
    }
    rows.sort();
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_labels() {
        let (k, c) = parse_facet_list("# hello\n1 2 3\n\n2 3 4\n").unwrap();
        assert_eq!(c, vec!["hello".to_string()]);
        assert_eq!(k.f_vector(), vec![4, 5, 2]);
        assert_eq!(format_facet_list(&k, &c), "# hello\n1 2 3\n2 3 4\n");
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_facet_list("1 x 3"), Err(ParseError::BadLabel { line: 1, .. })));
        assert!(parse_facet_list("1 1 3").is_err());
    }
}
