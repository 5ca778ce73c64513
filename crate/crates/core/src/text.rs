//! Helpers shared by the line-based text formats.

use crate::error::{Error, Result};

/// Version tag written into every emitted file as a comment line.
pub const FORMAT_VERSION: &str = "bimim-format 1";

/// A non-empty, non-comment line split into whitespace-separated tokens.
#[derive(Debug, Clone)]
pub(crate) struct Line<'a> {
    pub no: usize,
    pub tokens: Vec<&'a str>,
}

impl<'a> Line<'a> {
    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.no, msg: msg.into() }
    }

    pub fn keyword(&self) -> &'a str {
        self.tokens[0]
    }

    pub fn expect_len(&self, n: usize) -> Result<()> {
        if self.tokens.len() != n {
            return Err(self.err(format!(
                "`{}` expects {} fields, found {}",
                self.keyword(),
                n - 1,
                self.tokens.len() - 1
            )));
        }
        Ok(())
    }

    pub fn usize_at(&self, i: usize) -> Result<usize> {
        parse_usize(self.tokens.get(i).copied(), self.no)
    }

    pub fn i64_at(&self, i: usize) -> Result<i64> {
        let tok = self.tokens.get(i).ok_or_else(|| self.err("missing integer field"))?;
        tok.parse().map_err(|_| self.err(format!("`{tok}` is not an integer")))
    }
}

pub(crate) fn parse_usize(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or(Error::Parse { line, msg: "missing integer field".into() })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("`{tok}` is not a non-negative integer") })
}

/// Splits `src` into meaningful lines, dropping blanks and `#` comments.
pub(crate) fn lines(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                None
            } else {
                Some(Line { no: i + 1, tokens: l.split_whitespace().collect() })
            }
        })
        .collect()
}

/// Parses a comma-separated list of node indices (`3,4,7`); an empty list is `-`.
pub(crate) fn parse_node_list(s: &str, line: usize) -> Result<Vec<usize>> {
    if s == "-" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| parse_usize(Some(t), line)).collect()
}

pub(crate) fn format_node_list(nodes: &[usize]) -> String {
    if nodes.is_empty() {
        "-".to_string()
    } else {
        nodes.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}
