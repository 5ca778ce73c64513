use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::representations::PermutationRep;
use crate::text::{self, FORMAT_VERSION};

/// Closed integer intervals `S_v = [s[v][0], s[v][1]]`, `T_v` likewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalRep {
    s: Vec<[i64; 2]>,
    t: Vec<[i64; 2]>,
}

fn meets(a: [i64; 2], b: [i64; 2]) -> bool {
    a[0] <= b[1] && b[0] <= a[1]
}

impl IntervalRep {
    pub fn new(s: Vec<[i64; 2]>, t: Vec<[i64; 2]>) -> Result<Self> {
        if s.len() != t.len() {
            return Err(Error::InvalidRepresentation("source and target lists differ in length".into()));
        }
        for (v, (a, b)) in s.iter().zip(&t).enumerate() {
            if a[0] > a[1] {
                return Err(Error::InvalidRepresentation(format!("S_{v} = [{}, {}] is empty", a[0], a[1])));
            }
            if b[0] > b[1] {
                return Err(Error::InvalidRepresentation(format!("T_{v} = [{}, {}] is empty", b[0], b[1])));
            }
        }
        Ok(IntervalRep { s, t })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn source(&self, v: usize) -> [i64; 2] {
        self.s[v]
    }

    pub fn target(&self, v: usize) -> [i64; 2] {
        self.t[v]
    }

    pub fn realize(&self) -> Result<Digraph> {
        let n = self.len();
        let edges = (0..n).flat_map(|v| (0..n).map(move |w| (v, w))).filter(|&(v, w)| meets(self.s[v], self.t[w]));
        Digraph::new(n, edges)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|v| meets(self.s[v], self.t[v]))
    }

    /// Leftmost point of `S_v ∩ T_v`, when nonempty.
    pub fn anchor(&self, v: usize) -> Option<i64> {
        meets(self.s[v], self.t[v]).then(|| self.s[v][0].max(self.t[v][0]))
    }

    /// Segment representation of the same digraph: `S_v = [a, b]` runs from
    /// `a` on the first line to `b` on the second, `T_v = [c, d]` from `d` on
    /// the first line to `c` on the second.
    pub fn to_permutation(&self) -> PermutationRep {
        PermutationRep::new(
            self.s.iter().map(|&[a, b]| [a, b]).collect(),
            self.t.iter().map(|&[c, d]| [d, c]).collect(),
        )
        .expect("same length")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {FORMAT_VERSION}\nintervals {}\n", self.len());
        for (a, b) in self.s.iter().zip(&self.t) {
            let _ = writeln!(out, "v {} {} {} {}", a[0], a[1], b[0], b[1]);
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let first = lines.first().ok_or(Error::Parse { line: 0, msg: "missing `intervals` header".into() })?;
        if first.keyword() != "intervals" {
            return Err(first.err("expected `intervals <n>` header"));
        }
        first.expect_len(2)?;
        let n = first.usize_at(1)?;
        let (mut s, mut t) = (Vec::new(), Vec::new());
        for l in &lines[1..] {
            if l.keyword() != "v" {
                return Err(l.err(format!("unexpected `{}` line", l.keyword())));
            }
            l.expect_len(5)?;
            s.push([l.i64_at(1)?, l.i64_at(2)?]);
            t.push([l.i64_at(3)?, l.i64_at(4)?]);
        }
        if s.len() != n {
            return Err(first.err(format!("header announces {n} vertices, found {}", s.len())));
        }
        Self::new(s, t)
    }
}
