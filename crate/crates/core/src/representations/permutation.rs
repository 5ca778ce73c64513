use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::text::{self, FORMAT_VERSION};

/// Segments between two parallel lines. `s[v] = [a, b]` means `S_v` joins
/// coordinate `a` on the first line to `b` on the second; `t[v]` likewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationRep {
    s: Vec<[i64; 2]>,
    t: Vec<[i64; 2]>,
}

/// Closed segments `p–p'` and `q–q'` meet iff `(p − q)(p' − q') ≤ 0`.
fn crosses(a: [i64; 2], b: [i64; 2]) -> bool {
    let d1 = (a[0] - b[0]).signum();
    let d2 = (a[1] - b[1]).signum();
    d1 * d2 <= 0
}

impl PermutationRep {
    pub fn new(s: Vec<[i64; 2]>, t: Vec<[i64; 2]>) -> Result<Self> {
        if s.len() != t.len() {
            return Err(Error::InvalidRepresentation("source and target lists differ in length".into()));
        }
        Ok(PermutationRep { s, t })
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
        let edges = (0..n).flat_map(|v| (0..n).map(move |w| (v, w))).filter(|&(v, w)| crosses(self.s[v], self.t[w]));
        Digraph::new(n, edges)
    }

    /// `S_v` and `T_v` share their endpoint on the first line for every `v`.
    pub fn is_adjusted(&self) -> bool {
        self.s.iter().zip(&self.t).all(|(a, b)| a[0] == b[0])
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {FORMAT_VERSION}\nperm {}\n", self.len());
        for (a, b) in self.s.iter().zip(&self.t) {
            let _ = writeln!(out, "v {} {} {} {}", a[0], a[1], b[0], b[1]);
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let first = lines.first().ok_or(Error::Parse { line: 0, msg: "missing `perm` header".into() })?;
        if first.keyword() != "perm" {
            return Err(first.err("expected `perm <n>` header"));
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representations::{is_reflexive, IntervalRep};

    #[test]
    fn parallel_segments_do_not_meet() {
        let rep = PermutationRep::new(vec![[0, 0], [5, 5]], vec![[1, 1], [6, 6]]).unwrap();
        let g = rep.realize().unwrap();
        assert!(!g.has_edge(0, 1) && !g.has_edge(1, 0));
        let crossing = PermutationRep::new(vec![[0, 5]], vec![[5, 0]]).unwrap();
        assert!(crossing.realize().unwrap().has_loop(0));
    }

    #[test]
    fn adjusted_reps_are_reflexive() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..30 {
            let n = rng.gen_range(1..8);
            let s: Vec<[i64; 2]> = (0..n).map(|_| [rng.gen_range(0..10), rng.gen_range(0..10)]).collect();
            let t: Vec<[i64; 2]> = s.iter().map(|a| [a[0], rng.gen_range(0..10)]).collect();
            let rep = PermutationRep::new(s, t).unwrap();
            assert!(rep.is_adjusted());
            assert!(is_reflexive(&rep.realize().unwrap()));
        }
    }

    #[test]
    fn adjustedness_examples() {
        let ok = PermutationRep::new(vec![[1, 2]], vec![[1, 5]]).unwrap();
        assert!(ok.is_adjusted());
        let bad = PermutationRep::new(vec![[1, 2], [3, 3]], vec![[1, 5], [4, 3]]).unwrap();
        assert!(!bad.is_adjusted());
        let from_interval = IntervalRep::new(vec![[0, 4], [2, 3]], vec![[1, 2], [0, 5]]).unwrap().to_permutation();
        assert!(!from_interval.is_adjusted());
    }

    #[test]
    fn text_round_trip() {
        let rep = PermutationRep::new(vec![[0, 2]], vec![[0, -1]]).unwrap();
        assert_eq!(PermutationRep::from_text(&rep.to_text()).unwrap(), rep);
        assert!(PermutationRep::from_text("perm 1\nv 0 1 2\n").is_err());
    }
}
