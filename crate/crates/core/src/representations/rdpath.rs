use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::text::{self, FORMAT_VERSION};

/// Directed paths in a rooted out-tree. Each path is `(top, bottom)` with
/// `bottom` a descendant of (or equal to) `top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedDirPathRep {
    parent: Vec<Option<usize>>,
    root: usize,
    s: Vec<[usize; 2]>,
    t: Vec<[usize; 2]>,
    // Euler-tour entry/exit times for O(1) ancestor tests.
    tin: Vec<usize>,
    tout: Vec<usize>,
}

impl RootedDirPathRep {
    pub fn new(parent: Vec<Option<usize>>, root: usize, s: Vec<[usize; 2]>, t: Vec<[usize; 2]>) -> Result<Self> {
        let size = parent.len();
        let bad = |m: String| Error::InvalidRepresentation(m);
        if root >= size {
            return Err(bad(format!("root {root} outside tree with {size} nodes")));
        }
        if parent[root].is_some() {
            return Err(bad("root has a parent".into()));
        }
        let mut children = vec![Vec::new(); size];
        for (x, p) in parent.iter().enumerate() {
            match *p {
                Some(p) if p >= size => return Err(bad(format!("parent {p} of node {x} out of range"))),
                Some(p) => children[p].push(x),
                None if x != root => return Err(bad(format!("node {x} has no parent but is not the root"))),
                None => {}
            }
        }
        let (mut tin, mut tout) = (vec![usize::MAX; size], vec![0; size]);
        let mut clock = 0;
        let mut stack = vec![(root, false)];
        while let Some((x, done)) = stack.pop() {
            if done {
                tout[x] = clock;
                continue;
            }
            tin[x] = clock;
            clock += 1;
            stack.push((x, true));
            for &c in children[x].iter().rev() {
                stack.push((c, false));
            }
        }
        if let Some(x) = tin.iter().position(|&t| t == usize::MAX) {
            return Err(bad(format!("node {x} is not reachable from the root")));
        }
        if s.len() != t.len() {
            return Err(bad("source and target lists differ in length".into()));
        }
        let rep = RootedDirPathRep { parent, root, s, t, tin, tout };
        for v in 0..rep.s.len() {
            for (name, p) in [("S", rep.s[v]), ("T", rep.t[v])] {
                if p[0] >= size || p[1] >= size {
                    return Err(bad(format!("{name}_{v} uses a node outside the tree")));
                }
                if !rep.is_ancestor(p[0], p[1]) {
                    return Err(bad(format!("{name}_{v}: {} is not below {}", p[1], p[0])));
                }
            }
        }
        Ok(rep)
    }

    /// `a` is an ancestor of `b` or equal to it.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        self.tin[a] <= self.tin[b] && self.tout[b] <= self.tout[a]
    }

    fn on_path(&self, x: usize, p: [usize; 2]) -> bool {
        self.is_ancestor(p[0], x) && self.is_ancestor(x, p[1])
    }

    fn paths_meet(&self, a: [usize; 2], b: [usize; 2]) -> bool {
        // Two vertical paths meet iff the deeper top lies on the other path.
        self.on_path(a[0], b) || self.on_path(b[0], a)
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn tree_size(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn source(&self, v: usize) -> [usize; 2] {
        self.s[v]
    }

    pub fn target(&self, v: usize) -> [usize; 2] {
        self.t[v]
    }

    pub fn realize(&self) -> Result<Digraph> {
        let n = self.len();
        let edges =
            (0..n).flat_map(|v| (0..n).map(move |w| (v, w))).filter(|&(v, w)| self.paths_meet(self.s[v], self.t[w]));
        Digraph::new(n, edges)
    }

    /// Both paths of each vertex end at the same node.
    pub fn is_adjusted(&self) -> bool {
        self.s.iter().zip(&self.t).all(|(a, b)| a[1] == b[1])
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {FORMAT_VERSION}\nrdpath {} {}\n", self.tree_size(), self.root);
        for (x, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                let _ = writeln!(out, "tp {x} {p}");
            }
        }
        for (a, b) in self.s.iter().zip(&self.t) {
            let _ = writeln!(out, "v {} {} {} {}", a[0], a[1], b[0], b[1]);
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let first = lines.first().ok_or(Error::Parse { line: 0, msg: "missing `rdpath` header".into() })?;
        if first.keyword() != "rdpath" {
            return Err(first.err("expected `rdpath <nodes> <root>` header"));
        }
        first.expect_len(3)?;
        let size = first.usize_at(1)?;
        let root = first.usize_at(2)?;
        let mut parent = vec![None; size];
        let (mut s, mut t) = (Vec::new(), Vec::new());
        for l in &lines[1..] {
            match l.keyword() {
                "tp" => {
                    l.expect_len(3)?;
                    let x = l.usize_at(1)?;
                    if x >= size {
                        return Err(l.err(format!("node {x} out of range")));
                    }
                    if parent[x].is_some() {
                        return Err(l.err(format!("node {x} given two parents")));
                    }
                    parent[x] = Some(l.usize_at(2)?);
                }
                "v" => {
                    l.expect_len(5)?;
                    s.push([l.usize_at(1)?, l.usize_at(2)?]);
                    t.push([l.usize_at(3)?, l.usize_at(4)?]);
                }
                other => return Err(l.err(format!("unexpected `{other}` line"))),
            }
        }
        Self::new(parent, root, s, t)
    }
}
