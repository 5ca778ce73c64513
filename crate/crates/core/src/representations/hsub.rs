use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::digraph::{parse_graph_block, Digraph, UndirectedGraph};
use crate::error::{Error, Result};
use crate::text::{self, format_node_list, parse_node_list, Line, FORMAT_VERSION};

/// A subdivision `F` of a host graph `H`.
///
/// Node numbering is canonical: the host vertices come first (`0..|V(H)|`),
/// then the subdivision nodes of each host edge in edge order, each edge's
/// nodes listed from its lower endpoint towards its upper endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSubdivision {
    host: UndirectedGraph,
    counts: Vec<usize>,
    f: UndirectedGraph,
    // For subdivision node `h + i`: (edge index, position along the edge).
    owner: Vec<(usize, usize)>,
}

impl HSubdivision {
    /// `counts[e]` subdivision nodes on host edge `e` (edges in sorted order).
    pub fn new(host: UndirectedGraph, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != host.edge_count() {
            return Err(Error::InvalidRepresentation(format!(
                "{} subdivision counts for {} host edges",
                counts.len(),
                host.edge_count()
            )));
        }
        let h = host.n();
        let mut owner = Vec::new();
        let mut f_edges = Vec::new();
        for (e, &(u, v)) in host.edges().iter().enumerate() {
            let mut prev = u;
            for k in 0..counts[e] {
                let id = h + owner.len();
                owner.push((e, k));
                f_edges.push((prev, id));
                prev = id;
            }
            f_edges.push((prev, v));
        }
        let f = UndirectedGraph::new(h + owner.len(), f_edges)?;
        Ok(HSubdivision { host, counts, f, owner })
    }

    pub fn unsubdivided(host: UndirectedGraph) -> Self {
        let m = host.edge_count();
        Self::new(host, vec![0; m]).expect("valid counts")
    }

    pub fn host(&self) -> &UndirectedGraph {
        &self.host
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// The subdivided graph.
    pub fn graph(&self) -> &UndirectedGraph {
        &self.f
    }

    pub fn node_count(&self) -> usize {
        self.f.n()
    }

    /// Nodes that correspond to host vertices.
    pub fn is_branching(&self, x: usize) -> bool {
        x < self.host.n()
    }

    fn edge_offset(&self, e: usize) -> usize {
        self.host.n() + self.counts[..e].iter().sum::<usize>()
    }

    /// The path replacing host edge `e`, endpoints included.
    pub fn edge_path(&self, e: usize) -> Vec<usize> {
        let (u, v) = self.host.edges()[e];
        let off = self.edge_offset(e);
        std::iter::once(u).chain(off..off + self.counts[e]).chain(std::iter::once(v)).collect()
    }

    /// Subdivides the `F`-edge `{x, y}` once. Returns the new subdivision,
    /// the id of the inserted node `z`; every old id `≥ z` moves up by one.
    pub fn subdivide(&self, x: usize, y: usize) -> Result<(HSubdivision, usize)> {
        if !self.f.has_edge(x, y) {
            return Err(Error::InvalidArgument(format!("{{{x}, {y}}} is not an edge of the subdivision")));
        }
        let h = self.host.n();
        let e = if let Some(&(e, _)) = [x, y].iter().filter(|&&a| a >= h).map(|&a| &self.owner[a - h]).next() {
            e
        } else {
            let key = (x.min(y), x.max(y));
            self.host.edges().binary_search(&key).map_err(|_| Error::Internal("host edge lookup".into()))?
        };
        let path = self.edge_path(e);
        let i = path.windows(2).position(|w| (w[0] == x && w[1] == y) || (w[0] == y && w[1] == x)).expect("edge on path");
        // The new node sits between path positions i and i + 1, i.e. at
        // position i along the edge's subdivision nodes.
        let z = self.edge_offset(e) + i;
        let mut counts = self.counts.clone();
        counts[e] += 1;
        Ok((HSubdivision::new(self.host.clone(), counts)?, z))
    }

    /// Nonempty, in range, and connected in `F`.
    pub fn check_connected(&self, set: &[usize]) -> std::result::Result<(), String> {
        let size = self.node_count();
        if let Some(&x) = set.iter().find(|&&x| x >= size) {
            return Err(format!("node {x} outside the subdivision ({size} nodes)"));
        }
        let Some(&start) = set.first() else { return Ok(()) };
        let members = BitSet::from_iter_with_capacity(size, set.iter().copied());
        let mut seen = BitSet::new(size);
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in self.f.neighbors(x) {
                if members.contains(y) && !seen.contains(y) {
                    seen.insert(y);
                    queue.push_back(y);
                }
            }
        }
        if seen.len() == members.len() {
            Ok(())
        } else {
            Err("does not induce a connected subgraph".into())
        }
    }

    fn block_text(&self) -> String {
        let mut out = self.host.block_text();
        for (e, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                let _ = writeln!(out, "sub {e} {c}");
            }
        }
        out
    }

    /// Reads the `graph`/`e`/`sub` lines at the front of `lines`, returning
    /// the subdivision and the remaining lines.
    fn parse_block<'a, 'b>(lines: &'b [Line<'a>]) -> Result<(HSubdivision, &'b [Line<'a>])> {
        let graph_end = 1 + lines.iter().skip(1).take_while(|l| l.keyword() == "e").count();
        let (h, edges) = parse_graph_block(&lines[..graph_end.min(lines.len())], "graph")?;
        let host = UndirectedGraph::new(h, edges).map_err(|e| Error::Parse { line: lines[0].no, msg: e.to_string() })?;
        let mut counts = vec![0; host.edge_count()];
        let mut rest = &lines[graph_end.min(lines.len())..];
        while let Some(l) = rest.first().filter(|l| l.keyword() == "sub") {
            l.expect_len(3)?;
            let e = l.usize_at(1)?;
            if e >= counts.len() {
                return Err(l.err(format!("edge index {e} out of range")));
            }
            counts[e] = l.usize_at(2)?;
            rest = &rest[1..];
        }
        Ok((HSubdivision::new(host, counts)?, rest))
    }
}

fn normalise_set(mut s: Vec<usize>) -> Vec<usize> {
    s.sort_unstable();
    s.dedup();
    s
}

fn intersects(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn first_common(a: &[usize], b: &[usize]) -> Option<usize> {
    a.iter().copied().find(|x| b.binary_search(x).is_ok())
}

fn split_prefixed<'a>(l: &Line<'a>, tok: &'a str, prefix: &str) -> Result<Vec<usize>> {
    let body = tok.strip_prefix(prefix).ok_or_else(|| l.err(format!("expected `{prefix}<nodes>`")))?;
    parse_node_list(body, l.no)
}

/// Result of the anchor-normalisation pass shared by the H-digraph and
/// H-convex builders.
pub(crate) struct Normalised {
    pub sub: HSubdivision,
    pub sets: Vec<Vec<usize>>,
    pub anchors: Vec<usize>,
    /// Final id of every node of the input subdivision.
    pub origin: Vec<usize>,
}

/// Picks an anchor in `sets[p.0] ∩ sets[p.1]` for each pair `p`, subdividing
/// until anchors are pairwise distinct and non-branching. A host vertex with
/// no incident edge cannot be moved off; such anchors are left shared.
pub(crate) fn normalise_anchors(
    sub: &HSubdivision,
    mut sets: Vec<Vec<usize>>,
    pairs: &[(usize, usize)],
) -> Result<Normalised> {
    let mut sub = sub.clone();
    let mut origin: Vec<usize> = (0..sub.node_count()).collect();
    let mut anchors: Vec<usize> = Vec::with_capacity(pairs.len());
    let mut used = vec![false; sub.node_count()];
    for (v, &(si, ti)) in pairs.iter().enumerate() {
        let Some(alpha) = first_common(&sets[si], &sets[ti]) else {
            return Err(Error::NotReflexive(v));
        };
        let movable = sub.graph().degree(alpha) > 0;
        if !movable || !(sub.is_branching(alpha) || used[alpha]) {
            used[alpha] = true;
            anchors.push(alpha);
            continue;
        }
        let y = sub.graph().neighbors(alpha)[0];
        let (next, z) = sub.subdivide(alpha, y)?;
        let shift = |x: usize| if x >= z { x + 1 } else { x };
        let (alpha, y) = (shift(alpha), shift(y));
        for x in origin.iter_mut().chain(anchors.iter_mut()) {
            *x = shift(*x);
        }
        for s in sets.iter_mut() {
            for x in s.iter_mut() {
                *x = shift(*x);
            }
            if s.binary_search(&alpha).is_ok() && s.binary_search(&y).is_ok() {
                let at = s.partition_point(|&x| x < z);
                s.insert(at, z);
            }
        }
        for idx in [si, ti] {
            if let Err(at) = sets[idx].binary_search(&z) {
                sets[idx].insert(at, z);
            }
        }
        used.insert(z, true);
        anchors.push(z);
        sub = next;
    }
    Ok(Normalised { sub, sets, anchors, origin })
}

/// Pairs of connected node sets `(S_v, T_v)` in a subdivision of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HDigraphRep {
    sub: HSubdivision,
    s: Vec<Vec<usize>>,
    t: Vec<Vec<usize>>,
}

/// A representation whose anchors are distinct non-branching nodes, plus
/// those anchors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedHDigraph {
    pub rep: HDigraphRep,
    pub anchors: Vec<usize>,
}

impl HDigraphRep {
    pub fn new(sub: HSubdivision, s: Vec<Vec<usize>>, t: Vec<Vec<usize>>) -> Result<Self> {
        if s.len() != t.len() {
            return Err(Error::InvalidRepresentation("source and target lists differ in length".into()));
        }
        let s: Vec<_> = s.into_iter().map(normalise_set).collect();
        let t: Vec<_> = t.into_iter().map(normalise_set).collect();
        for v in 0..s.len() {
            for (name, set) in [("S", &s[v]), ("T", &t[v])] {
                if set.is_empty() {
                    return Err(Error::InvalidRepresentation(format!("{name}_{v} is empty")));
                }
                sub.check_connected(set).map_err(|m| Error::InvalidRepresentation(format!("{name}_{v}: {m}")))?;
            }
        }
        Ok(HDigraphRep { sub, s, t })
    }

    pub fn subdivision(&self) -> &HSubdivision {
        &self.sub
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn source(&self, v: usize) -> &[usize] {
        &self.s[v]
    }

    pub fn target(&self, v: usize) -> &[usize] {
        &self.t[v]
    }

    pub fn realize(&self) -> Result<Digraph> {
        let n = self.len();
        let edges = (0..n).flat_map(|v| (0..n).map(move |w| (v, w))).filter(|&(v, w)| intersects(&self.s[v], &self.t[w]));
        Digraph::new(n, edges)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|v| intersects(&self.s[v], &self.t[v]))
    }

    /// Same digraph on a further subdivision, with distinct non-branching
    /// anchors `α_v ∈ S_v ∩ T_v` (except on isolated host vertices).
    pub fn normalize(&self) -> Result<NormalizedHDigraph> {
        let n = self.len();
        let sets: Vec<Vec<usize>> = self.s.iter().chain(&self.t).cloned().collect();
        let pairs: Vec<(usize, usize)> = (0..n).map(|v| (v, n + v)).collect();
        let mut out = normalise_anchors(&self.sub, sets, &pairs)?;
        let t = out.sets.split_off(n);
        let rep = HDigraphRep { sub: out.sub, s: out.sets, t };
        Ok(NormalizedHDigraph { rep, anchors: out.anchors })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {FORMAT_VERSION}\nhdigraph\n{}", self.sub.block_text());
        for (a, b) in self.s.iter().zip(&self.t) {
            let _ = writeln!(out, "v S:{} T:{}", format_node_list(a), format_node_list(b));
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let first = lines.first().ok_or(Error::Parse { line: 0, msg: "missing `hdigraph` header".into() })?;
        if first.keyword() != "hdigraph" {
            return Err(first.err("expected `hdigraph` header"));
        }
        first.expect_len(1)?;
        let (sub, rest) = HSubdivision::parse_block(&lines[1..])?;
        let (mut s, mut t) = (Vec::new(), Vec::new());
        for l in rest {
            if l.keyword() != "v" {
                return Err(l.err(format!("unexpected `{}` line", l.keyword())));
            }
            l.expect_len(3)?;
            s.push(split_prefixed(l, l.tokens[1], "S:")?);
            t.push(split_prefixed(l, l.tokens[2], "T:")?);
        }
        Self::new(sub, s, t)
    }
}

/// Free function form of [`HDigraphRep::normalize`].
pub fn normalize_hdigraph(rep: &HDigraphRep) -> Result<NormalizedHDigraph> {
    rep.normalize()
}

/// Bipartite digraph between the nodes `A = V(F)` and a set `B`; each
/// `b ∈ B` has a connected out-set and a connected in-set in `F`.
///
/// Realised ids: `a ∈ A` keeps its node id, `b` becomes `|V(F)| + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HConvexRep {
    sub: HSubdivision,
    out_sets: Vec<Vec<usize>>,
    in_sets: Vec<Vec<usize>>,
}

impl HConvexRep {
    pub fn new(sub: HSubdivision, out_sets: Vec<Vec<usize>>, in_sets: Vec<Vec<usize>>) -> Result<Self> {
        if out_sets.len() != in_sets.len() {
            return Err(Error::InvalidRepresentation("out and in lists differ in length".into()));
        }
        let out_sets: Vec<_> = out_sets.into_iter().map(normalise_set).collect();
        let in_sets: Vec<_> = in_sets.into_iter().map(normalise_set).collect();
        for b in 0..out_sets.len() {
            for (name, set) in [("out", &out_sets[b]), ("in", &in_sets[b])] {
                sub.check_connected(set).map_err(|m| Error::InvalidRepresentation(format!("{name}-set of b{b}: {m}")))?;
            }
        }
        Ok(HConvexRep { sub, out_sets, in_sets })
    }

    pub fn subdivision(&self) -> &HSubdivision {
        &self.sub
    }

    pub fn a_count(&self) -> usize {
        self.sub.node_count()
    }

    pub fn b_count(&self) -> usize {
        self.out_sets.len()
    }

    pub fn out_set(&self, b: usize) -> &[usize] {
        &self.out_sets[b]
    }

    pub fn in_set(&self, b: usize) -> &[usize] {
        &self.in_sets[b]
    }

    pub fn realize(&self) -> Result<Digraph> {
        let a = self.a_count();
        let mut edges = Vec::new();
        for b in 0..self.b_count() {
            edges.extend(self.out_sets[b].iter().map(|&x| (a + b, x)));
            edges.extend(self.in_sets[b].iter().map(|&x| (x, a + b)));
        }
        Digraph::new(a + self.b_count(), edges)
    }

    /// First `b` without a bi-directed edge to `A`, if any.
    pub fn first_not_nice(&self) -> Option<usize> {
        (0..self.b_count()).find(|&b| !intersects(&self.out_sets[b], &self.in_sets[b]))
    }

    pub fn is_nice(&self) -> bool {
        self.first_not_nice().is_none()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {FORMAT_VERSION}\nhconvex\n{}", self.sub.block_text());
        for (a, b) in self.out_sets.iter().zip(&self.in_sets) {
            let _ = writeln!(out, "b out:{} in:{}", format_node_list(a), format_node_list(b));
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let first = lines.first().ok_or(Error::Parse { line: 0, msg: "missing `hconvex` header".into() })?;
        if first.keyword() != "hconvex" {
            return Err(first.err("expected `hconvex` header"));
        }
        first.expect_len(1)?;
        let (sub, rest) = HSubdivision::parse_block(&lines[1..])?;
        let (mut outs, mut ins) = (Vec::new(), Vec::new());
        for l in rest {
            if l.keyword() != "b" {
                return Err(l.err(format!("unexpected `{}` line", l.keyword())));
            }
            l.expect_len(3)?;
            outs.push(split_prefixed(l, l.tokens[1], "out:")?);
            ins.push(split_prefixed(l, l.tokens[2], "in:")?);
        }
        Self::new(sub, outs, ins)
    }
}
