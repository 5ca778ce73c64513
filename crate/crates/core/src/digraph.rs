//! Directed and undirected graph substrate.
//!
//! Vertices are dense indices `0..n`. A [`Digraph`] may carry loops but never
//! parallel edges; both adjacency directions are kept as sorted lists and as
//! bit rows so that membership and neighbourhood counting are cheap.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::bitset::{BitSet, VertexSet};
use crate::error::{Error, Result};
use crate::text::{self, FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Out,
    In,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    out_bits: Vec<BitSet>,
    in_bits: Vec<BitSet>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph").field("n", &self.n).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

impl Digraph {
    /// Builds a digraph; duplicate edges collapse, endpoints must be `< n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            out[u].push(v);
            inn[v].push(u);
        }
        for list in out.iter_mut().chain(inn.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let out_bits = out.iter().map(|l| BitSet::from_iter_with_capacity(n, l.iter().copied())).collect();
        let in_bits = inn.iter().map(|l| BitSet::from_iter_with_capacity(n, l.iter().copied())).collect();
        Ok(Digraph { n, out, inn, out_bits, in_bits })
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, std::iter::empty()).expect("no edges")
    }

    /// `0 → 1 → … → n-1`.
    pub fn directed_path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid")
    }

    /// `0 → 1 → … → n-1 → 0`; for `n == 1` a single loop.
    pub fn directed_cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out_bits[u].contains(v)
    }

    #[inline]
    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// `N⁺(v)` as a bit row.
    #[inline]
    pub fn out_set(&self, v: usize) -> &VertexSet {
        &self.out_bits[v]
    }

    /// `N⁻(v)` as a bit row.
    #[inline]
    pub fn in_set(&self, v: usize) -> &VertexSet {
        &self.in_bits[v]
    }

    pub fn neighbors(&self, v: usize, dir: Direction) -> &[usize] {
        match dir {
            Direction::Out => &self.out[v],
            Direction::In => &self.inn[v],
        }
    }

    pub fn vertex_set(&self) -> VertexSet {
        BitSet::full(self.n)
    }

    /// The digraph with every arc reversed.
    pub fn reverse(&self) -> Digraph {
        Digraph::new(self.n, self.edges().map(|(u, v)| (v, u))).expect("same vertex range")
    }

    /// Underlying undirected graph: loops dropped, antiparallel pairs merged.
    pub fn underlying(&self) -> UndirectedGraph {
        UndirectedGraph::new(self.n, self.edges().filter(|(u, v)| u != v)).expect("loops filtered")
    }

    /// Shortest directed distances from `src` (`dist[src] = 0`).
    pub fn distances_from(&self, src: usize, dir: Direction) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in self.neighbors(u, dir) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `r`-th power: `(x, y)` is an edge iff a directed walk of length `1..=r`
    /// leads from `x` to `y`. For `x == y` this means a closed walk through `x`.
    pub fn power(&self, r: usize) -> Result<Digraph> {
        if r == 0 {
            return Err(Error::InvalidArgument("power requires r >= 1".into()));
        }
        if r == 1 {
            return Ok(self.clone());
        }
        let mut edges = Vec::new();
        for x in 0..self.n {
            let dist = self.distances_from(x, Direction::Out);
            for (y, d) in dist.iter().enumerate() {
                if y != x && matches!(d, Some(d) if *d <= r) {
                    edges.push((x, y));
                }
            }
            let closed = self.inn[x].iter().filter_map(|&u| dist[u].map(|d| d + 1)).min();
            if matches!(closed, Some(c) if c <= r) {
                edges.push((x, x));
            }
        }
        Digraph::new(self.n, edges)
    }

    /// `r`-out-ball (`Out`) or `r`-in-ball (`In`) of `v`; always contains `v`.
    pub fn ball(&self, v: usize, r: usize, dir: Direction) -> Result<VertexSet> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        let dist = self.distances_from(v, dir);
        Ok(BitSet::from_iter_with_capacity(
            self.n,
            dist.iter().enumerate().filter(|(_, d)| matches!(d, Some(d) if *d <= r)).map(|(w, _)| w),
        ))
    }

    /// Subdigraph induced by `s`, relabelled `0..|s|` in ascending order of `s`.
    pub fn induced_subdigraph(&self, s: &[usize]) -> Result<Digraph> {
        let mut index = vec![usize::MAX; self.n];
        let mut sorted: Vec<usize> = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &v) in sorted.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            index[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]));
        Digraph::new(sorted.len(), edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {FORMAT_VERSION}\ndigraph {}\n", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(s, "e {u} {v}");
        }
        s
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let (n, edges) = parse_graph_block(&text::lines(src), "digraph")?;
        Digraph::new(n, edges)
    }
}

/// Parses `<header> <n>` followed by `e u v` lines.
pub(crate) fn parse_graph_block(lines: &[text::Line<'_>], header: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let first = lines.first().ok_or(Error::Parse { line: 0, msg: format!("missing `{header}` header") })?;
    if first.keyword() != header {
        return Err(first.err(format!("expected `{header} <n>` header")));
    }
    first.expect_len(2)?;
    let n = first.usize_at(1)?;
    let mut edges = Vec::new();
    for l in &lines[1..] {
        if l.keyword() != "e" {
            return Err(l.err(format!("unexpected `{}` line", l.keyword())));
        }
        l.expect_len(3)?;
        let (u, v) = (l.usize_at(1)?, l.usize_at(2)?);
        if u >= n || v >= n {
            return Err(l.err(format!("edge endpoint out of range 0..{n}")));
        }
        edges.push((u, v));
    }
    Ok((n, edges))
}

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Edges are normalised to `u < v` and deduplicated; loops are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("undirected graphs are loopless (loop at {u})")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj.iter_mut().for_each(|l| l.sort_unstable());
        Ok(UndirectedGraph { n, edges, adj })
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid")
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
    }

    /// The `rows × cols` grid; vertex `(x, y)` has index `y * cols + x`.
    pub fn grid(cols: usize, rows: usize) -> Self {
        let idx = |x: usize, y: usize| y * cols + x;
        let mut edges = Vec::new();
        for y in 0..rows {
            for x in 0..cols {
                if x + 1 < cols {
                    edges.push((idx(x, y), idx(x + 1, y)));
                }
                if y + 1 < rows {
                    edges.push((idx(x, y), idx(x, y + 1)));
                }
            }
        }
        Self::new(cols * rows, edges).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges with `u < v`, sorted lexicographically. Positions in this slice
    /// are the edge indices used by subdivisions.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn biorientation(&self) -> Digraph {
        Digraph::new(self.n, self.edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)])).expect("same range")
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn to_text(&self) -> String {
        format!("# {FORMAT_VERSION}\n{}", self.block_text())
    }

    pub(crate) fn block_text(&self) -> String {
        let mut s = format!("graph {}\n", self.n);
        for (u, v) in &self.edges {
            let _ = writeln!(s, "e {u} {v}");
        }
        s
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let (n, edges) = parse_graph_block(&text::lines(src), "graph")?;
        UndirectedGraph::new(n, edges)
    }
}
