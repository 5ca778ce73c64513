//! Branch decompositions: subcubic trees whose leaves carry the vertices.

use std::fmt::Write as _;

use crate::bitset::{BitSet, VertexSet};
use crate::cut::{cut_values, CutValues, Measure};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::par;
use crate::text::{self, FORMAT_VERSION};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDecomposition {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    vertex_at: Vec<Option<usize>>,
    leaf_of: Vec<usize>,
}

impl BranchDecomposition {
    /// Validates and builds a decomposition of a digraph on `n` vertices.
    ///
    /// For `n ≤ 1` the tree must be a single edge and exactly `n` of its two
    /// leaves are mapped; otherwise every leaf carries exactly one vertex.
    pub fn new(
        node_count: usize,
        tree_edges: impl IntoIterator<Item = (usize, usize)>,
        leaves: impl IntoIterator<Item = (usize, usize)>,
        n: usize,
    ) -> Result<Self> {
        let bad = |m: String| Error::InvalidDecomposition(m);
        if node_count < 2 {
            return Err(bad("tree needs at least 2 nodes".into()));
        }
        let mut adj = vec![Vec::new(); node_count];
        let mut edges = Vec::new();
        for (x, y) in tree_edges {
            if x >= node_count || y >= node_count {
                return Err(bad(format!("tree edge ({x},{y}) out of range")));
            }
            if x == y || adj[x].contains(&y) {
                return Err(bad(format!("tree edge ({x},{y}) is a loop or duplicate")));
            }
            adj[x].push(y);
            adj[y].push(x);
            edges.push((x.min(y), x.max(y)));
        }
        if edges.len() != node_count - 1 {
            return Err(bad(format!("a tree on {node_count} nodes has {} edges, found {}", node_count - 1, edges.len())));
        }
        let mut seen = vec![false; node_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(bad("tree is disconnected".into()));
        }
        for (x, nb) in adj.iter().enumerate() {
            if nb.len() != 1 && nb.len() != 3 {
                return Err(bad(format!("node {x} has degree {}, expected 1 or 3", nb.len())));
            }
        }
        adj.iter_mut().for_each(|l| l.sort_unstable());
        edges.sort_unstable();
        let leaf_count = adj.iter().filter(|l| l.len() == 1).count();
        let mut vertex_at = vec![None; node_count];
        let mut leaf_of = vec![usize::MAX; n];
        for (node, v) in leaves {
            if node >= node_count || adj[node].len() != 1 {
                return Err(bad(format!("node {node} is not a leaf")));
            }
            if v >= n {
                return Err(bad(format!("vertex {v} out of range 0..{n}")));
            }
            if vertex_at[node].is_some() || leaf_of[v] != usize::MAX {
                return Err(bad(format!("leaf map is not a bijection at node {node} / vertex {v}")));
            }
            vertex_at[node] = Some(v);
            leaf_of[v] = node;
        }
        if let Some(v) = leaf_of.iter().position(|&l| l == usize::MAX) {
            return Err(bad(format!("vertex {v} has no leaf")));
        }
        if n >= 2 && leaf_count != n {
            return Err(bad(format!("{leaf_count} leaves for {n} vertices")));
        }
        if n <= 1 && node_count != 2 {
            return Err(bad("digraphs with at most one vertex use the single-edge tree".into()));
        }
        Ok(BranchDecomposition { n, adj, edges, vertex_at, leaf_of })
    }

    /// Caterpillar whose leaves read `order` from left to right.
    ///
    /// Leaves are nodes `0..n`; spine nodes are `n..2n-2`. The first spine
    /// node holds `order[0]` and `order[1]`, the last one `order[n-2]` and
    /// `order[n-1]`, each middle spine node `c_k` holds `order[k+1]`.
    pub fn linear(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidDecomposition("order is not a permutation".into()));
            }
        }
        match n {
            0 => Self::new(2, [(0, 1)], [], 0),
            1 => Self::new(2, [(0, 1)], [(0, order[0])], 1),
            2 => Self::new(2, [(0, 1)], [(0, order[0]), (1, order[1])], 2),
            _ => {
                let spine = |k: usize| n + k;
                let s = n - 2;
                let mut edges: Vec<(usize, usize)> = (1..s).map(|k| (spine(k - 1), spine(k))).collect();
                edges.push((0, spine(0)));
                edges.push((1, spine(0)));
                for k in 1..s.saturating_sub(1) {
                    edges.push((k + 1, spine(k)));
                }
                if s >= 2 {
                    edges.push((n - 2, spine(s - 1)));
                }
                edges.push((n - 1, spine(s - 1)));
                Self::new(2 * n - 2, edges, (0..n).map(|i| (i, order[i])), n)
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Tree edges as `(x, y)` with `x < y`, sorted.
    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.adj[node].len() == 1
    }

    pub fn vertex_at(&self, node: usize) -> Option<usize> {
        self.vertex_at[node]
    }

    pub fn leaf_of(&self, v: usize) -> usize {
        self.leaf_of[v]
    }

    /// Vertices carried by the leaves, listed by node index. For trees built
    /// by [`BranchDecomposition::linear`] this is the input order.
    pub fn leaf_order(&self) -> Vec<usize> {
        (0..self.node_count()).filter_map(|x| self.vertex_at[x]).collect()
    }

    pub fn check_for(&self, g: &Digraph) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::InvalidDecomposition(format!(
                "decomposition covers {} vertices, digraph has {}",
                self.n,
                g.n()
            )));
        }
        Ok(())
    }

    /// For every tree edge (aligned with [`Self::tree_edges`]) the vertices on
    /// the side of its first endpoint.
    pub fn edge_cuts(&self) -> Vec<VertexSet> {
        let nodes = self.node_count();
        let mut parent = vec![usize::MAX; nodes];
        let mut order = Vec::with_capacity(nodes);
        let mut stack = vec![0];
        parent[0] = 0;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut below: Vec<VertexSet> = vec![BitSet::new(self.n); nodes];
        for &x in order.iter().rev() {
            if let Some(v) = self.vertex_at[x] {
                below[x].insert(v);
            }
            if x != 0 {
                let sub = below[x].clone();
                below[parent[x]].union_with(&sub);
            }
        }
        self.edges
            .iter()
            .map(|&(x, y)| if parent[x] == y { below[x].clone() } else { below[y].complement() })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {FORMAT_VERSION}\nbdecomp {}\n", self.node_count());
        for (x, y) in &self.edges {
            let _ = writeln!(s, "te {x} {y}");
        }
        for (node, v) in self.vertex_at.iter().enumerate() {
            if let Some(v) = v {
                let _ = writeln!(s, "leaf {node} {v}");
            }
        }
        s
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let first = lines.first().ok_or(Error::Parse { line: 0, msg: "missing `bdecomp` header".into() })?;
        if first.keyword() != "bdecomp" {
            return Err(first.err("expected `bdecomp <nodes>` header"));
        }
        first.expect_len(2)?;
        let nodes = first.usize_at(1)?;
        let mut edges = Vec::new();
        let mut leaves = Vec::new();
        for l in &lines[1..] {
            l.expect_len(3)?;
            let pair = (l.usize_at(1)?, l.usize_at(2)?);
            match l.keyword() {
                "te" => edges.push(pair),
                "leaf" => leaves.push(pair),
                other => return Err(l.err(format!("unexpected `{other}` line"))),
            }
        }
        let n = leaves.len();
        Self::new(nodes, edges, leaves, n)
    }
}

/// Exact cut values for every tree edge, aligned with `tree_edges()`.
pub fn cut_profile(g: &Digraph, bd: &BranchDecomposition, with_rank: bool, parallel: bool) -> Result<Vec<CutValues>> {
    bd.check_for(g)?;
    let cuts = bd.edge_cuts();
    Ok(par::map_slice(&cuts, parallel, |a| cut_values(g, a, with_rank)))
}

/// Maximum over tree edges of the chosen measure; 0 when there is no cut.
pub fn decomposition_width(g: &Digraph, bd: &BranchDecomposition, measure: Measure, parallel: bool) -> Result<usize> {
    let profile = cut_profile(g, bd, measure == Measure::BiRank, parallel)?;
    Ok(profile.iter().map(|c| c.measure(measure)).max().unwrap_or(0))
}
