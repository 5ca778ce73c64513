//! Constructive decompositions for the representation classes.
//!
//! Each builder returns a [`BuilderReport`] carrying the decomposition and the
//! width bound that holds for it; [`BuilderReport::verify`] measures the
//! actual bi-mim-width so callers can compare.

use std::collections::{BTreeSet, VecDeque};

use crate::cut::Measure;
use crate::decomposition::{decomposition_width, BranchDecomposition};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::representations::{
    normalise_anchors, HConvexRep, HDigraphRep, HSubdivision, IntervalRep, PermutationRep, RootedDirPathRep,
};
use crate::text::FORMAT_VERSION;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuilderReport {
    pub decomposition: BranchDecomposition,
    pub guarantee: usize,
    pub measured: Option<usize>,
    /// Vertex order of a linear decomposition.
    pub order: Option<Vec<usize>>,
}

impl BuilderReport {
    fn linear(order: Vec<usize>, guarantee: usize) -> Result<Self> {
        Ok(BuilderReport {
            decomposition: BranchDecomposition::linear(&order)?,
            guarantee,
            measured: None,
            order: Some(order),
        })
    }

    /// Fills in `measured` with the exact bi-mim-width of the decomposition.
    pub fn verify(mut self, g: &Digraph, parallel: bool) -> Result<Self> {
        self.measured = Some(decomposition_width(g, &self.decomposition, Measure::BiMim, parallel)?);
        Ok(self)
    }

    pub fn within_guarantee(&self) -> Option<bool> {
        self.measured.map(|m| m <= self.guarantee)
    }

    /// The decomposition file with the bound recorded as a comment.
    pub fn to_text(&self) -> String {
        let body = self.decomposition.to_text();
        let body = body.strip_prefix(&format!("# {FORMAT_VERSION}\n")).unwrap_or(&body);
        let mut out = format!("# {FORMAT_VERSION}\n# guarantee {}\n", self.guarantee);
        if let Some(m) = self.measured {
            out.push_str(&format!("# measured {m}\n"));
        }
        out.push_str(body);
        out
    }
}

/// Linear order by the leftmost point of `S_v ∩ T_v`; width at most 2.
pub fn build_reflexive_interval(rep: &IntervalRep) -> Result<BuilderReport> {
    let mut keyed = Vec::with_capacity(rep.len());
    for v in 0..rep.len() {
        keyed.push((rep.anchor(v).ok_or(Error::NotReflexive(v))?, v));
    }
    keyed.sort_unstable();
    BuilderReport::linear(keyed.into_iter().map(|(_, v)| v).collect(), 2)
}

/// Linear order by the shared first-line endpoint; width at most 4.
pub fn build_adjusted_permutation(rep: &PermutationRep) -> Result<BuilderReport> {
    let mut keyed = Vec::with_capacity(rep.len());
    for v in 0..rep.len() {
        let (s, t) = (rep.source(v), rep.target(v));
        if s[0] != t[0] {
            return Err(Error::NotAdjusted(v));
        }
        keyed.push((s[0], v));
    }
    keyed.sort_unstable();
    BuilderReport::linear(keyed.into_iter().map(|(_, v)| v).collect(), 4)
}

/// Mutable rooted tree used while rewriting a path representation.
struct WorkTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
    s: Vec<[usize; 2]>,
    t: Vec<[usize; 2]>,
}

impl WorkTree {
    fn add_node(&mut self, parent: usize) -> usize {
        let id = self.parent.len();
        self.parent.push(Some(parent));
        self.children.push(Vec::new());
        self.children[parent].push(id);
        id
    }

    fn reparent(&mut self, x: usize, to: usize) {
        if let Some(p) = self.parent[x] {
            self.children[p].retain(|&c| c != x);
        }
        self.parent[x] = Some(to);
        self.children[to].push(x);
    }

    fn snapshot(&self) -> Result<RootedDirPathRep> {
        RootedDirPathRep::new(self.parent.clone(), self.root, self.s.clone(), self.t.clone())
    }

    /// Inserts `t'` on the edge from `t` to its smallest child (a fresh leaf
    /// when `t` has none) and moves both paths of `v` down to `t'`.
    fn push_anchor_down(&mut self, v: usize, t: usize) -> usize {
        let q = match self.children[t].iter().min() {
            Some(&q) => q,
            None => self.add_node(t),
        };
        let t2 = self.add_node(t);
        self.reparent(q, t2);
        self.s[v][1] = t2;
        self.t[v][1] = t2;
        t2
    }
}

/// Decomposition of width at most 2 from an adjusted rooted-path
/// representation. See [`build_adjusted_rdpath_traced`].
pub fn build_adjusted_rdpath(rep: &RootedDirPathRep) -> Result<BuilderReport> {
    build_adjusted_rdpath_traced(rep, None)
}

/// Rewrites the tree until every node has at most two children and the
/// shared path bottoms `α_v` are distinct nodes with at most one child, then
/// hangs a leaf for `v` below each `α_v`, drops the other leaves and
/// suppresses degree-2 nodes. `on_step` sees the representation after each
/// rewrite; all of them realise the input digraph.
pub fn build_adjusted_rdpath_traced(
    rep: &RootedDirPathRep,
    mut on_step: Option<&mut dyn FnMut(&RootedDirPathRep)>,
) -> Result<BuilderReport> {
    let n = rep.len();
    if let Some(v) = (0..n).find(|&v| rep.source(v)[1] != rep.target(v)[1]) {
        return Err(Error::NotAdjusted(v));
    }
    if n <= 2 {
        return BuilderReport::linear((0..n).collect(), 2);
    }
    let size = rep.tree_size();
    let parent: Vec<Option<usize>> = (0..size).map(|x| rep.parent(x)).collect();
    let mut children = vec![Vec::new(); size];
    for (x, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(x);
        }
    }
    let mut w = WorkTree {
        parent,
        children,
        root: rep.root(),
        s: (0..n).map(|v| rep.source(v)).collect(),
        t: (0..n).map(|v| rep.target(v)).collect(),
    };
    let mut step = |w: &WorkTree| -> Result<()> {
        if let Some(f) = on_step.as_deref_mut() {
            f(&w.snapshot()?);
        }
        Ok(())
    };

    for x in 0..size {
        let mut kids = w.children[x].clone();
        if kids.len() < 3 {
            continue;
        }
        kids.sort_unstable();
        let mut prev = x;
        for &c in &kids {
            let p = w.add_node(prev);
            w.reparent(c, p);
            prev = p;
        }
        step(&w)?;
    }

    let mut anchor: Vec<usize> = w.s.iter().map(|p| p[1]).collect();
    // Each rewrite gives one vertex a fresh anchor that never needs moving
    // again, so n rounds suffice.
    for _ in 0..=n {
        let bad = (0..n).find(|&v| anchor[..v].contains(&anchor[v]) || w.children[anchor[v]].len() >= 2);
        let Some(v) = bad else { break };
        anchor[v] = w.push_anchor_down(v, anchor[v]);
        step(&w)?;
    }
    if let Some(v) = (0..n).find(|&v| anchor[..v].contains(&anchor[v]) || w.children[anchor[v]].len() >= 2) {
        return Err(Error::Internal(format!("anchor rewriting did not settle at vertex {v}")));
    }

    let tree_nodes = w.parent.len();
    let total = tree_nodes + n;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); total];
    for (x, p) in w.parent.iter().enumerate() {
        if let Some(p) = *p {
            adj[x].insert(p);
            adj[p].insert(x);
        }
    }
    for v in 0..n {
        adj[tree_nodes + v].insert(anchor[v]);
        adj[anchor[v]].insert(tree_nodes + v);
    }
    let is_beta = |x: usize| x >= tree_nodes;
    let mut alive = vec![true; total];
    let mut stack: Vec<usize> = (0..tree_nodes).filter(|&x| adj[x].len() <= 1).collect();
    while let Some(x) = stack.pop() {
        if !alive[x] || is_beta(x) || adj[x].len() > 1 {
            continue;
        }
        alive[x] = false;
        if let Some(&y) = adj[x].iter().next() {
            adj[y].remove(&x);
            stack.push(y);
        }
        adj[x].clear();
    }
    for x in 0..tree_nodes {
        if alive[x] && adj[x].len() == 2 {
            let mut it = adj[x].iter().copied();
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            adj[a].remove(&x);
            adj[b].remove(&x);
            adj[a].insert(b);
            adj[b].insert(a);
            adj[x].clear();
            alive[x] = false;
        }
    }
    let ids: Vec<usize> = (0..total).filter(|&x| alive[x]).collect();
    let local = |x: usize| ids.binary_search(&x).expect("alive node");
    let mut edges = Vec::new();
    for &x in &ids {
        for &y in &adj[x] {
            if x < y {
                edges.push((local(x), local(y)));
            }
        }
    }
    let leaves: Vec<(usize, usize)> = (0..n).map(|v| (local(tree_nodes + v), v)).collect();
    let decomposition = BranchDecomposition::new(ids.len(), edges, leaves, n)?;
    Ok(BuilderReport { decomposition, guarantee: 2, measured: None, order: None })
}

/// Breadth-first order of all nodes of `F`, component by component; each
/// component starts at its smallest host vertex and expands neighbours in
/// ascending order.
fn bfs_order(sub: &HSubdivision) -> Vec<usize> {
    let f = sub.graph();
    let mut seen = vec![false; f.n()];
    let mut order = Vec::with_capacity(f.n());
    let starts = (0..sub.host().n()).chain(0..f.n());
    for r in starts {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut queue = VecDeque::from([r]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in f.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

/// Bound for representations over `H`: `12 |E(H)|`, or 2 when `H` has no
/// edge (each host vertex then carries a complete reflexive digraph).
fn host_guarantee(sub: &HSubdivision) -> usize {
    match sub.host().edge_count() {
        0 => 2,
        m => 12 * m,
    }
}

/// Linear order by breadth-first position of the normalised anchors.
pub fn build_reflexive_hdigraph(rep: &HDigraphRep) -> Result<BuilderReport> {
    if let Some(v) = (0..rep.len()).find(|&v| !rep.source(v).iter().any(|x| rep.target(v).binary_search(x).is_ok())) {
        return Err(Error::NotReflexive(v));
    }
    let norm = rep.normalize()?;
    let sub = norm.rep.subdivision();
    let mut pos = vec![0; sub.node_count()];
    for (i, x) in bfs_order(sub).into_iter().enumerate() {
        pos[x] = i;
    }
    let mut keyed: Vec<(usize, usize)> = norm.anchors.iter().enumerate().map(|(v, &a)| (pos[a], v)).collect();
    keyed.sort_unstable();
    BuilderReport::linear(keyed.into_iter().map(|(_, v)| v).collect(), host_guarantee(rep.subdivision()))
}

/// Linear order on `A ∪ B`: the nodes of `F` in breadth-first order after
/// normalising anchors `α_b ∈ out(b) ∩ in(b)`, each `b` placed right after
/// `α_b`, with the nodes added by normalisation dropped again.
pub fn build_nice_hconvex(rep: &HConvexRep) -> Result<BuilderReport> {
    let a = rep.a_count();
    let bs = rep.b_count();
    if let Some(b) = rep.first_not_nice() {
        return Err(Error::NotNice(a + b));
    }
    let sets: Vec<Vec<usize>> =
        (0..bs).map(|b| rep.out_set(b).to_vec()).chain((0..bs).map(|b| rep.in_set(b).to_vec())).collect();
    let pairs: Vec<(usize, usize)> = (0..bs).map(|b| (b, bs + b)).collect();
    let norm = normalise_anchors(rep.subdivision(), sets, &pairs)?;
    let mut original = vec![None; norm.sub.node_count()];
    for (x, &y) in norm.origin.iter().enumerate() {
        original[y] = Some(x);
    }
    let mut at_node: Vec<Vec<usize>> = vec![Vec::new(); norm.sub.node_count()];
    for (b, &x) in norm.anchors.iter().enumerate() {
        at_node[x].push(a + b);
    }
    let mut order = Vec::with_capacity(a + bs);
    for x in bfs_order(&norm.sub) {
        order.extend(original[x]);
        order.extend(at_node[x].iter().copied());
    }
    BuilderReport::linear(order, host_guarantee(rep.subdivision()))
}
