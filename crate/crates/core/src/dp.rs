//! Shared scaffolding for the dynamic programs over a branch decomposition:
//! the rooted tree, class indices on both sides of every cut, and
//! precomputed combination tables between them.

use crate::bitset::{BitSet, VertexSet};
use crate::decomposition::BranchDecomposition;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::nbhd::{enumerate_classes, ClassIndex};
use crate::par;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub children: Option<(usize, usize)>,
    pub vertex: Option<usize>,
    /// Vertices at leaves below this node.
    pub below: VertexSet,
}

/// The decomposition tree rooted at a new node subdividing its
/// lexicographically least edge. Node ids of the decomposition are kept; the
/// root gets id `node_count`.
#[derive(Clone, Debug)]
pub(crate) struct RootedTree {
    pub nodes: Vec<Node>,
    pub root: usize,
    /// Children before parents.
    pub post_order: Vec<usize>,
}

impl RootedTree {
    pub fn new(bd: &BranchDecomposition) -> Self {
        let count = bd.node_count();
        let n = bd.vertex_count();
        let root = count;
        let (x0, y0) = bd.tree_edges()[0];
        let mut nodes: Vec<Node> = (0..=count)
            .map(|t| Node { children: None, vertex: (t < count).then(|| bd.vertex_at(t)).flatten(), below: BitSet::new(n) })
            .collect();
        nodes[root].children = Some((x0, y0));
        let mut order = vec![root];
        let mut stack = vec![(x0, y0), (y0, x0)];
        while let Some((t, parent)) = stack.pop() {
            order.push(t);
            let kids: Vec<usize> = bd.neighbors(t).iter().copied().filter(|&c| c != parent).collect();
            if kids.len() == 2 {
                nodes[t].children = Some((kids[0], kids[1]));
                stack.push((kids[0], t));
                stack.push((kids[1], t));
            }
        }
        order.reverse();
        for &t in &order {
            let below = match nodes[t].children {
                Some((a, b)) => {
                    let mut s = nodes[a].below.clone();
                    s.union_with(&nodes[b].below);
                    s
                }
                None => BitSet::from_iter_with_capacity(n, nodes[t].vertex),
            };
            nodes[t].below = below;
        }
        RootedTree { nodes, root, post_order: order }
    }

    /// `(sibling, parent)` for every non-root node.
    #[cfg(test)]
    pub fn parent_links(&self) -> Vec<Option<(usize, usize)>> {
        let mut links = vec![None; self.nodes.len()];
        for (t, node) in self.nodes.iter().enumerate() {
            if let Some((a, b)) = node.children {
                links[a] = Some((b, t));
                links[b] = Some((a, t));
            }
        }
        links
    }
}

/// Rooted tree plus class indices of `V_t` (inside) and of its complement
/// (outside) for every node `t`.
pub(crate) struct Skeleton {
    pub tree: RootedTree,
    pub inside: Vec<ClassIndex>,
    pub outside: Vec<ClassIndex>,
}

impl Skeleton {
    pub fn new(g: &Digraph, bd: &BranchDecomposition, d: usize, parallel: bool) -> Result<Self> {
        bd.check_for(g)?;
        let tree = RootedTree::new(bd);
        let count = tree.nodes.len();
        let inside = par::map_range(count, parallel, |t| enumerate_classes(g, &tree.nodes[t].below, d))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let outside = par::map_range(count, parallel, |t| enumerate_classes(g, &tree.nodes[t].below.complement(), d))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Skeleton { tree, inside, outside })
    }
}

/// Maps classes of two disjoint sides to the class of their union.
pub(crate) struct Combiner<'a> {
    target: &'a ClassIndex,
    x: &'a ClassIndex,
    y: &'a ClassIndex,
    /// Per target key slot: slot in `x`'s key and in `y`'s key (or `NONE`).
    slots: Vec<(u32, u32)>,
}

impl<'a> Combiner<'a> {
    pub fn new(target: &'a ClassIndex, x: &'a ClassIndex, y: &'a ClassIndex) -> Self {
        let (tb, xb, yb) = (target.boundary().len(), x.boundary().len(), y.boundary().len());
        let mut slots = vec![(NONE, NONE); 2 * tb];
        for (i, &u) in target.boundary().iter().enumerate() {
            let px = x.position(u);
            let py = y.position(u);
            slots[i] = (px.map_or(NONE, |p| p as u32), py.map_or(NONE, |p| p as u32));
            slots[tb + i] = (px.map_or(NONE, |p| (xb + p) as u32), py.map_or(NONE, |p| (yb + p) as u32));
        }
        Combiner { target, x, y, slots }
    }

    /// Target class of `class_x ∪ class_y`.
    pub fn combine(&self, cx: usize, cy: usize, scratch: &mut Vec<u8>) -> Result<usize> {
        let cap = self.target.cap() as u8;
        let (kx, ky) = (self.x.key(cx), self.y.key(cy));
        scratch.clear();
        scratch.extend(self.slots.iter().map(|&(sx, sy)| {
            let a = if sx == NONE { 0 } else { kx[sx as usize] };
            let b = if sy == NONE { 0 } else { ky[sy as usize] };
            (a + b).min(cap)
        }));
        self.target
            .find_key(scratch)
            .ok_or_else(|| Error::Internal("combined description missing from class index".into()))
    }

    /// Dense `|x| × |y|` table (row-major in `x`); rows with `rows[i] == false`
    /// are left as `NONE`.
    pub fn table(&self, rows: Option<&[bool]>, parallel: bool) -> Result<Vec<u32>> {
        let ny = self.y.len();
        let chunks = par::map_range(self.x.len(), parallel, |cx| -> Result<Vec<u32>> {
            if rows.is_some_and(|r| !r[cx]) {
                return Ok(vec![NONE; ny]);
            }
            let mut scratch = Vec::new();
            (0..ny).map(|cy| self.combine(cx, cy, &mut scratch).map(|c| c as u32)).collect()
        });
        let mut out = Vec::with_capacity(self.x.len() * ny);
        for c in chunks {
            out.extend(c?);
        }
        Ok(out)
    }
}

/// Class-count record of one decomposition node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeStats {
    /// Vertices below the node.
    pub side: VertexSet,
    /// Classes of subsets of the side.
    pub nec_inside: usize,
    /// Classes of subsets of the complement.
    pub nec_outside: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub cap: usize,
    pub nodes: Vec<NodeStats>,
}

impl DpStats {
    pub(crate) fn from_skeleton(sk: &Skeleton, cap: usize) -> Self {
        DpStats {
            cap,
            nodes: (0..sk.tree.nodes.len())
                .map(|t| NodeStats {
                    side: sk.tree.nodes[t].below.clone(),
                    nec_inside: sk.inside[t].len(),
                    nec_outside: sk.outside[t].len(),
                })
                .collect(),
        }
    }

    pub fn max_nec(&self) -> usize {
        self.nodes.iter().map(|s| s.nec_inside.max(s.nec_outside)).max().unwrap_or(1)
    }
}
