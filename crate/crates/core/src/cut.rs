//! Cuts, exact maximum induced matchings of directed cut graphs and GF(2)
//! cut ranks.

use std::collections::BTreeMap;

use crate::bitset::{BitSet, VertexSet};
use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Width measure evaluated on every cut of a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    BiMim,
    BiRank,
}

impl std::str::FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bimim" => Ok(Measure::BiMim),
            "birank" => Ok(Measure::BiRank),
            other => Err(Error::InvalidArgument(format!("unknown measure `{other}` (bimim|birank)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutValues {
    pub mim_plus: usize,
    pub mim_minus: usize,
    pub bimim: usize,
    pub cutrk_plus: Option<usize>,
    pub cutrk_minus: Option<usize>,
    pub bicutrk: Option<usize>,
}

impl CutValues {
    pub fn measure(&self, m: Measure) -> usize {
        match m {
            Measure::BiMim => self.bimim,
            Measure::BiRank => self.bicutrk.expect("rank values requested"),
        }
    }
}

/// The bipartite digraph `G[A→B]`: same vertex range, only edges in `A × B`.
pub fn directed_bipartite(g: &Digraph, a: &VertexSet, b: &VertexSet) -> Result<Digraph> {
    if let Some(v) = a.iter().find(|&v| b.contains(v)) {
        return Err(Error::OverlappingSides(v));
    }
    Digraph::new(g.n(), g.edges().filter(|&(u, v)| a.contains(u) && b.contains(v)))
}

/// Exact `ν` of a bipartite digraph whose every edge goes from `a` to `b`.
pub fn max_induced_matching(g: &Digraph, a: &VertexSet, b: &VertexSet) -> Result<usize> {
    if let Some(v) = a.iter().find(|&v| b.contains(v)) {
        return Err(Error::OverlappingSides(v));
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| !(a.contains(u) && b.contains(v))) {
        return Err(Error::DirectionViolation(u, v));
    }
    Ok(nu(g, a, b))
}

/// `ν(G[A→B])` for disjoint `a`, `b`, ignoring every edge outside `A × B`.
pub fn nu(g: &Digraph, a: &VertexSet, b: &VertexSet) -> usize {
    let rows: Vec<(usize, BitSet)> = a
        .iter()
        .filter_map(|u| {
            let mut row = g.out_set(u).clone();
            row.intersect_with(b);
            (!row.is_empty()).then_some((u, row))
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    // Twin rows can never both be matched, so duplicates are dropped.
    let mut distinct: Vec<BitSet> = rows.into_iter().map(|(_, r)| r).collect();
    distinct.sort();
    distinct.dedup();
    components(&distinct).iter().map(|comp| nu_component(comp)).sum()
}

/// Splits the rows into groups whose column supports are connected.
fn components(rows: &[BitSet]) -> Vec<Vec<BitSet>> {
    let mut parent: Vec<usize> = (0..rows.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        for c in row.iter() {
            match owner.get(&c) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
                None => {
                    owner.insert(c, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<BitSet>> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(row.clone());
    }
    groups.into_values().collect()
}

/// Exact ν of one connected component given as row sets over the `b` side.
fn nu_component(rows: &[BitSet]) -> usize {
    // Edge list (row index, column).
    let edges: Vec<(usize, usize)> =
        rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |c| (i, c))).collect();
    let m = edges.len();
    if m <= 1 {
        return m;
    }
    let col_deg = {
        let mut deg = BTreeMap::new();
        for &(_, c) in &edges {
            *deg.entry(c).or_insert(0usize) += 1;
        }
        deg
    };
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&e| {
        let (r, c) = edges[e];
        (rows[r].len() + col_deg[&c], e)
    });
    let edges: Vec<(usize, usize)> = order.iter().map(|&e| edges[e]).collect();
    // compat[e] = later-or-earlier edges that may sit in an induced matching with e.
    let compat: Vec<BitSet> = (0..m)
        .map(|e| {
            let (r1, c1) = edges[e];
            BitSet::from_iter_with_capacity(
                m,
                (0..m).filter(|&f| {
                    let (r2, c2) = edges[f];
                    r1 != r2 && c1 != c2 && !rows[r1].contains(c2) && !rows[r2].contains(c1)
                }),
            )
        })
        .collect();
    let row_count = rows.len();
    let col_count = col_deg.len();
    let mut best = 1;
    let mut k = 2;
    while k <= row_count.min(col_count) {
        let all = BitSet::full(m);
        if exists_matching(&edges, &compat, &all, k) {
            best = k;
            k += 1;
        } else {
            break;
        }
    }
    best
}

/// Is there a set of `k` pairwise compatible edges among `cand`?
fn exists_matching(edges: &[(usize, usize)], compat: &[BitSet], cand: &BitSet, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if cand.len() < k || endpoint_bound(edges, cand) < k {
        return false;
    }
    let mut rest = cand.clone();
    for e in cand.iter() {
        rest.remove(e);
        let mut next = rest.clone();
        next.intersect_with(&compat[e]);
        if exists_matching(edges, compat, &next, k - 1) {
            return true;
        }
        if rest.len() < k {
            return false;
        }
    }
    false
}

fn endpoint_bound(edges: &[(usize, usize)], cand: &BitSet) -> usize {
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    for e in cand.iter() {
        rows.push(edges[e].0);
        cols.push(edges[e].1);
    }
    rows.sort_unstable();
    rows.dedup();
    cols.sort_unstable();
    cols.dedup();
    rows.len().min(cols.len())
}

/// Rank over GF(2) of the `A × B` adjacency matrix of `g`.
pub fn cut_rank(g: &Digraph, a: &VertexSet, b: &VertexSet) -> usize {
    let mut basis: BTreeMap<usize, BitSet> = BTreeMap::new();
    for u in a.iter() {
        let mut row = g.out_set(u).clone();
        row.intersect_with(b);
        for (&pivot, vec) in &basis {
            if row.contains(pivot) {
                row.symmetric_difference_with(vec);
            }
        }
        if let Some(p) = row.first() {
            basis.insert(p, row);
        }
    }
    basis.len()
}

/// Exact cut values of `(A, Ā)`; ranks only when `with_rank` is set.
pub fn cut_values(g: &Digraph, a: &VertexSet, with_rank: bool) -> CutValues {
    let abar = a.complement();
    let mim_plus = nu(g, a, &abar);
    let mim_minus = nu(g, &abar, a);
    let (cutrk_plus, cutrk_minus) = if with_rank {
        (Some(cut_rank(g, a, &abar)), Some(cut_rank(g, &abar, a)))
    } else {
        (None, None)
    };
    CutValues {
        mim_plus,
        mim_minus,
        bimim: mim_plus + mim_minus,
        cutrk_plus,
        cutrk_minus,
        bicutrk: cutrk_plus.zip(cutrk_minus).map(|(p, m)| p + m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::UndirectedGraph;

    fn set(n: usize, xs: &[usize]) -> VertexSet {
        BitSet::from_iter_with_capacity(n, xs.iter().copied())
    }

    #[test]
    fn directed_bipartite_examples() {
        let g = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
        let h = directed_bipartite(&g, &set(2, &[0]), &set(2, &[1])).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(directed_bipartite(&g, &set(2, &[0]), &set(2, &[])).unwrap().edge_count(), 0);
        assert!(matches!(directed_bipartite(&g, &set(2, &[0]), &set(2, &[0])), Err(Error::OverlappingSides(0))));
        let c4 = UndirectedGraph::cycle(4).biorientation();
        let b = directed_bipartite(&c4, &set(4, &[0, 2]), &set(4, &[1, 3])).unwrap();
        assert_eq!(b.edge_count(), 4);
    }

    #[test]
    fn matching_examples() {
        let (a, b) = (set(4, &[0, 1]), set(4, &[2, 3]));
        let g = Digraph::new(4, [(0, 2), (1, 3)]).unwrap();
        assert_eq!(max_induced_matching(&g, &a, &b).unwrap(), 2);
        let g = Digraph::new(4, [(0, 2), (1, 3), (0, 3)]).unwrap();
        assert_eq!(max_induced_matching(&g, &a, &b).unwrap(), 1);
        assert_eq!(max_induced_matching(&Digraph::empty(4), &a, &b).unwrap(), 0);
        let bad = Digraph::new(4, [(2, 0)]).unwrap();
        assert!(matches!(max_induced_matching(&bad, &a, &b), Err(Error::DirectionViolation(2, 0))));
    }

    #[test]
    fn cut_values_examples() {
        let e = UndirectedGraph::path(2).biorientation();
        let v = cut_values(&e, &set(2, &[0]), true);
        assert_eq!((v.mim_plus, v.mim_minus, v.bimim), (1, 1, 2));
        assert_eq!(v.bicutrk, Some(2));
        let p4 = UndirectedGraph::path(4).biorientation();
        assert_eq!(cut_values(&p4, &set(4, &[]), false).bimim, 0);
        assert_eq!(cut_values(&p4, &set(4, &[0, 1]), false).bimim, 2);
    }

    #[test]
    fn rank_examples() {
        // 2x2 all-ones matrix has rank 1; identity has rank 2.
        let (a, b) = (set(4, &[0, 1]), set(4, &[2, 3]));
        let ones = Digraph::new(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(cut_rank(&ones, &a, &b), 1);
        assert_eq!(nu(&ones, &a, &b), 1);
        let id = Digraph::new(4, [(0, 2), (1, 3)]).unwrap();
        assert_eq!(cut_rank(&id, &a, &b), 2);
    }

    #[test]
    fn larger_matching_with_components() {
        // Three disjoint copies of a 2-edge induced matching plus a dense block.
        let mut edges = Vec::new();
        for k in 0..3 {
            edges.push((4 * k, 4 * k + 2));
            edges.push((4 * k + 1, 4 * k + 3));
        }
        let n = 12;
        let a = set(n, &[0, 1, 4, 5, 8, 9]);
        let g = Digraph::new(n, edges).unwrap();
        assert_eq!(nu(&g, &a, &a.complement()), 6);
    }
}
