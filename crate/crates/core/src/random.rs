//! Seeded random instances: digraphs, cuts, decompositions and
//! representations of each class. All generators take the caller's RNG so a
//! single seed reproduces a whole run.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bitset::VertexSet;
use crate::decomposition::BranchDecomposition;
use crate::digraph::{Digraph, UndirectedGraph};
use crate::representations::{HConvexRep, HDigraphRep, HSubdivision, IntervalRep, PermutationRep, RootedDirPathRep};

/// Each ordered pair (loops included when `loops`) is an edge with
/// probability `p`.
pub fn digraph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64, loops: bool) -> Digraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if (u != v || loops) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges).expect("indices in range")
}

pub fn undirected<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> UndirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::new(n, edges).expect("indices in range")
}

/// Each vertex joins the side independently with probability 1/2.
pub fn cut<R: Rng + ?Sized>(rng: &mut R, n: usize) -> VertexSet {
    VertexSet::from_iter_with_capacity(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

/// Uniformly random leaf-labelled subcubic tree, grown by inserting each
/// vertex into a uniformly chosen edge.
pub fn decomposition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BranchDecomposition {
    if n <= 2 {
        let order: Vec<usize> = (0..n).collect();
        return BranchDecomposition::linear(&order).expect("identity order");
    }
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    // Leaves are nodes 0..n; internal nodes n..2n-2.
    let mut edges = vec![(0, n), (1, n), (2, n)];
    for k in 3..n {
        let e = rng.gen_range(0..edges.len());
        let (x, y) = edges[e];
        let m = n + k - 2;
        edges[e] = (x, m);
        edges.push((m, y));
        edges.push((m, k));
    }
    BranchDecomposition::new(2 * n - 2, edges, (0..n).map(|i| (i, labels[i])), n).expect("valid tree")
}

/// Random vertex order as a caterpillar.
pub fn linear_decomposition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BranchDecomposition {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    BranchDecomposition::linear(&order).expect("permutation")
}

/// Intervals inside `0..span` of length below `max_len`, with `S_v` and
/// `T_v` sharing a point.
pub fn reflexive_interval<R: Rng + ?Sized>(rng: &mut R, n: usize, span: i64, max_len: i64) -> IntervalRep {
    let mut s = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    for _ in 0..n {
        let p = rng.gen_range(0..span);
        let mut around = || [p - rng.gen_range(0..max_len), p + rng.gen_range(0..max_len)];
        s.push(around());
        t.push(around());
    }
    IntervalRep::new(s, t).expect("nonempty intervals")
}

/// Segments with coordinates in `0..range` and a shared first-line endpoint.
pub fn adjusted_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize, range: i64) -> PermutationRep {
    let s: Vec<[i64; 2]> = (0..n).map(|_| [rng.gen_range(0..range), rng.gen_range(0..range)]).collect();
    let t = s.iter().map(|a| [a[0], rng.gen_range(0..range)]).collect();
    PermutationRep::new(s, t).expect("same length")
}

/// Random recursive tree on `tree_size` nodes rooted at 0; both paths of a
/// vertex end at a common node and climb a geometric number of steps.
pub fn adjusted_rdpath<R: Rng + ?Sized>(rng: &mut R, n: usize, tree_size: usize) -> RootedDirPathRep {
    let size = tree_size.max(1);
    let parent: Vec<Option<usize>> = (0..size).map(|x| (x > 0).then(|| rng.gen_range(0..x))).collect();
    let climb = |rng: &mut R, bottom: usize| {
        let mut x = bottom;
        while let Some(p) = parent[x] {
            if rng.gen_bool(0.4) {
                break;
            }
            x = p;
        }
        x
    };
    let (mut s, mut t) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let b = rng.gen_range(0..size);
        s.push([climb(rng, b), b]);
        t.push([climb(rng, b), b]);
    }
    RootedDirPathRep::new(parent.clone(), 0, s, t).expect("paths run downwards")
}

/// Connected node set of at most `max` nodes containing `start`.
fn grow<R: Rng + ?Sized>(rng: &mut R, f: &UndirectedGraph, start: usize, max: usize) -> Vec<usize> {
    let mut set = vec![start];
    let target = rng.gen_range(1..=max.max(1));
    while set.len() < target {
        let frontier: Vec<usize> =
            set.iter().flat_map(|&x| f.neighbors(x).iter().copied()).filter(|y| !set.contains(y)).collect();
        let Some(&y) = frontier.choose(rng) else { break };
        set.push(y);
    }
    set
}

fn random_subdivision<R: Rng + ?Sized>(rng: &mut R, host: &UndirectedGraph, max_sub: usize) -> HSubdivision {
    let counts = (0..host.edge_count()).map(|_| rng.gen_range(0..=max_sub)).collect();
    HSubdivision::new(host.clone(), counts).expect("one count per edge")
}

/// Reflexive H-digraph: `S_v` is a random connected set, `T_v` grows from
/// a node of `S_v`.
pub fn reflexive_hdigraph<R: Rng + ?Sized>(
    rng: &mut R,
    host: &UndirectedGraph,
    n: usize,
    max_sub: usize,
    max_set: usize,
) -> HDigraphRep {
    let sub = random_subdivision(rng, host, max_sub);
    let f = sub.graph().clone();
    let (mut s, mut t) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let start = rng.gen_range(0..f.n());
        let a = grow(rng, &f, start, max_set);
        let start = *a.choose(rng).expect("nonempty");
        let b = grow(rng, &f, start, max_set);
        s.push(a);
        t.push(b);
    }
    HDigraphRep::new(sub, s, t).expect("connected nonempty sets")
}

/// Nice H-convex representation with `b` vertices on the set side.
pub fn nice_hconvex<R: Rng + ?Sized>(
    rng: &mut R,
    host: &UndirectedGraph,
    b: usize,
    max_sub: usize,
    max_set: usize,
) -> HConvexRep {
    let sub = random_subdivision(rng, host, max_sub);
    let f = sub.graph().clone();
    let (mut outs, mut ins) = (Vec::with_capacity(b), Vec::with_capacity(b));
    for _ in 0..b {
        let start = rng.gen_range(0..f.n());
        let a = grow(rng, &f, start, max_set);
        let start = *a.choose(rng).expect("nonempty");
        let c = grow(rng, &f, start, max_set);
        if rng.gen_bool(0.5) {
            outs.push(a);
            ins.push(c);
        } else {
            outs.push(c);
            ins.push(a);
        }
    }
    HConvexRep::new(sub, outs, ins).expect("connected sets")
}
