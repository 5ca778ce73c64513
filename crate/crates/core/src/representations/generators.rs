//! Explicit digraph families: an interval orientation of the square grid, a
//! tournament on an `n × n` index set, and a bipartite P2-convex grid.

use crate::digraph::{Digraph, UndirectedGraph};
use crate::error::{Error, Result};
use crate::representations::{HConvexRep, HSubdivision, IntervalRep};

/// Vertex id of `v_{i,j}` (both 1-based) in an `n × n` family: column `i`,
/// row `j`, laid out row by row. Matches `UndirectedGraph::grid(n, n)`.
pub fn grid_index(n: usize, i: usize, j: usize) -> usize {
    (j - 1) * n + (i - 1)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("family size must be at least 2, got {n}")));
    }
    Ok(())
}

/// Interval pairs of the grid family, with `N = 2(n + 1)`:
///
/// * odd `i`: `S = [Nj + 2i − 1, Nj + 2i + 1]`, `T = {N(j − 1) + 2i}`
/// * even `i`: `S = {N(j − 1) + 2i}`, `T = [Nj + 2i − 1, Nj + 2i + 1]`
///
/// The even-column target is the odd-column source shape; the opposite
/// endpoint order would give an empty interval.
fn grid_intervals(n: usize) -> (Vec<[i64; 2]>, Vec<[i64; 2]>) {
    let big = 2 * (n as i64 + 1);
    let mut s = vec![[0; 2]; n * n];
    let mut t = vec![[0; 2]; n * n];
    for j in 1..=n {
        for i in 1..=n {
            let (ii, jj) = (i as i64, j as i64);
            let wide = [big * jj + 2 * ii - 1, big * jj + 2 * ii + 1];
            let point = big * (jj - 1) + 2 * ii;
            let v = grid_index(n, i, j);
            if i % 2 == 1 {
                s[v] = wide;
                t[v] = [point, point];
            } else {
                s[v] = [point, point];
                t[v] = wide;
            }
        }
    }
    (s, t)
}

/// Orientation of the `n × n` grid where odd columns send their edges to
/// both horizontal neighbours and downwards, and even columns receive them
/// and send upwards.
fn expected_grid_orientation(n: usize) -> Digraph {
    let mut edges = Vec::new();
    for j in 1..=n {
        for i in 1..=n {
            let v = grid_index(n, i, j);
            if i < n {
                let w = grid_index(n, i + 1, j);
                edges.push(if i % 2 == 1 { (v, w) } else { (w, v) });
            }
            if j < n {
                let w = grid_index(n, i, j + 1);
                edges.push(if i % 2 == 1 { (v, w) } else { (w, v) });
            }
        }
    }
    Digraph::new(n * n, edges).expect("indices in range")
}

/// Interval representation of an orientation of the `n × n` grid together
/// with its realisation. The realisation is checked against the
/// independently constructed orientation.
pub fn gen_grid_orientation(n: usize) -> Result<(IntervalRep, Digraph)> {
    check_n(n)?;
    let (s, t) = grid_intervals(n);
    let rep = IntervalRep::new(s, t)?;
    let g = rep.realize()?;
    let expected = expected_grid_orientation(n);
    if g != expected {
        let extra: Vec<_> = g.edges().filter(|&(u, v)| !expected.has_edge(u, v)).collect();
        let missing: Vec<_> = expected.edges().filter(|&(u, v)| !g.has_edge(u, v)).collect();
        return Err(Error::Internal(format!("grid orientation mismatch: extra {extra:?}, missing {missing:?}")));
    }
    if g.underlying() != UndirectedGraph::grid(n, n) {
        return Err(Error::Internal("grid orientation: underlying graph is not the grid".into()));
    }
    Ok((rep, g))
}

/// The tournament on `{v_{i,j}}`: within a column edges point to larger
/// rows, `v_{i,j} → v_{i+1,j}`, and a pair in columns `i1 < i2` is oriented
/// by `(i2 − i1) mod 3`:
///
/// * `0`: from `v_{i1,j1}` when `j1 ≥ j2`, otherwise from `v_{i2,j2}`
/// * `1`: from `v_{i2,j2}`, except the pair covered by the column rule
/// * `2`: from `v_{i1,j1}`
///
/// Every pair is checked to be oriented exactly once.
pub fn gen_tournament(n: usize) -> Result<Digraph> {
    check_n(n)?;
    let id = |i, j| grid_index(n, i, j);
    let mut edges = Vec::new();
    for i in 1..=n {
        for j1 in 1..=n {
            for j2 in j1 + 1..=n {
                edges.push((id(i, j1), id(i, j2)));
            }
        }
    }
    for i in 1..n {
        for j in 1..=n {
            edges.push((id(i, j), id(i + 1, j)));
        }
    }
    for i1 in 1..=n {
        for i2 in i1 + 1..=n {
            for j1 in 1..=n {
                for j2 in 1..=n {
                    let (a, b) = (id(i1, j1), id(i2, j2));
                    match (i2 - i1) % 3 {
                        0 if j1 >= j2 => edges.push((a, b)),
                        0 => edges.push((b, a)),
                        1 if (i2, j2) != (i1 + 1, j1) => edges.push((b, a)),
                        1 => {}
                        _ => edges.push((a, b)),
                    }
                }
            }
        }
    }
    let size = n * n;
    let g = Digraph::new(size, edges.iter().copied())?;
    if g.edge_count() != edges.len() {
        return Err(Error::Internal("tournament rules produce a repeated edge".into()));
    }
    for u in 0..size {
        if g.has_loop(u) {
            return Err(Error::Internal(format!("tournament has a loop at {u}")));
        }
        for v in u + 1..size {
            if g.has_edge(u, v) == g.has_edge(v, u) {
                return Err(Error::Internal(format!("pair {{{u}, {v}}} is not oriented exactly once")));
            }
        }
    }
    Ok(g)
}

/// Bipartite P2-convex digraph on the grid family. `A` is the sequence of
/// integer points `0..=M` of the line (point `0` and point `M` are the two
/// host vertices, point `c` otherwise is subdivision node `c + 1`). Vertex
/// `v_{i,j}` sends edges to `S_{i,j}` and receives from `T_{i,j}` when `i` is
/// odd, and the other way round when `i` is even.
///
/// Checked: the digraph induced on `B` and the meeting points of adjacent
/// grid vertices is an orientation of the 1-subdivision of the grid.
pub fn gen_p2_convex_grid(n: usize) -> Result<HConvexRep> {
    check_n(n)?;
    let (s, t) = grid_intervals(n);
    let max = s.iter().chain(&t).map(|iv| iv[1]).max().expect("n ≥ 2") + 1;
    let node = |c: i64| -> usize {
        match c {
            0 => 0,
            c if c == max => 1,
            c => c as usize + 1,
        }
    };
    let nodes = |iv: [i64; 2]| -> Vec<usize> { (iv[0]..=iv[1]).map(node).collect() };
    let sub = HSubdivision::new(UndirectedGraph::path(2), vec![max as usize - 1])?;
    let (mut outs, mut ins) = (Vec::new(), Vec::new());
    for j in 1..=n {
        for i in 1..=n {
            let v = grid_index(n, i, j);
            let (o, x) = if i % 2 == 1 { (s[v], t[v]) } else { (t[v], s[v]) };
            outs.push(nodes(o));
            ins.push(nodes(x));
        }
    }
    let rep = HConvexRep::new(sub, outs, ins)?;
    check_subdivided_grid(n, &rep, &s, &t)?;
    Ok(rep)
}

fn check_subdivided_grid(n: usize, rep: &HConvexRep, s: &[[i64; 2]], t: &[[i64; 2]]) -> Result<()> {
    let grid = UndirectedGraph::grid(n, n);
    let a = rep.a_count();
    let meet = |x: [i64; 2], y: [i64; 2]| -> Option<[i64; 2]> {
        let lo = x[0].max(y[0]);
        let hi = x[1].min(y[1]);
        (lo <= hi).then_some([lo, hi])
    };
    let mut points = Vec::new();
    for &(u, v) in grid.edges() {
        let hit = meet(s[u], t[v]).or_else(|| meet(s[v], t[u]));
        match hit {
            Some([lo, hi]) if lo == hi => points.push(lo as usize + 1),
            _ => return Err(Error::Internal(format!("grid edge {{{u}, {v}}} has no single meeting point"))),
        }
    }
    let mut distinct = points.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != points.len() {
        return Err(Error::Internal("two grid edges share a meeting point".into()));
    }
    let g = rep.realize()?;
    let keep: Vec<usize> = distinct.iter().copied().chain(a..a + n * n).collect();
    let induced = g.induced_subdigraph(&keep)?;
    let local = |x: usize| keep.binary_search(&x).expect("kept");
    let mut expected = Vec::new();
    for (e, &(u, v)) in grid.edges().iter().enumerate() {
        let p = local(points[e]);
        expected.push((local(a + u), p));
        expected.push((local(a + v), p));
    }
    if induced.underlying() != UndirectedGraph::new(keep.len(), expected)? {
        return Err(Error::Internal("P2-convex grid does not contain the subdivided grid".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_small_cases() {
        let (rep, g) = gen_grid_orientation(2).unwrap();
        assert_eq!(rep.len(), 4);
        assert_eq!(g.edge_count(), 4);
        let (_, g) = gen_grid_orientation(3).unwrap();
        assert_eq!(g.underlying().edge_count(), 12);
        for n in 2..=8 {
            let (rep, g) = gen_grid_orientation(n).unwrap();
            assert!((0..g.n()).all(|v| !g.has_loop(v)));
            assert!((0..rep.len()).all(|v| rep.anchor(v).is_none()));
        }
        assert!(gen_grid_orientation(1).is_err());
    }

    #[test]
    fn grid_orientation_rule_by_hand() {
        let (_, g) = gen_grid_orientation(2).unwrap();
        // v11 = 0, v21 = 1, v12 = 2, v22 = 3.
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 3), (3, 1)]);
    }

    #[test]
    fn tournament_small() {
        let g = gen_tournament(2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 6);
        let v = |i, j| grid_index(2, i, j);
        assert!(g.has_edge(v(1, 1), v(1, 2)));
        assert!(g.has_edge(v(1, 1), v(2, 1)));
        // Columns 1 and 2 differ by 1: edges run from column 2 back to 1.
        assert!(g.has_edge(v(2, 2), v(1, 1)));
        assert!(g.has_edge(v(2, 1), v(1, 2)));
        assert!(g.has_edge(v(1, 2), v(2, 2)));
        for n in 2..=7 {
            let g = gen_tournament(n).unwrap();
            assert_eq!(g.edge_count(), n * n * (n * n - 1) / 2);
        }
    }

    #[test]
    fn p2_convex_grid_matches_intervals() {
        let rep = gen_p2_convex_grid(2).unwrap();
        assert_eq!(rep.b_count(), 4);
        let (iv, _) = gen_grid_orientation(2).unwrap();
        for j in 1..=2 {
            for i in 1..=2 {
                let v = grid_index(2, i, j);
                let as_points = |nodes: &[usize]| -> [i64; 2] {
                    [nodes[0] as i64 - 1, *nodes.last().unwrap() as i64 - 1]
                };
                let (o, x) = (as_points(rep.out_set(v)), as_points(rep.in_set(v)));
                if i % 2 == 1 {
                    assert_eq!((o, x), (iv.source(v), iv.target(v)));
                } else {
                    assert_eq!((o, x), (iv.target(v), iv.source(v)));
                }
            }
        }
        assert!(!rep.is_nice());
        for n in 2..=5 {
            let rep = gen_p2_convex_grid(n).unwrap();
            let g = rep.realize().unwrap();
            let a = rep.a_count();
            for (u, v) in g.edges() {
                assert!((u < a) != (v < a));
            }
            for b in 0..rep.b_count() {
                for set in [rep.out_set(b), rep.in_set(b)] {
                    assert!(set.windows(2).all(|w| w[1] == w[0] + 1));
                }
            }
        }
    }
}
