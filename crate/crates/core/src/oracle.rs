//! Naive exhaustive references used to cross-check the solvers.
//!
//! Nothing here goes through the decomposition, class-index or DP code.
//! Neighbourhood counts are taken directly from the edge list; the
//! definitional checkers `dominates` and `is_dq_partition` are run alongside
//! and any disagreement is reported as an internal error.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use crate::bitset::VertexSet;
use crate::digraph::{Digraph, UndirectedGraph};
use crate::error::{Error, Result};
use crate::lcvp::{is_dq_partition, LcvpMatrix};
use crate::sigma_rho::{dominates, Objective, Outcome, SigmaRhoProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest vertex count for subset and partition search.
    pub max_vertices: usize,
    /// Largest vertex count for decomposition enumeration.
    pub max_leaves: usize,
    pub timeout: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_vertices: 8, max_leaves: 6, timeout: None }
    }
}

struct Clock {
    deadline: Option<Instant>,
    ticks: u32,
}

impl Clock {
    fn new(budget: &OracleBudget) -> Self {
        Clock { deadline: budget.timeout.map(|t| Instant::now() + t), ticks: 0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::BudgetExceeded("oracle timeout".into()));
                }
            }
        }
        Ok(())
    }
}

fn limit(n: usize, max: usize, what: &str) -> Result<()> {
    if n > max || n > 40 {
        return Err(Error::BudgetExceeded(format!("{what} on {n} vertices exceeds the limit of {max}")));
    }
    Ok(())
}

fn mask_set(n: usize, mask: u64) -> VertexSet {
    VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| mask >> v & 1 == 1))
}

/// `(out, in)` counts of every vertex into the set given by `mask`.
fn counts(n: usize, edges: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    let mut c = vec![(0, 0); n];
    for &(u, v) in edges {
        if mask >> v & 1 == 1 {
            c[u].0 += 1;
        }
        if mask >> u & 1 == 1 {
            c[v].1 += 1;
        }
    }
    c
}

/// Optimum (or feasibility) over all `2^n` vertex subsets, with a witness.
pub fn brute_sigma_rho(
    g: &Digraph,
    prob: &SigmaRhoProblem,
    budget: &OracleBudget,
) -> Result<(Outcome, Option<Vec<usize>>)> {
    let n = g.n();
    limit(n, budget.max_vertices, "subset search")?;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut clock = Clock::new(budget);
    let mut best: Option<(usize, u64)> = None;
    for mask in 0..1u64 << n {
        clock.tick()?;
        let c = counts(n, &edges, mask);
        let ok = (0..n).all(|v| prob.accepts(mask >> v & 1 == 1, c[v].0, c[v].1));
        if ok != dominates(g, &mask_set(n, mask), prob) {
            return Err(Error::Internal(format!("recount disagrees with dominates on subset {mask:#b}")));
        }
        if !ok {
            continue;
        }
        let size = mask.count_ones() as usize;
        let better = match (prob.objective, best) {
            (_, None) => true,
            (Objective::Min, Some((b, _))) => size < b,
            (Objective::Max, Some((b, _))) => size > b,
            (Objective::Exists, Some(_)) => false,
        };
        if better {
            best = Some((size, mask));
        }
    }
    Ok(match best {
        None => (Outcome::Infeasible, None),
        Some((size, mask)) => {
            let witness = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let outcome = if prob.objective == Objective::Exists { Outcome::Feasible } else { Outcome::Optimum(size) };
            (outcome, Some(witness))
        }
    })
}

/// Some `D_q`-partition found by trying all `q^n` part assignments.
pub fn brute_lcvp(g: &Digraph, dq: &LcvpMatrix, budget: &OracleBudget) -> Result<Option<Vec<Vec<usize>>>> {
    let n = g.n();
    let q = dq.q();
    limit(n, budget.max_vertices, "partition search")?;
    let total = (q as u128).checked_pow(n as u32).filter(|&t| t <= 1 << 26);
    let Some(total) = total else {
        return Err(Error::BudgetExceeded(format!("{q}^{n} assignments")));
    };
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut clock = Clock::new(budget);
    let mut assign = vec![0usize; n];
    for code in 0..total as u64 {
        clock.tick()?;
        let mut c = code;
        for slot in assign.iter_mut() {
            *slot = (c % q as u64) as usize;
            c /= q as u64;
        }
        let masks: Vec<u64> =
            (0..q).map(|i| (0..n).filter(|&v| assign[v] == i).fold(0u64, |m, v| m | 1 << v)).collect();
        let per_part: Vec<Vec<(usize, usize)>> = masks.iter().map(|&m| counts(n, &edges, m)).collect();
        let ok = (0..n).all(|v| (0..q).all(|j| dq.accepts(assign[v], j, per_part[j][v].0, per_part[j][v].1)));
        let parts: Vec<VertexSet> = masks.iter().map(|&m| mask_set(n, m)).collect();
        if ok != is_dq_partition(g, &parts, dq)? {
            return Err(Error::Internal(format!("recount disagrees with is_dq_partition on assignment {assign:?}")));
        }
        if ok {
            return Ok(Some(parts.iter().map(|p| p.to_vec()).collect()));
        }
    }
    Ok(None)
}

/// Largest induced matching among candidate edges `(u, v)`, where two edges
/// clash if they share an endpoint or `linked(u1, v2) || linked(u2, v1)`.
fn induced_matching(cands: &[(usize, usize)], linked: &dyn Fn(usize, usize) -> bool) -> usize {
    fn go(
        i: usize,
        cands: &[(usize, usize)],
        chosen: &mut Vec<(usize, usize)>,
        best: &mut usize,
        linked: &dyn Fn(usize, usize) -> bool,
    ) {
        if chosen.len() + (cands.len() - i) <= *best {
            return;
        }
        if i == cands.len() {
            *best = chosen.len();
            return;
        }
        let (u, v) = cands[i];
        let fits = chosen.iter().all(|&(x, y)| x != u && y != v && !linked(u, y) && !linked(x, v));
        if fits {
            chosen.push((u, v));
            go(i + 1, cands, chosen, best, linked);
            chosen.pop();
        }
        go(i + 1, cands, chosen, best, linked);
    }
    let mut best = 0;
    go(0, cands, &mut Vec::new(), &mut best, linked);
    best
}

/// Maximum induced matching of the edges from `a` to `b` (masks), by search.
pub fn brute_nu(g: &Digraph, a: u64, b: u64) -> usize {
    let cands: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| a >> u & 1 == 1 && b >> v & 1 == 1).collect();
    induced_matching(&cands, &|u, v| g.has_edge(u, v))
}

/// Maximum induced matching of an undirected graph between the masks `a` and `b`.
pub fn brute_mim(h: &UndirectedGraph, a: u64, b: u64) -> usize {
    let mut cands = Vec::new();
    for &(u, v) in h.edges() {
        if a >> u & 1 == 1 && b >> v & 1 == 1 {
            cands.push((u, v));
        } else if a >> v & 1 == 1 && b >> u & 1 == 1 {
            cands.push((v, u));
        }
    }
    induced_matching(&cands, &|u, v| h.has_edge(u, v))
}

/// Minimum over all leaf-labelled subcubic trees of the maximum of
/// `value(a, b)` over the tree edges, where `(a, b)` are the leaf masks on
/// both sides. Trees are grown by inserting leaf `k` into every edge of
/// each tree on leaves `0..k`; partial trees are pruned once their width
/// (on the vertices placed so far) reaches the best complete width.
fn min_over_trees(n: usize, budget: &OracleBudget, value: &dyn Fn(u64, u64) -> usize) -> Result<usize> {
    limit(n, budget.max_leaves, "decomposition enumeration")?;
    if n <= 1 {
        return Ok(0);
    }
    if n == 2 {
        return Ok(value(1, 2).max(value(2, 1)));
    }
    struct Search<'a> {
        n: usize,
        value: &'a dyn Fn(u64, u64) -> usize,
        memo: HashMap<(u64, u64), usize>,
        best: usize,
        clock: Clock,
    }
    impl Search<'_> {
        fn cut(&mut self, a: u64, b: u64) -> usize {
            let key = (a.min(b), a.max(b));
            if let Some(&v) = self.memo.get(&key) {
                return v;
            }
            let v = (self.value)(a, b);
            self.memo.insert(key, v);
            v
        }

        /// Width of the tree on leaves `0..k`.
        fn width(&mut self, edges: &[(usize, usize)], k: usize) -> usize {
            let nodes = edges.iter().map(|&(x, y)| x.max(y)).max().unwrap_or(0) + 1;
            let mut adj = vec![Vec::new(); nodes];
            for &(x, y) in edges {
                adj[x].push(y);
                adj[y].push(x);
            }
            let placed = (1u64 << k) - 1;
            let mut w = 0;
            for &(x, y) in edges {
                let mut side = 0u64;
                let mut stack = vec![(x, y)];
                while let Some((z, from)) = stack.pop() {
                    if z < self.n {
                        side |= 1 << z;
                    }
                    for &nz in &adj[z] {
                        if nz != from {
                            stack.push((nz, z));
                        }
                    }
                }
                w = w.max(self.cut(side, placed & !side));
            }
            w
        }

        fn grow(&mut self, edges: &mut Vec<(usize, usize)>, k: usize, next_internal: usize) -> Result<()> {
            self.clock.tick()?;
            let w = self.width(edges, k);
            if w >= self.best {
                return Ok(());
            }
            if k == self.n {
                self.best = w;
                return Ok(());
            }
            for e in 0..edges.len() {
                let (x, y) = edges[e];
                let m = next_internal;
                edges[e] = (x, m);
                edges.push((m, y));
                edges.push((m, k));
                self.grow(edges, k + 1, next_internal + 1)?;
                edges.pop();
                edges.pop();
                edges[e] = (x, y);
            }
            Ok(())
        }
    }
    let mut search = Search { n, value, memo: HashMap::new(), best: usize::MAX, clock: Clock::new(budget) };
    let mut edges = vec![(0, n), (1, n), (2, n)];
    search.grow(&mut edges, 3, n + 1)?;
    Ok(search.best)
}

fn bimim_value(g: &Digraph) -> impl Fn(u64, u64) -> usize + '_ {
    move |a, b| brute_nu(g, a, b) + brute_nu(g, b, a)
}

/// Exact bi-mim-width: minimum over all branch decompositions.
pub fn exact_bimimwidth(g: &Digraph, budget: &OracleBudget) -> Result<usize> {
    min_over_trees(g.n(), budget, &bimim_value(g))
}

/// Exact mim-width of an undirected graph.
pub fn exact_mimwidth(h: &UndirectedGraph, budget: &OracleBudget) -> Result<usize> {
    min_over_trees(h.n(), budget, &|a, b| brute_mim(h, a, b))
}

/// Exact linear bi-mim-width: minimum over all vertex orders of the width
/// of the caterpillar with that leaf order.
pub fn exact_linear_bimimwidth(g: &Digraph, budget: &OracleBudget) -> Result<usize> {
    let n = g.n();
    limit(n, budget.max_leaves, "order enumeration")?;
    let value = bimim_value(g);
    let full = (1u64 << n) - 1;
    let mut clock = Clock::new(budget);
    // best[s]: least possible maximum over prefix cuts of an order whose
    // first |s| vertices are s.
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        clock.tick()?;
        let here = value(s, full & !s);
        let mut m = usize::MAX;
        for v in 0..n {
            if s >> v & 1 == 1 {
                m = m.min(best[(s & !(1 << v)) as usize]);
            }
        }
        best[s as usize] = m.max(here);
    }
    // Every leaf edge of a caterpillar also separates a single vertex.
    let single = (0..n).map(|v| value(1 << v, full & !(1 << v))).max().unwrap_or(0);
    Ok(best[full as usize].max(single))
}

/// Number of distinct capped neighbourhood descriptions of subsets of `a`.
pub fn brute_nec(g: &Digraph, a: &VertexSet, d: usize, budget: &OracleBudget) -> Result<usize> {
    let side = a.to_vec();
    limit(side.len(), budget.max_vertices, "class counting")?;
    let n = g.n();
    let rest: Vec<usize> = (0..n).filter(|v| !a.contains(*v)).collect();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut clock = Clock::new(budget);
    let mut seen = HashSet::new();
    for sub in 0..1u64 << side.len() {
        clock.tick()?;
        let mask = side.iter().enumerate().filter(|(i, _)| sub >> i & 1 == 1).fold(0u64, |m, (_, &v)| m | 1 << v);
        let c = counts(n, &edges, mask);
        let key: Vec<(usize, usize)> = rest.iter().map(|&u| (c[u].1.min(d), c[u].0.min(d))).collect();
        seen.insert(key);
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcvp::{catalog_lcvp, LcvpParams};
    use crate::sigma_rho::{catalog_problem, ProblemParams};
    use crate::sets::FiniteOrCofinite;

    fn big() -> OracleBudget {
        OracleBudget { max_vertices: 12, max_leaves: 8, timeout: None }
    }

    #[test]
    fn sigma_rho_examples() {
        let kernel = catalog_problem("kernel", ProblemParams::default()).unwrap();
        assert_eq!(brute_sigma_rho(&Digraph::directed_cycle(3), &kernel, &big()).unwrap().0, Outcome::Infeasible);
        let reg = catalog_problem("k-regular-induced-subdigraph", ProblemParams { k: Some(0), l: None }).unwrap();
        assert_eq!(brute_sigma_rho(&Digraph::empty(5), &reg, &big()).unwrap().0, Outcome::Optimum(5));
        let dom = catalog_problem("dominating-set", ProblemParams::default()).unwrap();
        let c5 = UndirectedGraph::cycle(5).biorientation();
        assert_eq!(brute_sigma_rho(&c5, &dom, &big()).unwrap().0, Outcome::Optimum(2));
    }

    #[test]
    fn lcvp_examples() {
        let all = LcvpMatrix::new(1, vec![(FiniteOrCofinite::naturals(), FiniteOrCofinite::naturals())]).unwrap();
        assert!(brute_lcvp(&Digraph::directed_cycle(4), &all, &big()).unwrap().is_some());
        let host = Digraph::directed_cycle(2);
        let hom = catalog_lcvp("h-homomorphism", &LcvpParams { host: Some(host), ..Default::default() }).unwrap();
        assert!(brute_lcvp(&Digraph::directed_cycle(3), &hom, &big()).unwrap().is_none());
        let col = catalog_lcvp("2-out-coloring", &LcvpParams::default()).unwrap();
        assert!(brute_lcvp(&Digraph::empty(1), &col, &big()).unwrap().is_none());
    }

    #[test]
    fn width_examples() {
        assert_eq!(exact_bimimwidth(&Digraph::new(2, [(0, 1)]).unwrap(), &big()).unwrap(), 1);
        assert_eq!(exact_bimimwidth(&UndirectedGraph::path(3).biorientation(), &big()).unwrap(), 2);
        assert_eq!(exact_mimwidth(&UndirectedGraph::path(3), &big()).unwrap(), 1);
        assert_eq!(exact_bimimwidth(&Digraph::empty(6), &big()).unwrap(), 0);
        assert_eq!(exact_mimwidth(&UndirectedGraph::cycle(5), &big()).unwrap(), 2);
        assert!(exact_bimimwidth(&Digraph::empty(9), &big()).is_err());
    }

    #[test]
    fn linear_at_least_general() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..30 {
            let n = rng.gen_range(1..=6);
            let edges: Vec<_> =
                (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.3)).collect();
            let g = Digraph::new(n, edges).unwrap();
            let w = exact_bimimwidth(&g, &big()).unwrap();
            let lw = exact_linear_bimimwidth(&g, &big()).unwrap();
            assert!(w <= lw);
        }
    }

    #[test]
    fn nec_examples() {
        let g = Digraph::directed_path(4);
        let empty = VertexSet::new(4);
        assert_eq!(brute_nec(&g, &empty, 1, &big()).unwrap(), 1);
        let isolated = Digraph::new(4, [(2, 3)]).unwrap();
        let a = VertexSet::from_iter_with_capacity(4, [0, 1]);
        assert_eq!(brute_nec(&isolated, &a, 2, &big()).unwrap(), 1);
        assert_eq!(brute_nec(&g, &a, 1, &big()).unwrap(), 2);
    }

    #[test]
    fn timeout_is_reported() {
        let budget = OracleBudget { max_vertices: 20, max_leaves: 8, timeout: Some(Duration::from_millis(0)) };
        let dom = catalog_problem("dominating-set", ProblemParams::default()).unwrap();
        let r = brute_sigma_rho(&Digraph::empty(16), &dom, &budget);
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }
}
