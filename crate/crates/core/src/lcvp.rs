//! Existence of `D_q`-partitions by dynamic programming over a branch
//! decomposition, the catalog of named partition problems, and oriented
//! colouring as a disjunction over tournaments.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::bitset::{BitSet, VertexSet};
use crate::decomposition::BranchDecomposition;
use crate::digraph::Digraph;
use crate::dp::{Combiner, DpStats, Skeleton};
use crate::error::{Error, Result};
use crate::nbhd::ClassIndex;
use crate::par;
use crate::sets::FiniteOrCofinite;
use crate::sigma_rho::SigmaRhoProblem;
use crate::text::{self, FORMAT_VERSION};

/// `q × q` matrix of `(μ⁺, μ⁻)` constraints, indexed from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcvpMatrix {
    q: usize,
    entries: Vec<(FiniteOrCofinite, FiniteOrCofinite)>,
}

impl LcvpMatrix {
    pub fn new(q: usize, entries: Vec<(FiniteOrCofinite, FiniteOrCofinite)>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("q must be at least 1".into()));
        }
        if entries.len() != q * q {
            return Err(Error::InvalidArgument(format!("expected {} matrix entries, found {}", q * q, entries.len())));
        }
        Ok(LcvpMatrix { q, entries })
    }

    /// Builds the matrix entry by entry from `f(i, j)`.
    pub fn from_fn(q: usize, f: impl Fn(usize, usize) -> (FiniteOrCofinite, FiniteOrCofinite)) -> Result<Self> {
        Self::new(q, (0..q).flat_map(|i| (0..q).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entry(&self, i: usize, j: usize) -> &(FiniteOrCofinite, FiniteOrCofinite) {
        &self.entries[i * self.q + j]
    }

    pub fn d_value(&self) -> usize {
        self.entries.iter().map(|(a, b)| a.d_value().max(b.d_value())).max().unwrap_or(0)
    }

    /// Whether a vertex in part `i` with the given out/in counts into part
    /// `j` is satisfied.
    pub fn accepts(&self, i: usize, j: usize, out_count: usize, in_count: usize) -> bool {
        let (o, n) = self.entry(i, j);
        o.contains(out_count) && n.contains(in_count)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {FORMAT_VERSION}\nlcvp {}\n", self.q);
        for i in 0..self.q {
            for j in 0..self.q {
                let (o, n) = self.entry(i, j);
                let _ = writeln!(s, "m {} {} out:{o} in:{n}", i + 1, j + 1);
            }
        }
        s
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let first = lines.first().ok_or(Error::Parse { line: 0, msg: "missing `lcvp` header".into() })?;
        if first.keyword() != "lcvp" {
            return Err(first.err("expected `lcvp <q>` header"));
        }
        first.expect_len(2)?;
        let q = first.usize_at(1)?;
        if q == 0 {
            return Err(first.err("q must be at least 1"));
        }
        let mut slots: Vec<Option<(FiniteOrCofinite, FiniteOrCofinite)>> = vec![None; q * q];
        for l in &lines[1..] {
            if l.keyword() != "m" || l.tokens.len() < 5 {
                return Err(l.err("expected `m <i> <j> out:<set> in:<set>`"));
            }
            let (i, j) = (l.usize_at(1)?, l.usize_at(2)?);
            if !(1..=q).contains(&i) || !(1..=q).contains(&j) {
                return Err(l.err(format!("matrix index out of range 1..={q}")));
            }
            let rest = &l.tokens[3..];
            let split = rest.iter().position(|t| t.starts_with("in:")).ok_or_else(|| l.err("missing `in:` set"))?;
            let strip = |toks: &[&str], prefix: &str| -> Result<FiniteOrCofinite> {
                let mut v: Vec<&str> = toks.to_vec();
                v[0] = v[0].strip_prefix(prefix).ok_or_else(|| l.err(format!("expected `{prefix}` set")))?;
                FiniteOrCofinite::from_tokens(&v).map_err(|e| l.err(e.to_string()))
            };
            if split == 0 {
                return Err(l.err("missing `out:` set"));
            }
            let out = strip(&rest[..split], "out:")?;
            let inn = strip(&rest[split..], "in:")?;
            slots[(i - 1) * q + (j - 1)] = Some((out, inn));
        }
        let entries = slots
            .into_iter()
            .enumerate()
            .map(|(k, s)| s.ok_or(Error::Parse { line: 0, msg: format!("missing entry ({}, {})", k / q + 1, k % q + 1) }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, entries)
    }
}

/// Homomorphism into `h`: an edge from part `i` to part `j` is allowed iff
/// `(i, j)` is an edge of `h`. Out-counts from part `i` into part `j` are
/// free exactly when `(i, j) ∈ E(h)`, in-counts exactly when `(j, i) ∈ E(h)`.
pub fn homomorphism_matrix(h: &Digraph) -> Result<LcvpMatrix> {
    let allow = |ok: bool| if ok { FiniteOrCofinite::naturals() } else { FiniteOrCofinite::single(0) };
    LcvpMatrix::from_fn(h.n(), |i, j| (allow(h.has_edge(i, j)), allow(h.has_edge(j, i))))
}

/// Parameters for [`catalog_lcvp`].
#[derive(Clone, Debug, Default)]
pub struct LcvpParams {
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    pub host: Option<Digraph>,
    pub sigma_rho: Option<SigmaRhoProblem>,
}

pub const LCVP_CATALOG: &[&str] = &[
    "h-homomorphism",
    "exists-sigma-rho",
    "delta-out-in-partition",
    "delta-out-out-partition",
    "max-out-partition",
    "bipartite-out-in",
    "bipartite-out-out",
    "2-out-coloring",
];

pub fn catalog_lcvp(name: &str, params: &LcvpParams) -> Result<LcvpMatrix> {
    use FiniteOrCofinite as S;
    let missing = |param: &str| Error::MissingParameter { problem: name.to_string(), param: param.to_string() };
    let k1 = || params.k1.ok_or_else(|| missing("k1"));
    let k2 = || params.k2.ok_or_else(|| missing("k2"));
    let nn = || (S::naturals(), S::naturals());
    let two = |m: [[(S, S); 2]; 2]| {
        let [[a, b], [c, d]] = m;
        LcvpMatrix::new(2, vec![a, b, c, d])
    };
    match name {
        "h-homomorphism" => homomorphism_matrix(params.host.as_ref().ok_or_else(|| missing("host"))?),
        "exists-sigma-rho" => {
            let p = params.sigma_rho.as_ref().ok_or_else(|| missing("sigma-rho problem"))?;
            two([[(p.sigma_out.clone(), p.sigma_in.clone()), nn()], [(p.rho_out.clone(), p.rho_in.clone()), nn()]])
        }
        "delta-out-in-partition" => {
            two([[(S::at_least(k1()?), S::naturals()), nn()], [nn(), (S::naturals(), S::at_least(k2()?))]])
        }
        "delta-out-out-partition" => {
            two([[(S::at_least(k1()?), S::naturals()), nn()], [nn(), (S::at_least(k2()?), S::naturals())]])
        }
        "max-out-partition" => two([[(S::at_most(k1()?), S::naturals()), nn()], [nn(), (S::at_most(k2()?), S::naturals())]]),
        "bipartite-out-in" => {
            two([[nn(), (S::at_least(k1()?), S::naturals())], [(S::naturals(), S::at_least(k2()?)), nn()]])
        }
        "bipartite-out-out" => {
            two([[nn(), (S::at_least(k1()?), S::naturals())], [(S::at_least(k2()?), S::naturals()), nn()]])
        }
        "2-out-coloring" => LcvpMatrix::from_fn(2, |_, _| (S::cofinite([0]), S::naturals())),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

/// Definitional check of a `D_q`-partition. Empty parts are allowed.
pub fn is_dq_partition(g: &Digraph, parts: &[VertexSet], dq: &LcvpMatrix) -> Result<bool> {
    if parts.len() != dq.q() {
        return Err(Error::InvalidArgument(format!("expected {} parts, found {}", dq.q(), parts.len())));
    }
    let mut seen = BitSet::new(g.n());
    for p in parts {
        if !seen.is_disjoint(p) {
            return Err(Error::InvalidArgument("parts overlap".into()));
        }
        seen.union_with(p);
    }
    if seen.len() != g.n() {
        return Err(Error::InvalidArgument("parts do not cover every vertex".into()));
    }
    Ok(parts.iter().enumerate().all(|(i, xi)| {
        xi.iter().all(|v| {
            parts.iter().enumerate().all(|(j, xj)| {
                dq.accepts(i, j, g.out_set(v).intersection_len(xj), g.in_set(v).intersection_len(xj))
            })
        })
    }))
}

#[derive(Clone, Debug)]
pub struct LcvpSolution {
    pub exists: bool,
    /// Parts of a witnessing partition when requested and one exists.
    pub witness: Option<Vec<Vec<usize>>>,
    pub stats: DpStats,
}

/// Mixed-radix view of `q`-tuples of base classes.
#[derive(Clone, Copy)]
struct Radix {
    r: u64,
    q: usize,
}

impl Radix {
    fn of(idx: &ClassIndex, q: usize) -> Self {
        Radix { r: idx.len() as u64, q }
    }

    fn count(&self) -> Result<usize> {
        self.r
            .checked_pow(self.q as u32)
            .and_then(|c| usize::try_from(c).ok())
            .filter(|&c| c <= 1 << 28)
            .ok_or_else(|| Error::BudgetExceeded(format!("{}^{} tuple classes", self.r, self.q)))
    }

    fn decode(&self, mut id: u64, out: &mut [u32]) {
        for slot in out.iter_mut().take(self.q) {
            *slot = (id % self.r) as u32;
            id /= self.r;
        }
    }

    fn encode(&self, parts: impl DoubleEndedIterator<Item = u32>) -> u64 {
        parts.rev().fold(0u64, |acc, c| acc * self.r + c as u64)
    }
}

/// Boolean table: column (complement tuple) → true rows with back-pointers.
#[derive(Default)]
struct QTable {
    cols: HashMap<u64, HashMap<u64, u64>>,
}

impl QTable {
    fn contains(&self, row: u64, col: u64) -> bool {
        self.cols.get(&col).is_some_and(|c| c.contains_key(&row))
    }
}

struct BaseCombs {
    t: Vec<u32>,
    abar: Vec<u32>,
    bbar: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LcvpOptions {
    pub parallel: bool,
    pub witness: bool,
}

impl Default for LcvpOptions {
    fn default() -> Self {
        LcvpOptions { parallel: true, witness: false }
    }
}

pub fn solve_lcvp(g: &Digraph, bd: &BranchDecomposition, dq: &LcvpMatrix, opts: LcvpOptions) -> Result<LcvpSolution> {
    let d = dq.d_value().max(1);
    let sk = Skeleton::new(g, bd, d, opts.parallel)?;
    run(g, &sk, dq, d, opts)
}

fn run(g: &Digraph, sk: &Skeleton, dq: &LcvpMatrix, d: usize, opts: LcvpOptions) -> Result<LcvpSolution> {
    let tree = &sk.tree;
    let q = dq.q();
    let count = tree.nodes.len();
    let mut tables: Vec<Option<QTable>> = (0..count).map(|_| None).collect();
    let mut combs: Vec<Option<BaseCombs>> = (0..count).map(|_| None).collect();
    for &t in &tree.post_order {
        let table = match tree.nodes[t].children {
            None => leaf_table(g, sk, t, dq)?,
            Some((a, b)) => {
                let c = BaseCombs {
                    t: Combiner::new(&sk.inside[t], &sk.inside[a], &sk.inside[b]).table(None, opts.parallel)?,
                    abar: Combiner::new(&sk.outside[a], &sk.inside[b], &sk.outside[t]).table(None, opts.parallel)?,
                    bbar: Combiner::new(&sk.outside[b], &sk.inside[a], &sk.outside[t]).table(None, opts.parallel)?,
                };
                let table = internal_table(sk, t, a, b, tables[a].as_ref().unwrap(), tables[b].as_ref().unwrap(), &c, q, opts)?;
                if opts.witness {
                    combs[t] = Some(c);
                } else {
                    tables[a] = None;
                    tables[b] = None;
                }
                table
            }
        };
        tables[t] = Some(table);
    }
    let stats = DpStats::from_skeleton(sk, d);
    let root = tables[tree.root].as_ref().unwrap();
    let root_row = root.cols.get(&0).and_then(|c| c.keys().min().copied());
    let Some(root_row) = root_row else {
        return Ok(LcvpSolution { exists: false, witness: None, stats });
    };
    let witness = opts.witness.then(|| traceback(sk, &tables, &combs, q, root_row));
    Ok(LcvpSolution { exists: true, witness, stats })
}

fn leaf_table(g: &Digraph, sk: &Skeleton, t: usize, dq: &LcvpMatrix) -> Result<QTable> {
    let q = dq.q();
    let (inside, outside) = (&sk.inside[t], &sk.outside[t]);
    let rin = Radix::of(inside, q);
    let rout = Radix::of(outside, q);
    let mut table = QTable::default();
    let Some(v) = sk.tree.nodes[t].vertex else {
        for col in 0..rout.count()? as u64 {
            table.cols.entry(col).or_default().insert(0, 0);
        }
        return Ok(table);
    };
    let n = g.n();
    let empty = inside.class_of(g, &BitSet::new(n)).expect("empty class") as u32;
    let full = inside.class_of(g, &BitSet::from_iter_with_capacity(n, [v])).expect("singleton class") as u32;
    let self_loop = usize::from(g.has_loop(v));
    let mut parts = vec![0u32; q];
    for col in 0..rout.count()? as u64 {
        rout.decode(col, &mut parts);
        let counts: Vec<(usize, usize)> = parts
            .iter()
            .map(|&c| {
                let y = outside.witness(c as usize);
                (g.out_set(v).intersection_len(y), g.in_set(v).intersection_len(y))
            })
            .collect();
        for i in 0..q {
            let ok = (0..q).all(|j| {
                let own = if i == j { self_loop } else { 0 };
                dq.accepts(i, j, counts[j].0 + own, counts[j].1 + own)
            });
            if ok {
                let row = rin.encode((0..q).map(|j| if j == i { full } else { empty }));
                table.cols.entry(col).or_default().entry(row).or_insert(i as u64);
            }
        }
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn internal_table(
    sk: &Skeleton,
    t: usize,
    a: usize,
    b: usize,
    ta: &QTable,
    tb: &QTable,
    c: &BaseCombs,
    q: usize,
    opts: LcvpOptions,
) -> Result<QTable> {
    let (ra, rb, rt) = (Radix::of(&sk.inside[a], q), Radix::of(&sk.inside[b], q), Radix::of(&sk.inside[t], q));
    let (rabar, rbbar, rtbar) = (Radix::of(&sk.outside[a], q), Radix::of(&sk.outside[b], q), Radix::of(&sk.outside[t], q));
    let cols_t = sk.outside[t].len();
    let nb = sk.inside[b].len();
    let live_a: Vec<(u64, Vec<u32>)> = {
        let rows: HashSet<u64> = ta.cols.values().flat_map(|c| c.keys().copied()).collect();
        let mut rows: Vec<u64> = rows.into_iter().collect();
        rows.sort_unstable();
        rows.into_iter()
            .map(|r| {
                let mut p = vec![0u32; q];
                ra.decode(r, &mut p);
                (r, p)
            })
            .collect()
    };
    let columns = par::map_range(rtbar.count()?, opts.parallel, |col| {
        let col = col as u64;
        let mut tbar = vec![0u32; q];
        rtbar.decode(col, &mut tbar);
        let mut out: HashMap<u64, u64> = HashMap::new();
        let mut qb_parts = vec![0u32; q];
        for (qa, pa) in &live_a {
            let qbbar = rbbar.encode((0..q).map(|j| c.bbar[pa[j] as usize * cols_t + tbar[j] as usize]));
            let Some(rows_b) = tb.cols.get(&qbbar) else { continue };
            for &qb in rows_b.keys() {
                rb.decode(qb, &mut qb_parts);
                let qabar = rabar.encode((0..q).map(|j| c.abar[qb_parts[j] as usize * cols_t + tbar[j] as usize]));
                if !ta.contains(*qa, qabar) {
                    continue;
                }
                let qt = rt.encode((0..q).map(|j| c.t[pa[j] as usize * nb + qb_parts[j] as usize]));
                out.entry(qt).or_insert((*qa << 32) | qb);
            }
        }
        (col, out)
    });
    let mut table = QTable::default();
    for (col, rows) in columns {
        if !rows.is_empty() {
            table.cols.insert(col, rows);
        }
    }
    Ok(table)
}

fn traceback(sk: &Skeleton, tables: &[Option<QTable>], combs: &[Option<BaseCombs>], q: usize, root_row: u64) -> Vec<Vec<usize>> {
    let tree = &sk.tree;
    let mut parts = vec![Vec::new(); q];
    let mut stack = vec![(tree.root, root_row, 0u64)];
    while let Some((t, qt, qtbar)) = stack.pop() {
        let back = tables[t].as_ref().unwrap().cols[&qtbar][&qt];
        match tree.nodes[t].children {
            None => {
                if let Some(v) = tree.nodes[t].vertex {
                    parts[back as usize].push(v);
                }
            }
            Some((a, b)) => {
                let c = combs[t].as_ref().unwrap();
                let cols_t = sk.outside[t].len();
                let (qa, qb) = (back >> 32, back & 0xffff_ffff);
                let (ra, rb) = (Radix::of(&sk.inside[a], q), Radix::of(&sk.inside[b], q));
                let (rabar, rbbar, rtbar) =
                    (Radix::of(&sk.outside[a], q), Radix::of(&sk.outside[b], q), Radix::of(&sk.outside[t], q));
                let (mut pa, mut pb, mut tbar) = (vec![0u32; q], vec![0u32; q], vec![0u32; q]);
                ra.decode(qa, &mut pa);
                rb.decode(qb, &mut pb);
                rtbar.decode(qtbar, &mut tbar);
                let qabar = rabar.encode((0..q).map(|j| c.abar[pb[j] as usize * cols_t + tbar[j] as usize]));
                let qbbar = rbbar.encode((0..q).map(|j| c.bbar[pa[j] as usize * cols_t + tbar[j] as usize]));
                stack.push((a, qa, qabar));
                stack.push((b, qb, qbbar));
            }
        }
    }
    parts.iter_mut().for_each(|p| p.sort_unstable());
    parts
}

/// All orientations of the complete graph on `k` vertices, loop-free.
pub fn tournaments(k: usize) -> Vec<Digraph> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().map(|(b, &(i, j))| if mask >> b & 1 == 1 { (j, i) } else { (i, j) });
            Digraph::new(k, edges).expect("valid tournament")
        })
        .collect()
}

/// Whether `g` maps homomorphically into some tournament on `k` vertices.
pub fn oriented_k_coloring(g: &Digraph, bd: &BranchDecomposition, k: usize, opts: LcvpOptions) -> Result<bool> {
    if !(1..=5).contains(&k) {
        return Err(Error::InvalidArgument(format!("oriented colouring supports 1 <= k <= 5, got {k}")));
    }
    let sk = Skeleton::new(g, bd, 1, opts.parallel)?;
    let hosts = tournaments(k);
    let inner = LcvpOptions { parallel: false, witness: false };
    let errors = std::sync::Mutex::new(None);
    let hit = par::find_any(hosts.len(), opts.parallel, |i| {
        let run_one = || -> Result<bool> { Ok(run(g, &sk, &homomorphism_matrix(&hosts[i])?, 1, inner)?.exists) };
        match run_one() {
            Ok(found) => found,
            Err(e) => {
                *errors.lock().unwrap() = Some(e);
                true
            }
        }
    });
    if let Some(e) = errors.into_inner().unwrap() {
        return Err(e);
    }
    Ok(hit.is_some())
}
