//! Optimum `(σ⁺, σ⁻, ρ⁺, ρ⁻)`-sets by dynamic programming over a branch
//! decomposition, and the catalog of named problems.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::bitset::{BitSet, VertexSet};
use crate::decomposition::BranchDecomposition;
use crate::digraph::Digraph;
use crate::dp::{Combiner, DpStats, Skeleton, NONE};
use crate::error::{Error, Result};
use crate::par;
use crate::sets::FiniteOrCofinite;
use crate::text::{self, FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Min,
    Max,
    Exists,
}

impl FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Objective::Min),
            "max" => Ok(Objective::Max),
            "exists" => Ok(Objective::Exists),
            other => Err(Error::InvalidArgument(format!("unknown objective `{other}` (min|max|exists)"))),
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Objective::Min => "min",
            Objective::Max => "max",
            Objective::Exists => "exists",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaRhoProblem {
    pub sigma_out: FiniteOrCofinite,
    pub sigma_in: FiniteOrCofinite,
    pub rho_out: FiniteOrCofinite,
    pub rho_in: FiniteOrCofinite,
    pub objective: Objective,
}

/// Optional integer parameters of catalog entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProblemParams {
    pub k: Option<usize>,
    pub l: Option<usize>,
}

impl SigmaRhoProblem {
    pub fn new(
        sigma_out: FiniteOrCofinite,
        sigma_in: FiniteOrCofinite,
        rho_out: FiniteOrCofinite,
        rho_in: FiniteOrCofinite,
        objective: Objective,
    ) -> Self {
        SigmaRhoProblem { sigma_out, sigma_in, rho_out, rho_in, objective }
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    /// Largest d-value of the four sets.
    pub fn d_value(&self) -> usize {
        [&self.sigma_out, &self.sigma_in, &self.rho_out, &self.rho_in].iter().map(|s| s.d_value()).max().unwrap()
    }

    /// Whether a vertex with the given solution out/in counts is satisfied.
    pub fn accepts(&self, in_solution: bool, out_count: usize, in_count: usize) -> bool {
        if in_solution {
            self.sigma_out.contains(out_count) && self.sigma_in.contains(in_count)
        } else {
            self.rho_out.contains(out_count) && self.rho_in.contains(in_count)
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {FORMAT_VERSION}\n");
        let _ = writeln!(s, "sigma+ {}", self.sigma_out);
        let _ = writeln!(s, "sigma- {}", self.sigma_in);
        let _ = writeln!(s, "rho+ {}", self.rho_out);
        let _ = writeln!(s, "rho- {}", self.rho_in);
        let _ = writeln!(s, "objective {}", self.objective);
        s
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let mut sets: [Option<FiniteOrCofinite>; 4] = Default::default();
        let mut objective = None;
        for l in text::lines(src) {
            let slot = match l.keyword() {
                "sigma+" => 0,
                "sigma-" => 1,
                "rho+" => 2,
                "rho-" => 3,
                "objective" => {
                    l.expect_len(2)?;
                    objective = Some(l.tokens[1].parse().map_err(|e: Error| l.err(e.to_string()))?);
                    continue;
                }
                other => return Err(l.err(format!("unexpected `{other}` line"))),
            };
            sets[slot] = Some(FiniteOrCofinite::from_tokens(&l.tokens[1..]).map_err(|e| l.err(e.to_string()))?);
        }
        let missing = |name: &str| Error::Parse { line: 0, msg: format!("missing `{name}` line") };
        let [so, si, ro, ri] = sets;
        Ok(SigmaRhoProblem {
            sigma_out: so.ok_or_else(|| missing("sigma+"))?,
            sigma_in: si.ok_or_else(|| missing("sigma-"))?,
            rho_out: ro.ok_or_else(|| missing("rho+"))?,
            rho_in: ri.ok_or_else(|| missing("rho-"))?,
            objective: objective.unwrap_or(Objective::Min),
        })
    }
}

/// Names accepted by [`catalog_problem`].
pub const CATALOG: &[&str] = &[
    "kernel",
    "k-l-out-kernel",
    "dominating-set",
    "independent-dominating-set",
    "in-dominating-set",
    "twin-dominating-set",
    "k-dominating-set",
    "total-dominating-set",
    "efficient-dominating-set",
    "efficient-total-dominating-set",
    "k-regular-induced-subdigraph",
];

/// Named `(σ⁺, σ⁻, ρ⁺, ρ⁻)` problems. All minimise, except the regular
/// induced subdigraph problem which maximises.
pub fn catalog_problem(name: &str, params: ProblemParams) -> Result<SigmaRhoProblem> {
    use FiniteOrCofinite as S;
    let need = |p: Option<usize>, param: &str| {
        p.ok_or_else(|| Error::MissingParameter { problem: name.to_string(), param: param.to_string() })
    };
    let n = S::naturals;
    let pos = || S::cofinite([0]);
    let z = || S::single(0);
    let (so, si, ro, ri, obj) = match name {
        "kernel" => (z(), z(), pos(), n(), Objective::Min),
        "k-l-out-kernel" => {
            let k = need(params.k, "k")?;
            let l = need(params.l, "l")?;
            (S::finite(0..k), z(), S::at_least(l), n(), Objective::Min)
        }
        "dominating-set" => (n(), n(), n(), pos(), Objective::Min),
        "independent-dominating-set" => (z(), z(), n(), pos(), Objective::Min),
        "in-dominating-set" => (n(), n(), pos(), n(), Objective::Min),
        "twin-dominating-set" => (n(), n(), pos(), pos(), Objective::Min),
        "k-dominating-set" => (n(), n(), n(), S::at_least(need(params.k, "k")?), Objective::Min),
        "total-dominating-set" => (n(), pos(), n(), pos(), Objective::Min),
        "efficient-dominating-set" => (z(), z(), n(), S::single(1), Objective::Min),
        "efficient-total-dominating-set" => (n(), S::single(1), n(), S::single(1), Objective::Min),
        "k-regular-induced-subdigraph" => {
            let k = need(params.k, "k")?;
            (S::single(k), S::single(k), n(), n(), Objective::Max)
        }
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    Ok(SigmaRhoProblem::new(so, si, ro, ri, obj))
}

/// Definitional check: members count solution out/in-neighbours against the
/// σ sets, non-members against the ρ sets. A loop counts `v` as its own out-
/// and in-neighbour.
pub fn dominates(g: &Digraph, s: &VertexSet, prob: &SigmaRhoProblem) -> bool {
    (0..g.n()).all(|v| prob.accepts(s.contains(v), g.out_set(v).intersection_len(s), g.in_set(v).intersection_len(s)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Optimum(usize),
    Feasible,
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub parallel: bool,
    pub witness: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { parallel: true, witness: false }
    }
}

#[derive(Clone, Debug)]
pub struct SigmaRhoSolution {
    pub outcome: Outcome,
    pub witness: Option<Vec<usize>>,
    pub stats: DpStats,
}

/// Column-major table: `vals[col * rows + row]`.
struct Table {
    rows: usize,
    vals: Vec<i64>,
    back: Vec<u64>,
}

struct Combs {
    t: Vec<u32>,
    abar: Vec<u32>,
    bbar: Vec<u32>,
}

#[derive(Clone, Copy)]
struct Opt {
    none: i64,
    max: bool,
    weight: i64,
}

impl Opt {
    fn better(&self, a: i64, b: i64) -> bool {
        if self.max {
            a > b
        } else {
            a < b
        }
    }
}

const TAKE: u64 = 1;

/// Solves the problem over `bd`; see [`SolveOptions`] for witness recovery.
pub fn solve_sigma_rho(
    g: &Digraph,
    bd: &BranchDecomposition,
    prob: &SigmaRhoProblem,
    opts: SolveOptions,
) -> Result<SigmaRhoSolution> {
    let d = prob.d_value().max(1);
    let sk = Skeleton::new(g, bd, d, opts.parallel)?;
    let opt = match prob.objective {
        Objective::Min => Opt { none: i64::MAX, max: false, weight: 1 },
        Objective::Max => Opt { none: i64::MIN, max: true, weight: 1 },
        Objective::Exists => Opt { none: i64::MAX, max: false, weight: 0 },
    };
    let tree = &sk.tree;
    let count = tree.nodes.len();
    let mut tables: Vec<Option<Table>> = (0..count).map(|_| None).collect();
    let mut combs: Vec<Option<Combs>> = (0..count).map(|_| None).collect();
    for &t in &tree.post_order {
        let table = match tree.nodes[t].children {
            None => leaf_table(g, &sk, t, prob, opt),
            Some((a, b)) => {
                let (table, c) = internal_table(&sk, t, a, b, tables[a].as_ref().unwrap(), tables[b].as_ref().unwrap(), opt, opts)?;
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
    let stats = DpStats::from_skeleton(&sk, d);
    let root_table = tables[tree.root].as_ref().unwrap();
    let best = (0..root_table.rows)
        .filter(|&r| root_table.vals[r] != opt.none)
        .fold(None::<usize>, |acc, r| match acc {
            Some(b) if !opt.better(root_table.vals[r], root_table.vals[b]) => Some(b),
            _ => Some(r),
        });
    let Some(best_row) = best else {
        return Ok(SigmaRhoSolution { outcome: Outcome::Infeasible, witness: None, stats });
    };
    let outcome = match prob.objective {
        Objective::Exists => Outcome::Feasible,
        _ => Outcome::Optimum(root_table.vals[best_row] as usize),
    };
    let witness = opts.witness.then(|| traceback(&sk, &tables, &combs, best_row));
    Ok(SigmaRhoSolution { outcome, witness, stats })
}

fn leaf_table(g: &Digraph, sk: &Skeleton, t: usize, prob: &SigmaRhoProblem, opt: Opt) -> Table {
    let (inside, outside) = (&sk.inside[t], &sk.outside[t]);
    let rows = inside.len();
    let cols = outside.len();
    let mut vals = vec![opt.none; rows * cols];
    let mut back = vec![0u64; rows * cols];
    let Some(v) = sk.tree.nodes[t].vertex else {
        vals.iter_mut().for_each(|x| *x = 0);
        return Table { rows, vals, back };
    };
    let n = g.n();
    let empty_row = inside.class_of(g, &BitSet::new(n)).expect("empty class");
    let full_row = inside.class_of(g, &BitSet::from_iter_with_capacity(n, [v])).expect("singleton class");
    let self_loop = usize::from(g.has_loop(v));
    for col in 0..cols {
        let r = outside.witness(col);
        let out_c = g.out_set(v).intersection_len(r);
        let in_c = g.in_set(v).intersection_len(r);
        let mut update = |row: usize, value: i64, take: bool| {
            let cell = col * rows + row;
            if vals[cell] == opt.none || opt.better(value, vals[cell]) {
                vals[cell] = value;
                back[cell] = if take { TAKE } else { 0 };
            }
        };
        if prob.accepts(false, out_c, in_c) {
            update(empty_row, 0, false);
        }
        if prob.accepts(true, out_c + self_loop, in_c + self_loop) {
            update(full_row, opt.weight, true);
        }
    }
    Table { rows, vals, back }
}

#[allow(clippy::too_many_arguments)]
fn internal_table(
    sk: &Skeleton,
    t: usize,
    a: usize,
    b: usize,
    ta: &Table,
    tb: &Table,
    opt: Opt,
    opts: SolveOptions,
) -> Result<(Table, Combs)> {
    let live = |tab: &Table| -> Vec<bool> {
        let mut l = vec![false; tab.rows];
        for (i, &x) in tab.vals.iter().enumerate() {
            if x != opt.none {
                l[i % tab.rows] = true;
            }
        }
        l
    };
    let (live_a, live_b) = (live(ta), live(tb));
    let par = opts.parallel;
    let comb_t = Combiner::new(&sk.inside[t], &sk.inside[a], &sk.inside[b]).table(Some(&live_a), par)?;
    let comb_abar = Combiner::new(&sk.outside[a], &sk.inside[b], &sk.outside[t]).table(Some(&live_b), par)?;
    let comb_bbar = Combiner::new(&sk.outside[b], &sk.inside[a], &sk.outside[t]).table(Some(&live_a), par)?;
    let (na, nb) = (sk.inside[a].len(), sk.inside[b].len());
    let cols_t = sk.outside[t].len();
    let rows_t = sk.inside[t].len();
    // Finite rows of each column of the b table.
    let cols_b = sk.outside[b].len();
    let finite_b: Vec<Vec<u32>> = (0..cols_b)
        .map(|c| (0..tb.rows).filter(|&r| tb.vals[c * tb.rows + r] != opt.none).map(|r| r as u32).collect())
        .collect();
    let live_rows_a: Vec<usize> = (0..na).filter(|&r| live_a[r]).collect();
    let columns = par::map_range(cols_t, par, |qtbar| {
        let mut col = vec![opt.none; rows_t];
        let mut back = if opts.witness { vec![0u64; rows_t] } else { Vec::new() };
        for &qa in &live_rows_a {
            let qbbar = comb_bbar[qa * cols_t + qtbar];
            debug_assert_ne!(qbbar, NONE);
            for &qb in &finite_b[qbbar as usize] {
                let qb = qb as usize;
                let qabar = comb_abar[qb * cols_t + qtbar] as usize;
                let va = ta.vals[qabar * ta.rows + qa];
                if va == opt.none {
                    continue;
                }
                let vb = tb.vals[qbbar as usize * tb.rows + qb];
                let value = va + vb;
                let qt = comb_t[qa * nb + qb] as usize;
                if col[qt] == opt.none || opt.better(value, col[qt]) {
                    col[qt] = value;
                    if opts.witness {
                        back[qt] = ((qa as u64) << 32) | qb as u64;
                    }
                }
            }
        }
        (col, back)
    });
    let mut vals = Vec::with_capacity(rows_t * cols_t);
    let mut back = Vec::new();
    for (c, bk) in columns {
        vals.extend(c);
        back.extend(bk);
    }
    Ok((Table { rows: rows_t, vals, back }, Combs { t: comb_t, abar: comb_abar, bbar: comb_bbar }))
}

fn traceback(sk: &Skeleton, tables: &[Option<Table>], combs: &[Option<Combs>], root_row: usize) -> Vec<usize> {
    let tree = &sk.tree;
    let mut solution = Vec::new();
    let mut stack = vec![(tree.root, root_row, 0usize)];
    while let Some((t, qt, qtbar)) = stack.pop() {
        let table = tables[t].as_ref().unwrap();
        let packed = table.back[qtbar * table.rows + qt];
        match tree.nodes[t].children {
            None => {
                if packed == TAKE {
                    solution.push(tree.nodes[t].vertex.unwrap());
                }
            }
            Some((a, b)) => {
                let c = combs[t].as_ref().unwrap();
                let cols_t = sk.outside[t].len();
                let (qa, qb) = ((packed >> 32) as usize, (packed & 0xffff_ffff) as usize);
                let qabar = c.abar[qb * cols_t + qtbar] as usize;
                let qbbar = c.bbar[qa * cols_t + qtbar] as usize;
                debug_assert_eq!(c.t[qa * sk.inside[b].len() + qb] as usize, qt);
                stack.push((a, qa, qabar));
                stack.push((b, qb, qbbar));
            }
        }
    }
    solution.sort_unstable();
    solution
}
