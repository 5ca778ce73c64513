//! Acceptance suite: one line per criterion, nonzero exit status if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bimim::builders::{
    build_adjusted_permutation, build_adjusted_rdpath, build_nice_hconvex, build_reflexive_hdigraph,
    build_reflexive_interval, BuilderReport,
};
use bimim::cut::{cut_rank, cut_values, nu};
use bimim::distance::{distance_dominates, solve_distance_sigma_rho, BallSemantics};
use bimim::lcvp::{catalog_lcvp, is_dq_partition, solve_lcvp, LcvpMatrix, LcvpOptions, LcvpParams};
use bimim::nbhd::enumerate_classes;
use bimim::oracle::{brute_lcvp, brute_mim, brute_nec, brute_sigma_rho, exact_bimimwidth, exact_mimwidth, OracleBudget};
use bimim::representations::{gen_grid_orientation, gen_p2_convex_grid, gen_tournament, grid_index};
use bimim::sigma_rho::{
    catalog_problem, dominates, solve_sigma_rho, Objective, Outcome, ProblemParams, SigmaRhoProblem, SolveOptions,
};
use bimim::{decomposition_width, random, BranchDecomposition, Digraph, Measure, UndirectedGraph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = std::result::Result<String, String>;

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + salt)
}

fn budget() -> OracleBudget {
    OracleBudget { max_vertices: 12, max_leaves: 8, timeout: None }
}

fn sequential() -> SolveOptions {
    SolveOptions { parallel: false, witness: true }
}

fn mask_of(set: &VertexSet) -> u64 {
    set.iter().fold(0, |m, v| m | 1 << v)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sigma_rho_problems() -> Vec<(&'static str, SigmaRhoProblem)> {
    let plain = ProblemParams::default();
    let mut out: Vec<(&'static str, SigmaRhoProblem)> = [
        "kernel",
        "dominating-set",
        "independent-dominating-set",
        "total-dominating-set",
        "efficient-dominating-set",
    ]
    .into_iter()
    .map(|name| (name, catalog_problem(name, plain).unwrap()))
    .collect();
    out.push(("2-dominating-set", catalog_problem("k-dominating-set", ProblemParams { k: Some(2), l: None }).unwrap()));
    out
}

/// Solver and oracle agree on the value; a returned witness is a valid
/// solution of the reported size.
fn compare_sigma_rho(g: &Digraph, bd: &BranchDecomposition, name: &str, prob: &SigmaRhoProblem) -> Result<(), String> {
    let sol = solve_sigma_rho(g, bd, prob, sequential()).map_err(|e| format!("{name}: {e}"))?;
    let (expected, _) = brute_sigma_rho(g, prob, &budget()).map_err(|e| format!("{name}: {e}"))?;
    ensure(sol.outcome == expected, || {
        format!("{name} on {:?}: solver {:?}, oracle {:?}", g.edges().collect::<Vec<_>>(), sol.outcome, expected)
    })?;
    if let Some(w) = &sol.witness {
        let set = VertexSet::from_iter_with_capacity(g.n(), w.iter().copied());
        ensure(dominates(g, &set, prob), || format!("{name}: witness {w:?} is not a solution"))?;
        if let Outcome::Optimum(k) = sol.outcome {
            ensure(w.len() == k, || format!("{name}: witness size {} vs value {k}", w.len()))?;
        }
    }
    Ok(())
}

fn criterion_1() -> Check {
    let problems = sigma_rho_problems();
    let start = Instant::now();
    let mut exhaustive = 0usize;
    for n in 0..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        let total = 1u64 << pairs.len();
        (0..total).into_par_iter().try_for_each(|code| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| code >> i & 1 == 1).map(|(_, &e)| e);
            let g = Digraph::new(n, edges).unwrap();
            let bd = random::decomposition(&mut rng(code), n);
            problems.iter().try_for_each(|(name, p)| compare_sigma_rho(&g, &bd, name, p))
        })?;
        exhaustive += total as usize;
    }
    let randoms: Vec<u64> = (0..300).collect();
    randoms.par_iter().try_for_each(|&i| {
        let mut r = rng(1_000 + i);
        let n = [5, 6, 7][i as usize % 3];
        let p = r.gen_range(0.1..0.6);
        let g = random::digraph(&mut r, n, p, true);
        let bd = random::decomposition(&mut r, n);
        problems.iter().try_for_each(|(name, prob)| compare_sigma_rho(&g, &bd, name, prob))
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!("{exhaustive} exhaustive + 300 random digraphs x 6 problems in {:.1?}", elapsed))
}

fn criterion_2() -> Check {
    let c2 = Digraph::directed_cycle(2);
    let tt3 = Digraph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
    let kernel = catalog_problem("kernel", ProblemParams::default()).unwrap();
    let problems: Vec<(&str, LcvpMatrix)> = vec![
        ("hom-C2", catalog_lcvp("h-homomorphism", &LcvpParams { host: Some(c2), ..Default::default() }).unwrap()),
        ("hom-TT3", catalog_lcvp("h-homomorphism", &LcvpParams { host: Some(tt3), ..Default::default() }).unwrap()),
        ("2-out-coloring", catalog_lcvp("2-out-coloring", &LcvpParams::default()).unwrap()),
        (
            "delta(1,1)",
            catalog_lcvp("delta-out-in-partition", &LcvpParams { k1: Some(1), k2: Some(1), ..Default::default() })
                .unwrap(),
        ),
        (
            "exists-kernel",
            catalog_lcvp("exists-sigma-rho", &LcvpParams { sigma_rho: Some(kernel), ..Default::default() }).unwrap(),
        ),
    ];
    let counts: Vec<usize> = (0..200u64)
        .into_par_iter()
        .map(|i| -> Result<usize, String> {
            let mut r = rng(2_000 + i);
            let n = r.gen_range(1..=6);
            let p = r.gen_range(0.1..0.7);
            let loops = r.gen_bool(0.5);
            let g = random::digraph(&mut r, n, p, loops);
            let bd = random::decomposition(&mut r, n);
            let mut yes = 0;
            for (name, dq) in &problems {
                let sol = solve_lcvp(&g, &bd, dq, LcvpOptions { parallel: false, witness: true })
                    .map_err(|e| format!("{name}: {e}"))?;
                let expected = brute_lcvp(&g, dq, &budget()).map_err(|e| format!("{name}: {e}"))?.is_some();
                ensure(sol.exists == expected, || {
                    format!("{name} on {:?}: solver {}, oracle {expected}", g.edges().collect::<Vec<_>>(), sol.exists)
                })?;
                if let Some(parts) = &sol.witness {
                    let sets: Vec<VertexSet> =
                        parts.iter().map(|p| VertexSet::from_iter_with_capacity(n, p.iter().copied())).collect();
                    ensure(is_dq_partition(&g, &sets, dq).unwrap_or(false), || format!("{name}: bad witness"))?;
                }
                yes += usize::from(expected);
            }
            Ok(yes)
        })
        .collect::<Result<_, _>>()?;
    Ok(format!("200 digraphs x 5 problems, {} feasible instances", counts.iter().sum::<usize>()))
}

fn criterion_3() -> Check {
    let k4e = UndirectedGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).unwrap();
    let hosts = [("P2", UndirectedGraph::path(2)), ("C3", UndirectedGraph::cycle(3)), ("K4-e", k4e)];
    let mut classes: Vec<(String, Box<dyn Fn(u64) -> (Digraph, BuilderReport) + Sync>)> = vec![
        (
            "interval".into(),
            Box::new(|i| {
                let mut r = rng(3_000 + i);
                let n = r.gen_range(1..=40);
                let rep = random::reflexive_interval(&mut r, n, 3 * n as i64, 6);
                (rep.realize().unwrap(), build_reflexive_interval(&rep).unwrap())
            }),
        ),
        (
            "permutation".into(),
            Box::new(|i| {
                let mut r = rng(3_100 + i);
                let n = r.gen_range(1..=40);
                let rep = random::adjusted_permutation(&mut r, n, 2 * n as i64);
                (rep.realize().unwrap(), build_adjusted_permutation(&rep).unwrap())
            }),
        ),
        (
            "rdpath".into(),
            Box::new(|i| {
                let mut r = rng(3_200 + i);
                let n = r.gen_range(1..=40);
                let size = r.gen_range(1..=30);
                let rep = random::adjusted_rdpath(&mut r, n, size);
                (rep.realize().unwrap(), build_adjusted_rdpath(&rep).unwrap())
            }),
        ),
    ];
    for (k, (name, host)) in hosts.iter().enumerate() {
        let host = host.clone();
        classes.push((
            format!("hdigraph-{name}"),
            Box::new(move |i| {
                let mut r = rng(3_300 + 100 * k as u64 + i);
                let n = r.gen_range(1..=40);
                let rep = random::reflexive_hdigraph(&mut r, &host, n, 4, 4);
                (rep.realize().unwrap(), build_reflexive_hdigraph(&rep).unwrap())
            }),
        ));
    }
    for (k, (name, host)) in hosts.iter().take(2).enumerate() {
        let host = host.clone();
        classes.push((
            format!("hconvex-{name}"),
            Box::new(move |i| {
                let mut r = rng(3_700 + 100 * k as u64 + i);
                let max_sub = 4;
                let a_max = host.n() + host.edge_count() * max_sub;
                let b = r.gen_range(1..=40 - a_max);
                let rep = random::nice_hconvex(&mut r, &host, b, max_sub, 4);
                (rep.realize().unwrap(), build_nice_hconvex(&rep).unwrap())
            }),
        ));
    }
    let mut summary = Vec::new();
    for (name, make) in &classes {
        let widths: Vec<(usize, usize)> = (0..100u64)
            .into_par_iter()
            .map(|i| {
                let (g, report) = make(i);
                let report = report.verify(&g, false).map_err(|e| format!("{name} #{i}: {e}"))?;
                let m = report.measured.unwrap();
                ensure(m <= report.guarantee, || format!("{name} #{i}: width {m} > guarantee {}", report.guarantee))?;
                Ok((m, report.guarantee))
            })
            .collect::<Result<_, String>>()?;
        let worst = widths.iter().map(|w| w.0).max().unwrap();
        summary.push(format!("{name} max {worst}/{}", widths[0].1));
    }
    Ok(summary.join(", "))
}

fn criterion_4() -> Check {
    (0..500u64).into_par_iter().try_for_each(|i| {
        let mut r = rng(4_000 + i);
        let n = r.gen_range(1..=14);
        let p = r.gen_range(0.1..0.6);
        let h = random::undirected(&mut r, n, p);
        let a = random::cut(&mut r, n);
        let b = a.complement();
        let g = h.biorientation();
        let (plus, minus) = (nu(&g, &a, &b), nu(&g, &b, &a));
        let expected = brute_mim(&h, mask_of(&a), mask_of(&b));
        ensure(plus == expected && minus == expected, || format!("case {i}: nu+ {plus}, nu- {minus}, mim {expected}"))
    })?;
    Ok("500 (graph, cut) pairs".into())
}

fn criterion_5() -> Check {
    (0..100u64).into_par_iter().try_for_each(|i| {
        let mut r = rng(5_000 + i);
        let n = r.gen_range(1..=10);
        let p = r.gen_range(0.05..0.5);
        let loops = r.gen_bool(0.3);
            let g = random::digraph(&mut r, n, p, loops);
        let bd = random::decomposition(&mut r, n);
        let radius = [2, 3][i as usize % 2];
        let gr = g.power(radius).unwrap();
        let w = decomposition_width(&g, &bd, Measure::BiMim, false).unwrap();
        let wr = decomposition_width(&gr, &bd, Measure::BiMim, false).unwrap();
        let rank = decomposition_width(&g, &bd, Measure::BiRank, false).unwrap();
        ensure(wr <= radius * w, || format!("case {i}: width of power {wr} > {radius} * {w}"))?;
        ensure(wr <= rank, || format!("case {i}: width of power {wr} > bi-rank-width {rank}"))?;
        for side in bd.edge_cuts() {
            let other = side.complement();
            for (x, y) in [(&side, &other), (&other, &side)] {
                let (pw, base, rk) = (nu(&gr, x, y), nu(&g, x, y), cut_rank(&g, x, y));
                ensure(pw <= radius * base && pw <= rk, || format!("case {i}: cut values {pw} vs {base}, {rk}"))?;
            }
        }
        Ok::<(), String>(())
    })?;
    Ok("100 (digraph, decomposition) pairs, per cut and per decomposition".into())
}

fn bound(n: usize, exp: usize) -> u128 {
    (n as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

fn criterion_6() -> Check {
    let worst: Vec<usize> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(6_000 + i);
            let n = r.gen_range(1..=12);
            let d = 1 + (i as usize % 2);
            let p = r.gen_range(0.05..0.5);
            let loops = r.gen_bool(0.5);
            let g = random::digraph(&mut r, n, p, loops);
            let a = random::cut(&mut r, n);
            let classes = enumerate_classes(&g, &a, d).map_err(|e| e.to_string())?.len();
            let brute = brute_nec(&g, &a, d, &budget()).map_err(|e| e.to_string())?;
            ensure(classes == brute, || format!("case {i}: enumerated {classes}, brute force {brute}"))?;
            let w = cut_values(&g, &a, false).bimim;
            ensure(classes as u128 <= bound(n, d * w), || format!("case {i}: nec {classes} > {n}^({d}*{w})"))?;
            Ok(classes)
        })
        .collect::<Result<_, String>>()?;
    Ok(format!("200 cuts, largest class count {}", worst.iter().max().unwrap()))
}

fn criterion_7() -> Check {
    for n in 2..=8 {
        let (_, g) = gen_grid_orientation(n).map_err(|e| e.to_string())?;
        ensure(g.underlying() == UndirectedGraph::grid(n, n), || format!("grid {n}: wrong underlying graph"))?;
        for j in 1..=n {
            for i in 1..=n {
                let v = grid_index(n, i, j);
                let mut expect = Vec::new();
                if i < n {
                    let w = grid_index(n, i + 1, j);
                    expect.push(if i % 2 == 1 { (v, w) } else { (w, v) });
                }
                if j < n {
                    let w = grid_index(n, i, j + 1);
                    expect.push(if i % 2 == 1 { (v, w) } else { (w, v) });
                }
                for (x, y) in expect {
                    ensure(g.has_edge(x, y) && !g.has_edge(y, x), || format!("grid {n}: edge ({x},{y}) misoriented"))?;
                }
            }
        }
    }
    for n in 2..=6 {
        let g = gen_tournament(n).map_err(|e| e.to_string())?;
        for u in 0..g.n() {
            ensure(!g.has_loop(u), || format!("tournament {n}: loop"))?;
            for v in u + 1..g.n() {
                ensure(g.has_edge(u, v) != g.has_edge(v, u), || format!("tournament {n}: pair {u},{v}"))?;
            }
        }
    }
    for n in 2..=6 {
        let rep = gen_p2_convex_grid(n).map_err(|e| e.to_string())?;
        let g = rep.realize().map_err(|e| e.to_string())?;
        let a = rep.a_count();
        ensure(g.edges().all(|(u, v)| (u < a) != (v < a)), || format!("p2 grid {n}: not bipartite"))?;
        // Each grid edge is carried by a private A-node adjacent to exactly
        // its two grid vertices among B.
        let grid = UndirectedGraph::grid(n, n);
        for &(u, v) in grid.edges() {
            let carriers = (0..a).filter(|&x| {
                let touches = |b: usize| g.has_edge(a + b, x) || g.has_edge(x, a + b);
                touches(u) && touches(v) && (0..n * n).filter(|&b| touches(b)).count() == 2
            });
            ensure(carriers.count() >= 1, || format!("p2 grid {n}: edge {{{u},{v}}} not subdivided"))?;
        }
    }
    Ok("grid n=2..8, tournament n=2..6, P2-convex grid n=2..6".into())
}

fn brute_distance(g: &Digraph, r: usize, prob: &SigmaRhoProblem) -> Outcome {
    let n = g.n();
    let mut best: Option<usize> = None;
    for mask in 0..1u64 << n {
        let set = VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| mask >> v & 1 == 1));
        if distance_dominates(g, &set, r, prob, BallSemantics::Power).unwrap() {
            let k = set.len();
            best = Some(match (prob.objective, best) {
                (Objective::Max, Some(b)) => b.max(k),
                (_, Some(b)) => b.min(k),
                (_, None) => k,
            });
        }
    }
    match (best, prob.objective) {
        (None, _) => Outcome::Infeasible,
        (Some(_), Objective::Exists) => Outcome::Feasible,
        (Some(k), _) => Outcome::Optimum(k),
    }
}

fn criterion_8() -> Check {
    let kernel = catalog_problem("kernel", ProblemParams::default()).unwrap();
    let dom = catalog_problem("dominating-set", ProblemParams::default()).unwrap();
    (0..100u64).into_par_iter().try_for_each(|i| {
        let mut r = rng(8_000 + i);
        let n = r.gen_range(1..=6);
        let radius = 1 + i as usize % 3;
        let p = r.gen_range(0.1..0.5);
        let loops = r.gen_bool(0.3);
            let g = random::digraph(&mut r, n, p, loops);
        let bd = random::decomposition(&mut r, n);
        for prob in [&kernel, &dom] {
            let got = solve_distance_sigma_rho(&g, &bd, radius, prob, sequential()).map_err(|e| e.to_string())?;
            let expected = brute_distance(&g, radius, prob);
            ensure(got.outcome == expected, || format!("case {i} r={radius}: {:?} vs {expected:?}", got.outcome))?;
        }
        Ok::<(), String>(())
    })?;
    let mut cycles = Vec::new();
    for n in 4..=9 {
        let g = Digraph::directed_cycle(n);
        let bd = BranchDecomposition::linear(&(0..n).collect::<Vec<_>>()).unwrap();
        let got = solve_distance_sigma_rho(&g, &bd, 2, &kernel, sequential()).map_err(|e| e.to_string())?;
        let expected = brute_distance(&g, 2, &kernel);
        ensure(got.outcome == expected, || format!("C{n}: {:?} vs {expected:?}", got.outcome))?;
        cycles.push(format!("C{n}:{}", match expected {
            Outcome::Optimum(k) => k.to_string(),
            _ => "none".into(),
        }));
    }
    Ok(format!("100 random instances; distance-2 kernels {}", cycles.join(" ")))
}

fn criterion_9() -> Check {
    (0..100u64).into_par_iter().try_for_each(|i| {
        let mut r = rng(9_000 + i);
        let n = r.gen_range(1..=5);
        let p = r.gen_range(0.1..0.6);
        let loops = r.gen_bool(0.5);
            let g = random::digraph(&mut r, n, p, loops);
        let keep: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.6)).collect();
        let sub = g.induced_subdigraph(&keep).unwrap();
        let (ws, wg) = (exact_bimimwidth(&sub, &budget()).unwrap(), exact_bimimwidth(&g, &budget()).unwrap());
        ensure(ws <= wg, || format!("case {i}: induced subdigraph width {ws} > {wg}"))?;
        let h = random::undirected(&mut r, n, p);
        let wb = exact_bimimwidth(&h.biorientation(), &budget()).unwrap();
        let wm = exact_mimwidth(&h, &budget()).unwrap();
        ensure(wb == 2 * wm, || format!("case {i}: biorientation width {wb} vs 2 * {wm}"))
    })?;
    Ok("100 cases, n <= 5".into())
}

/// Solves `prob` on `g` and asserts the class-count bound at every node.
fn scale_run(g: &Digraph, bd: &BranchDecomposition, prob: &SigmaRhoProblem) -> Result<(Outcome, usize), String> {
    let n = g.n();
    let sol = solve_sigma_rho(g, bd, prob, SolveOptions { parallel: true, witness: true }).map_err(|e| e.to_string())?;
    let d = prob.d_value();
    for node in &sol.stats.nodes {
        let cw = cut_values(g, &node.side, false).bimim;
        let cap = bound(n, d * cw);
        ensure((node.nec_inside as u128) <= cap && (node.nec_outside as u128) <= cap, || {
            format!("nec {}/{} exceeds {n}^({d}*{cw})", node.nec_inside, node.nec_outside)
        })?;
    }
    if let Some(wit) = &sol.witness {
        let set = VertexSet::from_iter_with_capacity(n, wit.iter().copied());
        ensure(dominates(g, &set, prob), || "witness invalid".into())?;
    }
    Ok((sol.outcome, sol.stats.max_nec()))
}

fn criterion_10() -> Check {
    let mut r = rng(10_000);
    let n = 200;
    let rep = random::reflexive_interval(&mut r, n, 400, 3);
    let g = rep.realize().map_err(|e| e.to_string())?;
    let kernel = catalog_problem("kernel", ProblemParams::default()).unwrap();
    let start = Instant::now();
    let report = build_reflexive_interval(&rep).map_err(|e| e.to_string())?;
    let (outcome, nec) = scale_run(&g, &report.decomposition, &kernel)?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    let report = report.verify(&g, true).map_err(|e| e.to_string())?;
    let w = report.measured.unwrap();
    ensure(w <= 2, || format!("decomposition width {w}"))?;
    // Every vertex of a reflexive digraph sees itself, so no kernel exists;
    // a dominating set exercises the tables with feasible states as well.
    ensure(outcome == Outcome::Infeasible, || format!("kernel outcome {outcome:?} on a reflexive digraph"))?;
    let dom = catalog_problem("dominating-set", ProblemParams::default()).unwrap();
    let (dom_outcome, dom_nec) = scale_run(&g, &report.decomposition, &dom)?;
    ensure(matches!(dom_outcome, Outcome::Optimum(_)), || format!("dominating set outcome {dom_outcome:?}"))?;
    Ok(format!(
        "n={n}, width {w}, kernel {outcome:?} in {elapsed:.2?} (max nec {nec}), dominating set {dom_outcome:?} (max nec {dom_nec})"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("sigma-rho solver matches brute force", criterion_1),
        ("LCVP solver matches brute force", criterion_2),
        ("builder width bounds", criterion_3),
        ("per-cut biorientation identity", criterion_4),
        ("power width bounds", criterion_5),
        ("class counts match brute force and bound", criterion_6),
        ("family generators", criterion_7),
        ("distance reduction", criterion_8),
        ("graph-level width lemmas", criterion_9),
        ("scale run, n = 200", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
