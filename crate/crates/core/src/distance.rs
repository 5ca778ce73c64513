//! Distance-`r` variants of both problem families, solved by running the
//! base dynamic programs on the `r`-th power with the same decomposition.
//!
//! The default checker counts neighbours in `G^r`: `w ≠ v` counts when it is
//! within distance `r`, and `v` counts for itself only when a closed walk of
//! length at most `r` passes through it. The strict checker instead counts
//! the literal balls, which always contain `v`.

use crate::bitset::VertexSet;
use crate::decomposition::BranchDecomposition;
use crate::digraph::{Digraph, Direction};
use crate::error::{Error, Result};
use crate::lcvp::{solve_lcvp, LcvpMatrix, LcvpOptions, LcvpSolution};
use crate::sigma_rho::{solve_sigma_rho, SigmaRhoProblem, SigmaRhoSolution, SolveOptions};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BallSemantics {
    /// Neighbourhoods of the `r`-th power.
    #[default]
    Power,
    /// `B_r(v)` including `v` itself.
    Strict,
}

/// Out- and in-counts of `s` around every vertex at radius `r`.
pub fn ball_counts(g: &Digraph, s: &VertexSet, r: usize, semantics: BallSemantics) -> Result<Vec<(usize, usize)>> {
    if r == 0 {
        return Err(Error::InvalidArgument("distance requires r >= 1".into()));
    }
    let n = g.n();
    let within = |d: &Option<usize>| matches!(d, Some(d) if *d <= r);
    Ok((0..n)
        .map(|v| {
            let fwd = g.distances_from(v, Direction::Out);
            let bwd = g.distances_from(v, Direction::In);
            let others = |dist: &[Option<usize>]| s.iter().filter(|&w| w != v && within(&dist[w])).count();
            let own = match semantics {
                BallSemantics::Strict => s.contains(v),
                BallSemantics::Power => {
                    s.contains(v) && g.in_neighbors(v).iter().any(|&u| matches!(fwd[u], Some(d) if d < r))
                }
            };
            let own = usize::from(own);
            (others(&fwd) + own, others(&bwd) + own)
        })
        .collect())
}

pub fn distance_dominates(
    g: &Digraph,
    s: &VertexSet,
    r: usize,
    prob: &SigmaRhoProblem,
    semantics: BallSemantics,
) -> Result<bool> {
    let counts = ball_counts(g, s, r, semantics)?;
    Ok(counts.iter().enumerate().all(|(v, &(o, i))| prob.accepts(s.contains(v), o, i)))
}

pub fn is_distance_dq_partition(
    g: &Digraph,
    parts: &[VertexSet],
    r: usize,
    dq: &LcvpMatrix,
    semantics: BallSemantics,
) -> Result<bool> {
    if parts.len() != dq.q() {
        return Err(Error::InvalidArgument(format!("expected {} parts, found {}", dq.q(), parts.len())));
    }
    let per_part = parts.iter().map(|p| ball_counts(g, p, r, semantics)).collect::<Result<Vec<_>>>()?;
    Ok(parts.iter().enumerate().all(|(i, xi)| {
        xi.iter().all(|v| (0..parts.len()).all(|j| dq.accepts(i, j, per_part[j][v].0, per_part[j][v].1)))
    }))
}

pub fn solve_distance_sigma_rho(
    g: &Digraph,
    bd: &BranchDecomposition,
    r: usize,
    prob: &SigmaRhoProblem,
    opts: SolveOptions,
) -> Result<SigmaRhoSolution> {
    solve_sigma_rho(&g.power(r)?, bd, prob, opts)
}

pub fn solve_distance_lcvp(
    g: &Digraph,
    bd: &BranchDecomposition,
    r: usize,
    dq: &LcvpMatrix,
    opts: LcvpOptions,
) -> Result<LcvpSolution> {
    solve_lcvp(&g.power(r)?, bd, dq, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::BitSet;
    use crate::lcvp::homomorphism_matrix;
    use crate::sigma_rho::{catalog_problem, dominates, Outcome, ProblemParams};

    fn set(n: usize, xs: &[usize]) -> VertexSet {
        BitSet::from_iter_with_capacity(n, xs.iter().copied())
    }

    #[test]
    fn power_semantics_equals_power_neighbourhoods() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(3);
        let ds = catalog_problem("dominating-set", ProblemParams::default()).unwrap();
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.3)).collect();
            let g = Digraph::new(n, edges).unwrap();
            let r = rng.gen_range(1..=3);
            let s = BitSet::from_iter_with_capacity(n, (0..n).filter(|_| rng.gen_bool(0.5)));
            let p = g.power(r).unwrap();
            assert_eq!(distance_dominates(&g, &s, r, &ds, BallSemantics::Power).unwrap(), dominates(&p, &s, &ds));
        }
    }

    #[test]
    fn literal_balls_self_count() {
        let p = Digraph::directed_path(5);
        let ds = catalog_problem("dominating-set", ProblemParams::default()).unwrap();
        let s = set(5, &[0, 2]);
        assert!(distance_dominates(&p, &s, 2, &ds, BallSemantics::Power).unwrap());
        assert!(distance_dominates(&p, &s, 2, &ds, BallSemantics::Strict).unwrap());
        // r = 1 against plain domination: the strict ball counts v itself.
        let single = Digraph::empty(1);
        let total = catalog_problem("total-dominating-set", ProblemParams::default()).unwrap();
        let all = single.vertex_set();
        assert!(!distance_dominates(&single, &all, 1, &total, BallSemantics::Power).unwrap());
        assert!(distance_dominates(&single, &all, 1, &total, BallSemantics::Strict).unwrap());
        assert!(ball_counts(&p, &s, 0, BallSemantics::Power).is_err());
    }

    #[test]
    fn solver_examples() {
        let ds = catalog_problem("dominating-set", ProblemParams::default()).unwrap();
        let p5 = Digraph::directed_path(5);
        let bd = BranchDecomposition::linear(&[0, 1, 2, 3, 4]).unwrap();
        let opts = SolveOptions { parallel: false, witness: true };
        let sol = solve_distance_sigma_rho(&p5, &bd, 2, &ds, opts).unwrap();
        assert_eq!(sol.outcome, Outcome::Optimum(2));
        let w = set(5, &sol.witness.unwrap());
        assert!(distance_dominates(&p5, &w, 2, &ds, BallSemantics::Power).unwrap());
        let r1 = solve_distance_sigma_rho(&p5, &bd, 1, &ds, opts).unwrap();
        assert_eq!(r1.outcome, solve_sigma_rho(&p5, &bd, &ds, opts).unwrap().outcome);

        let kernel = catalog_problem("kernel", ProblemParams::default()).unwrap();
        let c6 = Digraph::directed_cycle(6);
        let bd6 = BranchDecomposition::linear(&[0, 1, 2, 3, 4, 5]).unwrap();
        let sol = solve_distance_sigma_rho(&c6, &bd6, 2, &kernel, opts).unwrap();
        assert_eq!(sol.outcome, solve_sigma_rho(&c6.power(2).unwrap(), &bd6, &kernel, opts).unwrap().outcome);
        assert_eq!(sol.outcome, Outcome::Optimum(2));

        let hom = homomorphism_matrix(&Digraph::directed_cycle(2)).unwrap();
        let lo = LcvpOptions { parallel: false, witness: false };
        let e = Digraph::empty(3);
        let bd3 = BranchDecomposition::linear(&[0, 1, 2]).unwrap();
        assert_eq!(
            solve_distance_lcvp(&e, &bd3, 3, &hom, lo).unwrap().exists,
            solve_lcvp(&e, &bd3, &hom, lo).unwrap().exists
        );
    }
}
