//! Intersection-digraph representations: each vertex `v` owns a source set
//! `S_v` and a target set `T_v`, and `(v, w)` is an edge iff `S_v` meets `T_w`.

mod generators;
mod hsub;
mod interval;
mod permutation;
mod rdpath;

pub use generators::{gen_grid_orientation, gen_p2_convex_grid, gen_tournament, grid_index};
pub use hsub::{normalize_hdigraph, HConvexRep, HDigraphRep, HSubdivision, NormalizedHDigraph};
pub(crate) use hsub::normalise_anchors;
pub use interval::IntervalRep;
pub use permutation::PermutationRep;
pub use rdpath::RootedDirPathRep;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Every vertex carries a loop.
pub fn is_reflexive(g: &Digraph) -> bool {
    (0..g.n()).all(|v| g.has_loop(v))
}

/// Any of the supported representation kinds, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    Interval(IntervalRep),
    Permutation(PermutationRep),
    RootedDirPath(RootedDirPathRep),
    HDigraph(HDigraphRep),
    HConvex(HConvexRep),
}

impl Representation {
    pub fn realize(&self) -> Result<Digraph> {
        match self {
            Representation::Interval(r) => r.realize(),
            Representation::Permutation(r) => r.realize(),
            Representation::RootedDirPath(r) => r.realize(),
            Representation::HDigraph(r) => r.realize(),
            Representation::HConvex(r) => r.realize(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Representation::Interval(_) => "intervals",
            Representation::Permutation(_) => "perm",
            Representation::RootedDirPath(_) => "rdpath",
            Representation::HDigraph(_) => "hdigraph",
            Representation::HConvex(_) => "hconvex",
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Representation::Interval(r) => r.to_text(),
            Representation::Permutation(r) => r.to_text(),
            Representation::RootedDirPath(r) => r.to_text(),
            Representation::HDigraph(r) => r.to_text(),
            Representation::HConvex(r) => r.to_text(),
        }
    }

    /// Dispatches on the first non-comment keyword.
    pub fn from_text(src: &str) -> Result<Self> {
        let head = crate::text::lines(src)
            .first()
            .map(|l| l.keyword())
            .ok_or(Error::Parse { line: 0, msg: "empty representation file".into() })?;
        match head {
            "intervals" => IntervalRep::from_text(src).map(Representation::Interval),
            "perm" => PermutationRep::from_text(src).map(Representation::Permutation),
            "rdpath" => RootedDirPathRep::from_text(src).map(Representation::RootedDirPath),
            "hdigraph" => HDigraphRep::from_text(src).map(Representation::HDigraph),
            "hconvex" => HConvexRep::from_text(src).map(Representation::HConvex),
            other => Err(Error::Parse { line: 0, msg: format!("unknown representation kind `{other}`") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflexive_predicate() {
        assert!(is_reflexive(&Digraph::new(2, [(0, 0), (1, 1)]).unwrap()));
        assert!(!is_reflexive(&Digraph::new(2, [(0, 0), (0, 1)]).unwrap()));
        assert!(is_reflexive(&Digraph::empty(0)));
    }

    #[test]
    fn dispatch_by_header() {
        let rep = IntervalRep::new(vec![[0, 1]], vec![[1, 2]]).unwrap();
        let text = Representation::Interval(rep.clone()).to_text();
        assert_eq!(Representation::from_text(&text).unwrap(), Representation::Interval(rep));
        assert!(Representation::from_text("# nothing\n").is_err());
        assert!(Representation::from_text("circles 3\n").is_err());
    }
}
