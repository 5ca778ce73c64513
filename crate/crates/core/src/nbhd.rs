//! Capped bi-neighbourhood descriptions and the enumeration of their classes.
//!
//! For a side `A` and a cap `d`, a subset `X ⊆ A` is described by two vectors
//! over `Ā`: for each `u ∈ Ā`, `min(d, |N⁻(u) ∩ X|)` and `min(d, |N⁺(u) ∩ X|)`.
//! Two subsets are equivalent iff their descriptions coincide.
//!
//! Internally a description is stored as a compact key restricted to the
//! *boundary*: vertices of `Ā` with at least one neighbour in `A`. Entries of
//! every other vertex of `Ā` are always zero.

use std::collections::HashMap;

use crate::bitset::{BitSet, VertexSet};
use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// A description spelled out over the whole complement, in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NbhDescription {
    pub d: u8,
    pub domain: Vec<usize>,
    pub out_vec: Vec<u8>,
    pub in_vec: Vec<u8>,
}

fn check_cap(d: usize) -> Result<u8> {
    u8::try_from(d).map_err(|_| Error::InvalidArgument(format!("cap {d} exceeds 255")))
}

/// Describes `x ⊆ a` against `Ā`.
pub fn describe(g: &Digraph, a: &VertexSet, d: usize, x: &VertexSet) -> Result<NbhDescription> {
    let cap = check_cap(d)?;
    if !x.is_subset(a) {
        return Err(Error::InvalidArgument("described set is not contained in the side".into()));
    }
    let domain: Vec<usize> = a.complement().to_vec();
    let out_vec = domain.iter().map(|&u| g.in_set(u).intersection_len(x).min(d) as u8).collect();
    let in_vec = domain.iter().map(|&u| g.out_set(u).intersection_len(x).min(d) as u8).collect();
    Ok(NbhDescription { d: cap, domain, out_vec, in_vec })
}

/// Capped coordinatewise sum of descriptions of subsets of disjoint sides
/// `a` and `b`, restricted to the complement of `a ∪ b`.
pub fn combine_descriptions(
    da: &NbhDescription,
    a: &VertexSet,
    db: &NbhDescription,
    b: &VertexSet,
) -> Result<NbhDescription> {
    if da.d != db.d {
        return Err(Error::InvalidArgument(format!("cap mismatch: {} vs {}", da.d, db.d)));
    }
    if let Some(v) = a.iter().find(|&v| b.contains(v)) {
        return Err(Error::OverlappingSides(v));
    }
    let entry = |desc: &NbhDescription, u: usize| {
        let i = desc.domain.binary_search(&u).expect("target domain lies inside both complements");
        (desc.out_vec[i], desc.in_vec[i])
    };
    let domain: Vec<usize> = da.domain.iter().copied().filter(|&u| !b.contains(u)).collect();
    let mut out_vec = Vec::with_capacity(domain.len());
    let mut in_vec = Vec::with_capacity(domain.len());
    for &u in &domain {
        let (ao, ai) = entry(da, u);
        let (bo, bi) = entry(db, u);
        out_vec.push((ao + bo).min(da.d));
        in_vec.push((ai + bi).min(da.d));
    }
    Ok(NbhDescription { d: da.d, domain, out_vec, in_vec })
}

/// Key layout shared by all class indices: boundary out entries followed by
/// boundary in entries.
pub(crate) type Key = Box<[u8]>;

/// All classes of subsets of a side, each with a stable witness.
#[derive(Clone, Debug)]
pub struct ClassIndex {
    d: u8,
    side: VertexSet,
    boundary: Vec<usize>,
    pos: Vec<u32>,
    keys: Vec<Key>,
    witnesses: Vec<VertexSet>,
    lookup: HashMap<Key, usize>,
}

pub(crate) const NO_POS: u32 = u32::MAX;

impl ClassIndex {
    /// An index with the boundary of `side` computed but no classes yet.
    pub(crate) fn empty(g: &Digraph, side: &VertexSet, d: u8) -> Self {
        let n = g.n();
        let mut pos = vec![NO_POS; n];
        let mut boundary = Vec::new();
        for (u, slot) in pos.iter_mut().enumerate() {
            if !side.contains(u) && (!g.in_set(u).is_disjoint(side) || !g.out_set(u).is_disjoint(side)) {
                *slot = boundary.len() as u32;
                boundary.push(u);
            }
        }
        ClassIndex {
            d,
            side: side.clone(),
            boundary,
            pos,
            keys: Vec::new(),
            witnesses: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    /// Inserts a class unless present; returns its id and whether it was new.
    pub(crate) fn insert(&mut self, key: Key, witness: VertexSet) -> (usize, bool) {
        if let Some(&id) = self.lookup.get(&key) {
            return (id, false);
        }
        let id = self.keys.len();
        self.lookup.insert(key.clone(), id);
        self.keys.push(key);
        self.witnesses.push(witness);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.d as usize
    }

    pub fn side(&self) -> &VertexSet {
        &self.side
    }

    /// Complement vertices adjacent to the side, ascending.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub(crate) fn position(&self, u: usize) -> Option<usize> {
        let p = self.pos[u];
        (p != NO_POS).then_some(p as usize)
    }

    pub(crate) fn key(&self, id: usize) -> &[u8] {
        &self.keys[id]
    }

    pub fn witness(&self, id: usize) -> &VertexSet {
        &self.witnesses[id]
    }

    pub(crate) fn find_key(&self, key: &[u8]) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    /// Compact key of an arbitrary subset of the side.
    pub(crate) fn key_of(&self, g: &Digraph, x: &VertexSet) -> Key {
        let b = self.boundary.len();
        let mut key = vec![0u8; 2 * b];
        for (i, &u) in self.boundary.iter().enumerate() {
            key[i] = g.in_set(u).intersection_len(x).min(self.d as usize) as u8;
            key[b + i] = g.out_set(u).intersection_len(x).min(self.d as usize) as u8;
        }
        key.into_boxed_slice()
    }

    /// Class id of `x ⊆ side`, if enumerated.
    pub fn class_of(&self, g: &Digraph, x: &VertexSet) -> Option<usize> {
        self.find_key(&self.key_of(g, x))
    }

    /// Full description of class `id` over the whole complement.
    pub fn description(&self, id: usize) -> NbhDescription {
        let domain = self.side.complement().to_vec();
        let b = self.boundary.len();
        let key = &self.keys[id];
        let pick = |u: usize, off: usize| self.position(u).map_or(0, |p| key[off + p]);
        NbhDescription {
            d: self.d,
            out_vec: domain.iter().map(|&u| pick(u, 0)).collect(),
            in_vec: domain.iter().map(|&u| pick(u, b)).collect(),
            domain,
        }
    }
}

/// Enumerates every class of subsets of `a` by breadth-first augmentation
/// from `∅`, extending each newly found witness by one vertex of `a` at a
/// time until no new description appears. Witnesses are the first subsets
/// found.
pub fn enumerate_classes(g: &Digraph, a: &VertexSet, d: usize) -> Result<ClassIndex> {
    let cap = check_cap(d)?;
    let mut index = ClassIndex::empty(g, a, cap);
    let b = index.boundary.len();
    // Per vertex of A: key positions its membership increments.
    let contrib: Vec<(usize, Vec<usize>)> = a
        .iter()
        .map(|v| {
            let mut ps = Vec::new();
            for (i, &u) in index.boundary.iter().enumerate() {
                if g.has_edge(v, u) {
                    ps.push(i);
                }
                if g.has_edge(u, v) {
                    ps.push(b + i);
                }
            }
            (v, ps)
        })
        .filter(|(_, ps)| !ps.is_empty())
        .collect();
    let (root, _) = index.insert(vec![0u8; 2 * b].into_boxed_slice(), BitSet::new(g.n()));
    let mut frontier = vec![root];
    let mut scratch = vec![0u8; 2 * b];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for id in frontier {
            for (v, ps) in &contrib {
                if index.witnesses[id].contains(*v) {
                    continue;
                }
                scratch.copy_from_slice(&index.keys[id]);
                for &p in ps {
                    scratch[p] = (scratch[p] + 1).min(cap);
                }
                if index.find_key(&scratch).is_none() {
                    let mut w = index.witnesses[id].clone();
                    w.insert(*v);
                    let (nid, _) = index.insert(scratch.clone().into_boxed_slice(), w);
                    next.push(nid);
                }
            }
        }
        frontier = next;
    }
    Ok(index)
}

/// Classes of `q`-tuples of subsets: the `q`-fold product of a base index.
/// Tuple ids are mixed-radix numbers with the first part least significant.
#[derive(Clone, Debug)]
pub struct QClassIndex<'a> {
    pub base: &'a ClassIndex,
    pub q: usize,
}

impl<'a> QClassIndex<'a> {
    pub fn new(base: &'a ClassIndex, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("q must be at least 1".into()));
        }
        Ok(QClassIndex { base, q })
    }

    /// Number of tuples, `nec^q`; `None` on overflow.
    pub fn len(&self) -> Option<u64> {
        (self.base.len() as u64).checked_pow(self.q as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn decode(&self, mut id: u64) -> Vec<usize> {
        let r = self.base.len() as u64;
        (0..self.q)
            .map(|_| {
                let c = (id % r) as usize;
                id /= r;
                c
            })
            .collect()
    }

    pub fn encode(&self, parts: &[usize]) -> u64 {
        let r = self.base.len() as u64;
        parts.iter().rev().fold(0u64, |acc, &c| acc * r + c as u64)
    }

    /// Witness tuple of a tuple class.
    pub fn witness(&self, id: u64) -> Vec<VertexSet> {
        self.decode(id).into_iter().map(|c| self.base.witness(c).clone()).collect()
    }
}

/// Convenience: enumerate the base classes and wrap them as `q`-tuples.
pub fn q_enumerate_classes(g: &Digraph, a: &VertexSet, d: usize, q: usize) -> Result<(ClassIndex, usize)> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    Ok((enumerate_classes(g, a, d)?, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> VertexSet {
        BitSet::from_iter_with_capacity(n, xs.iter().copied())
    }

    #[test]
    fn describe_examples() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        let a = set(2, &[0]);
        let empty = describe(&g, &a, 1, &set(2, &[])).unwrap();
        assert_eq!((empty.out_vec.clone(), empty.in_vec.clone()), (vec![0], vec![0]));
        let one = describe(&g, &a, 1, &a).unwrap();
        assert_eq!((one.out_vec, one.in_vec), (vec![1], vec![0]));
        let star = Digraph::new(4, [(0, 3), (1, 3), (2, 3)]).unwrap();
        let a = set(4, &[0, 1, 2]);
        assert_eq!(describe(&star, &a, 1, &a).unwrap().out_vec, vec![1]);
        assert_eq!(describe(&star, &a, 5, &a).unwrap().out_vec, vec![3]);
        assert!(describe(&star, &a, 1, &set(4, &[3])).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(enumerate_classes(&g, &set(2, &[0]), 1).unwrap().len(), 2);
        let iso = Digraph::new(3, [(0, 1)]).unwrap();
        assert_eq!(enumerate_classes(&iso, &set(3, &[0, 1]), 1).unwrap().len(), 1);
        assert_eq!(enumerate_classes(&g, &set(2, &[0]), 0).unwrap().len(), 1);
    }

    #[test]
    fn witnesses_are_sound() {
        let g = Digraph::new(6, [(0, 3), (1, 3), (1, 4), (4, 2), (5, 0), (2, 5), (3, 3)]).unwrap();
        let a = set(6, &[0, 1, 2]);
        for d in 0..3 {
            let idx = enumerate_classes(&g, &a, d).unwrap();
            for id in 0..idx.len() {
                let w = idx.witness(id);
                assert_eq!(idx.class_of(&g, w), Some(id));
                assert_eq!(idx.description(id), describe(&g, &a, d, w).unwrap());
            }
        }
    }

    #[test]
    fn combine_is_union_description() {
        let g = Digraph::new(5, [(0, 2), (1, 2), (0, 3), (3, 1), (4, 0), (1, 4)]).unwrap();
        let (a, b) = (set(5, &[0]), set(5, &[1]));
        for d in 1..3 {
            let da = describe(&g, &a, d, &a).unwrap();
            let db = describe(&g, &b, d, &b).unwrap();
            let both = combine_descriptions(&da, &a, &db, &b).unwrap();
            assert_eq!(both, describe(&g, &set(5, &[0, 1]), d, &set(5, &[0, 1])).unwrap());
        }
        let d1 = describe(&g, &a, 1, &a).unwrap();
        let d2 = describe(&g, &b, 2, &b).unwrap();
        assert!(combine_descriptions(&d1, &a, &d2, &b).is_err());
    }

    #[test]
    fn q_tuples_encode_decode() {
        let g = Digraph::new(3, [(0, 1), (2, 0)]).unwrap();
        let (base, q) = q_enumerate_classes(&g, &set(3, &[0]), 1, 2).unwrap();
        let qi = QClassIndex::new(&base, q).unwrap();
        assert_eq!(qi.len(), Some((base.len() * base.len()) as u64));
        for id in 0..qi.len().unwrap() {
            assert_eq!(qi.encode(&qi.decode(id)), id);
        }
        assert!(QClassIndex::new(&base, 0).is_err());
    }

    #[test]
    fn complete_against_all_subsets() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(2..=9);
            let p = rng.gen_range(0.1..0.7);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
            let g = Digraph::new(n, edges).unwrap();
            let a = BitSet::from_iter_with_capacity(n, (0..n).filter(|_| rng.gen_bool(0.5)));
            let members = a.to_vec();
            for d in 1..4 {
                let idx = enumerate_classes(&g, &a, d).unwrap();
                let mut keys = std::collections::HashSet::new();
                for mask in 0u32..(1 << members.len()) {
                    let x = BitSet::from_iter_with_capacity(
                        n,
                        members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v),
                    );
                    let key = idx.key_of(&g, &x);
                    assert!(idx.find_key(&key).is_some(), "missing class for {:?} at d={d}", x.to_vec());
                    keys.insert(key);
                }
                assert_eq!(keys.len(), idx.len());
            }
        }
    }
}
