//! Tubes, tubings and the face poset of graph-associahedra.
//!
//! Tubes are node bitmasks. A `k`-tubing indexes a codimension-`k` face;
//! the empty tubing is the whole polytope.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{induced_subgraph, mask_nodes, reconnected_complement, Graph, GraphError};

/// Node bitmask of a tube.
pub type Tube = u64;

/// A set of pairwise compatible tubes, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Tubing(Vec<Tube>);

impl Tubing {
    pub fn empty() -> Self {
        Tubing(Vec::new())
    }

    /// Builds a tubing, checking tubes and pairwise compatibility.
    pub fn new(g: &Graph, tubes: impl IntoIterator<Item = Tube>) -> Result<Self, GraphError> {
        let mut v: Vec<Tube> = tubes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        for &t in &v {
            if !is_tube(g, t) {
                return Err(GraphError::NotATube(mask_nodes(t)));
            }
        }
        for (i, &a) in v.iter().enumerate() {
            for &b in &v[i + 1..] {
                if !are_compatible(g, a, b) {
                    return Err(GraphError::IncompatibleTubes(mask_nodes(a), mask_nodes(b)));
                }
            }
        }
        Ok(Tubing(v))
    }

    pub fn tubes(&self) -> &[Tube] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, t: Tube) -> bool {
        self.0.binary_search(&t).is_ok()
    }

    pub fn is_superset_of(&self, other: &Tubing) -> bool {
        other.0.iter().all(|&t| self.contains(t))
    }

    pub fn with(&self, t: Tube) -> Tubing {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&t) {
            v.insert(pos, t);
        }
        Tubing(v)
    }

    /// Sorted list of sorted node lists.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.0.iter().map(|&t| mask_nodes(t)).collect();
        out.sort();
        out
    }
}

impl Serialize for Tubing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_lists().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tubing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let lists = Vec::<Vec<usize>>::deserialize(d)?;
        let mut v: Vec<Tube> = lists
            .iter()
            .map(|l| l.iter().fold(0u64, |acc, &x| acc | 1 << x))
            .collect();
        v.sort_unstable();
        Ok(Tubing(v))
    }
}

pub fn is_tube(g: &Graph, s: u64) -> bool {
    s != 0 && s & !g.all_nodes() == 0 && s != g.all_nodes() && g.is_connected_set(s)
}

/// True when `a` and `b` touch: they share a node or an edge joins them.
pub fn are_adjacent_sets(g: &Graph, a: u64, b: u64) -> bool {
    if a & b != 0 {
        return true;
    }
    mask_nodes(a).iter().any(|&v| g.neighbors(v) & b != 0)
}

/// Nested, or disjoint with no edge between them.
pub fn are_compatible(g: &Graph, t1: Tube, t2: Tube) -> bool {
    if t1 & t2 == t1 || t1 & t2 == t2 {
        return true;
    }
    !are_adjacent_sets(g, t1, t2)
}

/// All tubes of `g`, in increasing bitmask order.
pub fn all_tubes(g: &Graph) -> Vec<Tube> {
    let mut out = Vec::new();
    let all = g.all_nodes();
    // Grow connected sets from each minimum node so each tube is visited once.
    for root in 0..g.node_count() {
        let start = 1u64 << root;
        let forbidden = (1u64 << root) - 1;
        grow(
            g,
            start,
            g.neighbors(root) & !forbidden & !start,
            forbidden,
            &mut |s| {
                if s != all {
                    out.push(s)
                }
            },
        );
    }
    out.sort_unstable();
    out
}

/// Enumerates connected supersets of `set` avoiding `forbidden`, where
/// `frontier` is the set of addable neighbours.
fn grow(g: &Graph, set: u64, frontier: u64, forbidden: u64, f: &mut dyn FnMut(u64)) {
    f(set);
    let mut frontier = frontier;
    let mut banned = forbidden;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let next = set | 1 << v;
        let new_frontier = (frontier | g.neighbors(v)) & !next & !banned & !(1 << v);
        grow(g, next, new_frontier, banned, f);
        banned |= 1 << v;
    }
}

/// Precomputed tubes and pairwise compatibility, for repeated enumeration.
pub struct TubeIndex {
    pub tubes: Vec<Tube>,
    compat: Vec<Vec<u64>>,
}

impl TubeIndex {
    pub fn new(g: &Graph) -> Self {
        let tubes = all_tubes(g);
        let words = tubes.len().div_ceil(64).max(1);
        let mut compat = vec![vec![0u64; words]; tubes.len()];
        for i in 0..tubes.len() {
            for j in 0..tubes.len() {
                if i != j && are_compatible(g, tubes[i], tubes[j]) {
                    compat[i][j / 64] |= 1 << (j % 64);
                }
            }
        }
        TubeIndex { tubes, compat }
    }

    fn candidates_after(&self, i: usize) -> Vec<u64> {
        let mut c = self.compat[i].clone();
        // Keep only indices > i.
        for (w, word) in c.iter_mut().enumerate() {
            let lo = w * 64;
            if lo + 64 <= i + 1 {
                *word = 0;
            } else if lo <= i {
                let keep = i + 1 - lo;
                *word &= !((1u64 << keep) - 1);
            }
        }
        c
    }

    fn visit(
        &self,
        chosen: &mut Vec<usize>,
        cand: &[u64],
        f: &mut dyn FnMut(&[usize]),
        max_len: usize,
    ) {
        f(chosen);
        if chosen.len() == max_len {
            return;
        }
        for (w, &word) in cand.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let j = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let next: Vec<u64> = self
                    .candidates_after(j)
                    .iter()
                    .zip(cand)
                    .map(|(a, b)| a & b)
                    .collect();
                chosen.push(j);
                self.visit(chosen, &next, f, max_len);
                chosen.pop();
            }
        }
    }

    /// Counts tubings by size, in parallel over the first tube.
    pub fn count_by_size(&self, node_count: usize) -> Vec<u128> {
        let slots = node_count.max(1);
        let mut counts = vec![0u128; slots];
        counts[0] = 1;
        let partial: Vec<Vec<u128>> = (0..self.tubes.len())
            .into_par_iter()
            .map(|i| {
                let mut local = vec![0u128; slots];
                let mut chosen = vec![i];
                let cand = self.candidates_after(i);
                self.visit(&mut chosen, &cand, &mut |c| local[c.len()] += 1, slots - 1);
                local
            })
            .collect();
        for p in partial {
            for (c, x) in counts.iter_mut().zip(p) {
                *c += x;
            }
        }
        counts
    }

    /// Every tubing, in deterministic DFS order.
    pub fn tubings(&self, k: Option<usize>, node_count: usize) -> Vec<Tubing> {
        let mut out = Vec::new();
        let max_len = k.unwrap_or(node_count.saturating_sub(1));
        let full = vec![u64::MAX; self.tubes.len().div_ceil(64).max(1)];
        let mut all = full.clone();
        let n = self.tubes.len();
        if !n.is_multiple_of(64) {
            *all.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        if n == 0 {
            all = vec![0];
        }
        let mut chosen = Vec::new();
        self.visit(
            &mut chosen,
            &all,
            &mut |c| {
                if k.is_none_or(|k| c.len() == k) {
                    let mut v: Vec<Tube> = c.iter().map(|&i| self.tubes[i]).collect();
                    v.sort_unstable();
                    out.push(Tubing(v));
                }
            },
            max_len,
        );
        out
    }
}

/// All tubings of a connected graph, optionally only the `k`-tubings.
pub fn enumerate_tubings(g: &Graph, k: Option<usize>) -> Result<Vec<Tubing>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(TubeIndex::new(g).tubings(k, g.node_count()))
}

/// Number of `k`-tubings for each `k = 0..node_count-1`.
pub fn count_tubings(g: &Graph) -> Result<Vec<u128>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(TubeIndex::new(g).count_by_size(g.node_count()))
}

/// `(induced subgraph on t, reconnected complement of t)`.
pub fn facet_decomposition(g: &Graph, t: Tube) -> Result<(Graph, Graph), GraphError> {
    if !is_tube(g, t) {
        return Err(GraphError::NotATube(mask_nodes(t)));
    }
    Ok((induced_subgraph(g, t)?, reconnected_complement(g, t)?))
}

/// The face of the polytope indexed by `base`: every tubing containing it,
/// grouped by size (index `j` holds the tubings with `base.len() + j` tubes).
pub fn face_interval(g: &Graph, base: &Tubing) -> Result<Vec<Vec<Tubing>>, GraphError> {
    let base = Tubing::new(g, base.tubes().iter().copied())?;
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let free: Vec<Tube> = all_tubes(g)
        .into_iter()
        .filter(|&t| !base.contains(t) && base.tubes().iter().all(|&b| are_compatible(g, t, b)))
        .collect();
    let mut levels: Vec<Vec<Tubing>> = Vec::new();
    let mut chosen: Vec<Tube> = Vec::new();
    extend(g, &free, 0, &mut chosen, &mut |c| {
        let mut t = base.clone();
        for &x in c {
            t = t.with(x);
        }
        if levels.len() <= c.len() {
            levels.resize(c.len() + 1, Vec::new());
        }
        levels[c.len()].push(t);
    });
    for l in &mut levels {
        l.sort();
    }
    Ok(levels)
}

fn extend(
    g: &Graph,
    free: &[Tube],
    from: usize,
    chosen: &mut Vec<Tube>,
    f: &mut dyn FnMut(&[Tube]),
) {
    f(chosen);
    for i in from..free.len() {
        let t = free[i];
        if chosen.iter().all(|&c| are_compatible(g, c, t)) {
            chosen.push(t);
            extend(g, free, i + 1, chosen, f);
            chosen.pop();
        }
    }
}

/// Size of the face poset above `base`.
pub fn face_interval_size(g: &Graph, base: &Tubing) -> Result<usize, GraphError> {
    Ok(face_interval(g, base)?.iter().map(Vec::len).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    fn m(v: &[usize]) -> u64 {
        v.iter().fold(0, |acc, &i| acc | 1 << i)
    }

    #[test]
    fn tube_examples() {
        let p = Graph::path(3);
        assert!(!is_tube(&p, m(&[0, 2])));
        assert!(is_tube(&p, m(&[0, 1])));
        assert!(!is_tube(&p, m(&[0, 1, 2])));
        assert!(!is_tube(&p, 0));
    }

    #[test]
    fn compatibility_examples() {
        let p = Graph::path(4);
        assert!(!are_compatible(&p, m(&[0]), m(&[1])));
        assert!(are_compatible(&p, m(&[1]), m(&[0, 1, 2])));
        assert!(are_compatible(&p, m(&[0]), m(&[2])));
        assert!(!are_compatible(&p, m(&[0, 1]), m(&[1, 2])));
    }

    #[test]
    fn tubing_counts() {
        let p = Graph::path(3);
        assert_eq!(enumerate_tubings(&p, Some(1)).unwrap().len(), 5);
        assert_eq!(enumerate_tubings(&p, Some(2)).unwrap().len(), 5);
        assert_eq!(
            enumerate_tubings(&p, Some(0)).unwrap(),
            vec![Tubing::empty()]
        );
        assert_eq!(
            enumerate_tubings(&Graph::star(4), Some(1)).unwrap().len(),
            19
        );
        assert_eq!(count_tubings(&p).unwrap(), vec![1, 5, 5]);
    }

    #[test]
    fn all_tubes_matches_subset_scan() {
        for g in [
            Graph::path(5),
            Graph::cycle(6),
            Graph::star(4),
            Graph::complete(4),
        ] {
            let scan: Vec<u64> = (1..g.all_nodes()).filter(|&s| is_tube(&g, s)).collect();
            assert_eq!(all_tubes(&g), scan);
        }
    }

    #[test]
    fn enumeration_is_exhaustive_and_unique() {
        let g = Graph::cycle(5);
        let all = enumerate_tubings(&g, None).unwrap();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        let counts = count_tubings(&g).unwrap();
        assert_eq!(counts.iter().sum::<u128>() as usize, all.len());
    }

    #[test]
    fn facet_examples() {
        let star = Graph::star(3);
        let (a, b) = facet_decomposition(&star, m(&[0])).unwrap();
        assert_eq!(a.node_count(), 1);
        assert!(b.is_isomorphic(&Graph::complete(3)));
        let (a, b) = facet_decomposition(&star, m(&[1])).unwrap();
        assert_eq!(a.node_count(), 1);
        assert!(b.is_isomorphic(&Graph::path(3)));
        let (a, b) = facet_decomposition(&Graph::path(4), m(&[1, 2])).unwrap();
        assert_eq!(a.edges(), vec![(0, 1)]);
        assert_eq!(b.edges(), vec![(0, 1)]);
    }

    #[test]
    fn interval_examples() {
        let p = Graph::path(3);
        assert_eq!(face_interval_size(&p, &Tubing::empty()).unwrap(), 11);
        let top = enumerate_tubings(&p, Some(2)).unwrap().remove(0);
        assert_eq!(face_interval_size(&p, &top).unwrap(), 1);
        let star = Graph::star(3);
        let leaf = Tubing::new(&star, [m(&[1])]).unwrap();
        let levels: Vec<usize> = face_interval(&star, &leaf)
            .unwrap()
            .iter()
            .map(Vec::len)
            .collect();
        assert_eq!(levels, vec![1, 5, 5]);
    }

    #[test]
    fn serialization_round_trip() {
        let p = Graph::path(4);
        let t = Tubing::new(&p, [m(&[2, 3]), m(&[0])]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, "[[0],[2,3]]");
        let back: Tubing = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
