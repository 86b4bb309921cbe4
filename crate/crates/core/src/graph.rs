//! Coxeter graphs of the seven infinite families and the graph surgeries
//! used by the facet decomposition of graph-associahedra.
//!
//! Node numbering is fixed so that golden values stay stable:
//!
//! * `A_n`, `B_n`: path `0 - 1 - ... - (n-1)`; `B_n` carries the label 4 on
//!   the edge `(n-2, n-1)`.
//! * `D_n`: path `0 - ... - (n-3)`, with `n-3` forked to the leaves `n-2`
//!   and `n-1`.
//! * `Ã_n`: cycle on `0..=n`.
//! * `B̃_n`: path `0 - ... - (n-2)` with label 4 on `(0, 1)` and `n-2` forked
//!   to `n-1` and `n`. Same shape as `D_{n+1}`.
//! * `C̃_n`: path on `0..=n` with label 4 on both end edges.
//! * `D̃_n`: spine `0 - ... - (n-4)`; the spine end `n-4` carries the leaves
//!   `n-3`, `n-2` and the spine start `0` carries the leaves `n-1`, `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Graphs are stored as adjacency bitmasks, so node counts are capped.
pub const MAX_NODES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("rank {rank} is below the minimum {min} for family {tag}")]
    DegenerateRank {
        tag: FamilyTag,
        rank: usize,
        min: usize,
    },
    #[error("node set is empty")]
    EmptyNodeSet,
    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),
    #[error("node set {0:?} is not a tube of the graph")]
    NotATube(Vec<usize>),
    #[error("tubes {0:?} and {1:?} are not compatible")]
    IncompatibleTubes(Vec<usize>, Vec<usize>),
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph has {0} nodes; at most {MAX_NODES} are supported")]
    TooLarge(usize),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    A,
    B,
    D,
    #[serde(rename = "Atilde")]
    ATilde,
    #[serde(rename = "Btilde")]
    BTilde,
    #[serde(rename = "Ctilde")]
    CTilde,
    #[serde(rename = "Dtilde")]
    DTilde,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 7] = [
        FamilyTag::A,
        FamilyTag::B,
        FamilyTag::D,
        FamilyTag::ATilde,
        FamilyTag::BTilde,
        FamilyTag::CTilde,
        FamilyTag::DTilde,
    ];

    pub fn min_rank(self) -> usize {
        match self {
            FamilyTag::A | FamilyTag::ATilde => 1,
            FamilyTag::B | FamilyTag::CTilde => 2,
            FamilyTag::D | FamilyTag::BTilde => 3,
            FamilyTag::DTilde => 4,
        }
    }

    pub fn is_toroidal(self) -> bool {
        matches!(
            self,
            FamilyTag::ATilde | FamilyTag::BTilde | FamilyTag::CTilde | FamilyTag::DTilde
        )
    }

    /// Families whose particles come in mirror pairs.
    pub fn is_symmetric(self) -> bool {
        !matches!(self, FamilyTag::A | FamilyTag::ATilde)
    }

    /// Families that host thick particles: an axis point without a fixed
    /// particle exists.
    pub fn hosts_thick(self) -> bool {
        matches!(self, FamilyTag::D | FamilyTag::BTilde | FamilyTag::DTilde)
    }

    /// ASCII name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::A => "A",
            FamilyTag::B => "B",
            FamilyTag::D => "D",
            FamilyTag::ATilde => "Atilde",
            FamilyTag::BTilde => "Btilde",
            FamilyTag::CTilde => "Ctilde",
            FamilyTag::DTilde => "Dtilde",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tag = match s {
            "A" | "a" => FamilyTag::A,
            "B" | "b" => FamilyTag::B,
            "D" | "d" => FamilyTag::D,
            "Atilde" | "atilde" | "Ã" => FamilyTag::ATilde,
            "Btilde" | "btilde" | "B̃" => FamilyTag::BTilde,
            "Ctilde" | "ctilde" | "C̃" => FamilyTag::CTilde,
            "Dtilde" | "dtilde" | "D̃" => FamilyTag::DTilde,
            other => return Err(GraphError::UnknownFamily(other.to_string())),
        };
        Ok(tag)
    }
}

/// A family tag together with its rank `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Family {
    pub tag: FamilyTag,
    pub rank: usize,
}

impl Family {
    pub fn new(tag: FamilyTag, rank: usize) -> Result<Self, GraphError> {
        if rank < tag.min_rank() {
            return Err(GraphError::DegenerateRank {
                tag,
                rank,
                min: tag.min_rank(),
            });
        }
        Ok(Family { tag, rank })
    }

    pub fn node_count(&self) -> usize {
        if self.tag.is_toroidal() {
            self.rank + 1
        } else {
            self.rank
        }
    }

    /// Dimension of the complex: `n - 1` for spheres, `n` for tori.
    pub fn complex_dim(&self) -> usize {
        if self.tag.is_toroidal() {
            self.rank
        } else {
            self.rank - 1
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.tag, self.rank)
    }
}

/// Finite simple graph on nodes `0..node_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
    labels: BTreeMap<(usize, usize), u32>,
}

impl Graph {
    pub fn empty(node_count: usize) -> Result<Self, GraphError> {
        if node_count > MAX_NODES {
            return Err(GraphError::TooLarge(node_count));
        }
        Ok(Graph {
            adj: vec![0; node_count],
            labels: BTreeMap::new(),
        })
    }

    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(node_count)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn path(node_count: usize) -> Self {
        let edges: Vec<_> = (1..node_count).map(|i| (i - 1, i)).collect();
        Graph::from_edges(node_count, &edges).expect("path fits")
    }

    pub fn cycle(node_count: usize) -> Self {
        let mut edges: Vec<_> = (1..node_count).map(|i| (i - 1, i)).collect();
        if node_count > 2 {
            edges.push((node_count - 1, 0));
        }
        Graph::from_edges(node_count, &edges).expect("cycle fits")
    }

    pub fn complete(node_count: usize) -> Self {
        let mut g = Graph::empty(node_count).expect("complete graph fits");
        for a in 0..node_count {
            for b in a + 1..node_count {
                g.add_edge(a, b).expect("in range");
            }
        }
        g
    }

    /// Star `K_{1,leaves}` with center `0`.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star fits")
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        let n = self.node_count();
        if a >= n {
            return Err(GraphError::NodeOutOfRange(a));
        }
        if b >= n {
            return Err(GraphError::NodeOutOfRange(b));
        }
        if a == b {
            return Ok(());
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        Ok(())
    }

    fn set_label(&mut self, a: usize, b: usize, m: u32) {
        let key = (a.min(b), a.max(b));
        debug_assert!(self.has_edge(a, b));
        if m != 3 {
            self.labels.insert(key, m);
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Bitmask of all nodes.
    pub fn all_nodes(&self) -> u64 {
        mask_of_len(self.node_count())
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.adj[v].count_ones()
    }

    /// Order label `m_ij` of an edge; unlabeled edges have order 3.
    pub fn label(&self, a: usize, b: usize) -> Option<u32> {
        if !self.has_edge(a, b) {
            return None;
        }
        Some(*self.labels.get(&(a.min(b), a.max(b))).unwrap_or(&3))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.node_count() {
            for b in a + 1..self.node_count() {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Nodes of `set` reachable from its lowest node inside `set`.
    pub fn component_of(&self, set: u64) -> u64 {
        if set == 0 {
            return 0;
        }
        let mut seen = set & set.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & set & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    /// True when the induced subgraph on `set` is connected (and nonempty).
    pub fn is_connected_set(&self, set: u64) -> bool {
        set != 0 && self.component_of(set) == set
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.is_connected_set(self.all_nodes())
    }

    /// Connected components of the induced subgraph on `set`.
    pub fn components(&self, mut set: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while set != 0 {
            let c = self.component_of(set);
            out.push(c);
            set &= !c;
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            nodes: self.node_count(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            labels: self
                .labels
                .iter()
                .map(|(&(a, b), &m)| (format!("{a}-{b}"), m))
                .collect(),
        }
    }

    /// Canonical adjacency code, invariant under relabeling of nodes.
    ///
    /// Brute force over permutations that respect a degree refinement, so
    /// this is meant for the small factor graphs of face decompositions.
    pub fn canonical_code(&self) -> Vec<u64> {
        canonical_code(self)
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.node_count() == other.node_count()
            && self.edge_count() == other.edge_count()
            && self.canonical_code() == other.canonical_code()
    }
}

/// Canonical JSON form: `{nodes, edges: [[i,j],...], labels: {"i-j": m}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: usize,
    pub edges: Vec<[usize; 2]>,
    pub labels: BTreeMap<String, u32>,
}

pub(crate) fn mask_of_len(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn mask_nodes(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

pub fn build_coxeter_graph(family: Family) -> Result<Graph, GraphError> {
    let family = Family::new(family.tag, family.rank)?;
    let n = family.rank;
    let g = match family.tag {
        FamilyTag::A => Graph::path(n),
        FamilyTag::B => {
            let mut g = Graph::path(n);
            g.set_label(n - 2, n - 1, 4);
            g
        }
        FamilyTag::D => d_shape(n),
        FamilyTag::ATilde => Graph::cycle(n + 1),
        FamilyTag::BTilde => {
            let mut g = d_shape(n + 1);
            g.set_label(0, 1, 4);
            g
        }
        FamilyTag::CTilde => {
            let mut g = Graph::path(n + 1);
            g.set_label(0, 1, 4);
            g.set_label(n - 1, n, 4);
            g
        }
        FamilyTag::DTilde => {
            let mut g = Graph::empty(n + 1)?;
            for i in 1..=n - 4 {
                g.add_edge(i - 1, i)?;
            }
            g.add_edge(n - 4, n - 3)?;
            g.add_edge(n - 4, n - 2)?;
            g.add_edge(0, n - 1)?;
            g.add_edge(0, n)?;
            g
        }
    };
    Ok(g)
}

/// `D_n` shape on `n >= 3` nodes.
fn d_shape(n: usize) -> Graph {
    let mut g = Graph::path(n - 1);
    g.adj.push(0);
    g.add_edge(n - 3, n - 1).expect("in range");
    g
}

/// Induced subgraph on `nodes`, renumbered by increasing original id.
pub fn induced_subgraph(g: &Graph, nodes: u64) -> Result<Graph, GraphError> {
    if nodes == 0 {
        return Err(GraphError::EmptyNodeSet);
    }
    if nodes & !g.all_nodes() != 0 {
        return Err(GraphError::NodeOutOfRange(
            (nodes & !g.all_nodes()).trailing_zeros() as usize,
        ));
    }
    let ids = mask_nodes(nodes);
    let mut out = Graph::empty(ids.len())?;
    for (i, &a) in ids.iter().enumerate() {
        for (j, &b) in ids.iter().enumerate().skip(i + 1) {
            if g.has_edge(a, b) {
                out.add_edge(i, j)?;
                if let Some(m) = g.label(a, b) {
                    out.set_label(i, j, m);
                }
            }
        }
    }
    Ok(out)
}

/// Reconnected complement of the tube `tube`: nodes `V - tube` (renumbered by
/// increasing original id), with `a ~ b` whenever `{a, b}` or
/// `{a, b} ∪ tube` induces a connected subgraph.
pub fn reconnected_complement(g: &Graph, tube: u64) -> Result<Graph, GraphError> {
    if !crate::tubing::is_tube(g, tube) {
        return Err(GraphError::NotATube(mask_nodes(tube)));
    }
    let rest = g.all_nodes() & !tube;
    let ids = mask_nodes(rest);
    let mut out = Graph::empty(ids.len())?;
    for (i, &a) in ids.iter().enumerate() {
        for (j, &b) in ids.iter().enumerate().skip(i + 1) {
            let pair = 1u64 << a | 1u64 << b;
            if g.has_edge(a, b) || g.is_connected_set(pair | tube) {
                out.add_edge(i, j)?;
            }
        }
    }
    if g.is_connected() {
        assert!(
            out.is_connected(),
            "reconnected complement of a connected graph must be connected"
        );
    }
    Ok(out)
}

/// Original node ids of the reconnected complement's nodes, in order.
pub fn complement_ids(g: &Graph, tube: u64) -> Vec<usize> {
    mask_nodes(g.all_nodes() & !tube)
}

fn canonical_code(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    // Refine by (degree, sorted neighbor degrees) to prune permutations.
    let mut key: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = mask_nodes(g.neighbors(v))
                .iter()
                .map(|&u| g.degree(u))
                .collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key[a].cmp(&key[b]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if key[c[0]] == key[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    key.clear();
    let mut best: Option<Vec<u64>> = None;
    let mut assignment = Vec::with_capacity(n);
    search_classes(g, &classes, 0, &mut assignment, &mut best);
    best.expect("at least one ordering")
}

fn search_classes(
    g: &Graph,
    classes: &[Vec<usize>],
    idx: usize,
    assignment: &mut Vec<usize>,
    best: &mut Option<Vec<u64>>,
) {
    if idx == classes.len() {
        let code = code_for(g, assignment);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    let mut class = classes[idx].clone();
    permute(&mut class, 0, &mut |perm| {
        let base = assignment.len();
        assignment.extend_from_slice(perm);
        search_classes(g, classes, idx + 1, assignment, best);
        assignment.truncate(base);
    });
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

fn code_for(g: &Graph, order: &[usize]) -> Vec<u64> {
    let mut pos = vec![0usize; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .map(|&v| {
            mask_nodes(g.neighbors(v))
                .iter()
                .fold(0u64, |acc, &u| acc | 1 << pos[u])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(tag: FamilyTag, n: usize) -> Graph {
        build_coxeter_graph(Family::new(tag, n).unwrap()).unwrap()
    }

    #[test]
    fn small_family_shapes() {
        assert!(fam(FamilyTag::A, 3).is_isomorphic(&Graph::path(3)));
        assert!(fam(FamilyTag::ATilde, 2).is_isomorphic(&Graph::cycle(3)));
        assert!(fam(FamilyTag::D, 4).is_isomorphic(&Graph::star(3)));
        assert!(fam(FamilyTag::DTilde, 4).is_isomorphic(&Graph::star(4)));
        assert!(fam(FamilyTag::BTilde, 3).is_isomorphic(&Graph::star(3)));
        assert_eq!(fam(FamilyTag::B, 3).label(1, 2), Some(4));
        assert_eq!(fam(FamilyTag::CTilde, 3).label(0, 1), Some(4));
        assert_eq!(fam(FamilyTag::CTilde, 3).label(2, 3), Some(4));
        assert_eq!(fam(FamilyTag::CTilde, 3).label(1, 2), Some(3));
    }

    #[test]
    fn rank_bounds_are_enforced() {
        let err = Family::new(FamilyTag::DTilde, 3).unwrap_err();
        assert_eq!(
            err,
            GraphError::DegenerateRank {
                tag: FamilyTag::DTilde,
                rank: 3,
                min: 4
            }
        );
        assert!(Family::new(FamilyTag::A, 0).is_err());
        assert!(Family::new(FamilyTag::B, 1).is_err());
    }

    #[test]
    fn family_graphs_are_connected_with_expected_sizes() {
        for tag in FamilyTag::ALL {
            for n in tag.min_rank()..=9 {
                let f = Family::new(tag, n).unwrap();
                let g = build_coxeter_graph(f).unwrap();
                assert_eq!(g.node_count(), f.node_count(), "{f}");
                assert!(g.is_connected(), "{f}");
            }
        }
    }

    #[test]
    fn shape_coincidences() {
        for n in 3..=8 {
            let b = fam(FamilyTag::B, n);
            let a = fam(FamilyTag::A, n);
            assert_eq!(a.edges(), b.edges());
            assert!(fam(FamilyTag::CTilde, n).is_isomorphic(&fam(FamilyTag::A, n + 1)));
            assert!(fam(FamilyTag::BTilde, n).is_isomorphic(&fam(FamilyTag::D, n + 1)));
        }
    }

    #[test]
    fn induced_subgraph_examples() {
        let p = Graph::path(3);
        let e = induced_subgraph(&p, 0b011).unwrap();
        assert_eq!(e.edges(), vec![(0, 1)]);
        let star = Graph::star(3);
        assert_eq!(induced_subgraph(&star, 0b0010).unwrap().node_count(), 1);
        let sub = induced_subgraph(&star, 0b0111).unwrap();
        assert!(sub.is_isomorphic(&Graph::path(3)));
        assert_eq!(induced_subgraph(&star, 0), Err(GraphError::EmptyNodeSet));
    }

    #[test]
    fn reconnected_complement_examples() {
        let star = Graph::star(3);
        let k3 = reconnected_complement(&star, 0b0001).unwrap();
        assert!(k3.is_isomorphic(&Graph::complete(3)));
        let p = Graph::path(3);
        assert_eq!(
            reconnected_complement(&p, 0b010).unwrap().edges(),
            vec![(0, 1)]
        );
        let end = reconnected_complement(&p, 0b001).unwrap();
        assert_eq!(end.edges(), vec![(0, 1)]);
        assert!(matches!(
            reconnected_complement(&p, 0b101),
            Err(GraphError::NotATube(_))
        ));
    }

    #[test]
    fn json_is_sorted_and_labeled() {
        let j = fam(FamilyTag::B, 3).to_json();
        assert_eq!(j.edges, vec![[0, 1], [1, 2]]);
        assert_eq!(j.labels.get("1-2"), Some(&4));
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"nodes":3,"edges":[[0,1],[1,2]],"labels":{"1-2":4}}"#);
    }
}
