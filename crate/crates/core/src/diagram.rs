//! Particle-configuration diagrams of the fundamental chamber, their
//! brackets, and the transport between bracketings and tubings.
//!
//! A diagram is read as one or more *representative orderings*: sequences
//! of occurrences (a signed particle plus a constant offset, or a fixed
//! mark). Where an axis carries no fixed particle, the innermost pair is
//! unordered and both orderings are listed. A bracket is a contiguous run
//! of at least two occurrences; colliding a run equates consecutive
//! occurrences, which cuts out an affine flat.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{coordinate_count, normalized, Arrangement, Equation, Flat};
use crate::graph::{build_coxeter_graph, mask_nodes, Family, FamilyTag, Graph, GraphError};
use crate::linalg::Q;
use crate::tubing::Tubing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("family {0} has no thick particles")]
    ThickNotAllowed(FamilyTag),
    #[error("thick position {pos} is out of range for {n} particles")]
    ThickOutOfRange { pos: usize, n: usize },
    #[error("thick multiplicity must be at least 2, got {0}")]
    ThickMultiplicity(u32),
    #[error("brackets {0} and {1} are not compatible")]
    Incompatible(usize, usize),
    #[error("no bracket of this diagram maps to tube {0:?}")]
    NoBracketForTube(Vec<usize>),
    #[error("bracket is not valid on this diagram")]
    InvalidBracket,
}

/// One entry of an ordering. A particle occurrence has value
/// `±x[coord] + offset`; a mark has a constant value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Occ {
    Particle {
        coord: usize,
        neg: bool,
        offset: i64,
    },
    Mark {
        value: i64,
    },
}

impl Occ {
    fn shifted(self, by: i64) -> Occ {
        match self {
            Occ::Particle { coord, neg, offset } => Occ::Particle {
                coord,
                neg,
                offset: offset + by,
            },
            Occ::Mark { value } => Occ::Mark { value: value + by },
        }
    }

    /// Coefficient vector and constant of the occurrence's value.
    fn affine(self, n: usize) -> (Vec<i64>, i64) {
        let mut v = vec![0; n];
        match self {
            Occ::Particle { coord, neg, offset } => {
                v[coord] = if neg { -1 } else { 1 };
                (v, offset)
            }
            Occ::Mark { value } => (v, value),
        }
    }

    pub fn coord(self) -> Option<usize> {
        match self {
            Occ::Particle { coord, .. } => Some(coord),
            Occ::Mark { .. } => None,
        }
    }
}

/// A run inside one representative ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Run {
    pub ordering: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StabilizerType {
    A(usize),
    B(usize),
    D(usize),
    /// `D_{k,r}`: `k` pairs at a free axis point, `r` of them thick.
    DThick(usize, usize),
    Product(Vec<StabilizerType>),
}

impl StabilizerType {
    pub fn rank(&self) -> usize {
        match self {
            StabilizerType::A(k) | StabilizerType::B(k) | StabilizerType::D(k) => *k,
            StabilizerType::DThick(k, _) => *k,
            StabilizerType::Product(v) => v.iter().map(StabilizerType::rank).sum(),
        }
    }

    /// Number of reflecting hyperplanes of an irreducible type.
    pub fn hyperplane_count(&self) -> usize {
        match self {
            StabilizerType::A(k) => k * (k + 1) / 2,
            StabilizerType::B(k) => k * k,
            StabilizerType::D(k) => k * (k - 1),
            StabilizerType::DThick(k, r) => k * (k - 1) + r,
            StabilizerType::Product(v) => v.iter().map(StabilizerType::hyperplane_count).sum(),
        }
    }

    /// Thick particles inside, `r`.
    pub fn thick_count(&self) -> usize {
        match self {
            StabilizerType::DThick(_, r) => *r,
            StabilizerType::Product(v) => v.iter().map(StabilizerType::thick_count).sum(),
            _ => 0,
        }
    }
}

impl fmt::Display for StabilizerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilizerType::A(k) => write!(f, "A{k}"),
            StabilizerType::B(k) => write!(f, "B{k}"),
            StabilizerType::D(k) => write!(f, "D{k}"),
            StabilizerType::DThick(k, r) => write!(f, "D{k},{r}"),
            StabilizerType::Product(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join("x"))
            }
        }
    }
}

/// A fundamental-chamber diagram: family plus thick multiplicities per
/// position (1 for an ordinary particle).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub family: Family,
    pub thick: Vec<u32>,
}

/// Thick particles given as `(position, multiplicity)`, positions 0-based
/// from the innermost particle.
pub fn make_diagram(family: Family, thick: &[(usize, u32)]) -> Result<Diagram, DiagramError> {
    let family = Family::new(family.tag, family.rank)?;
    let n = coordinate_count(family);
    let mut mult = vec![1u32; n];
    if !thick.is_empty() && !family.tag.hosts_thick() {
        return Err(DiagramError::ThickNotAllowed(family.tag));
    }
    for &(pos, m) in thick {
        if pos >= n {
            return Err(DiagramError::ThickOutOfRange { pos, n });
        }
        if m < 2 {
            return Err(DiagramError::ThickMultiplicity(m));
        }
        mult[pos] = m;
    }
    Ok(Diagram {
        family,
        thick: mult,
    })
}

/// A valid bracket of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bracket {
    pub run: Run,
    pub occs: Vec<Occ>,
    pub flat: Flat,
    /// Bitmask over the chamber's walls containing the flat.
    pub walls: u64,
    pub stabilizer: StabilizerType,
}

impl Bracket {
    /// Coordinates of the particles inside, sorted.
    pub fn coords(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.occs.iter().filter_map(|o| o.coord()).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub fn contains_mark(&self) -> bool {
        self.occs.iter().any(|o| matches!(o, Occ::Mark { .. }))
    }

    /// Contains some particle together with its mirror image.
    pub fn is_self_mirror(&self) -> bool {
        let mut seen = BTreeMap::new();
        for o in &self.occs {
            if let Occ::Particle { coord, neg, .. } = o {
                if let Some(&other) = seen.get(coord) {
                    if other != *neg {
                        return true;
                    }
                }
                seen.insert(*coord, *neg);
            }
        }
        self.contains_mark()
    }

    /// Signed labels of the particles under a chamber labeling
    /// (position to signed 1-based label), closed under negation for
    /// symmetric families so that a bracket and its mirror agree.
    pub fn label_set(&self, labeling: &[i32], symmetric: bool) -> Vec<i32> {
        let mut s: Vec<i32> = self
            .occs
            .iter()
            .filter_map(|o| match *o {
                Occ::Particle { coord, neg, .. } => Some(if neg {
                    -labeling[coord]
                } else {
                    labeling[coord]
                }),
                Occ::Mark { .. } => None,
            })
            .collect();
        s.sort_unstable();
        s.dedup();
        if symmetric {
            let neg: Vec<i32> = {
                let mut v: Vec<i32> = s.iter().map(|x| -x).collect();
                v.sort_unstable();
                v
            };
            if neg < s {
                s = neg;
            }
        }
        s
    }
}

impl Diagram {
    pub fn particle_count(&self) -> usize {
        self.thick.len()
    }

    pub fn thick_positions(&self) -> Vec<usize> {
        (0..self.thick.len())
            .filter(|&i| self.thick[i] > 1)
            .collect()
    }

    pub fn has_thick(&self) -> bool {
        self.thick.iter().any(|&m| m > 1)
    }

    pub fn arrangement(&self) -> Arrangement {
        Arrangement::with_thick(self.family, &self.thick_positions())
    }

    pub fn is_circular(&self) -> bool {
        self.family.tag.is_toroidal()
    }

    pub fn period(&self) -> i64 {
        2
    }

    fn p(&self, coord: usize, neg: bool, offset: i64) -> Occ {
        Occ::Particle { coord, neg, offset }
    }

    /// The representative orderings of the fundamental chamber.
    pub fn orderings(&self) -> Vec<Vec<Occ>> {
        let n = self.particle_count();
        let thick0 = self.thick[0] > 1;
        let thick_last = self.thick[n - 1] > 1;
        let pos = |d: &Self| (0..n).map(|i| d.p(i, false, 0)).collect::<Vec<_>>();
        let neg_rev =
            |d: &Self, off: i64| (0..n).rev().map(|i| d.p(i, true, off)).collect::<Vec<_>>();
        match self.family.tag {
            FamilyTag::A => vec![pos(self)],
            FamilyTag::ATilde => vec![pos(self)],
            FamilyTag::B => {
                let mut s = neg_rev(self, 0);
                s.push(Occ::Mark { value: 0 });
                s.extend(pos(self));
                vec![s]
            }
            FamilyTag::D => {
                let mut s = neg_rev(self, 0);
                s.extend(pos(self));
                let mut out = vec![s.clone()];
                if !thick0 {
                    s.swap(n - 1, n);
                    out.push(s);
                }
                out
            }
            FamilyTag::CTilde => {
                let mut s = vec![Occ::Mark { value: 0 }];
                s.extend(pos(self));
                s.push(Occ::Mark { value: 1 });
                s.extend(neg_rev(self, 2));
                vec![s]
            }
            FamilyTag::BTilde => {
                let mut s = pos(self);
                s.push(Occ::Mark { value: 1 });
                s.extend(neg_rev(self, 2));
                let mut out = vec![s.clone()];
                if !thick0 {
                    let last = s.len() - 1;
                    s[0] = self.p(0, true, 0);
                    s[last] = self.p(0, false, 2);
                    out.push(s);
                }
                out
            }
            FamilyTag::DTilde => {
                let mut s = pos(self);
                s.extend(neg_rev(self, 2));
                let mut out = vec![s.clone()];
                let len = s.len();
                let swap0 = |s: &mut Vec<Occ>| {
                    s[0] = self.p(0, true, 0);
                    s[len - 1] = self.p(0, false, 2);
                };
                let swap1 = |s: &mut Vec<Occ>| {
                    s.swap(n - 1, n);
                };
                if !thick0 {
                    let mut t = s.clone();
                    swap0(&mut t);
                    out.push(t);
                }
                if !thick_last {
                    let mut t = s.clone();
                    swap1(&mut t);
                    out.push(t);
                }
                if !thick0 && !thick_last {
                    let mut t = s.clone();
                    swap0(&mut t);
                    swap1(&mut t);
                    out.push(t);
                }
                out
            }
        }
    }

    /// Occurrences of a run, with offsets lifted across the wrap point.
    pub fn run_occs(&self, run: Run) -> Vec<Occ> {
        let ord = &self.orderings()[run.ordering];
        self.run_occs_in(ord, run)
    }

    fn run_occs_in(&self, ord: &[Occ], run: Run) -> Vec<Occ> {
        let l = ord.len();
        (run.start..run.start + run.len)
            .map(|i| {
                let wraps = (i / l) as i64;
                ord[i % l].shifted(wraps * self.period())
            })
            .collect()
    }

    /// Equations from colliding consecutive occurrences; `None` when they
    /// are contradictory.
    pub fn collision_equations(&self, occs: &[Occ]) -> Option<Vec<Equation>> {
        let n = self.particle_count();
        let mut out = Vec::new();
        for w in occs.windows(2) {
            let (va, ca) = w[0].affine(n);
            let (vb, cb) = w[1].affine(n);
            let normal: Vec<i64> = va.iter().zip(&vb).map(|(a, b)| a - b).collect();
            let rhs = cb - ca;
            if normal.iter().all(|&x| x == 0) {
                if rhs != 0 {
                    return None;
                }
                continue;
            }
            out.push(primitive(Equation { normal, rhs }));
        }
        Some(out)
    }

    pub fn run_flat(&self, occs: &[Occ]) -> Option<Flat> {
        let eqs = self.collision_equations(occs)?;
        Flat::whole(self.particle_count()).meet_equations(&eqs)
    }

    fn runs_of(&self, ordering: usize, len: usize) -> Vec<Run> {
        let mut out = Vec::new();
        for l in 2..=len {
            if self.is_circular() {
                for s in 0..len {
                    out.push(Run {
                        ordering,
                        start: s,
                        len: l,
                    });
                }
            } else {
                for s in 0..=len - l {
                    out.push(Run {
                        ordering,
                        start: s,
                        len: l,
                    });
                }
            }
        }
        out
    }

    /// Walls of the chamber: the hyperplanes met by sliding two
    /// neighbouring occurrences together, over all representative orderings.
    pub fn derived_walls(&self) -> Vec<Equation> {
        let arr = self.arrangement();
        let mut set = std::collections::BTreeSet::new();
        for (o, ord) in self.orderings().iter().enumerate() {
            let pairs = if self.is_circular() {
                ord.len()
            } else {
                ord.len() - 1
            };
            for s in 0..pairs {
                let occs = self.run_occs_in(
                    ord,
                    Run {
                        ordering: o,
                        start: s,
                        len: 2,
                    },
                );
                if let Some(eqs) = self.collision_equations(&occs) {
                    for e in eqs {
                        if arr.is_hyperplane(&e) {
                            set.insert(normalized(&e));
                        }
                    }
                }
            }
        }
        set.into_iter().collect()
    }

    /// Chamber walls: in Coxeter-graph node order when there are no thick
    /// particles, otherwise sorted.
    pub fn chamber_walls(&self) -> Vec<Equation> {
        if self.has_thick() {
            self.derived_walls()
        } else {
            self.arrangement().simple_walls()
        }
    }

    /// The Coxeter graph whose nodes index the chamber walls. Thick
    /// chambers get the graph of non-orthogonal wall normals.
    pub fn wall_graph(&self) -> Graph {
        if !self.has_thick() {
            return build_coxeter_graph(self.family).expect("valid family");
        }
        let walls = self.chamber_walls();
        let mut g = Graph::empty(walls.len()).expect("small");
        for a in 0..walls.len() {
            for b in a + 1..walls.len() {
                let dot: i64 = walls[a]
                    .normal
                    .iter()
                    .zip(&walls[b].normal)
                    .map(|(x, y)| x * y)
                    .sum();
                if dot != 0 {
                    g.add_edge(a, b).expect("in range");
                }
            }
        }
        g
    }

    fn walls_mask(&self, walls: &[Equation], f: &Flat) -> u64 {
        walls
            .iter()
            .enumerate()
            .filter(|(_, w)| f.lies_in(w))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Validates a run as a bracket.
    pub fn bracket_of_run(&self, run: Run) -> Option<Bracket> {
        let walls = self.chamber_walls();
        let arr = self.arrangement();
        self.bracket_with(run, &walls, &arr)
    }

    fn bracket_with(&self, run: Run, walls: &[Equation], arr: &Arrangement) -> Option<Bracket> {
        let occs = self.run_occs(run);
        let flat = self.run_flat(&occs)?;
        let mask = self.walls_mask(walls, &flat);
        let all = (1u64 << walls.len()) - 1;
        if mask == 0 || mask == all {
            return None;
        }
        let cut: Vec<Equation> = mask_nodes(mask).iter().map(|&i| walls[i].clone()).collect();
        if Flat::whole(self.particle_count()).meet_equations(&cut)? != flat {
            return None;
        }
        if !arr.is_irreducible(&flat) {
            return None;
        }
        let stabilizer = classify_flat(self, arr, &flat);
        Some(Bracket {
            run,
            occs,
            flat,
            walls: mask,
            stabilizer,
        })
    }

    /// All brackets, one per flat, ordered by wall mask.
    pub fn enumerate_brackets(&self) -> Vec<Bracket> {
        let walls = self.chamber_walls();
        let arr = self.arrangement();
        let mut by_mask: BTreeMap<u64, Bracket> = BTreeMap::new();
        for (o, ord) in self.orderings().iter().enumerate() {
            for run in self.runs_of(o, ord.len()) {
                if let Some(b) = self.bracket_with(run, &walls, &arr) {
                    by_mask.entry(b.walls).or_insert(b);
                }
            }
        }
        let mut out: Vec<Bracket> = by_mask.into_values().collect();
        out.sort_by_key(|b| (b.walls.count_ones(), b.walls));
        out
    }

    /// ASCII rendering under a labeling (position to signed 1-based label).
    pub fn render(&self, labeling: &[i32]) -> String {
        let ord = &self.orderings()[0];
        let mut parts = Vec::new();
        let tag = self.family.tag;
        let free_zero = matches!(tag, FamilyTag::D | FamilyTag::BTilde | FamilyTag::DTilde);
        if free_zero && tag.is_toroidal() {
            parts.push("|".to_string());
        }
        for (i, o) in ord.iter().enumerate() {
            match *o {
                Occ::Particle { coord, neg, .. } => {
                    let l = if neg {
                        -labeling[coord]
                    } else {
                        labeling[coord]
                    };
                    let mark = if self.thick[coord] > 1 { "#" } else { "" };
                    parts.push(format!("{l}{mark}"));
                }
                Occ::Mark { value } => parts.push(format!("{value}*")),
            }
            let n = self.particle_count();
            if tag == FamilyTag::D && i + 1 == n {
                parts.push("|".to_string());
            }
            if tag == FamilyTag::DTilde && i + 1 == n {
                parts.push("|".to_string());
            }
        }
        let open = if self.is_circular() { "o(" } else { "(" };
        format!("{open} {} )", parts.join(" "))
    }
}

/// Divides out the content of the normal when the constant allows it.
fn primitive(e: Equation) -> Equation {
    let g = e
        .normal
        .iter()
        .fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    if g > 1 && e.rhs % g == 0 {
        Equation {
            normal: e.normal.iter().map(|x| x / g).collect(),
            rhs: e.rhs / g,
        }
    } else {
        e
    }
}

/// Stabilizer type of an arrangement flat, by irreducible component.
pub fn classify_flat(d: &Diagram, arr: &Arrangement, f: &Flat) -> StabilizerType {
    let comps = arr.components(f);
    let n = d.particle_count();
    let mut types: Vec<StabilizerType> = comps
        .iter()
        .map(|hs| {
            let g = Flat::whole(n).meet_equations(hs).expect("contains f");
            let k = g.codim();
            // Particles pinned to an axis point by this component.
            let mut point = None;
            let mut thick = 0;
            for c in 0..n {
                let mut v = vec![0; n];
                v[c] = 1;
                if let Some(val) = g.value_of(&v) {
                    if val.is_integer() {
                        point = Some(val.to_integer().rem_euclid(2));
                        if d.thick[c] > 1 {
                            thick += 1;
                        }
                    }
                }
            }
            match point {
                None => StabilizerType::A(k),
                Some(p) if fixed_mark_at(d.family.tag, p) => StabilizerType::B(k),
                Some(_) if thick > 0 => StabilizerType::DThick(k, thick),
                Some(_) => StabilizerType::D(k),
            }
        })
        .collect();
    if types.len() == 1 {
        types.pop().expect("one component")
    } else {
        types.sort();
        StabilizerType::Product(types)
    }
}

/// Whether the axis point `p` (0 or 1 on the circle, 0 on the line)
/// carries a fixed particle.
pub fn fixed_mark_at(tag: FamilyTag, p: i64) -> bool {
    match tag {
        FamilyTag::B => p == 0,
        FamilyTag::CTilde => true,
        FamilyTag::BTilde => p == 1,
        _ => false,
    }
}

/// Flat-based compatibility of two brackets: nested, or meeting with a
/// stabilizer that splits as the disjoint union of theirs.
pub fn brackets_compatible(arr: &Arrangement, a: &Flat, b: &Flat) -> bool {
    if a.is_within(b) || b.is_within(a) {
        return true;
    }
    independent_meet(arr, &[a, b])
}

fn independent_meet(arr: &Arrangement, flats: &[&Flat]) -> bool {
    let mut meet = flats[0].clone();
    for f in &flats[1..] {
        match meet.meet(f) {
            Some(m) => meet = m,
            None => return false,
        }
    }
    let total = arr.hyperplanes_containing(&meet);
    let mut parts = Vec::new();
    for f in flats {
        parts.extend(arr.hyperplanes_containing(f));
    }
    let mut sorted = parts.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != parts.len() {
        return false;
    }
    let mut t = total;
    t.sort();
    t == sorted
}

/// Whether a set of brackets is a bracketing: pairwise compatible, and
/// every antichain meets independently.
pub fn is_bracketing(arr: &Arrangement, flats: &[&Flat]) -> bool {
    let k = flats.len();
    for i in 0..k {
        for j in i + 1..k {
            if !brackets_compatible(arr, flats[i], flats[j]) {
                return false;
            }
        }
    }
    for mask in 1u32..(1 << k) {
        if mask.count_ones() < 3 {
            continue;
        }
        let sel: Vec<&Flat> = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| flats[i])
            .collect();
        let antichain = sel.iter().enumerate().all(|(i, a)| {
            sel.iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.is_within(b))
        });
        if antichain && !independent_meet(arr, &sel) {
            return false;
        }
    }
    true
}

/// All `k`-bracketings as index sets into `brackets`, every size when
/// `k` is `None`.
pub fn enumerate_bracketings(
    d: &Diagram,
    brackets: &[Bracket],
    k: Option<usize>,
) -> Vec<Vec<usize>> {
    let arr = d.arrangement();
    let m = brackets.len();
    let mut pair = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            pair[i][j] = i == j || brackets_compatible(&arr, &brackets[i].flat, &brackets[j].flat);
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        arr: &Arrangement,
        brackets: &[Bracket],
        pair: &[Vec<bool>],
        from: usize,
        chosen: &mut Vec<usize>,
        k: Option<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k.is_none_or(|k| chosen.len() == k) {
            out.push(chosen.clone());
        }
        if k.is_some_and(|k| chosen.len() >= k) {
            return;
        }
        for i in from..brackets.len() {
            if !chosen.iter().all(|&c| pair[c][i]) {
                continue;
            }
            chosen.push(i);
            let flats: Vec<&Flat> = chosen.iter().map(|&c| &brackets[c].flat).collect();
            if chosen.len() < 3 || is_bracketing(arr, &flats) {
                rec(arr, brackets, pair, i + 1, chosen, k, out);
            }
            chosen.pop();
        }
    }
    rec(&arr, brackets, &pair, 0, &mut chosen, k, &mut out);
    out
}

/// Counts of `k`-bracketings for `k = 0, 1, ...`.
pub fn count_bracketings(d: &Diagram) -> Vec<usize> {
    let brackets = d.enumerate_brackets();
    let mut counts = Vec::new();
    for b in enumerate_bracketings(d, &brackets, None) {
        if counts.len() <= b.len() {
            counts.resize(b.len() + 1, 0);
        }
        counts[b.len()] += 1;
    }
    counts
}

/// A bracket maps to the set of chamber walls containing its flat.
pub fn brackets_to_tubing(d: &Diagram, bs: &[Bracket]) -> Result<Tubing, DiagramError> {
    let arr = d.arrangement();
    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            if !brackets_compatible(&arr, &bs[i].flat, &bs[j].flat) {
                return Err(DiagramError::Incompatible(i, j));
            }
        }
    }
    let g = d.wall_graph();
    Ok(Tubing::new(&g, bs.iter().map(|b| b.walls))?)
}

pub fn tubing_to_brackets(d: &Diagram, t: &Tubing) -> Result<Vec<Bracket>, DiagramError> {
    let all = d.enumerate_brackets();
    t.tubes()
        .iter()
        .map(|&tube| {
            all.iter()
                .find(|b| b.walls == tube)
                .cloned()
                .ok_or_else(|| DiagramError::NoBracketForTube(mask_nodes(tube)))
        })
        .collect()
}

/// Dimension of a flat inside the complex.
pub fn support_dim(d: &Diagram, f: &Flat) -> usize {
    d.family.complex_dim() - f.codim()
}

/// Value of `e_c · x` on a flat, when constant.
pub fn pinned_value(f: &Flat, coord: usize) -> Option<Q> {
    let mut v = vec![0; f.ambient_dim()];
    v[coord] = 1;
    f.value_of(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tubing::{count_tubings, is_tube};

    fn diag(tag: FamilyTag, n: usize) -> Diagram {
        make_diagram(Family::new(tag, n).unwrap(), &[]).unwrap()
    }

    #[test]
    fn derived_walls_match_node_table() {
        for tag in FamilyTag::ALL {
            for n in tag.min_rank()..=6 {
                let d = diag(tag, n);
                let mut table: Vec<Equation> = d.chamber_walls().iter().map(normalized).collect();
                table.sort();
                table.dedup();
                assert_eq!(d.derived_walls(), table, "{tag}{n}");
            }
        }
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(diag(FamilyTag::A, 2).enumerate_brackets().len(), 2);
        let b2 = diag(FamilyTag::B, 2).enumerate_brackets();
        assert_eq!(b2.len(), 2);
        assert!(b2.iter().any(|b| b.contains_mark()));
        assert_eq!(diag(FamilyTag::D, 3).enumerate_brackets().len(), 5);
    }

    #[test]
    fn bracket_count_equals_tube_count() {
        for tag in FamilyTag::ALL {
            for n in tag.min_rank()..=5 {
                let d = diag(tag, n);
                let g = d.wall_graph();
                let bs = d.enumerate_brackets();
                assert_eq!(
                    bs.len() as u128,
                    count_tubings(&g).unwrap().get(1).copied().unwrap_or(0),
                    "{tag}{n}"
                );
                for b in &bs {
                    assert!(is_tube(&g, b.walls), "{tag}{n}");
                    assert_eq!(b.stabilizer.rank(), b.flat.codim());
                    assert_eq!(
                        b.stabilizer.hyperplane_count(),
                        d.arrangement().hyperplanes_containing(&b.flat).len(),
                        "{tag}{n} {}",
                        b.stabilizer
                    );
                }
            }
        }
    }

    #[test]
    fn stabilizer_examples() {
        let a = diag(FamilyTag::A, 4);
        for b in a.enumerate_brackets() {
            assert_eq!(b.stabilizer, StabilizerType::A(b.coords().len() - 1));
        }
        let b = diag(FamilyTag::B, 3);
        let origin: Vec<_> = b
            .enumerate_brackets()
            .into_iter()
            .filter(|x| x.contains_mark())
            .collect();
        let ranks: Vec<_> = origin.iter().map(|x| x.stabilizer.clone()).collect();
        assert_eq!(ranks, vec![StabilizerType::B(1), StabilizerType::B(2)]);
        let d = diag(FamilyTag::D, 4);
        let centre: Vec<_> = d
            .enumerate_brackets()
            .into_iter()
            .filter(|x| x.is_self_mirror())
            .map(|x| x.stabilizer)
            .collect();
        assert_eq!(centre, vec![StabilizerType::D(3)]);
    }

    #[test]
    fn a_bracket_maps_to_middle_node() {
        let d = diag(FamilyTag::A, 3);
        let b = d
            .enumerate_brackets()
            .into_iter()
            .find(|b| b.coords() == vec![1, 2])
            .unwrap();
        assert_eq!(b.walls, 0b010);
    }

    #[test]
    fn bracketings_match_tubings() {
        for tag in FamilyTag::ALL {
            for n in tag.min_rank()..=4 {
                let d = diag(tag, n);
                let counts = count_bracketings(&d);
                let tubes: Vec<usize> = count_tubings(&d.wall_graph())
                    .unwrap()
                    .into_iter()
                    .map(|x| x as usize)
                    .collect();
                assert_eq!(counts, tubes, "{tag}{n}");
            }
        }
    }

    #[test]
    fn thick_rules() {
        let f = Family::new(FamilyTag::B, 3).unwrap();
        assert_eq!(
            make_diagram(f, &[(0, 2)]),
            Err(DiagramError::ThickNotAllowed(FamilyTag::B))
        );
        let f = Family::new(FamilyTag::D, 3).unwrap();
        assert!(make_diagram(f, &[(0, 1)]).is_err());
        assert!(make_diagram(f, &[(5, 2)]).is_err());
        let d = make_diagram(f, &[(0, 2)]).unwrap();
        assert_eq!(d.orderings().len(), 1);
        assert_eq!(d.chamber_walls().len(), 3);
    }

    #[test]
    fn rendering() {
        let d = diag(FamilyTag::B, 3);
        assert_eq!(d.render(&[1, 2, 3]), "( -3 -2 -1 0* 1 2 3 )");
        let d = diag(FamilyTag::D, 3);
        assert_eq!(d.render(&[1, 2, 3]), "( -3 -2 -1 | 1 2 3 )");
        let d = make_diagram(Family::new(FamilyTag::D, 3).unwrap(), &[(1, 2)]).unwrap();
        assert_eq!(d.render(&[1, 2, 3]), "( -3 -2# -1 | 1 2# 3 )");
    }
}
