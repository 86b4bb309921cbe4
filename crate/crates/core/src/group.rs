//! Chambers, the groups `σ(W)` acting simply transitively on them, and the
//! gluing of chambers along faces.
//!
//! A chamber is a labeling: position `p` of the fundamental diagram holds
//! the signed 1-based label `labels[p]`. Geometrically the chamber is the
//! image of the fundamental region under `φ`, the signed coordinate
//! permutation sending coordinate `p` to coordinate `|labels[p]| - 1`.
//! Flipping a bracket is an exact affine isometry of the covering space, so
//! the shared face can be located on both sides.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{coordinate_count, Equation, Flat, Q};
use crate::diagram::{
    enumerate_bracketings, make_diagram, pinned_value, Bracket, Diagram, DiagramError, Occ,
};
use crate::graph::{Family, FamilyTag, GraphError};
use crate::tiling::atypical_chamber_poset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("bracket index {0} out of range")]
    NoSuchBracket(usize),
    #[error("brackets {0:?} do not form a bracketing")]
    NotABracketing(Vec<usize>),
    #[error("label {0} out of range")]
    BadLabel(i32),
    #[error("no facet covers positions {0:?}")]
    NoSuchFacet(Vec<usize>),
    #[error("flipped face has no matching bracket")]
    LostFace,
}

/// Affine isometry `(M x)_i = sign[i] * x[src[i]] + shift[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Iso {
    src: Vec<usize>,
    sign: Vec<i64>,
    shift: Vec<i64>,
}

impl Iso {
    fn identity(n: usize) -> Self {
        Iso {
            src: (0..n).collect(),
            sign: vec![1; n],
            shift: vec![0; n],
        }
    }

    fn inverse(&self) -> Iso {
        let n = self.src.len();
        let mut out = Iso::identity(n);
        for i in 0..n {
            // x[src_i] = sign_i (y_i - shift_i)
            let j = self.src[i];
            out.src[j] = i;
            out.sign[j] = self.sign[i];
            out.shift[j] = -self.sign[i] * self.shift[i];
        }
        out
    }

    fn apply(&self, x: &[Q]) -> Vec<Q> {
        (0..x.len())
            .map(|i| x[self.src[i]] * self.sign[i] + Q::from_integer(self.shift[i]))
            .collect()
    }

    /// Pulls `a · x = b` back along `x = M y`.
    fn pullback(&self, e: &QEq) -> QEq {
        let (a, b) = e;
        let n = a.len();
        let mut normal = vec![Q::zero(); n];
        let mut rhs = *b;
        for i in 0..n {
            normal[self.src[i]] += a[i] * self.sign[i];
            rhs -= a[i] * self.shift[i];
        }
        (normal, rhs)
    }

    fn translate(shift: Vec<i64>) -> Iso {
        let mut m = Iso::identity(shift.len());
        m.shift = shift;
        m
    }
}

type QEq = (Vec<Q>, Q);

/// Affine map `x -> L x + t` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Aff {
    l: Vec<Vec<Q>>,
    t: Vec<Q>,
}

impl Aff {
    fn apply(&self, x: &[Q]) -> Vec<Q> {
        self.l
            .iter()
            .zip(&self.t)
            .map(|(row, &t)| row.iter().zip(x).map(|(&a, &b)| a * b).sum::<Q>() + t)
            .collect()
    }

    fn pullback(&self, e: &QEq) -> QEq {
        let (a, b) = e;
        let n = a.len();
        let normal = (0..n)
            .map(|j| (0..n).map(|i| a[i] * self.l[i][j]).sum())
            .collect();
        let rhs = *b - a.iter().zip(&self.t).map(|(&x, &y)| x * y).sum::<Q>();
        (normal, rhs)
    }
}

/// The flip of a bracket: reflection of its particles about their
/// collision point, fixing the collision flat pointwise and keeping every
/// particle's identity. Brackets pinned to an axis point reflect through
/// it; free brackets reflect about the midpoint of their extreme
/// occurrences, so no particle outside jumps over the run.
fn reflection(n: usize, b: &Bracket) -> Aff {
    let one = Q::from_integer(1);
    let mut l: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one } else { Q::zero() })
                .collect()
        })
        .collect();
    let mut t = vec![Q::zero(); n];
    let pins: Vec<(usize, Q)> = (0..n)
        .filter_map(|c| pinned_value(&b.flat, c).map(|a| (c, a)))
        .collect();
    if !pins.is_empty() {
        for (c, a) in pins {
            l[c][c] = -one;
            t[c] = a * 2;
        }
        return Aff { l, t };
    }
    let slots: Vec<(usize, i64, i64)> = b
        .occs
        .iter()
        .filter_map(|o| match *o {
            Occ::Particle { coord, neg, offset } => Some((coord, if neg { -1 } else { 1 }, offset)),
            Occ::Mark { .. } => None,
        })
        .collect();
    // Slots are in increasing order of value: v'_s = v_first + v_last - v_s,
    // so x'_c = σ_c (v_first + v_last) - x_c - 2σ_c o_c.
    let (&(cf, sf, of), &(cl, sl, ol)) = (slots.first().expect("run"), slots.last().expect("run"));
    for &(c, sg, o) in &slots {
        let mut row = vec![Q::zero(); n];
        row[cf] += Q::from_integer(sg * sf);
        row[cl] += Q::from_integer(sg * sl);
        row[c] -= one;
        l[c] = row;
        t[c] = Q::from_integer(sg * (of + ol) - 2 * sg * o);
    }
    Aff { l, t }
}

fn integral(e: &QEq) -> Equation {
    let den =
        e.0.iter()
            .chain(std::iter::once(&e.1))
            .fold(1i64, |acc, q| num_integer::lcm(acc, *q.denom()));
    Equation {
        normal: e.0.iter().map(|q| (q * den).to_integer()).collect(),
        rhs: (e.1 * den).to_integer(),
    }
}

fn rational(e: &Equation) -> QEq {
    (
        e.normal.iter().map(|&x| Q::from_integer(x)).collect(),
        Q::from_integer(e.rhs),
    )
}

/// A chamber of a (possibly atypical) configuration space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Chamber {
    pub labels: Vec<i32>,
}

impl Chamber {
    pub fn identity(n: usize) -> Self {
        Chamber {
            labels: (1..=n as i32).collect(),
        }
    }

    fn phi(&self) -> Iso {
        let n = self.labels.len();
        let mut m = Iso::identity(n);
        for (c, &l) in self.labels.iter().enumerate() {
            let i = l.unsigned_abs() as usize - 1;
            m.src[i] = c;
            m.sign[i] = l.signum() as i64;
        }
        m
    }
}

/// Per-diagram data shared by all chambers of one shape.
#[derive(Debug)]
pub struct Shape {
    pub diagram: Diagram,
    pub brackets: Vec<Bracket>,
    equations: Vec<Vec<Equation>>,
    by_flat: HashMap<Flat, usize>,
    walls: Vec<Equation>,
    p0: Vec<Q>,
    /// A point realizing each representative ordering.
    points: Vec<Vec<Q>>,
}

/// All chambers of one configuration space, with thick particles carried by
/// fixed labels.
#[derive(Debug)]
pub struct ChamberSpace {
    pub family: Family,
    /// Multiplicity per label (index `label - 1`), 1 for ordinary.
    pub mult: Vec<u32>,
    shapes: Mutex<ShapeCache>,
}

/// Shapes keyed by thick positions.
type ShapeCache = BTreeMap<Vec<(usize, u32)>, Arc<Shape>>;

impl ChamberSpace {
    /// Thick particles given as `(position, multiplicity)` of the
    /// fundamental diagram; the identity chamber carries them there.
    pub fn new(family: Family, thick: &[(usize, u32)]) -> Result<Self, GroupError> {
        make_diagram(family, thick)?;
        let n = coordinate_count(family);
        let mut mult = vec![1; n];
        for &(p, m) in thick {
            mult[p] = m;
        }
        Ok(ChamberSpace {
            family,
            mult,
            shapes: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.mult.len()
    }

    pub fn identity(&self) -> Chamber {
        Chamber::identity(self.dim())
    }

    fn is_thick_label(&self, l: i32) -> bool {
        self.mult[l.unsigned_abs() as usize - 1] > 1
    }

    pub fn thick_positions(&self, c: &Chamber) -> Vec<(usize, u32)> {
        c.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| self.is_thick_label(l))
            .map(|(p, &l)| (p, self.mult[l.unsigned_abs() as usize - 1]))
            .collect()
    }

    pub fn shape(&self, c: &Chamber) -> Arc<Shape> {
        let key = self.thick_positions(c);
        let mut cache = self.shapes.lock().expect("shape cache");
        cache
            .entry(key.clone())
            .or_insert_with(|| Arc::new(self.build_shape(&key)))
            .clone()
    }

    fn build_shape(&self, thick: &[(usize, u32)]) -> Shape {
        let diagram = make_diagram(self.family, thick).expect("validated family");
        let brackets = diagram.enumerate_brackets();
        let equations: Vec<Vec<Equation>> = brackets
            .iter()
            .map(|b| diagram.collision_equations(&b.occs).expect("valid bracket"))
            .collect();
        let by_flat = brackets
            .iter()
            .enumerate()
            .map(|(i, b)| (b.flat.clone(), i))
            .collect();
        let walls = diagram.derived_walls();
        let points: Vec<Vec<Q>> = diagram
            .orderings()
            .iter()
            .map(|o| realize(&diagram, o))
            .collect();
        let p0 = points[0].clone();
        Shape {
            diagram,
            brackets,
            equations,
            by_flat,
            walls,
            p0,
            points,
        }
    }

    /// Canonical chamber containing a generic point of the cover.
    pub fn chamber_of_point(&self, x: &[Q]) -> Chamber {
        let tag = self.family.tag;
        let n = x.len();
        let two = Q::from_integer(2);
        let labels = match tag {
            FamilyTag::A => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| x[a].cmp(&x[b]));
                idx.iter().map(|&i| i as i32 + 1).collect()
            }
            FamilyTag::ATilde => {
                let v: Vec<Q> = x.iter().map(|&y| modulo(y - x[0], two)).collect();
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| v[a].cmp(&v[b]));
                idx.iter().map(|&i| i as i32 + 1).collect()
            }
            _ => {
                let r: Vec<Q> = if tag.is_toroidal() {
                    x.iter().map(|&y| centered(y)).collect()
                } else {
                    x.to_vec()
                };
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| r[a].abs().cmp(&r[b].abs()));
                let mut labels: Vec<i32> = idx
                    .iter()
                    .map(|&i| {
                        if r[i].is_negative() {
                            -(i as i32 + 1)
                        } else {
                            i as i32 + 1
                        }
                    })
                    .collect();
                let mut free = Vec::new();
                if matches!(tag, FamilyTag::D | FamilyTag::BTilde | FamilyTag::DTilde) {
                    free.push(0);
                }
                if tag == FamilyTag::DTilde {
                    free.push(n - 1);
                }
                for p in free {
                    if !self.is_thick_label(labels[p]) {
                        labels[p] = labels[p].abs();
                    }
                }
                labels
            }
        };
        Chamber { labels }
    }

    /// Lattice translation taking a point of some translate of the
    /// fundamental region back into it.
    fn reduce(&self, q: &[Q]) -> Vec<i64> {
        let tag = self.family.tag;
        let n = q.len();
        let two = Q::from_integer(2);
        match tag {
            FamilyTag::A | FamilyTag::B | FamilyTag::D => vec![0; n],
            FamilyTag::ATilde => (0..n)
                .map(|i| {
                    let d = q[i] - q[0];
                    (d - modulo(d, two)).to_integer()
                })
                .collect(),
            FamilyTag::DTilde => (0..n)
                .map(|i| {
                    if i + 1 == n {
                        (q[i] - modulo(q[i], two)).to_integer()
                    } else {
                        (q[i] - centered(q[i])).to_integer()
                    }
                })
                .collect(),
            _ => q.iter().map(|&y| (y - centered(y)).to_integer()).collect(),
        }
    }

    /// The chamber across a facet, and the index of that facet among the
    /// new chamber's brackets.
    pub fn adjacent_chamber(
        &self,
        c: &Chamber,
        bracket: usize,
    ) -> Result<(Chamber, usize), GroupError> {
        let (h, faces) = self.flip_face(c, &[bracket], bracket)?;
        Ok((h, faces[0]))
    }

    /// Flips one bracket of a face `(c, set)`; returns the new chamber and
    /// the transported bracket indices, in the order of `set`.
    pub fn flip_face(
        &self,
        c: &Chamber,
        set: &[usize],
        which: usize,
    ) -> Result<(Chamber, Vec<usize>), GroupError> {
        let shape = self.shape(c);
        let b = shape
            .brackets
            .get(which)
            .ok_or(GroupError::NoSuchBracket(which))?;
        for &i in set {
            if i >= shape.brackets.len() {
                return Err(GroupError::NoSuchBracket(i));
            }
        }
        let n = self.dim();
        let phi = c.phi();
        let r = reflection(n, b);
        let moved = phi.apply(&r.apply(&shape.points[b.run.ordering]));
        let h = self.chamber_of_point(&moved);
        let hs = self.shape(&h);
        let q = h.phi().inverse().apply(&moved);
        let lambda = self.reduce(&q);
        debug_assert!(hs.contains(&Iso::translate(lambda.iter().map(|x| -x).collect()).apply(&q)));
        // κ = T(-λ) ∘ φ_h⁻¹ ∘ φ ∘ R; faces move by pulling back along κ⁻¹.
        let steps = [phi.inverse(), h.phi(), Iso::translate(lambda)];
        let mut out = Vec::with_capacity(set.len());
        for &i in set {
            let eqs: Vec<Equation> = shape.equations[i]
                .iter()
                .map(|e| {
                    let mut q = r.pullback(&rational(e));
                    for s in &steps {
                        q = s.pullback(&q);
                    }
                    integral(&q)
                })
                .collect();
            let f = Flat::whole(n)
                .meet_equations(&eqs)
                .ok_or(GroupError::LostFace)?;
            out.push(*hs.by_flat.get(&f).ok_or(GroupError::LostFace)?);
        }
        Ok((h, out))
    }

    /// Chambers reachable from the identity by facet flips, sorted.
    pub fn all_chambers(&self) -> Vec<Chamber> {
        let start = self.identity();
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let k = self.shape(&c).brackets.len();
            for b in 0..k {
                let (h, _) = self.adjacent_chamber(&c, b).expect("valid bracket");
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// The orbit of a face under independent per-bracket flips.
    pub fn face_orbit(
        &self,
        c: &Chamber,
        set: &[usize],
    ) -> Result<Vec<(Chamber, Vec<usize>)>, GroupError> {
        let mut start = set.to_vec();
        start.sort_unstable();
        let mut seen = BTreeSet::from([(c.clone(), start.clone())]);
        let mut queue = VecDeque::from([(c.clone(), start)]);
        while let Some((ch, s)) = queue.pop_front() {
            for &b in &s {
                let (h, mut t) = self.flip_face(&ch, &s, b)?;
                t.sort_unstable();
                if seen.insert((h.clone(), t.clone())) {
                    queue.push_back((h, t));
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    pub fn render(&self, c: &Chamber) -> String {
        self.shape(c).diagram.render(&c.labels)
    }
}

impl Shape {
    fn contains(&self, x: &[Q]) -> bool {
        self.walls.iter().all(|w| {
            let side = |p: &[Q]| {
                let v: Q = w.normal.iter().zip(p).map(|(&a, &b)| b * a).sum::<Q>()
                    - Q::from_integer(w.rhs);
                v.signum()
            };
            let s = side(x);
            !s.is_zero() && s == side(&self.p0)
        })
    }
}

/// `y mod m` in `[0, m)`.
fn modulo(y: Q, m: Q) -> Q {
    let k = (y / m).floor();
    y - m * k
}

/// `y mod 2` in `(-1, 1]`.
fn centered(y: Q) -> Q {
    let two = Q::from_integer(2);
    let r = modulo(y, two);
    if r > Q::from_integer(1) {
        r - two
    } else {
        r
    }
}

/// A point whose occurrences appear in the given order, evenly spaced
/// and symmetric under the family's mirror.
fn realize(d: &Diagram, ord: &[Occ]) -> Vec<Q> {
    let len = ord.len() as i64;
    let n = d.particle_count() as i64;
    let value = |k: i64| match d.family.tag {
        FamilyTag::A => Q::from_integer(k),
        FamilyTag::ATilde => Q::new(2 * k, len),
        FamilyTag::B => Q::from_integer(k - n),
        FamilyTag::D => Q::new(2 * k - (2 * n - 1), 2),
        FamilyTag::CTilde => Q::new(2 * k, len),
        FamilyTag::BTilde | FamilyTag::DTilde => Q::new(2 * k + 1, len),
    };
    let mut x = vec![Q::zero(); d.particle_count()];
    for (k, o) in ord.iter().enumerate() {
        if let Occ::Particle { coord, neg, offset } = *o {
            let v = value(k as i64) - Q::from_integer(offset);
            x[coord] = if neg { -v } else { v };
        }
    }
    x
}

/// A generic interior point of the fundamental region.
fn interior_point(family: Family) -> Vec<Q> {
    let n = coordinate_count(family);
    let d = n as i64 + 1;
    (0..n).map(|c| Q::new(c as i64 + 1, d)).collect()
}

/// An element of `σ(W)`: a permutation of labels with signs. For `D̃` the
/// signs act on positions rather than labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement {
    /// `perm[i]` is the image of label `i + 1` (0-based).
    pub perm: Vec<usize>,
    pub signs: Vec<bool>,
}

impl GroupElement {
    /// Acts on a chamber; the result is renormalized.
    pub fn act(&self, space: &ChamberSpace, c: &Chamber) -> Chamber {
        let tag = space.family.tag;
        let mut labels: Vec<i32> = c
            .labels
            .iter()
            .map(|&l| {
                let i = l.unsigned_abs() as usize - 1;
                let mut v = self.perm[i] as i32 + 1;
                if tag != FamilyTag::DTilde && self.signs.get(i).copied().unwrap_or(false) {
                    v = -v;
                }
                v * l.signum()
            })
            .collect();
        if tag == FamilyTag::DTilde {
            for (p, l) in labels.iter_mut().enumerate() {
                if self.signs[p] {
                    *l = -*l;
                }
            }
        }
        space.normalize(Chamber { labels })
    }
}

impl ChamberSpace {
    /// Canonical form of a labeling: reads it back through a point.
    pub fn normalize(&self, c: Chamber) -> Chamber {
        let p0 = interior_point(self.family);
        self.chamber_of_point(&c.phi().apply(&p0))
    }
}

/// The elements of `σ(W)`, in lexicographic order.
pub fn group_elements(family: Family) -> Result<Vec<GroupElement>, GroupError> {
    let family = Family::new(family.tag, family.rank)?;
    let n = coordinate_count(family);
    let tag = family.tag;
    let mut perms = Vec::new();
    permutations(n, &mut Vec::new(), &mut vec![false; n], &mut perms);
    if tag == FamilyTag::ATilde {
        perms.retain(|p| p[0] == 0);
    }
    let sign_sets: Vec<Vec<bool>> = match tag {
        FamilyTag::A | FamilyTag::ATilde => vec![Vec::new()],
        _ => (0u32..1 << n)
            .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|s: &Vec<bool>| match tag {
                FamilyTag::D | FamilyTag::BTilde => s.iter().filter(|&&b| b).count() % 2 == 0,
                FamilyTag::DTilde => !s[0] && !s[n - 1],
                _ => true,
            })
            .collect(),
    };
    let mut out = Vec::with_capacity(perms.len() * sign_sets.len());
    for p in &perms {
        for s in &sign_sets {
            out.push(GroupElement {
                perm: p.clone(),
                signs: s.clone(),
            });
        }
    }
    Ok(out)
}

fn permutations(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for i in 0..n {
        if !used[i] {
            used[i] = true;
            cur.push(i);
            permutations(n, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

/// Result of the simple-transitivity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub family: String,
    pub group_order: usize,
    pub chambers: usize,
    /// Orbit of the identity chamber is everything.
    pub transitive: bool,
    /// No chamber has a nontrivial stabilizer.
    pub free: bool,
}

pub fn check_simple_transitivity(family: Family) -> Result<TransitivityReport, GroupError> {
    let space = ChamberSpace::new(family, &[])?;
    let group = group_elements(family)?;
    let chambers: BTreeSet<Chamber> = space.all_chambers().into_iter().collect();
    let id = space.identity();
    let orbit: BTreeSet<Chamber> = group.iter().map(|g| g.act(&space, &id)).collect();
    let free = chambers.iter().all(|c| {
        let images: BTreeSet<Chamber> = group.iter().map(|g| g.act(&space, c)).collect();
        images.len() == group.len()
    });
    Ok(TransitivityReport {
        family: family.to_string(),
        group_order: group.len(),
        chambers: chambers.len(),
        transitive: orbit == chambers,
        free,
    })
}

/// Face counts of the glued complex by codimension: `faces[c]` pairs of
/// (chamber, `c`-bracketing), `orbits[c]` glued faces, `max_orbit[c]` and
/// `min_orbit[c]` orbit sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingCensus {
    pub family: String,
    pub chambers: usize,
    pub faces: Vec<usize>,
    pub orbits: Vec<usize>,
    pub min_orbit: Vec<usize>,
    pub max_orbit: Vec<usize>,
}

pub fn gluing_census(space: &ChamberSpace) -> Result<GluingCensus, GroupError> {
    let chambers = space.all_chambers();
    let mut faces: Vec<usize> = Vec::new();
    let mut orbits: Vec<usize> = Vec::new();
    let mut min_orbit: Vec<usize> = Vec::new();
    let mut max_orbit: Vec<usize> = Vec::new();
    let mut seen: BTreeSet<(Chamber, Vec<usize>)> = BTreeSet::new();
    for c in &chambers {
        let shape = space.shape(c);
        for set in enumerate_bracketings(&shape.diagram, &shape.brackets, None) {
            let k = set.len();
            if faces.len() <= k {
                faces.resize(k + 1, 0);
                orbits.resize(k + 1, 0);
                min_orbit.resize(k + 1, usize::MAX);
                max_orbit.resize(k + 1, 0);
            }
            faces[k] += 1;
            if seen.contains(&(c.clone(), set.clone())) {
                continue;
            }
            let orbit = space.face_orbit(c, &set)?;
            orbits[k] += 1;
            min_orbit[k] = min_orbit[k].min(orbit.len());
            max_orbit[k] = max_orbit[k].max(orbit.len());
            seen.extend(orbit);
        }
    }
    Ok(GluingCensus {
        family: space.family.to_string(),
        chambers: chambers.len(),
        faces,
        orbits,
        min_orbit,
        max_orbit,
    })
}

/// Bracket of a chamber's diagram whose run covers exactly these positions
/// (and mirrors), preferring runs without marks.
pub fn find_bracket(shape: &Shape, positions: &[usize], with_mark: bool) -> Option<usize> {
    let want: BTreeSet<usize> = positions.iter().copied().collect();
    shape.brackets.iter().position(|b| {
        b.coords().into_iter().collect::<BTreeSet<_>>() == want && b.contains_mark() == with_mark
    })
}

/// A facet named by the diagram positions its run covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetSpec {
    pub positions: Vec<usize>,
    pub mark: bool,
}

/// Tile type of a chamber: the label of its (possibly atypical) chamber
/// poset.
pub fn chamber_type(space: &ChamberSpace, c: &Chamber) -> Result<String, GroupError> {
    let shape = space.shape(c);
    Ok(atypical_chamber_poset(&shape.diagram)?.label)
}

/// Walks across the given facets in turn; returns every chamber visited,
/// the start included.
pub fn gluing_walk(
    space: &ChamberSpace,
    start: &Chamber,
    facets: &[FacetSpec],
) -> Result<Vec<Chamber>, GroupError> {
    let mut out = vec![start.clone()];
    for f in facets {
        let cur = out.last().expect("nonempty");
        let shape = space.shape(cur);
        let b = find_bracket(&shape, &f.positions, f.mark)
            .ok_or(GroupError::NoSuchFacet(f.positions.clone()))?;
        let (next, _) = space.adjacent_chamber(cur, b)?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::chamber_count;

    fn fam(tag: FamilyTag, n: usize) -> Family {
        Family::new(tag, n).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_elements(fam(FamilyTag::A, 2)).unwrap().len(), 6);
        assert_eq!(group_elements(fam(FamilyTag::CTilde, 2)).unwrap().len(), 8);
        assert_eq!(group_elements(fam(FamilyTag::DTilde, 4)).unwrap().len(), 96);
        for tag in FamilyTag::ALL {
            for n in tag.min_rank().max(2)..=4 {
                let f = fam(tag, n);
                let g = group_elements(f).unwrap().len();
                assert_eq!(chamber_count(f).unwrap(), g.into(), "{f}");
            }
        }
    }

    #[test]
    fn flips_are_involutions() {
        for tag in FamilyTag::ALL {
            let f = fam(tag, tag.min_rank().max(3));
            let space = ChamberSpace::new(f, &[]).unwrap();
            for c in space.all_chambers() {
                for b in 0..space.shape(&c).brackets.len() {
                    let (h, b2) = space.adjacent_chamber(&c, b).unwrap();
                    assert_ne!(h, c, "{f}");
                    let (back, b3) = space.adjacent_chamber(&h, b2).unwrap();
                    assert_eq!((back, b3), (c.clone(), b), "{f}");
                }
            }
        }
    }

    #[test]
    fn b2_walk_is_an_eight_cycle() {
        let space = ChamberSpace::new(fam(FamilyTag::B, 2), &[]).unwrap();
        let mut c = space.identity();
        let mut seen = vec![c.clone()];
        let mut facet = 0;
        for _ in 0..8 {
            let (h, f) = space.adjacent_chamber(&c, facet).unwrap();
            facet = 1 - f;
            c = h;
            seen.push(c.clone());
        }
        assert_eq!(seen[8], seen[0]);
        let distinct: BTreeSet<_> = seen[..8].iter().cloned().collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn simple_transitivity_small() {
        for tag in FamilyTag::ALL {
            let r = check_simple_transitivity(fam(tag, tag.min_rank().max(3))).unwrap();
            assert!(r.transitive && r.free, "{r:?}");
            assert_eq!(r.group_order, r.chambers);
        }
    }

    #[test]
    fn face_orbits_have_size_two_to_the_codimension() {
        for (tag, n) in [
            (FamilyTag::B, 3),
            (FamilyTag::ATilde, 3),
            (FamilyTag::DTilde, 4),
        ] {
            let space = ChamberSpace::new(fam(tag, n), &[]).unwrap();
            let g = gluing_census(&space).unwrap();
            for c in 0..g.faces.len() {
                assert_eq!(g.min_orbit[c], 1 << c);
                assert_eq!(g.max_orbit[c], 1 << c);
                assert_eq!(g.orbits[c] << c, g.faces[c]);
            }
        }
    }

    #[test]
    fn thick_d3_glues_from_its_chamber_types() {
        let space = ChamberSpace::new(fam(FamilyTag::D, 3), &[(0, 2)]).unwrap();
        let g = gluing_census(&space).unwrap();
        let mut by_type: BTreeMap<Vec<(usize, u32)>, usize> = BTreeMap::new();
        for c in space.all_chambers() {
            *by_type.entry(space.thick_positions(&c)).or_default() += 1;
        }
        let mut sum = vec![0usize; g.faces.len()];
        for (thick, count) in by_type {
            let d = make_diagram(space.family, &thick).unwrap();
            let levels = atypical_chamber_poset(&d).unwrap().levels;
            for (c, f) in levels.iter().enumerate() {
                sum[c] += count * f;
            }
        }
        let glued: Vec<usize> = sum.iter().enumerate().map(|(c, s)| s >> c).collect();
        assert_eq!(glued, g.orbits);
    }

    #[test]
    fn thick_d4_walk_changes_type() {
        let space = ChamberSpace::new(fam(FamilyTag::D, 4), &[(3, 2)]).unwrap();
        let facet = |p: &[usize]| FacetSpec {
            positions: p.to_vec(),
            mark: false,
        };
        let steps = [
            facet(&[1, 2, 3]),
            facet(&[0, 1]),
            facet(&[0]),
            facet(&[0, 1, 2, 3]),
        ];
        let walk = gluing_walk(&space, &space.identity(), &steps).unwrap();
        let types: Vec<String> = walk
            .iter()
            .map(|c| chamber_type(&space, c).unwrap())
            .collect();
        assert_eq!(types, ["D4", "Xa4", "A4", "A4", "D4"]);
        assert_ne!(walk[2], walk[3]);
    }
}
