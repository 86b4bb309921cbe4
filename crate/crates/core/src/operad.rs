//! Cells as nested bracketings, the three composition maps, peeling of
//! outermost brackets, per-bracket flips, and arity bookkeeping.
//!
//! A cell lists its particles along the ambient line or circle. Symmetric
//! ambients list only the half from axis `0` outward (to axis `1` on a
//! circle); the mirror half is implicit. An axis is occupied by a fixed
//! mark, by a centered group, or is free.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::FamilyTag;
use crate::linalg::rank;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompositionError {
    #[error("host {host} and guest {guest} do not compose at {slot}")]
    Mismatch {
        host: FamilyTag,
        guest: FamilyTag,
        slot: Slot,
    },
    #[error("host has no particle labelled {0}")]
    NoSuchParticle(u32),
    #[error("host axis {0} carries no fixed mark")]
    NoFixedMark(usize),
    #[error("labels {0:?} occur in both host and guest")]
    LabelClash(Vec<u32>),
    #[error("empty guest")]
    EmptyGuest,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Item {
    Particle { label: u32, neg: bool, thick: u32 },
    Mark,
    Group { centered: bool, items: Vec<Item> },
}

impl Item {
    pub fn particle(label: u32) -> Item {
        Item::Particle {
            label,
            neg: false,
            thick: 1,
        }
    }

    pub fn group(items: Vec<Item>) -> Item {
        Item::Group {
            centered: false,
            items,
        }
    }

    fn negated(&self) -> Item {
        match self {
            Item::Particle { label, neg, thick } => Item::Particle {
                label: *label,
                neg: !neg,
                thick: *thick,
            },
            Item::Mark => Item::Mark,
            Item::Group { centered, items } => Item::Group {
                centered: *centered,
                items: items.iter().map(Item::negated).collect(),
            },
        }
    }

    fn has_fixed_axis(&self) -> bool {
        match self {
            Item::Mark => true,
            Item::Group {
                centered: true,
                items,
            } => items.first().is_some_and(Item::has_fixed_axis),
            _ => false,
        }
    }
}

/// Where the particles live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Ambient {
    Line,
    Circle,
    /// Half line from the axis at 0.
    Half,
    /// Half circle from the axis at 0 to the axis at 1.
    Arc,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub ambient: Ambient,
    pub items: Vec<Item>,
}

/// Insertion point of a composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Slot {
    Particle(u32),
    /// Fixed mark at axis `0` or `1`.
    Axis(usize),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Particle(l) => write!(f, "particle {l}"),
            Slot::Axis(a) => write!(f, "axis {a}"),
        }
    }
}

impl Cell {
    /// Bracket-free line of particles `labels`.
    pub fn line(labels: &[u32]) -> Cell {
        Cell {
            ambient: Ambient::Line,
            items: labels.iter().map(|&l| Item::particle(l)).collect(),
        }
    }

    /// Bracket-free diagram of a family on the given labels.
    pub fn of_family(tag: FamilyTag, labels: &[u32]) -> Cell {
        let ps = labels.iter().map(|&l| Item::particle(l));
        let (ambient, items): (Ambient, Vec<Item>) = match tag {
            FamilyTag::A => (Ambient::Line, ps.collect()),
            FamilyTag::ATilde => (Ambient::Circle, ps.collect()),
            FamilyTag::B => (
                Ambient::Half,
                std::iter::once(Item::Mark).chain(ps).collect(),
            ),
            FamilyTag::D => (Ambient::Half, ps.collect()),
            FamilyTag::CTilde => (
                Ambient::Arc,
                std::iter::once(Item::Mark)
                    .chain(ps)
                    .chain(std::iter::once(Item::Mark))
                    .collect(),
            ),
            FamilyTag::BTilde => (
                Ambient::Arc,
                ps.chain(std::iter::once(Item::Mark)).collect(),
            ),
            FamilyTag::DTilde => (Ambient::Arc, ps.collect()),
        };
        Cell { ambient, items }
    }

    fn axis_item(&self, axis: usize) -> Option<&Item> {
        let it = match (self.ambient, axis) {
            (Ambient::Half | Ambient::Arc, 0) => self.items.first(),
            (Ambient::Arc, 1) => self.items.last(),
            _ => None,
        }?;
        match it {
            Item::Mark | Item::Group { centered: true, .. } => Some(it),
            _ => None,
        }
    }

    fn axis_fixed(&self, axis: usize) -> bool {
        self.axis_item(axis).is_some_and(Item::has_fixed_axis)
    }

    pub fn family(&self) -> FamilyTag {
        match self.ambient {
            Ambient::Line => FamilyTag::A,
            Ambient::Circle => FamilyTag::ATilde,
            Ambient::Half if self.axis_fixed(0) => FamilyTag::B,
            Ambient::Half => FamilyTag::D,
            Ambient::Arc => match (self.axis_fixed(0), self.axis_fixed(1)) {
                (true, true) => FamilyTag::CTilde,
                (false, false) => FamilyTag::DTilde,
                _ => FamilyTag::BTilde,
            },
        }
    }

    pub fn labels(&self) -> Vec<u32> {
        fn walk(items: &[Item], out: &mut Vec<u32>) {
            for it in items {
                match it {
                    Item::Particle { label, .. } => out.push(*label),
                    Item::Group { items, .. } => walk(items, out),
                    Item::Mark => {}
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.items, &mut out);
        out
    }

    /// Particles, or pairs on symmetric ambients.
    pub fn particle_count(&self) -> usize {
        self.labels().len()
    }

    pub fn mark_count(&self) -> usize {
        fn walk(items: &[Item]) -> usize {
            items
                .iter()
                .map(|it| match it {
                    Item::Mark => 1,
                    Item::Group { items, .. } => walk(items),
                    Item::Particle { .. } => 0,
                })
                .sum()
        }
        walk(&self.items)
    }

    /// Arity: particles (pairs) plus fixed marks.
    pub fn arity(&self) -> usize {
        self.particle_count() + self.mark_count()
    }

    pub fn bracket_count(&self) -> usize {
        fn walk(items: &[Item]) -> usize {
            items
                .iter()
                .map(|it| match it {
                    Item::Group { items, .. } => 1 + walk(items),
                    _ => 0,
                })
                .sum()
        }
        walk(&self.items)
    }

    pub fn is_bracket_free(&self) -> bool {
        self.bracket_count() == 0
    }
}

fn render_items(items: &[Item], out: &mut Vec<String>) {
    for it in items {
        match it {
            Item::Particle { label, neg, thick } => {
                let s = if *neg { "-" } else { "" };
                let t = if *thick > 1 { "#" } else { "" };
                out.push(format!("{s}{label}{t}"));
            }
            Item::Mark => out.push("*".into()),
            Item::Group { centered, items } => {
                out.push(if *centered { "{" } else { "[" }.into());
                render_items(items, out);
                out.push(if *centered { "}" } else { "]" }.into());
            }
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        render_items(&self.items, &mut parts);
        let (open, close) = match self.ambient {
            Ambient::Line => ("(", ")"),
            Ambient::Circle => ("o(", ")"),
            Ambient::Half => ("|(", ")"),
            Ambient::Arc => ("|(", ")|"),
        };
        write!(f, "{open} {} {close}", parts.join(" "))
    }
}

/// Composition type of `H ∘_slot G`.
pub fn composition_type(h: &Cell, slot: Slot, g: &Cell) -> Result<u8, CompositionError> {
    let (hf, gf) = (h.family(), g.family());
    let bad = || CompositionError::Mismatch {
        host: hf,
        guest: gf,
        slot,
    };
    match slot {
        Slot::Particle(_) if g.ambient != Ambient::Line => Err(bad()),
        Slot::Particle(_) => Ok(match h.ambient {
            Ambient::Line | Ambient::Circle => 1,
            Ambient::Half | Ambient::Arc => 2,
        }),
        Slot::Axis(_) if g.ambient != Ambient::Half => Err(bad()),
        Slot::Axis(a) => match h.axis_item(a) {
            Some(Item::Mark) => Ok(3),
            _ if matches!(h.ambient, Ambient::Line | Ambient::Circle) => Err(bad()),
            _ => Err(CompositionError::NoFixedMark(a)),
        },
    }
}

/// `H ∘_slot G`: the guest replaces the slot, wrapped in one new bracket.
/// A one-item line adds no bracket.
pub fn compose(h: &Cell, slot: Slot, g: &Cell) -> Result<Cell, CompositionError> {
    composition_type(h, slot, g)?;
    if g.items.is_empty() {
        return Err(CompositionError::EmptyGuest);
    }
    let hl: BTreeSet<u32> = h.labels().into_iter().collect();
    let clash: Vec<u32> = g
        .labels()
        .into_iter()
        .filter(|l| hl.contains(l) && Slot::Particle(*l) != slot)
        .collect();
    if !clash.is_empty() {
        return Err(CompositionError::LabelClash(clash));
    }
    let mut out = h.clone();
    match slot {
        Slot::Particle(l) => {
            // A one-item line is the unit, or a bracket already in place.
            let unit = g.items.len() == 1;
            if !replace_particle(&mut out.items, l, &g.items, unit) {
                return Err(CompositionError::NoSuchParticle(l));
            }
        }
        Slot::Axis(a) => {
            let idx = if a == 0 { 0 } else { out.items.len() - 1 };
            out.items[idx] = Item::Group {
                centered: true,
                items: g.items.clone(),
            };
        }
    }
    Ok(out)
}

fn replace_particle(items: &mut [Item], label: u32, guest: &[Item], unit: bool) -> bool {
    for item in items.iter_mut() {
        match item {
            Item::Particle { label: l, neg, .. } if *l == label => {
                let mut content: Vec<Item> = guest.to_vec();
                if *neg {
                    content = content.iter().rev().map(Item::negated).collect();
                }
                *item = if unit {
                    content.pop().expect("one item")
                } else {
                    Item::group(content)
                };
                return true;
            }
            Item::Group { items: inner, .. } => {
                if replace_particle(inner, label, guest, unit) {
                    return true;
                }
            }
            _ => {}
        }
    }
    false
}

/// Peels the outermost brackets: `cell = H ∘ G_1 ∘ ... ∘ G_k` with `H`
/// bracket-free. Linear groups leave a placeholder particle carrying their
/// least label; centered groups leave a fixed mark.
pub fn decompose(cell: &Cell) -> (Cell, Vec<(Slot, Cell)>) {
    let mut host = cell.clone();
    let mut parts = Vec::new();
    let last = host.items.len().saturating_sub(1);
    for (i, it) in host.items.iter_mut().enumerate() {
        let Item::Group { centered, items } = it else {
            continue;
        };
        if *centered {
            let axis = if i == 0 {
                0
            } else {
                debug_assert_eq!(i, last);
                1
            };
            parts.push((
                Slot::Axis(axis),
                Cell {
                    ambient: Ambient::Half,
                    items: std::mem::take(items),
                },
            ));
            *it = Item::Mark;
        } else {
            let g = Cell {
                ambient: Ambient::Line,
                items: std::mem::take(items),
            };
            let label = *g.labels().iter().min().expect("nonempty group");
            parts.push((Slot::Particle(label), g));
            *it = Item::particle(label);
        }
    }
    (host, parts)
}

/// Inverse of [`decompose`].
pub fn compose_all(h: &Cell, parts: &[(Slot, Cell)]) -> Result<Cell, CompositionError> {
    let mut out = h.clone();
    for (slot, g) in parts {
        // The placeholder carries one of the guest's labels.
        out = compose_keeping(&out, *slot, g)?;
    }
    Ok(out)
}

fn compose_keeping(h: &Cell, slot: Slot, g: &Cell) -> Result<Cell, CompositionError> {
    if let Slot::Particle(l) = slot {
        if g.labels().contains(&l) {
            let mut host = h.clone();
            let tmp = u32::MAX;
            relabel(&mut host.items, l, tmp);
            return compose(&host, Slot::Particle(tmp), g);
        }
    }
    compose(h, slot, g)
}

fn relabel(items: &mut [Item], from: u32, to: u32) {
    for it in items {
        match it {
            Item::Particle { label, .. } if *label == from => *label = to,
            Item::Group { items, .. } => relabel(items, from, to),
            _ => {}
        }
    }
}

/// Canonical form under independent per-bracket flips, and the orbit size.
/// A linear group flips by reversing its children; a centered group by
/// reflecting through its axis, which negates its direct particles.
pub fn flip_canonicalize(cell: &Cell) -> (Cell, u64) {
    let mut orbit = 1u64;
    let items = cell
        .items
        .iter()
        .map(|it| canon_item(it, &mut orbit))
        .collect();
    (
        Cell {
            ambient: cell.ambient,
            items,
        },
        orbit,
    )
}

fn canon_item(it: &Item, orbit: &mut u64) -> Item {
    let Item::Group { centered, items } = it else {
        return it.clone();
    };
    let children: Vec<Item> = items.iter().map(|c| canon_item(c, orbit)).collect();
    let flipped: Vec<Item> = if *centered {
        let mut f: Vec<Item> = children
            .iter()
            .map(|c| match c {
                Item::Particle { .. } => c.negated(),
                _ => c.clone(),
            })
            .collect();
        normalize_free_axis(&mut f);
        f
    } else {
        children.iter().rev().cloned().collect()
    };
    let mut plain = children;
    if *centered {
        normalize_free_axis(&mut plain);
    }
    let key = |v: &[Item]| {
        let mut s = Vec::new();
        render_items(v, &mut s);
        s.join(" ")
    };
    if key(&plain) != key(&flipped) {
        *orbit *= 2;
    }
    let best = if key(&flipped) < key(&plain) {
        flipped
    } else {
        plain
    };
    Item::Group {
        centered: *centered,
        items: best,
    }
}

/// Innermost sign at a free axis is not recorded unless the particle is
/// thick.
fn normalize_free_axis(items: &mut [Item]) {
    if let Some(Item::Particle { neg, thick, .. }) = items.first_mut() {
        if *thick == 1 {
            *neg = false;
        }
    }
}

/// Stabilizer rank of one group: `k - 1` for `k` collided particles, `k`
/// for `k` pairs pinned at an axis.
pub fn group_rank(it: &Item) -> usize {
    match it {
        Item::Group { centered, items } => {
            let k = Cell {
                ambient: Ambient::Line,
                items: items.clone(),
            }
            .particle_count();
            if *centered {
                k
            } else {
                k - 1
            }
        }
        _ => 0,
    }
}

/// Rank of the collision equations of the outermost groups, computed from
/// coordinates: one coordinate per label.
pub fn stabilizer_rank(cell: &Cell) -> usize {
    let labels = cell.labels();
    let index = |l: u32| labels.iter().position(|&x| x == l).expect("label");
    let n = labels.len();
    let mut eqs: Vec<Vec<i64>> = Vec::new();
    for it in &cell.items {
        if let Item::Group { centered, items } = it {
            let inner = Cell {
                ambient: Ambient::Line,
                items: items.clone(),
            }
            .labels();
            if *centered {
                for &l in &inner {
                    let mut v = vec![0; n];
                    v[index(l)] = 1;
                    eqs.push(v);
                }
            } else {
                for w in inner.windows(2) {
                    let mut v = vec![0; n];
                    v[index(w[0])] = 1;
                    v[index(w[1])] = -1;
                    eqs.push(v);
                }
            }
        }
    }
    rank(&eqs)
}

/// Outcome of checking the arity identities on a multi-composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArityReport {
    pub host: String,
    pub guests: Vec<String>,
    pub composite: String,
    pub composite_family: FamilyTag,
    pub expected_family: FamilyTag,
    pub arity: usize,
    pub expected_arity: usize,
    pub brackets: usize,
    pub expected_brackets: usize,
    pub violations: Vec<String>,
}

impl ArityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Family of `H ∘ (G_i)` predicted from the slots alone.
pub fn expected_family(h: &Cell, parts: &[(Slot, Cell)]) -> FamilyTag {
    let fixed = |a: usize| match parts.iter().find(|(s, _)| *s == Slot::Axis(a)) {
        Some((_, g)) => g.family() == FamilyTag::B,
        None => h.axis_fixed(a),
    };
    match h.ambient {
        Ambient::Line => FamilyTag::A,
        Ambient::Circle => FamilyTag::ATilde,
        Ambient::Half if fixed(0) => FamilyTag::B,
        Ambient::Half => FamilyTag::D,
        Ambient::Arc => match (fixed(0), fixed(1)) {
            (true, true) => FamilyTag::CTilde,
            (false, false) => FamilyTag::DTilde,
            _ => FamilyTag::BTilde,
        },
    }
}

/// Composes and checks `n* = n_H - m + Σ n_i`, `k* = k_H + m + Σ k_i`
/// (units contribute no bracket) and the composite family.
pub fn operad_arity_check(
    h: &Cell,
    parts: &[(Slot, Cell)],
) -> Result<ArityReport, CompositionError> {
    let composite = compose_all(h, parts)?;
    let m = parts.len();
    let units = parts
        .iter()
        .filter(|(_, g)| g.items.len() == 1 && g.ambient == Ambient::Line)
        .count();
    let expected_arity = h.arity() - m + parts.iter().map(|(_, g)| g.arity()).sum::<usize>();
    let expected_brackets = h.bracket_count()
        + (m - units)
        + parts.iter().map(|(_, g)| g.bracket_count()).sum::<usize>();
    let expected = expected_family(h, parts);
    let mut violations = Vec::new();
    if composite.arity() != expected_arity {
        violations.push(format!("arity {} != {expected_arity}", composite.arity()));
    }
    if composite.bracket_count() != expected_brackets {
        violations.push(format!(
            "brackets {} != {expected_brackets}",
            composite.bracket_count()
        ));
    }
    if composite.family() != expected {
        violations.push(format!("family {} != {expected}", composite.family()));
    }
    if stabilizer_rank(&composite) != composite.items.iter().map(group_rank).sum::<usize>() {
        violations.push("stabilizer rank is not the sum over outermost groups".into());
    }
    Ok(ArityReport {
        host: h.to_string(),
        guests: parts.iter().map(|(s, g)| format!("{s}: {g}")).collect(),
        composite: composite.to_string(),
        composite_family: composite.family(),
        expected_family: expected,
        arity: composite.arity(),
        expected_arity,
        brackets: composite.bracket_count(),
        expected_brackets,
        violations,
    })
}

/// `(H ∘_i G1) ∘_j G2` against `H ∘_i (G1 ∘_j G2)` (nested) and against
/// `(H ∘_j G2) ∘_i G1` (parallel), over all line hosts and guests with
/// arities up to `max` and every choice of slots.
pub fn check_line_associativity(max: usize) -> Result<usize, String> {
    let mut checked = 0;
    for a in 1..=max {
        for b in 1..=max {
            for c in 1..=max {
                let h = Cell::line(&(1..=a as u32).collect::<Vec<_>>());
                let g1 = Cell::line(&(100..100 + b as u32).collect::<Vec<_>>());
                let g2 = Cell::line(&(200..200 + c as u32).collect::<Vec<_>>());
                let err = |e: CompositionError| e.to_string();
                for i in 1..=a as u32 {
                    let hg1 = compose(&h, Slot::Particle(i), &g1).map_err(err)?;
                    for j in 100..100 + b as u32 {
                        let left = compose(&hg1, Slot::Particle(j), &g2).map_err(err)?;
                        let inner = compose(&g1, Slot::Particle(j), &g2).map_err(err)?;
                        let right = compose(&h, Slot::Particle(i), &inner).map_err(err)?;
                        if left != right {
                            return Err(format!("nested: {left} != {right}"));
                        }
                        checked += 1;
                    }
                    for j in (1..=a as u32).filter(|&j| j != i) {
                        let left = compose(&hg1, Slot::Particle(j), &g2).map_err(err)?;
                        let hg2 = compose(&h, Slot::Particle(j), &g2).map_err(err)?;
                        let right = compose(&hg2, Slot::Particle(i), &g1).map_err(err)?;
                        if left != right {
                            return Err(format!("parallel: {left} != {right}"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Every bracketing of the bracket-free `tag` diagram on labels `1..=n`.
/// Runs are consecutive in the listed order; a group never equals its
/// parent, and on spherical ambients the whole diagram is not a group. On
/// an arc a centered group never spans both axes.
pub fn all_cells(tag: FamilyTag, n: usize) -> Vec<Cell> {
    let base = Cell::of_family(tag, &(1..=n as u32).collect::<Vec<_>>());
    let len = base.items.len();
    let bodies = match base.ambient {
        Ambient::Line | Ambient::Circle => runs(&base.items, len.saturating_sub(1)),
        Ambient::Half => half(&base.items, len.saturating_sub(1)),
        Ambient::Arc => {
            let mut out = Vec::new();
            for p in std::iter::once(0).chain(2..=len) {
                for q in std::iter::once(0).chain(2..=len) {
                    let left = &base.items[..p];
                    let right: Vec<Item> = base.items[len - q.min(len)..]
                        .iter()
                        .rev()
                        .cloned()
                        .collect();
                    if p + q > len
                        || p == len
                        || q == len
                        || left
                            .iter()
                            .skip(1)
                            .chain(right.iter().skip(1))
                            .any(|i| *i == Item::Mark)
                    {
                        continue;
                    }
                    let lefts = if p == 0 { vec![vec![]] } else { centered(left) };
                    let rights = if q == 0 {
                        vec![vec![]]
                    } else {
                        centered(&right)
                    };
                    let mids = runs(&base.items[p..len - q], len - p - q);
                    for l in &lefts {
                        for m in &mids {
                            for r in &rights {
                                out.push(l.iter().chain(m).chain(r).cloned().collect());
                            }
                        }
                    }
                }
            }
            out
        }
    };
    bodies
        .into_iter()
        .map(|items| Cell {
            ambient: base.ambient,
            items,
        })
        .collect()
}

fn centered(items: &[Item]) -> Vec<Vec<Item>> {
    half(items, items.len() - 1)
        .into_iter()
        .map(|c| {
            vec![Item::Group {
                centered: true,
                items: c,
            }]
        })
        .collect()
}

/// Half-line bodies: an optional centered prefix of at most `limit` items,
/// then linear runs.
fn half(items: &[Item], limit: usize) -> Vec<Vec<Item>> {
    let mut out = runs(items, items.len());
    for p in 2..=limit.min(items.len()) {
        for c in centered(&items[..p]) {
            for rest in runs(&items[p..], items.len() - p) {
                out.push(c.iter().chain(&rest).cloned().collect());
            }
        }
    }
    out
}

fn runs(items: &[Item], max_len: usize) -> Vec<Vec<Item>> {
    let Some(first) = items.first() else {
        return vec![vec![]];
    };
    let mut out: Vec<Vec<Item>> = runs(&items[1..], max_len)
        .into_iter()
        .map(|rest| std::iter::once(first.clone()).chain(rest).collect())
        .collect();
    for len in 2..=max_len.min(items.len()) {
        if items[..len].contains(&Item::Mark) {
            break;
        }
        for inner in runs(&items[..len], len - 1) {
            for rest in runs(&items[len..], max_len) {
                out.push(
                    std::iter::once(Item::group(inner.clone()))
                        .chain(rest)
                        .collect(),
                );
            }
        }
    }
    out
}

/// A random composable instance: a bracket-free host of a random family
/// and guests at a random subset of its slots.
pub fn random_instance<R: Rng>(rng: &mut R, max_arity: usize) -> (Cell, Vec<(Slot, Cell)>) {
    let tag = FamilyTag::ALL[rng.gen_range(0..FamilyTag::ALL.len())];
    let n = rng.gen_range(tag.min_rank().max(1)..=max_arity.max(tag.min_rank().max(1)));
    let h = Cell::of_family(tag, &(1..=n as u32).collect::<Vec<_>>());
    let mut next = 1000u32;
    let mut parts = Vec::new();
    let mut fresh = |k: usize| {
        let v: Vec<u32> = (next..next + k as u32).collect();
        next += k as u32;
        v
    };
    for l in 1..=n as u32 {
        if rng.gen_bool(0.4) {
            let k = rng.gen_range(1..=3);
            let g = random_line(rng, &fresh(k));
            parts.push((Slot::Particle(l), g));
        }
    }
    for a in 0..2 {
        if matches!(h.axis_item(a), Some(Item::Mark)) && rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=3);
            let gt = if rng.gen_bool(0.5) {
                FamilyTag::B
            } else {
                FamilyTag::D
            };
            parts.push((Slot::Axis(a), Cell::of_family(gt, &fresh(k))));
        }
    }
    (h, parts)
}

fn random_line<R: Rng>(rng: &mut R, labels: &[u32]) -> Cell {
    let mut c = Cell::line(labels);
    if labels.len() >= 3 && rng.gen_bool(0.5) {
        let inner = Cell::line(&labels[1..]);
        let mut h = Cell::line(&labels[..1]);
        h.items.push(Item::particle(u32::MAX));
        c = compose(&h, Slot::Particle(u32::MAX), &inner).expect("fresh labels");
    }
    c
}
