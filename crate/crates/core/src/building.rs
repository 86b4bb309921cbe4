//! Minimal building sets: brute-force census of irreducible flats, and the
//! closed enumeration formulas they are compared with.
//!
//! Flats are taken modulo the translation lattice `2Z^N` on tori (and
//! modulo the diagonal for `Ã`). Every flat of these arrangements is, up to
//! translation, described by a signed set partition of the coordinates:
//! free blocks where `x_i = s_i t`, and anchored blocks pinned to an axis
//! point `0` or `1`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{coordinate_count, Equation, Flat};
use crate::diagram::{classify_flat, make_diagram, DiagramError, StabilizerType};
use crate::fvector::binomial;
use crate::graph::{Family, FamilyTag, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("family {0} has no thick particles")]
    ThickNotAllowed(FamilyTag),
    #[error("{m} thick particles exceed the {n} available")]
    TooManyThick { m: usize, n: usize },
    #[error("index out of range: {0}")]
    OutOfRange(String),
}

/// Census result: number of irreducible flats of dimension `k` with a given
/// stabilizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildingRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub stabilizer: String,
    /// Thick particles inside the support.
    pub r: usize,
    pub count: u64,
}

/// Which table row a flat belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RowKind {
    A,
    B,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    Match,
    Mismatch,
    /// Formula is nonzero but the stabilizer would be reducible or empty
    /// (`D_2`, `D_1` without thick particles), so no flat exists.
    RankThreshold,
}

/// Census against formula for one row, one `k`, one `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub row: RowKind,
    pub subspace: String,
    pub stabilizer: String,
    pub k: usize,
    /// `None` when the row is compared as a total over `r`.
    pub r: Option<usize>,
    pub census: u64,
    pub formula: u64,
    pub status: CheckStatus,
}

/// Distinct irreducible flats, each with its stabilizer and support
/// dimension.
pub fn census_flats(
    family: Family,
    m: usize,
) -> Result<Vec<(Flat, StabilizerType, usize)>, BuildingError> {
    let family = Family::new(family.tag, family.rank)?;
    let n = coordinate_count(family);
    if m > 0 && !family.tag.hosts_thick() {
        return Err(BuildingError::ThickNotAllowed(family.tag));
    }
    if m > n {
        return Err(BuildingError::TooManyThick { m, n });
    }
    let thick: Vec<(usize, u32)> = (0..m).map(|i| (i, 2)).collect();
    let d = make_diagram(family, &thick)?;
    let arr = d.arrangement();
    let tag = family.tag;
    let anchors: Vec<i64> = match tag {
        FamilyTag::A | FamilyTag::ATilde => vec![],
        _ if tag.is_toroidal() => vec![0, 1],
        _ => vec![0],
    };
    let signed = tag.is_symmetric();
    // Assign coordinates one at a time: to an anchor, to an existing free
    // block (with a sign), or to a new free block (positive sign first).
    let assignments = assign(n, anchors.len(), signed);
    let flats: BTreeSet<Flat> = assignments
        .par_iter()
        .filter_map(|a| flat_of(n, &anchors, a))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let complex_dim = family.complex_dim();
    let lineality = usize::from(matches!(tag, FamilyTag::A | FamilyTag::ATilde));
    let mut out = Vec::new();
    for f in flats {
        let codim = f.codim();
        if codim == 0 || !arr.is_arrangement_flat(&f) || !arr.is_irreducible(&f) {
            continue;
        }
        let essential = n - lineality;
        if !tag.is_toroidal() && codim == essential {
            continue;
        }
        let st = classify_flat(&d, &arr, &f);
        let k = complex_dim - codim;
        out.push((f, st, k));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Anchor(usize),
    Block(usize, bool),
}

fn assign(n: usize, anchors: usize, signed: bool) -> Vec<Vec<Slot>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        i: usize,
        n: usize,
        anchors: usize,
        signed: bool,
        blocks: usize,
        cur: &mut Vec<Slot>,
        out: &mut Vec<Vec<Slot>>,
    ) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for a in 0..anchors {
            cur.push(Slot::Anchor(a));
            rec(i + 1, n, anchors, signed, blocks, cur, out);
            cur.pop();
        }
        for b in 0..blocks {
            for neg in [false, true] {
                if neg && !signed {
                    continue;
                }
                cur.push(Slot::Block(b, neg));
                rec(i + 1, n, anchors, signed, blocks, cur, out);
                cur.pop();
            }
        }
        cur.push(Slot::Block(blocks, false));
        rec(i + 1, n, anchors, signed, blocks + 1, cur, out);
        cur.pop();
    }
    rec(0, n, anchors, signed, 0, &mut cur, &mut out);
    out
}

fn flat_of(n: usize, anchors: &[i64], a: &[Slot]) -> Option<Flat> {
    let mut eqs = Vec::new();
    let mut first: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
    for (i, s) in a.iter().enumerate() {
        match *s {
            Slot::Anchor(x) => {
                let mut normal = vec![0; n];
                normal[i] = 1;
                eqs.push(Equation {
                    normal,
                    rhs: anchors[x],
                });
            }
            Slot::Block(b, neg) => {
                if let Some(&(j, neg_j)) = first.get(&b) {
                    // s_i x_i = s_j x_j
                    let mut normal = vec![0; n];
                    normal[i] = if neg { -1 } else { 1 };
                    normal[j] += if neg_j { 1 } else { -1 };
                    eqs.push(Equation { normal, rhs: 0 });
                } else {
                    first.insert(b, (i, neg));
                }
            }
        }
    }
    Flat::whole(n).meet_equations(&eqs)
}

/// Aggregated census rows sorted by `(k, stabilizer, r)`.
pub fn enumerate_building_set(family: Family, m: usize) -> Result<Vec<BuildingRow>, BuildingError> {
    let flats = census_flats(family, m)?;
    let mut counts: BTreeMap<(usize, String, usize), u64> = BTreeMap::new();
    for (_, st, k) in flats {
        *counts
            .entry((k, st.to_string(), st.thick_count()))
            .or_default() += 1;
    }
    Ok(counts
        .into_iter()
        .map(|((k, stabilizer, r), count)| BuildingRow {
            family: family.tag.to_string(),
            n: family.rank,
            m,
            k,
            stabilizer,
            r,
            count,
        })
        .collect())
}

/// A printed table row: kind, offset `δ` with stabilizer rank
/// `j = n - k - δ`, whether it is per-`r`, and the subspace label.
struct RowSpec {
    kind: RowKind,
    delta: usize,
    per_r: bool,
    subspace: fn(usize, usize, usize) -> String,
}

fn row_specs(tag: FamilyTag, m: usize) -> Vec<RowSpec> {
    use RowKind::*;
    let spec = |kind, delta, per_r, subspace| RowSpec {
        kind,
        delta,
        per_r,
        subspace,
    };
    let thick = m > 0;
    match tag {
        FamilyTag::A => vec![spec(A, 1, false, |k, _, _| format!("A{}", k + 1))],
        FamilyTag::B => vec![
            spec(B, 1, false, |k, _, _| format!("B{}", k + 1)),
            spec(A, 1, false, |k, _, _| format!("B{}", k + 1)),
        ],
        FamilyTag::D if !thick => vec![
            spec(D, 1, false, |k, _, _| format!("B{}", k + 1)),
            spec(A, 1, false, |k, _, _| format!("D{},1", k + 1)),
        ],
        FamilyTag::D => vec![
            spec(D, 1, true, |k, _, _| format!("B{}", k + 1)),
            spec(A, 1, false, |k, m, r| {
                format!("D{},{}", k + 1, m + 1 - r.min(m + 1))
            }),
        ],
        FamilyTag::ATilde => vec![spec(A, 0, false, |k, _, _| format!("Atilde{}", k + 1))],
        FamilyTag::BTilde if !thick => vec![
            spec(A, 1, false, |k, _, _| format!("Btilde{},1", k + 1)),
            spec(B, 0, false, |k, _, _| format!("Btilde{}", k + 1)),
            spec(D, 0, false, |k, _, _| format!("Ctilde{}", k + 1)),
        ],
        FamilyTag::BTilde => vec![
            spec(A, 1, false, |k, m, r| {
                format!("Btilde{},{}", k, m + 1 - r.min(m + 1))
            }),
            spec(B, 1, true, |k, _, r| format!("Btilde{},{}", k + 1, r)),
            spec(D, 1, true, |k, _, _| format!("Ctilde{}", k + 1)),
        ],
        FamilyTag::CTilde => vec![
            spec(A, 1, false, |k, _, _| format!("Ctilde{}", k + 1)),
            spec(B, 0, false, |k, _, _| format!("Ctilde{}", k + 1)),
        ],
        FamilyTag::DTilde if !thick => vec![
            spec(A, 1, false, |k, _, _| format!("Dtilde{},1", k + 1)),
            spec(D, 0, false, |k, _, _| format!("Btilde{}", k + 1)),
        ],
        FamilyTag::DTilde => vec![
            spec(A, 1, false, |k, m, r| {
                format!("Dtilde{},{}", k + 1, m + 1 - r.min(m + 1))
            }),
            spec(D, 1, true, |k, _, r| format!("Btilde{},{}", k + 1, r)),
        ],
    }
}

fn big_u64(x: BigInt) -> u64 {
    x.to_u64().unwrap_or(0)
}

/// Literal value of a table's enumeration entry, with `k` defined by the
/// row's printed stabilizer subscript.
pub fn building_table_formula(
    family: Family,
    row: RowKind,
    k: usize,
    m: usize,
    r: usize,
) -> Result<u64, BuildingError> {
    let tag = family.tag;
    let n = family.rank as i64;
    let (k, m, r) = (k as i64, m as i64, r as i64);
    let dim = family.complex_dim() as i64;
    if k < 0 || k >= dim.max(1) + i64::from(tag.is_toroidal()) {
        return Err(BuildingError::OutOfRange(format!("k = {k}")));
    }
    let c = binomial;
    let p2 = |e: i64| {
        if e < 0 {
            BigInt::zero()
        } else {
            BigInt::from(2).pow(e as u32)
        }
    };
    let thick = m > 0;
    use RowKind::*;
    let v = match (tag, row) {
        (FamilyTag::A, A) => c(n + 1, n - k),
        (FamilyTag::B, B) | (FamilyTag::D, D) if !thick => c(n, n - k - 1),
        (FamilyTag::B, A) | (FamilyTag::D, A) => p2(n - k - 1) * c(n, n - k),
        (FamilyTag::D, D) => c(m, r) * c(n - m, n - k - r - 1),
        (FamilyTag::ATilde, A) => c(n + 1, n + 1 - k),
        (FamilyTag::BTilde, A) | (FamilyTag::CTilde, A) | (FamilyTag::DTilde, A) => {
            p2(n - k - 1) * c(n, n - k)
        }
        (FamilyTag::BTilde, B) | (FamilyTag::BTilde, D) if !thick => c(n, n - k),
        (FamilyTag::BTilde, B) | (FamilyTag::BTilde, D) => c(n - m, n - k - r - 1) * c(m, r),
        (FamilyTag::CTilde, B) => BigInt::from(2) * c(n, n - k),
        (FamilyTag::DTilde, D) if !thick => BigInt::from(2) * c(n, n - k),
        (FamilyTag::DTilde, D) => BigInt::from(2) * c(n - m, n - k - r - 1) * c(m, r),
        _ => {
            return Err(BuildingError::OutOfRange(format!(
                "no {row:?} row for {tag}"
            )))
        }
    };
    Ok(big_u64(v))
}

fn kind_of(st: &StabilizerType) -> Option<(RowKind, usize, usize)> {
    match st {
        StabilizerType::A(j) => Some((RowKind::A, *j, 0)),
        StabilizerType::B(j) => Some((RowKind::B, *j, 0)),
        StabilizerType::D(j) => Some((RowKind::D, *j, 0)),
        StabilizerType::DThick(j, r) => Some((RowKind::D, *j, *r)),
        StabilizerType::Product(_) => None,
    }
}

/// Whether a stabilizer of this kind and rank can be irreducible.
pub fn rank_admissible(kind: RowKind, j: usize, r: usize) -> bool {
    match kind {
        RowKind::A | RowKind::B => j >= 1,
        RowKind::D => j >= 3 || (j == 2 && r >= 1) || (j == 1 && r == 1),
    }
}

/// Census versus formula for every row, `k` and `r`.
pub fn check_building_set(family: Family, m: usize) -> Result<Vec<Comparison>, BuildingError> {
    let flats = census_flats(family, m)?;
    let tag = family.tag;
    let n = family.rank;
    // Census keyed by (kind, stabilizer rank j, r); A-type r counts thick
    // coordinates inside the collided block.
    let mut census: BTreeMap<(RowKind, usize, usize), u64> = BTreeMap::new();
    let thick_set: BTreeSet<usize> = (0..m).collect();
    for (f, st, _) in &flats {
        let Some((kind, j, mut r)) = kind_of(st) else {
            continue;
        };
        if kind != RowKind::D {
            r = thick_in_support(f, &thick_set);
        }
        *census.entry((kind, j, r)).or_default() += 1;
    }
    let mut out = Vec::new();
    for spec in row_specs(tag, m) {
        let dim = family.complex_dim();
        let Some(kmax) = (if tag.is_toroidal() {
            Some(dim)
        } else {
            dim.checked_sub(1)
        }) else {
            continue;
        };
        for k in 0..=kmax {
            let Some(j) = n.checked_sub(k + spec.delta) else {
                continue;
            };
            if j == 0 {
                continue;
            }
            let rs: Vec<Option<usize>> = if spec.per_r {
                (0..=m.min(j)).map(Some).collect()
            } else {
                vec![None]
            };
            for r in rs {
                let got: u64 = census
                    .iter()
                    .filter(|((kind, jj, rr), _)| {
                        *kind == spec.kind && *jj == j && r.is_none_or(|r| *rr == r)
                    })
                    .map(|(_, c)| *c)
                    .sum();
                let formula = building_table_formula(family, spec.kind, k, m, r.unwrap_or(0))?;
                let status = if got == formula {
                    CheckStatus::Match
                } else if !rank_admissible(spec.kind, j, r.unwrap_or(0)) && got == 0 {
                    CheckStatus::RankThreshold
                } else {
                    CheckStatus::Mismatch
                };
                let stabilizer = match (spec.kind, r) {
                    (RowKind::A, _) => format!("A{j}"),
                    (RowKind::B, _) => format!("B{j}"),
                    (RowKind::D, Some(r)) if m > 0 => format!("D{j},{r}"),
                    (RowKind::D, _) => format!("D{j}"),
                };
                out.push(Comparison {
                    family: tag.to_string(),
                    n,
                    m,
                    row: spec.kind,
                    subspace: (spec.subspace)(k, m, r.unwrap_or(0)),
                    stabilizer,
                    k,
                    r,
                    census: got,
                    formula,
                    status,
                });
            }
        }
    }
    Ok(out)
}

fn thick_in_support(f: &Flat, thick: &BTreeSet<usize>) -> usize {
    // A thick coordinate is inside the support when the flat pins it or
    // ties it to another coordinate.
    let n = f.ambient_dim();
    thick
        .iter()
        .filter(|&&t| {
            let mut e = vec![0; n];
            e[t] = 1;
            f.value_of(&e).is_some()
                || (0..n).filter(|&o| o != t).any(|o| {
                    [1i64, -1].iter().any(|&s| {
                        let mut v = vec![0; n];
                        v[t] = 1;
                        v[o] = -s;
                        f.value_of(&v).is_some()
                    })
                })
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(tag: FamilyTag, n: usize) -> Family {
        Family::new(tag, n).unwrap()
    }

    fn count(rows: &[BuildingRow], k: usize, st: &str) -> u64 {
        rows.iter()
            .filter(|r| r.k == k && r.stabilizer == st)
            .map(|r| r.count)
            .sum()
    }

    #[test]
    fn census_examples() {
        let a3 = enumerate_building_set(fam(FamilyTag::A, 3), 0).unwrap();
        assert_eq!(count(&a3, 0, "A2"), 4);
        assert_eq!(count(&a3, 1, "A1"), 6);
        let b2 = enumerate_building_set(fam(FamilyTag::B, 2), 0).unwrap();
        assert_eq!(count(&b2, 0, "B1"), 2);
        assert_eq!(count(&b2, 0, "A1"), 2);
    }

    #[test]
    fn formula_examples() {
        assert_eq!(
            building_table_formula(fam(FamilyTag::A, 3), RowKind::A, 0, 0, 0).unwrap(),
            4
        );
        assert_eq!(
            building_table_formula(fam(FamilyTag::ATilde, 3), RowKind::A, 1, 0, 0).unwrap(),
            4
        );
        assert_eq!(
            building_table_formula(fam(FamilyTag::D, 5), RowKind::D, 2, 2, 1).unwrap(),
            6
        );
    }

    #[test]
    fn d4_threshold_is_flagged() {
        let rows = check_building_set(fam(FamilyTag::D, 4), 0).unwrap();
        let r = rows
            .iter()
            .find(|c| c.row == RowKind::D && c.k == 2)
            .unwrap();
        assert_eq!(r.formula, 4);
        assert_eq!(r.census, 0);
        assert_eq!(r.status, CheckStatus::RankThreshold);
    }

    #[test]
    fn hyperplanes_are_codimension_one_supports() {
        for tag in FamilyTag::ALL {
            let f = fam(tag, tag.min_rank().max(3));
            let d = make_diagram(f, &[]).unwrap();
            let dim = f.complex_dim();
            let flats = census_flats(f, 0).unwrap();
            for (fl, _, k) in flats {
                if k + 1 == dim {
                    assert_eq!(fl.codim(), 1);
                    assert_eq!(d.arrangement().hyperplanes_containing(&fl).len(), 1);
                }
            }
        }
    }
}
