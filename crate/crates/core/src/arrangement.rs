//! The reflection arrangements behind the configuration spaces, in the
//! covering space `R^N`, plus the extra walls of thick particles.
//!
//! Coordinates are 0-based. Linear families and `Ã` use one coordinate per
//! particle (`N = n + 1`); symmetric families use one coordinate per mirror
//! pair (`N = n`). Circles have circumference 2, with the symmetric
//! families reflecting through `0` and `1`.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::graph::{Family, FamilyTag};
use crate::linalg::{is_connected_matroid, matroid_components};
pub use crate::linalg::{Equation, Flat, Q};

/// Which constants `c` are allowed for a normal: `{v · x = c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Constants {
    Zero,
    Even,
    Odd,
    Integer,
}

impl Constants {
    fn allows(self, c: Q) -> bool {
        if !c.is_integer() {
            return false;
        }
        let c = c.to_integer();
        match self {
            Constants::Zero => c == 0,
            Constants::Even => c.is_even(),
            Constants::Odd => c.is_odd(),
            Constants::Integer => true,
        }
    }
}

/// A family's arrangement, optionally with thick coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrangement {
    pub family: Family,
    thick: Vec<bool>,
}

impl Arrangement {
    pub fn new(family: Family) -> Self {
        let n = coordinate_count(family);
        Arrangement {
            family,
            thick: vec![false; n],
        }
    }

    /// Marks the given coordinates as thick. Only meaningful for the
    /// atypical hosts `D`, `B̃`, `D̃`.
    pub fn with_thick(family: Family, thick: &[usize]) -> Self {
        let mut a = Arrangement::new(family);
        for &t in thick {
            a.thick[t] = true;
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.thick.len()
    }

    pub fn is_thick(&self, coord: usize) -> bool {
        self.thick[coord]
    }

    pub fn thick_coords(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.thick[i]).collect()
    }

    pub fn is_toroidal(&self) -> bool {
        self.family.tag.is_toroidal()
    }

    /// Every normal with its constant rule, normals up to sign.
    fn normals(&self) -> Vec<(Vec<i64>, Constants)> {
        let n = self.dim();
        let tag = self.family.tag;
        let unit = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        let pair = |i: usize, j: usize, s: i64| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = s;
            v
        };
        let mut out = Vec::new();
        let pair_rule = if tag.is_toroidal() {
            Constants::Even
        } else {
            Constants::Zero
        };
        for i in 0..n {
            for j in i + 1..n {
                out.push((pair(i, j, -1), pair_rule));
                if tag.is_symmetric() {
                    out.push((pair(i, j, 1), pair_rule));
                }
            }
        }
        for i in 0..n {
            let rule = match tag {
                FamilyTag::A | FamilyTag::ATilde => None,
                FamilyTag::B => Some(Constants::Zero),
                FamilyTag::CTilde => Some(Constants::Integer),
                FamilyTag::D if self.thick[i] => Some(Constants::Zero),
                FamilyTag::BTilde if self.thick[i] => Some(Constants::Integer),
                FamilyTag::BTilde => Some(Constants::Odd),
                FamilyTag::DTilde if self.thick[i] => Some(Constants::Integer),
                FamilyTag::D | FamilyTag::DTilde => None,
            };
            if let Some(r) = rule {
                out.push((unit(i), r));
            }
        }
        out
    }

    /// Whether `e` is one of the arrangement's hyperplanes.
    pub fn is_hyperplane(&self, e: &Equation) -> bool {
        let (v, c) = normalize(e);
        self.normals()
            .iter()
            .any(|(w, rule)| *w == v && rule.allows(Q::from_integer(c)))
    }

    /// All hyperplanes containing a flat.
    pub fn hyperplanes_containing(&self, f: &Flat) -> Vec<Equation> {
        let mut out = Vec::new();
        for (v, rule) in self.normals() {
            if let Some(c) = f.value_of(&v) {
                if rule.allows(c) {
                    out.push(Equation {
                        normal: v,
                        rhs: c.to_integer(),
                    });
                }
            }
        }
        out
    }

    /// A flat of the arrangement: cut out by the hyperplanes containing it.
    pub fn is_arrangement_flat(&self, f: &Flat) -> bool {
        let hs = self.hyperplanes_containing(f);
        match Flat::whole(self.dim()).meet_equations(&hs) {
            Some(g) => g == *f,
            None => false,
        }
    }

    /// Irreducible: the normals of the containing hyperplanes form a
    /// connected matroid.
    pub fn is_irreducible(&self, f: &Flat) -> bool {
        let normals: Vec<Vec<i64>> = self
            .hyperplanes_containing(f)
            .into_iter()
            .map(|e| e.normal)
            .collect();
        is_connected_matroid(&normals)
    }

    /// Irreducible components of a flat's stabilizing hyperplanes.
    pub fn components(&self, f: &Flat) -> Vec<Vec<Equation>> {
        let hs = self.hyperplanes_containing(f);
        let normals: Vec<Vec<i64>> = hs.iter().map(|e| e.normal.clone()).collect();
        matroid_components(&normals)
            .into_iter()
            .map(|c| c.into_iter().map(|i| hs[i].clone()).collect())
            .collect()
    }

    /// Walls of the fundamental chamber indexed by Coxeter-graph node.
    /// Only defined without thick coordinates.
    pub fn simple_walls(&self) -> Vec<Equation> {
        assert!(
            self.thick.iter().all(|t| !t),
            "thick chambers have no node table"
        );
        simple_walls(self.family)
    }
}

/// Normal up to sign: first nonzero coefficient positive.
pub fn normalize(e: &Equation) -> (Vec<i64>, i64) {
    let first = e.normal.iter().find(|&&x| x != 0).copied().unwrap_or(1);
    if first < 0 {
        (e.normal.iter().map(|x| -x).collect(), -e.rhs)
    } else {
        (e.normal.clone(), e.rhs)
    }
}

pub fn normalized(e: &Equation) -> Equation {
    let (normal, rhs) = normalize(e);
    Equation { normal, rhs }
}

pub fn coordinate_count(family: Family) -> usize {
    match family.tag {
        FamilyTag::A | FamilyTag::ATilde => family.rank + 1,
        _ => family.rank,
    }
}

fn eq_of(n: usize, terms: &[(usize, i64)], rhs: i64) -> Equation {
    let mut normal = vec![0; n];
    for &(i, c) in terms {
        normal[i] = c;
    }
    normalized(&Equation { normal, rhs })
}

/// Fundamental-chamber walls in node order of the family's Coxeter graph.
#[allow(clippy::needless_range_loop)]
pub fn simple_walls(family: Family) -> Vec<Equation> {
    let n = family.rank;
    let big_n = coordinate_count(family);
    let diff = |i: usize, j: usize| eq_of(big_n, &[(i, 1), (j, -1)], 0);
    let sum = |i: usize, j: usize, c: i64| eq_of(big_n, &[(i, 1), (j, 1)], c);
    let axis = |i: usize, c: i64| eq_of(big_n, &[(i, 1)], c);
    let mut w: Vec<Option<Equation>> = vec![None; n + usize::from(family.tag.is_toroidal())];
    match family.tag {
        FamilyTag::A => {
            for j in 0..n {
                w[j] = Some(diff(j, j + 1));
            }
        }
        FamilyTag::B => {
            w[n - 1] = Some(axis(0, 0));
            for j in 0..n - 1 {
                w[j] = Some(diff(n - 2 - j, n - 1 - j));
            }
        }
        FamilyTag::D => {
            w[n - 2] = Some(diff(0, 1));
            w[n - 1] = Some(sum(0, 1, 0));
            for j in 0..n - 2 {
                w[j] = Some(diff(n - 2 - j, n - 1 - j));
            }
        }
        FamilyTag::ATilde => {
            for j in 0..n {
                w[j] = Some(diff(j, j + 1));
            }
            w[n] = Some(eq_of(big_n, &[(n, 1), (0, -1)], 2));
        }
        FamilyTag::BTilde => {
            w[0] = Some(axis(n - 1, 1));
            for i in 2..n {
                w[n - i] = Some(diff(i - 1, i));
            }
            w[n - 1] = Some(diff(0, 1));
            w[n] = Some(sum(0, 1, 0));
        }
        FamilyTag::CTilde => {
            w[0] = Some(axis(0, 0));
            for i in 1..n {
                w[i] = Some(diff(i - 1, i));
            }
            w[n] = Some(axis(n - 1, 1));
        }
        FamilyTag::DTilde => {
            for i in 2..=n - 2 {
                w[i - 2] = Some(diff(i - 1, i));
            }
            w[n - 3] = Some(diff(n - 2, n - 1));
            w[n - 2] = Some(sum(n - 2, n - 1, 2));
            w[n - 1] = Some(diff(0, 1));
            w[n] = Some(sum(0, 1, 0));
        }
    }
    w.into_iter()
        .map(|x| x.expect("every node has a wall"))
        .collect()
}

/// Set of normalized equations, for order-free comparison.
pub fn equation_set(eqs: &[Equation]) -> BTreeSet<Equation> {
    eqs.iter().map(normalized).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_coxeter_graph;

    #[test]
    fn walls_reproduce_coxeter_graphs() {
        for tag in FamilyTag::ALL {
            for n in tag.min_rank().max(2)..=7 {
                let f = Family::new(tag, n).unwrap();
                let arr = Arrangement::new(f);
                let walls = arr.simple_walls();
                let g = build_coxeter_graph(f).unwrap();
                assert_eq!(walls.len(), g.node_count());
                for (a, wa) in walls.iter().enumerate() {
                    assert!(arr.is_hyperplane(wa), "{f} wall {a}");
                    for (b, wb) in walls.iter().enumerate().skip(a + 1) {
                        let dot: i64 = wa.normal.iter().zip(&wb.normal).map(|(x, y)| x * y).sum();
                        assert_eq!(dot != 0, g.has_edge(a, b), "{f} walls {a},{b}");
                    }
                }
            }
        }
    }

    #[test]
    fn hyperplane_counts_of_stabilizers() {
        let f = Family::new(FamilyTag::B, 3).unwrap();
        let arr = Arrangement::new(f);
        let origin = Flat::whole(3)
            .meet_equations(&[axis_eq(3, 0), axis_eq(3, 1), axis_eq(3, 2)])
            .unwrap();
        assert_eq!(arr.hyperplanes_containing(&origin).len(), 9);
        let d = Arrangement::new(Family::new(FamilyTag::D, 3).unwrap());
        let two = Flat::whole(3)
            .meet_equations(&[axis_eq(3, 0), axis_eq(3, 1)])
            .unwrap();
        assert!(!d.is_irreducible(&two));
        let thick = Arrangement::with_thick(Family::new(FamilyTag::D, 3).unwrap(), &[1]);
        assert!(thick.is_irreducible(&two));
        assert_eq!(thick.hyperplanes_containing(&two).len(), 3);
    }

    fn axis_eq(n: usize, i: usize) -> Equation {
        eq_of(n, &[(i, 1)], 0)
    }
}
