//! f-vectors of graph-associahedra, by exhaustive tubing counts and by the
//! closed formulas for associahedra, cyclohedra and the `D`, `D̃` recursions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{build_coxeter_graph, Family, FamilyTag, Graph, GraphError};
use crate::tubing::count_tubings;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FVectorError {
    #[error("{kind} polytope needs n >= {min}, got {n}")]
    RankTooSmall {
        kind: &'static str,
        n: usize,
        min: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `counts[k]` is the number of `k`-dimensional faces; the last entry is the
/// polytope itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FVector {
    #[serde(serialize_with = "ser_big")]
    pub counts: Vec<BigInt>,
}

fn ser_big<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        // Keep small values as JSON numbers.
        match i64::try_from(x) {
            Ok(i) => seq.serialize_element(&i)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl FVector {
    pub fn from_u64s(v: &[u64]) -> Self {
        FVector {
            counts: v.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, k: usize) -> BigInt {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    /// `Σ (-1)^k f_k`, including the top face.
    pub fn alternating_sum(&self) -> BigInt {
        self.counts
            .iter()
            .enumerate()
            .fold(
                BigInt::zero(),
                |acc, (k, f)| if k % 2 == 0 { acc + f } else { acc - f },
            )
    }

    pub fn is_valid(&self) -> bool {
        !self.counts.is_empty()
            && self.counts.last().is_some_and(One::is_one)
            && self.counts[0].is_positive()
            && self.alternating_sum().is_one()
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Counts `k`-tubings and reindexes them by face dimension.
pub fn fvector_exhaustive(g: &Graph) -> Result<FVector, GraphError> {
    let by_size = count_tubings(g)?;
    let counts = by_size.iter().rev().map(|&c| BigInt::from(c)).collect();
    Ok(FVector { counts })
}

/// Polytopes with a closed f-vector formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polytope {
    /// Associahedron of the path on `n` nodes, dimension `n-1`.
    Assoc(usize),
    /// Cyclohedron of the cycle on `n+1` nodes, dimension `n`.
    Cyclo(usize),
    /// Graph-associahedron of the `D_n` graph, dimension `n-1`.
    D(usize),
    /// Graph-associahedron of the `D̃_n` graph, dimension `n`.
    DTilde(usize),
}

impl Polytope {
    pub fn n(self) -> usize {
        match self {
            Polytope::Assoc(n) | Polytope::Cyclo(n) | Polytope::D(n) | Polytope::DTilde(n) => n,
        }
    }

    pub fn kind(self) -> &'static str {
        match self {
            Polytope::Assoc(_) => "assoc",
            Polytope::Cyclo(_) => "cyclo",
            Polytope::D(_) => "D",
            Polytope::DTilde(_) => "Dtilde",
        }
    }

    fn min_n(self) -> usize {
        match self {
            Polytope::Assoc(_) => 1,
            Polytope::Cyclo(_) => 2,
            Polytope::D(_) => 3,
            Polytope::DTilde(_) => 4,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Polytope::Assoc(n) | Polytope::D(n) => n - 1,
            Polytope::Cyclo(n) | Polytope::DTilde(n) => n,
        }
    }

    /// The graph whose graph-associahedron this is.
    pub fn graph(self) -> Result<Graph, FVectorError> {
        self.check()?;
        Ok(match self {
            Polytope::Assoc(n) => Graph::path(n),
            Polytope::Cyclo(n) => Graph::cycle(n + 1),
            Polytope::D(n) => build_coxeter_graph(Family::new(FamilyTag::D, n)?)?,
            Polytope::DTilde(n) => build_coxeter_graph(Family::new(FamilyTag::DTilde, n)?)?,
        })
    }

    fn check(self) -> Result<(), FVectorError> {
        if self.n() < self.min_n() {
            return Err(FVectorError::RankTooSmall {
                kind: self.kind(),
                n: self.n(),
                min: self.min_n(),
            });
        }
        Ok(())
    }
}

/// Binomial coefficient from a Pascal row; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for i in 1..=n as usize {
        let mut next = Vec::with_capacity(i + 1);
        next.push(BigInt::one());
        for j in 1..i {
            next.push(&row[j - 1] + &row[j]);
        }
        next.push(BigInt::one());
        row = next;
    }
    row[k as usize].clone()
}

/// `f_k` of the associahedron of the path on `m` nodes. Zero for `m <= 0`
/// and for `k` outside `0..m`.
pub fn assoc_face_count(m: i64, k: i64) -> BigInt {
    if m <= 0 || k < 0 || k > m - 1 {
        return BigInt::zero();
    }
    binomial(m - 1, k) * binomial(2 * m - k, m) / BigInt::from(m + 1)
}

/// `f_k` of the cyclohedron of dimension `n`.
pub fn cyclo_face_count(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    binomial(n, k) * binomial(2 * n - k, n)
}

pub fn d_face_count(n: i64, k: i64) -> BigInt {
    let a = assoc_face_count;
    BigInt::from(2) * a(n, k)
        - BigInt::from(2) * a(n - 1, k)
        - a(n - 2, k)
        - a(n - 1, k - 1)
        - a(n - 2, k - 1)
}

pub fn dtilde_face_count(n: i64, k: i64) -> BigInt {
    let a = assoc_face_count;
    let c = |x: i64| BigInt::from(x);
    c(4) * a(n + 1, k) - c(8) * a(n, k) - c(4) * a(n, k - 1)
        + a(n - 1, k - 2)
        + c(4) * a(n - 2, k)
        + c(6) * a(n - 2, k - 1)
        + c(2) * a(n - 2, k - 2)
        + a(n - 3, k)
        + c(2) * a(n - 3, k - 1)
        + a(n - 3, k - 2)
}

pub fn fvector_formula(p: Polytope) -> Result<FVector, FVectorError> {
    p.check()?;
    let n = p.n() as i64;
    let counts = (0..=p.dim() as i64)
        .map(|k| match p {
            Polytope::Assoc(_) => assoc_face_count(n, k),
            Polytope::Cyclo(_) => cyclo_face_count(n, k),
            Polytope::D(_) => d_face_count(n, k),
            Polytope::DTilde(_) => dtilde_face_count(n, k),
        })
        .collect();
    Ok(FVector { counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: &[u64]) -> FVector {
        FVector::from_u64s(v)
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(fvector_exhaustive(&Graph::path(3)).unwrap(), fv(&[5, 5, 1]));
        assert_eq!(
            fvector_exhaustive(&Graph::cycle(3)).unwrap(),
            fv(&[6, 6, 1])
        );
        assert_eq!(
            fvector_exhaustive(&Graph::star(3)).unwrap(),
            fv(&[16, 24, 10, 1])
        );
    }

    #[test]
    fn formula_examples() {
        assert_eq!(fvector_formula(Polytope::Assoc(3)).unwrap(), fv(&[5, 5, 1]));
        assert_eq!(
            fvector_formula(Polytope::Assoc(4)).unwrap(),
            fv(&[14, 21, 9, 1])
        );
        assert_eq!(
            fvector_formula(Polytope::Cyclo(3)).unwrap(),
            fv(&[20, 30, 12, 1])
        );
        assert_eq!(fvector_formula(Polytope::D(3)).unwrap(), fv(&[5, 5, 1]));
        assert_eq!(
            fvector_formula(Polytope::D(4)).unwrap(),
            fv(&[16, 24, 10, 1])
        );
        assert_eq!(
            fvector_formula(Polytope::D(5)).unwrap(),
            fv(&[51, 102, 67, 16, 1])
        );
        assert_eq!(
            fvector_formula(Polytope::DTilde(4)).unwrap(),
            fv(&[65, 130, 84, 19, 1])
        );
    }

    #[test]
    fn formula_matches_exhaustive_small() {
        for n in 1..=7 {
            let p = Polytope::Assoc(n);
            assert_eq!(
                fvector_formula(p).unwrap(),
                fvector_exhaustive(&p.graph().unwrap()).unwrap()
            );
        }
        for n in 2..=6 {
            let p = Polytope::Cyclo(n);
            assert_eq!(
                fvector_formula(p).unwrap(),
                fvector_exhaustive(&p.graph().unwrap()).unwrap()
            );
        }
        for n in 3..=7 {
            let p = Polytope::D(n);
            assert_eq!(
                fvector_formula(p).unwrap(),
                fvector_exhaustive(&p.graph().unwrap()).unwrap()
            );
        }
        for n in 4..=6 {
            let p = Polytope::DTilde(n);
            assert_eq!(
                fvector_formula(p).unwrap(),
                fvector_exhaustive(&p.graph().unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn invariants_hold() {
        for p in [
            Polytope::Assoc(6),
            Polytope::Cyclo(5),
            Polytope::D(6),
            Polytope::DTilde(6),
        ] {
            let f = fvector_formula(p).unwrap();
            assert!(f.is_valid(), "{p:?}");
        }
        let f = fvector_exhaustive(&Graph::star(4)).unwrap();
        let proper: BigInt = f.counts[..4]
            .iter()
            .enumerate()
            .map(|(k, x)| if k % 2 == 0 { x.clone() } else { -x })
            .sum();
        assert!(proper.is_zero());
    }

    #[test]
    fn rank_errors() {
        assert!(fvector_formula(Polytope::DTilde(3)).is_err());
        assert!(fvector_formula(Polytope::Cyclo(1)).is_err());
        assert!(fvector_formula(Polytope::Assoc(0)).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
    }
}
