//! Exact affine subspaces of `Q^N` in reduced row-echelon form, and the
//! connectivity test for vector matroids.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i64>;

/// An affine equation `normal · x = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub normal: Vec<i64>,
    pub rhs: i64,
}

/// Nonempty affine subspace `{x : A x = b}` with `[A | b]` in reduced
/// row-echelon form. Two flats are equal iff their forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Flat {
    pub fn whole(dim: usize) -> Self {
        Flat {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Number of independent equations.
    pub fn codim(&self) -> usize {
        self.rows.len()
    }

    /// Adds equations; `None` when the system becomes inconsistent.
    pub fn meet_equations<'a>(&self, eqs: impl IntoIterator<Item = &'a Equation>) -> Option<Flat> {
        let mut rows = self.rows.clone();
        for e in eqs {
            debug_assert_eq!(e.normal.len(), self.dim);
            let mut r: Vec<Q> = e.normal.iter().map(|&x| Q::from_integer(x)).collect();
            r.push(Q::from_integer(e.rhs));
            rows.push(r);
        }
        rref(self.dim, rows)
    }

    pub fn meet(&self, other: &Flat) -> Option<Flat> {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        rref(self.dim, rows)
    }

    /// If `v` is in the row space, the constant value of `v · x` on the flat.
    pub fn value_of(&self, v: &[i64]) -> Option<Q> {
        let mut r: Vec<Q> = v.iter().map(|&x| Q::from_integer(x)).collect();
        r.push(Q::zero());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = r[p];
                for (a, b) in r.iter_mut().zip(row) {
                    *a -= f * b;
                }
            }
        }
        if r[..self.dim].iter().all(Zero::is_zero) {
            Some(-r[self.dim])
        } else {
            None
        }
    }

    pub fn lies_in(&self, e: &Equation) -> bool {
        self.value_of(&e.normal) == Some(Q::from_integer(e.rhs))
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &Flat) -> bool {
        other.rows.iter().all(|row| {
            let v = &row[..self.dim];
            // Rows of an RREF over Q may be fractional; scale to check.
            match self.value_of_q(v) {
                Some(c) => c == row[self.dim],
                None => false,
            }
        })
    }

    fn value_of_q(&self, v: &[Q]) -> Option<Q> {
        let mut r: Vec<Q> = v.to_vec();
        r.push(Q::zero());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = r[p];
                for (a, b) in r.iter_mut().zip(row) {
                    *a -= f * b;
                }
            }
        }
        if r[..self.dim].iter().all(Zero::is_zero) {
            Some(-r[self.dim])
        } else {
            None
        }
    }
}

fn rref(dim: usize, mut rows: Vec<Vec<Q>>) -> Option<Flat> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                let (src, dst) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    for row in &rows[r..] {
        if !row[dim].is_zero() {
            return None;
        }
    }
    rows.truncate(r);
    Some(Flat { dim, rows, pivots })
}

/// Rank of a set of integer vectors.
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let dim = first.len();
    let rows = vectors
        .iter()
        .map(|v| {
            let mut r: Vec<Q> = v.iter().map(|&x| Q::from_integer(x)).collect();
            r.push(Q::zero());
            r
        })
        .collect();
    rref(dim, rows).expect("homogeneous system").codim()
}

/// Connected components of the vector matroid on `vectors`, as index
/// lists. Components come from fundamental circuits with respect to a
/// greedy basis.
pub fn matroid_components(vectors: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = vectors.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let mut basis: Vec<usize> = Vec::new();
    let mut dependent: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut cand: Vec<Vec<i64>> = basis.iter().map(|&b| vectors[b].clone()).collect();
        cand.push(vectors[i].clone());
        if rank(&cand) == cand.len() {
            basis.push(i);
        } else {
            dependent.push(i);
        }
    }
    for &w in &dependent {
        for b in circuit_support(vectors, &basis, w) {
            let (x, y) = (find(&mut parent, b), find(&mut parent, w));
            parent[x] = y;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Basis elements with nonzero coefficient in the expansion of `w`.
fn circuit_support(vectors: &[Vec<i64>], basis: &[usize], w: usize) -> Vec<usize> {
    let dim = vectors[w].len();
    // Columns are basis vectors; solve B c = w.
    let k = basis.len();
    let mut rows: Vec<Vec<Q>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Q> = basis
                .iter()
                .map(|&b| Q::from_integer(vectors[b][r]))
                .collect();
            row.push(Q::from_integer(vectors[w][r]));
            row
        })
        .collect();
    let flat = {
        
        rref(k, std::mem::take(&mut rows)).expect("w is in the span")
    };
    // Basis columns are independent, so every column is a pivot.
    flat.pivots
        .iter()
        .zip(&flat.rows)
        .filter(|(_, row)| !row[k].is_zero())
        .map(|(&p, _)| basis[p])
        .collect()
}

pub fn is_connected_matroid(vectors: &[Vec<i64>]) -> bool {
    !vectors.is_empty() && matroid_components(vectors).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(normal: &[i64], rhs: i64) -> Equation {
        Equation {
            normal: normal.to_vec(),
            rhs,
        }
    }

    #[test]
    fn flats_and_values() {
        let f = Flat::whole(3)
            .meet_equations(&[eq(&[1, -1, 0], 0), eq(&[0, 1, -1], 0)])
            .unwrap();
        assert_eq!(f.codim(), 2);
        assert_eq!(f.value_of(&[1, 0, -1]), Some(Q::zero()));
        assert_eq!(f.value_of(&[1, 0, 0]), None);
        let g = Flat::whole(2).meet_equations(&[eq(&[1, 0], 0), eq(&[1, 0], 1)]);
        assert!(g.is_none());
        let h = Flat::whole(2)
            .meet_equations(&[eq(&[1, 1], 2), eq(&[1, -1], 0)])
            .unwrap();
        assert!(h.lies_in(&eq(&[1, 0], 1)));
        assert!(h.is_within(&Flat::whole(2).meet_equations(&[eq(&[2, 0], 2)]).unwrap()));
    }

    #[test]
    fn matroid_connectivity() {
        // A_2 roots: connected.
        assert!(is_connected_matroid(&[
            vec![1, -1, 0],
            vec![0, 1, -1],
            vec![1, 0, -1]
        ]));
        // D_2 roots: two orthogonal lines.
        assert!(!is_connected_matroid(&[vec![1, -1], vec![1, 1]]));
        // B_2 roots: connected.
        assert!(is_connected_matroid(&[
            vec![1, -1],
            vec![1, 1],
            vec![1, 0],
            vec![0, 1]
        ]));
        assert_eq!(matroid_components(&[vec![1, 0, 0], vec![0, 1, 0]]).len(), 2);
    }
}
