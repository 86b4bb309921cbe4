//! Chamber counts and Euler characteristics of the blown-up complexes, by
//! summing over tile faces and by the closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fvector::FVector;
use crate::graph::{Family, FamilyTag, GraphError};
use crate::tiling::tile_graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("Euler sum for {family} is not an integer: {value}")]
    NonInteger { family: Family, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerReport {
    pub family: Family,
    pub chamber_count: BigInt,
    pub tile: FVector,
    pub chi_sum: BigRational,
    pub chi_closed: BigRational,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerRecord {
    pub family: String,
    pub rank: usize,
    pub chambers: String,
    pub tile_fvector: String,
    pub chi_sum: String,
    pub chi_closed: String,
    pub agree: bool,
}

impl EulerReport {
    pub fn record(&self) -> EulerRecord {
        EulerRecord {
            family: self.family.tag.to_string(),
            rank: self.family.rank,
            chambers: self.chamber_count.to_string(),
            tile_fvector: self.tile.to_string(),
            chi_sum: self.chi_sum.to_string(),
            chi_closed: self.chi_closed.to_string(),
            agree: self.agree,
        }
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n!!`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        BigRational::one() / num_traits::pow(two, (-e) as usize)
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Number of chambers, `|σ(W)|`.
pub fn chamber_count(family: Family) -> Result<BigInt, GraphError> {
    let family = Family::new(family.tag, family.rank)?;
    let n = family.rank as u64;
    let two = |e: u64| BigInt::from(2).pow(e as u32);
    Ok(match family.tag {
        FamilyTag::A => factorial(n + 1),
        FamilyTag::B | FamilyTag::CTilde => two(n) * factorial(n),
        FamilyTag::D | FamilyTag::BTilde => two(n - 1) * factorial(n),
        FamilyTag::ATilde => factorial(n),
        FamilyTag::DTilde => two(n - 2) * factorial(n),
    })
}

/// `Σ_k (-1)^k g f_k / 2^(d-k)` as an exact rational.
pub fn euler_sum_rational(g: &BigInt, tile: &FVector) -> BigRational {
    let d = tile.dim() as i64;
    tile.counts
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let term = BigRational::from_integer(g * f) * pow2(k as i64 - d);
            if k % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Euler characteristic through the tile's exhaustive f-vector.
pub fn euler_sum(family: Family) -> Result<BigInt, EulerError> {
    let (_, _, chi) = sum_parts(family)?;
    if !chi.is_integer() {
        return Err(EulerError::NonInteger {
            family,
            value: chi.to_string(),
        });
    }
    Ok(chi.to_integer())
}

fn sum_parts(family: Family) -> Result<(BigInt, FVector, BigRational), EulerError> {
    let g = chamber_count(family)?;
    let tile = tile_graph(family)?.fvector()?;
    let chi = euler_sum_rational(&g, &tile);
    Ok((g, tile, chi))
}

fn closed_a(n: i64) -> BigRational {
    if n % 2 == 0 {
        return BigRational::zero();
    }
    let m = (n - 1) / 2;
    let sign = if m % 2 == 0 { 1 } else { -1 };
    let df = double_factorial(n - 2);
    BigRational::from_integer(BigInt::from(sign * 2 * n) * &df * &df)
}

fn closed_d(n: i64) -> BigRational {
    if n % 2 == 0 {
        return BigRational::zero();
    }
    pow2(n - 3) * (ratio(8, n + 1) - ratio(1, n - 2)) * closed_a(n)
}

/// Literal evaluation of the closed forms; zero at the vanishing parity.
pub fn euler_closed(family: Family) -> Result<BigRational, GraphError> {
    let family = Family::new(family.tag, family.rank)?;
    let n = family.rank as i64;
    let spherical_zero = n % 2 == 0;
    let toroidal_zero = n % 2 == 1;
    Ok(match family.tag {
        FamilyTag::A => closed_a(n),
        FamilyTag::B if spherical_zero => BigRational::zero(),
        FamilyTag::B => pow2(n) * ratio(1, n + 1) * closed_a(n),
        FamilyTag::D => closed_d(n),
        _ if toroidal_zero => BigRational::zero(),
        FamilyTag::ATilde => {
            let m = n / 2;
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let df = double_factorial(n - 1);
            BigRational::from_integer(BigInt::from(sign) * &df * &df)
        }
        FamilyTag::BTilde => ratio(1, 2 * (n + 1)) * closed_d(n + 1),
        FamilyTag::CTilde => pow2(n) * ratio(1, (n + 2) * (n + 1)) * closed_a(n + 1),
        FamilyTag::DTilde => {
            pow2(n - 6) * ratio(1, n + 1) * (ratio(64, n + 2) - ratio(15, n - 1)) * closed_a(n + 1)
        }
    })
}

/// Both methods side by side. A non-integer sum is reported through
/// `agree = false` rather than an error.
pub fn euler_report(family: Family) -> Result<EulerReport, EulerError> {
    let (g, tile, chi_sum) = sum_parts(family)?;
    let chi_closed = euler_closed(family)?;
    let agree = chi_sum.is_integer() && chi_sum == chi_closed;
    Ok(EulerReport {
        family,
        chamber_count: g,
        tile,
        chi_sum,
        chi_closed,
        agree,
    })
}

/// Reports for every family and every valid rank up to `max_n`, sorted by
/// family then rank.
pub fn verify_closed_forms(max_n: usize) -> Result<Vec<EulerReport>, EulerError> {
    let jobs: Vec<Family> = FamilyTag::ALL
        .iter()
        .flat_map(|&tag| (tag.min_rank()..=max_n).map(move |n| Family { tag, rank: n }))
        .collect();
    let mut out = jobs
        .par_iter()
        .map(|&f| euler_report(f))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by_key(|r| r.family);
    Ok(out)
}

/// Sign of a rational as -1, 0, 1.
pub fn signum(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(tag: FamilyTag, n: usize) -> Family {
        Family::new(tag, n).unwrap()
    }

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn chamber_counts() {
        assert_eq!(chamber_count(fam(FamilyTag::A, 3)).unwrap(), int(24));
        assert_eq!(chamber_count(fam(FamilyTag::ATilde, 2)).unwrap(), int(2));
        assert_eq!(chamber_count(fam(FamilyTag::DTilde, 4)).unwrap(), int(96));
        assert_eq!(chamber_count(fam(FamilyTag::B, 3)).unwrap(), int(48));
        assert_eq!(chamber_count(fam(FamilyTag::D, 4)).unwrap(), int(192));
    }

    #[test]
    fn sums() {
        assert_eq!(euler_sum(fam(FamilyTag::A, 3)).unwrap(), int(-6));
        assert_eq!(euler_sum(fam(FamilyTag::ATilde, 3)).unwrap(), int(0));
        assert_eq!(euler_sum(fam(FamilyTag::ATilde, 2)).unwrap(), int(-1));
        assert_eq!(euler_sum(fam(FamilyTag::DTilde, 4)).unwrap(), int(30));
        assert_eq!(euler_sum(fam(FamilyTag::D, 5)).unwrap(), int(360));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(euler_closed(fam(FamilyTag::A, 3)).unwrap(), ratio(-6, 1));
        assert_eq!(euler_closed(fam(FamilyTag::D, 5)).unwrap(), ratio(360, 1));
        assert_eq!(
            euler_closed(fam(FamilyTag::DTilde, 4)).unwrap(),
            ratio(51, 2)
        );
        assert_eq!(euler_closed(fam(FamilyTag::A, 4)).unwrap(), ratio(0, 1));
        assert_eq!(
            euler_closed(fam(FamilyTag::CTilde, 3)).unwrap(),
            ratio(0, 1)
        );
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), int(1));
        assert_eq!(double_factorial(0), int(1));
        assert_eq!(double_factorial(5), int(15));
        assert_eq!(double_factorial(6), int(48));
    }

    #[test]
    fn relations_between_sums() {
        for n in [3usize, 5, 7] {
            let a = BigRational::from_integer(euler_sum(fam(FamilyTag::A, n)).unwrap());
            let b = BigRational::from_integer(euler_sum(fam(FamilyTag::B, n)).unwrap());
            assert_eq!(b, pow2(n as i64) * ratio(1, n as i64 + 1) * a);
        }
        for n in [4usize, 6] {
            let d = BigRational::from_integer(euler_sum(fam(FamilyTag::D, n + 1)).unwrap());
            let bt = BigRational::from_integer(euler_sum(fam(FamilyTag::BTilde, n)).unwrap());
            assert_eq!(bt, ratio(1, 2 * (n as i64 + 1)) * d);
        }
    }
}
