//! Simultaneous Diophantine approximation and induced partitions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::algebra::{AlgebraError, SetAlgebra};
use crate::rational::{frac, lcm_of_denominators, least_multiple_at_least, parse_rational, Rational};

/// Default iteration budget for the decimal-mode search.
pub const DEFAULT_SEARCH_CEILING: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("weight {0} is not positive")]
    NonPositiveWeight(Rational),
    #[error("tolerance {0} is outside (0, 1]")]
    BadTolerance(Rational),
    #[error("minimum N must be at least 1")]
    BadMinimum,
    #[error("no N found in {ceiling} candidates starting at {start}; raise the search ceiling")]
    CeilingExceeded { start: BigInt, ceiling: u64 },
    #[error("bad weight literal {0:?}")]
    BadLiteral(String),
}

/// A positive measure value. `Decimal` marks a truncated decimal reading of
/// a real number: its digits are exact, but no use is made of its
/// denominator when choosing `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    Exact(Rational),
    Decimal(Rational),
}

impl Weight {
    pub fn value(&self) -> &Rational {
        match self {
            Weight::Exact(r) | Weight::Decimal(r) => r,
        }
    }

    /// `"1/3"` is exact; `"0.41421356"` is decimal.
    pub fn parse(src: &str) -> Result<Self, ApproxError> {
        let r = parse_rational(src).ok_or_else(|| ApproxError::BadLiteral(src.to_string()))?;
        Ok(if src.contains('.') {
            Weight::Decimal(r)
        } else {
            Weight::Exact(r)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(Vec<Weight>);

impl WeightVector {
    pub fn new(values: Vec<Weight>) -> Result<Self, ApproxError> {
        if let Some(w) = values.iter().find(|w| !w.value().is_positive()) {
            return Err(ApproxError::NonPositiveWeight(w.value().clone()));
        }
        Ok(Self(values))
    }

    pub fn exact(values: impl IntoIterator<Item = Rational>) -> Result<Self, ApproxError> {
        Self::new(values.into_iter().map(Weight::Exact).collect())
    }

    pub fn is_exact(&self) -> bool {
        self.0.iter().all(|w| matches!(w, Weight::Exact(_)))
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter().map(Weight::value)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Returns `N >= n_min` with `frac(N * y_s) < eps` for every `s`.
///
/// With exact weights this is the least multiple of the common denominator
/// that is `>= n_min`, and every fractional part is exactly zero. With any
/// decimal weight it is the least qualifying `N >= n_min`, found by scanning
/// at most `ceiling` candidates.
pub fn dirichlet_n(y: &WeightVector, eps: &Rational, n_min: &BigInt, ceiling: u64) -> Result<BigInt, ApproxError> {
    if !eps.is_positive() || eps > &Rational::one() {
        return Err(ApproxError::BadTolerance(eps.clone()));
    }
    if n_min < &BigInt::one() {
        return Err(ApproxError::BadMinimum);
    }
    let n = if y.is_exact() {
        least_multiple_at_least(&lcm_of_denominators(y.values()), n_min)
    } else {
        scan(y, eps, n_min, ceiling)?
    };
    debug_assert!(fractional_parts_below(y, eps, &n));
    Ok(n)
}

/// Integer residue scan: with `y = p/q`, `frac(N*y) < eps` iff
/// `(N*p mod q) < ceil(eps*q)`.
fn scan(y: &WeightVector, eps: &Rational, start: &BigInt, ceiling: u64) -> Result<BigInt, ApproxError> {
    struct Track {
        step: BigInt,
        modulus: BigInt,
        residue: BigInt,
        bound: BigInt,
    }
    let mut tracks: Vec<Track> = y
        .values()
        .map(|v| {
            let modulus = v.denom().clone();
            let step = v.numer().mod_floor(&modulus);
            let residue = (start * v.numer()).mod_floor(&modulus);
            let bound = (eps * Rational::from_integer(modulus.clone())).ceil().to_integer();
            Track {
                step,
                modulus,
                residue,
                bound,
            }
        })
        .collect();
    let mut n = start.clone();
    for _ in 0..ceiling {
        if tracks.iter().all(|t| t.residue < t.bound) {
            return Ok(n);
        }
        for t in &mut tracks {
            t.residue += &t.step;
            if t.residue >= t.modulus {
                t.residue -= &t.modulus;
            }
        }
        n += 1;
    }
    Err(ApproxError::CeilingExceeded {
        start: start.clone(),
        ceiling,
    })
}

/// Checks `frac(n * y_s) < eps` for every weight by direct rational
/// arithmetic, independently of the search.
pub fn fractional_parts_below(y: &WeightVector, eps: &Rational, n: &BigInt) -> bool {
    let n = Rational::from_integer(n.clone());
    y.values().all(|v| &frac(&(&n * v)) < eps)
}

/// One cell of an induced partition together with its membership pattern
/// over the input family.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell<S> {
    pub set: S,
    pub pattern: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionResult<S> {
    pub cells: Vec<Cell<S>>,
}

impl<S> PartitionResult<S> {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// The partition of `A_1 u ... u A_n` into the non-empty intersections
/// `A_1^{c_1} n ... n A_n^{c_n}`.
///
/// Cells are produced by refining one set at a time, so their order is
/// deterministic: earlier cells come from earlier sets.
pub fn induced_partition<A: SetAlgebra>(alg: &A, family: &[A::Set]) -> Result<PartitionResult<A::Set>, AlgebraError> {
    let mut cells: Vec<Cell<A::Set>> = Vec::new();
    let mut covered = alg.empty();
    for (i, set) in family.iter().enumerate() {
        let mut next = Vec::with_capacity(cells.len() * 2 + 1);
        for cell in cells {
            let inside = alg.intersect(&cell.set, set)?;
            let outside = alg.diff(&cell.set, set)?;
            if !alg.is_empty(&inside) {
                let mut pattern = cell.pattern.clone();
                pattern.push(true);
                next.push(Cell { set: inside, pattern });
            }
            if !alg.is_empty(&outside) {
                let mut pattern = cell.pattern;
                pattern.push(false);
                next.push(Cell { set: outside, pattern });
            }
        }
        let fresh = alg.diff(set, &covered)?;
        if !alg.is_empty(&fresh) {
            let mut pattern = vec![false; i];
            pattern.push(true);
            next.push(Cell { set: fresh, pattern });
        }
        covered = alg.union(&covered, set)?;
        cells = next;
    }
    Ok(PartitionResult { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RealLine;
    use crate::rational::{int, ratio};
    use crate::realsets::RealSet;

    fn rs(s: &str) -> RealSet {
        s.parse().unwrap()
    }

    #[test]
    fn lcm_mode_examples() {
        let y = WeightVector::exact([ratio(1, 3), ratio(1, 4)]).unwrap();
        let n = dirichlet_n(&y, &ratio(1, 2), &BigInt::from(10), 10).unwrap();
        assert_eq!(n, BigInt::from(12));
        assert!(fractional_parts_below(&y, &ratio(1, 1_000_000), &n));

        let y = WeightVector::exact([int(3)]).unwrap();
        assert_eq!(
            dirichlet_n(&y, &ratio(1, 10), &BigInt::from(1), 1).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            dirichlet_n(&y, &ratio(1, 10), &BigInt::from(7), 1).unwrap(),
            BigInt::from(7)
        );
    }

    #[test]
    fn decimal_mode_matches_brute_force() {
        let y = WeightVector::new(vec![Weight::parse("0.41421356").unwrap()]).unwrap();
        let eps = ratio(1, 100);
        let n = dirichlet_n(&y, &eps, &BigInt::from(1), DEFAULT_SEARCH_CEILING).unwrap();
        let oracle = (1u64..)
            .find(|&k| frac(&(Rational::from_integer(BigInt::from(k)) * y.values().next().unwrap())) < eps)
            .unwrap();
        assert_eq!(n, BigInt::from(oracle));
        assert_eq!(n, BigInt::from(99));
    }

    #[test]
    fn decimal_mode_respects_minimum_and_ceiling() {
        let y = WeightVector::new(vec![Weight::parse("0.41421356").unwrap()]).unwrap();
        let eps = ratio(1, 100);
        let n = dirichlet_n(&y, &eps, &BigInt::from(100), DEFAULT_SEARCH_CEILING).unwrap();
        assert!(n >= BigInt::from(100));
        assert!(fractional_parts_below(&y, &eps, &n));
        assert!(matches!(
            dirichlet_n(&y, &eps, &BigInt::from(1), 50),
            Err(ApproxError::CeilingExceeded { .. })
        ));
    }

    #[test]
    fn rejects_bad_arguments() {
        let y = WeightVector::exact([ratio(1, 2)]).unwrap();
        assert!(matches!(
            dirichlet_n(&y, &int(0), &BigInt::from(1), 1),
            Err(ApproxError::BadTolerance(_))
        ));
        assert!(matches!(
            dirichlet_n(&y, &int(2), &BigInt::from(1), 1),
            Err(ApproxError::BadTolerance(_))
        ));
        assert_eq!(
            dirichlet_n(&y, &int(1), &BigInt::from(0), 1),
            Err(ApproxError::BadMinimum)
        );
        assert!(WeightVector::exact([int(0)]).is_err());
    }

    #[test]
    fn two_interval_partition() {
        let parts = induced_partition(&RealLine, &[rs("[0,2)"), rs("[1,3)")]).unwrap();
        let got: Vec<(String, Vec<bool>)> = parts
            .cells
            .iter()
            .map(|c| (c.set.to_string(), c.pattern.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                ("[1,2)".to_string(), vec![true, true]),
                ("[0,1)".to_string(), vec![true, false]),
                ("[2,3)".to_string(), vec![false, true]),
            ]
        );
    }

    #[test]
    fn single_and_empty_families() {
        let a = rs("[0,1) u {5}");
        let parts = induced_partition(&RealLine, std::slice::from_ref(&a)).unwrap();
        assert_eq!(parts.cells.len(), 1);
        assert_eq!(parts.cells[0].set, a);
        assert!(induced_partition(&RealLine, &[]).unwrap().is_empty());
    }
}
