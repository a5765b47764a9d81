//! A common interface over the concrete set algebras, used by the induced
//! partition and the finite-sample construction.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cointoss::{CoinEvent, CoinOutcome};
use crate::rational::Rational;
use crate::realsets::RealSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct AlgebraError(pub String);

/// An algebra of sets over some universe together with a finitely additive,
/// non-atomic measure and the ability to pick points out of sets.
pub trait SetAlgebra {
    type Set: Clone + PartialEq + fmt::Debug + fmt::Display;
    type Point: Clone + Ord + fmt::Debug + fmt::Display;

    fn empty(&self) -> Self::Set;
    fn union(&self, a: &Self::Set, b: &Self::Set) -> Result<Self::Set, AlgebraError>;
    fn intersect(&self, a: &Self::Set, b: &Self::Set) -> Result<Self::Set, AlgebraError>;
    fn diff(&self, a: &Self::Set, b: &Self::Set) -> Result<Self::Set, AlgebraError>;
    fn is_empty(&self, a: &Self::Set) -> bool;
    fn contains(&self, a: &Self::Set, x: &Self::Point) -> bool;
    fn singleton(&self, x: &Self::Point) -> Self::Set;
    fn measure(&self, a: &Self::Set) -> Rational;

    /// `count` distinct points of `a` outside `avoid`. `None` when `a` has
    /// measure zero (and is therefore finite).
    fn sample(&self, a: &Self::Set, count: usize, avoid: &BTreeSet<Self::Point>) -> Option<Vec<Self::Point>>;

    /// All points of a null set, `None` for sets of positive measure.
    fn finite_points(&self, a: &Self::Set) -> Option<Vec<Self::Point>>;

    fn parse_set(&self, src: &str) -> Result<Self::Set, AlgebraError>;
    fn parse_point(&self, src: &str) -> Result<Self::Point, AlgebraError>;

    /// True when measures are truncated decimal readings of real weights
    /// rather than exact values; approximation then runs by search.
    fn decimal_weights(&self) -> bool {
        false
    }

    fn is_subset(&self, a: &Self::Set, b: &Self::Set) -> Result<bool, AlgebraError> {
        Ok(self.is_empty(&self.diff(a, b)?))
    }
}

/// The real line with rational interval sets and Lebesgue measure.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealLine;

impl SetAlgebra for RealLine {
    type Set = RealSet;
    type Point = Rational;

    fn empty(&self) -> RealSet {
        RealSet::empty()
    }

    fn union(&self, a: &RealSet, b: &RealSet) -> Result<RealSet, AlgebraError> {
        Ok(a.union(b))
    }

    fn intersect(&self, a: &RealSet, b: &RealSet) -> Result<RealSet, AlgebraError> {
        Ok(a.intersect(b))
    }

    fn diff(&self, a: &RealSet, b: &RealSet) -> Result<RealSet, AlgebraError> {
        Ok(a.diff(b))
    }

    fn is_empty(&self, a: &RealSet) -> bool {
        a.is_empty()
    }

    fn contains(&self, a: &RealSet, x: &Rational) -> bool {
        a.contains(x)
    }

    fn singleton(&self, x: &Rational) -> RealSet {
        RealSet::point(x.clone())
    }

    fn measure(&self, a: &RealSet) -> Rational {
        a.lebesgue()
    }

    fn sample(&self, a: &RealSet, count: usize, avoid: &BTreeSet<Rational>) -> Option<Vec<Rational>> {
        a.sample_points(count, avoid)
    }

    fn finite_points(&self, a: &RealSet) -> Option<Vec<Rational>> {
        a.finite_points()
    }

    fn parse_set(&self, src: &str) -> Result<RealSet, AlgebraError> {
        src.parse()
            .map_err(|e: crate::realsets::RealSetError| AlgebraError(e.to_string()))
    }

    fn parse_point(&self, src: &str) -> Result<Rational, AlgebraError> {
        let mut cur = crate::dsl::Cursor::new(src);
        let x = cur
            .rational()
            .map_err(|m| AlgebraError(format!("bad point {src:?}: {m}")))?;
        if !cur.at_end() {
            return Err(AlgebraError(format!("bad point {src:?}: trailing input")));
        }
        Ok(x)
    }
}

/// Infinite coin tossing with the cylinder algebra and Kolmogorov measure.
#[derive(Debug, Clone, Copy, Default)]
pub struct CoinToss;

fn coin_err(e: crate::cointoss::CoinError) -> AlgebraError {
    AlgebraError(e.to_string())
}

impl SetAlgebra for CoinToss {
    type Set = CoinEvent;
    type Point = CoinOutcome;

    fn empty(&self) -> CoinEvent {
        CoinEvent::empty()
    }

    fn union(&self, a: &CoinEvent, b: &CoinEvent) -> Result<CoinEvent, AlgebraError> {
        a.union(b).map_err(coin_err)
    }

    fn intersect(&self, a: &CoinEvent, b: &CoinEvent) -> Result<CoinEvent, AlgebraError> {
        a.intersect(b).map_err(coin_err)
    }

    fn diff(&self, a: &CoinEvent, b: &CoinEvent) -> Result<CoinEvent, AlgebraError> {
        a.diff(b).map_err(coin_err)
    }

    fn is_empty(&self, a: &CoinEvent) -> bool {
        a.is_empty()
    }

    fn contains(&self, a: &CoinEvent, x: &CoinOutcome) -> bool {
        a.contains(x)
    }

    fn singleton(&self, x: &CoinOutcome) -> CoinEvent {
        CoinEvent::singleton(x.clone())
    }

    fn measure(&self, a: &CoinEvent) -> Rational {
        a.kolmogorov()
    }

    fn sample(&self, a: &CoinEvent, count: usize, avoid: &BTreeSet<CoinOutcome>) -> Option<Vec<CoinOutcome>> {
        a.sample_points(count, avoid)
    }

    fn finite_points(&self, a: &CoinEvent) -> Option<Vec<CoinOutcome>> {
        a.finite_points()
    }

    fn parse_set(&self, src: &str) -> Result<CoinEvent, AlgebraError> {
        src.parse().map_err(coin_err)
    }

    fn parse_point(&self, src: &str) -> Result<CoinOutcome, AlgebraError> {
        src.parse().map_err(coin_err)
    }
}
