//! The algebra of subsets of the real line generated by rational half-open
//! intervals and singletons, with Lebesgue length and the numerosity
//! `num(X) = len(X)*a + (#added - #removed)`.

mod parse;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldElement, Shadow};
use crate::rational::Rational;

pub use parse::parse_real_set;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealSetError {
    #[error("interval [{0},{1}) is empty or inverted")]
    EmptyInterval(Rational, Rational),
    #[error("point {0} is both removed and added")]
    ConflictingPoint(Rational),
    #[error("removed point {0} lies outside every interval")]
    RemovedOutside(Rational),
    #[error("added point {0} lies inside an interval")]
    AddedInside(Rational),
    #[error("set is not a subset of the given universe")]
    NotSubset,
    #[error("unit must be positive, got {0}")]
    NonPositiveUnit(FieldElement),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Half-open interval `[lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, RealSetError> {
        if lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(RealSetError::EmptyInterval(lo, hi))
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x < &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Canonical member of the real-line algebra.
///
/// Invariants: intervals sorted, pairwise disjoint and never adjacent;
/// every removed point lies inside an interval; no added point does.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RealSet {
    intervals: Vec<Interval>,
    removed: BTreeSet<Rational>,
    added: BTreeSet<Rational>,
}

fn in_intervals(intervals: &[Interval], x: &Rational) -> bool {
    let idx = intervals.partition_point(|iv| &iv.lo <= x);
    idx > 0 && x < &intervals[idx - 1].hi
}

/// Combines two canonical interval lists pointwise with `op`, returning a
/// canonical (sorted, merged) list.
fn combine_intervals(a: &[Interval], b: &[Interval], op: impl Fn(bool, bool) -> bool) -> Vec<Interval> {
    let mut cuts: Vec<&Rational> = a.iter().chain(b).flat_map(|iv| [&iv.lo, &iv.hi]).collect();
    cuts.sort();
    cuts.dedup();
    let two = Rational::from_integer(BigInt::from(2));
    let mut out: Vec<Interval> = Vec::new();
    for w in cuts.windows(2) {
        let mid = (w[0] + w[1]) / &two;
        if !op(in_intervals(a, &mid), in_intervals(b, &mid)) {
            continue;
        }
        match out.last_mut() {
            Some(last) if &last.hi == w[0] => last.hi = w[1].clone(),
            _ => out.push(Interval {
                lo: w[0].clone(),
                hi: w[1].clone(),
            }),
        }
    }
    out
}

fn normalize_intervals(raw: Vec<Interval>) -> Vec<Interval> {
    // merging the raw list one interval at a time keeps each step canonical
    raw.into_iter().fold(Vec::new(), |acc, iv| {
        combine_intervals(&acc, std::slice::from_ref(&iv), |x, y| x || y)
    })
}

impl RealSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[lo, hi)`
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, RealSetError> {
        Ok(Self {
            intervals: vec![Interval::new(lo, hi)?],
            ..Self::default()
        })
    }

    pub fn point(x: Rational) -> Self {
        Self::points([x])
    }

    pub fn points(xs: impl IntoIterator<Item = Rational>) -> Self {
        Self {
            added: xs.into_iter().collect(),
            ..Self::default()
        }
    }

    /// Builds a set from possibly unsorted, overlapping or adjacent intervals
    /// (which are merged) plus point corrections (which must be consistent).
    pub fn from_parts(
        intervals: Vec<Interval>,
        removed: impl IntoIterator<Item = Rational>,
        added: impl IntoIterator<Item = Rational>,
    ) -> Result<Self, RealSetError> {
        for iv in &intervals {
            if iv.lo >= iv.hi {
                return Err(RealSetError::EmptyInterval(iv.lo.clone(), iv.hi.clone()));
            }
        }
        let intervals = normalize_intervals(intervals);
        let removed: BTreeSet<Rational> = removed.into_iter().collect();
        let added: BTreeSet<Rational> = added.into_iter().collect();
        if let Some(x) = removed.intersection(&added).next() {
            return Err(RealSetError::ConflictingPoint(x.clone()));
        }
        if let Some(x) = removed.iter().find(|x| !in_intervals(&intervals, x)) {
            return Err(RealSetError::RemovedOutside(x.clone()));
        }
        if let Some(x) = added.iter().find(|x| in_intervals(&intervals, x)) {
            return Err(RealSetError::AddedInside(x.clone()));
        }
        Ok(Self {
            intervals,
            removed,
            added,
        })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn removed(&self) -> &BTreeSet<Rational> {
        &self.removed
    }

    pub fn added(&self) -> &BTreeSet<Rational> {
        &self.added
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.added.is_empty()
    }

    /// True when the set is finite (has no interval part).
    pub fn is_finite(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.added.contains(x) {
            return true;
        }
        in_intervals(&self.intervals, x) && !self.removed.contains(x)
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let intervals = combine_intervals(&self.intervals, &other.intervals, &op);
        let mut removed = BTreeSet::new();
        let mut added = BTreeSet::new();
        // off the correction points, membership is decided by the interval parts
        let candidates: BTreeSet<&Rational> = self
            .removed
            .iter()
            .chain(&self.added)
            .chain(&other.removed)
            .chain(&other.added)
            .collect();
        for x in candidates {
            let want = op(self.contains(x), other.contains(x));
            let base = in_intervals(&intervals, x);
            if base && !want {
                removed.insert(x.clone());
            } else if !base && want {
                added.insert(x.clone());
            }
        }
        Self {
            intervals,
            removed,
            added,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn diff(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.diff(other).is_empty()
    }

    /// `universe \ self`, defined only when `self` is contained in `universe`.
    pub fn complement_in(&self, universe: &Self) -> Result<Self, RealSetError> {
        if !self.is_subset(universe) {
            return Err(RealSetError::NotSubset);
        }
        Ok(universe.diff(self))
    }

    pub fn translate(&self, t: &Rational) -> Self {
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|iv| Interval {
                    lo: &iv.lo + t,
                    hi: &iv.hi + t,
                })
                .collect(),
            removed: self.removed.iter().map(|x| x + t).collect(),
            added: self.added.iter().map(|x| x + t).collect(),
        }
    }

    /// Total interval length; points are null.
    pub fn lebesgue(&self) -> Rational {
        self.intervals.iter().map(Interval::length).sum()
    }

    /// `lebesgue(X) * a + #added - #removed`, so that `num([0,1)) = a`.
    pub fn numerosity(&self) -> FieldElement {
        let correction = self.added.len() as i64 - self.removed.len() as i64;
        let length = FieldElement::monomial(self.lebesgue(), 1);
        &length + &FieldElement::from_int(correction)
    }

    /// `sh(num(X) / unit)`; with `unit = a` this is the Lebesgue length.
    pub fn shadow_ratio(&self, unit: &FieldElement) -> Result<Shadow, RealSetError> {
        if !unit.is_positive() {
            return Err(RealSetError::NonPositiveUnit(unit.clone()));
        }
        Ok((&self.numerosity() / unit).shadow())
    }

    /// `count` distinct points of the set avoiding `avoid`, taken from the
    /// first interval `[p,q)` on the grid `p + (q-p)*j/(c+1)`, `j = 1..c`.
    /// Returns `None` for finite sets.
    pub fn sample_points(&self, count: usize, avoid: &BTreeSet<Rational>) -> Option<Vec<Rational>> {
        let iv = self.intervals.first()?;
        let blocked = avoid.iter().chain(&self.removed).filter(|x| iv.contains(x)).count();
        let c = count + blocked;
        let step = iv.length() / Rational::from_integer(BigInt::from(c + 1));
        let mut out = Vec::with_capacity(count);
        let mut x = iv.lo.clone();
        for _ in 0..c {
            if out.len() == count {
                break;
            }
            x += &step;
            if !self.removed.contains(&x) && !avoid.contains(&x) {
                out.push(x.clone());
            }
        }
        debug_assert_eq!(out.len(), count);
        Some(out)
    }

    /// The points of a finite set, or `None` if the set has an interval part.
    pub fn finite_points(&self) -> Option<Vec<Rational>> {
        self.is_finite().then(|| self.added.iter().cloned().collect())
    }

    pub fn unit() -> Self {
        Self::interval(Rational::zero(), Rational::one()).expect("[0,1) is non-empty")
    }
}

fn write_points<'a>(f: &mut fmt::Formatter<'_>, pts: impl Iterator<Item = &'a Rational>) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in pts.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

/// Prints in the set DSL, e.g. `[0,1) u [2,3) \ {1/2} u {9}`.
impl fmt::Display for RealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "[{},{})", iv.lo, iv.hi)?;
        }
        if !self.removed.is_empty() {
            f.write_str(" \\ ")?;
            write_points(f, self.removed.iter())?;
        }
        if !self.added.is_empty() {
            if !self.intervals.is_empty() {
                f.write_str(" u ")?;
            }
            write_points(f, self.added.iter())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for RealSet {
    type Err = RealSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_real_set(s)
    }
}
