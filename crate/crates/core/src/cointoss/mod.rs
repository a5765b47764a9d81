//! Infinite coin tossing: the cylinder algebra over `{H,T}^N`, its
//! Kolmogorov measure, and the numerosity-based probability
//! `P(E) = num(E) / num(Omega)` with `num(Omega) = a`.
//!
//! Sample points are eventually constant sequences, so membership in any
//! cylinder is decidable. An event is a finite outcome table over an index
//! set plus finitely many added and removed sample points.

mod parse;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::field::FieldElement;
use crate::rational::Rational;

pub use parse::{parse_event, parse_outcome, parse_outcomes};

/// Largest index set an event table may range over. Tables are stored
/// explicitly, so operations are exponential in this number.
pub const MAX_INDICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoinError {
    #[error("index {0} appears more than once")]
    DuplicateIndex(u32),
    #[error("indices are 1-based; got 0")]
    ZeroIndex,
    #[error("indices must be strictly increasing")]
    UnsortedIndices,
    #[error("event would range over {0} indices (limit {MAX_INDICES})")]
    TooManyIndices(usize),
    #[error("row {0} is outside the outcome table")]
    RowOutOfRange(u64),
    #[error("added outcome {0} already belongs to the cylinder part")]
    AddedInside(CoinOutcome),
    #[error("removed outcome {0} does not belong to the cylinder part")]
    RemovedOutside(CoinOutcome),
    #[error("outcome {0} is both added and removed")]
    ConflictingOutcome(CoinOutcome),
    #[error("conditioning set is empty")]
    EmptyConditioningSet,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coin {
    H,
    T,
}

impl Coin {
    fn bit(self) -> u64 {
        match self {
            Coin::H => 1,
            Coin::T => 0,
        }
    }

    fn from_bit(b: u64) -> Self {
        if b & 1 == 1 {
            Coin::H
        } else {
            Coin::T
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Coin::H => Coin::T,
            Coin::T => Coin::H,
        }
    }
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coin::H => "H",
            Coin::T => "T",
        })
    }
}

/// The sequence `prefix` followed by `tail` repeated forever. The prefix
/// never ends with the tail symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoinOutcome {
    prefix: Vec<Coin>,
    tail: Coin,
}

impl CoinOutcome {
    pub fn new(mut prefix: Vec<Coin>, tail: Coin) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Self { prefix, tail }
    }

    pub fn constant(c: Coin) -> Self {
        Self::new(Vec::new(), c)
    }

    pub fn prefix(&self) -> &[Coin] {
        &self.prefix
    }

    pub fn tail(&self) -> Coin {
        self.tail
    }

    /// Toss number `i` (1-based).
    pub fn at(&self, i: u32) -> Coin {
        debug_assert!(i >= 1);
        self.prefix.get(i as usize - 1).copied().unwrap_or(self.tail)
    }
}

impl fmt::Display for CoinOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("O(")?;
        for c in &self.prefix {
            write!(f, "{c}")?;
        }
        write!(f, "|{})", self.tail)
    }
}

/// Canonical member of the cylinder algebra.
///
/// `rows` holds the selected assignments on `indices`, bit `b` of a row
/// being the toss at `indices[b]` (1 = H). The index set is minimal: the
/// table depends on every listed index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoinEvent {
    indices: Vec<u32>,
    rows: BTreeSet<u64>,
    added: BTreeSet<CoinOutcome>,
    removed: BTreeSet<CoinOutcome>,
}

fn row_of(indices: &[u32], w: &CoinOutcome) -> u64 {
    indices
        .iter()
        .enumerate()
        .fold(0, |acc, (b, &i)| acc | (w.at(i).bit() << b))
}

/// Re-expresses `rows` over `from` as rows over the superset `to`.
fn lift(rows: &BTreeSet<u64>, from: &[u32], to: &[u32]) -> BTreeSet<u64> {
    let pos: Vec<usize> = from
        .iter()
        .map(|i| to.binary_search(i).expect("lift target must contain source indices"))
        .collect();
    let free: Vec<usize> = (0..to.len()).filter(|p| !pos.contains(p)).collect();
    let mut out = BTreeSet::new();
    for &r in rows {
        let base = pos
            .iter()
            .enumerate()
            .fold(0u64, |acc, (b, &p)| acc | (((r >> b) & 1) << p));
        for mask in 0..(1u64 << free.len()) {
            let extra = free
                .iter()
                .enumerate()
                .fold(0u64, |acc, (b, &p)| acc | (((mask >> b) & 1) << p));
            out.insert(base | extra);
        }
    }
    out
}

/// Drops every index the table does not depend on.
fn minimize(mut indices: Vec<u32>, mut rows: BTreeSet<u64>) -> (Vec<u32>, BTreeSet<u64>) {
    let mut b = indices.len();
    while b > 0 {
        b -= 1;
        let bit = 1u64 << b;
        if rows.iter().all(|r| rows.contains(&(r ^ bit))) {
            let low = bit - 1;
            rows = rows
                .iter()
                .filter(|&&r| r & bit == 0)
                .map(|&r| (r & low) | ((r >> 1) & !low))
                .collect();
            indices.remove(b);
        }
    }
    (indices, rows)
}

fn merge_indices(a: &[u32], b: &[u32]) -> Vec<u32> {
    let set: BTreeSet<u32> = a.iter().chain(b).copied().collect();
    set.into_iter().collect()
}

impl CoinEvent {
    /// The empty event.
    pub fn empty() -> Self {
        Self {
            indices: Vec::new(),
            rows: BTreeSet::new(),
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        }
    }

    /// The whole sample space.
    pub fn omega() -> Self {
        Self {
            rows: [0].into_iter().collect(),
            ..Self::empty()
        }
    }

    /// `{w : w(i) = t for every (i, t) in pairs}`
    pub fn cylinder(pairs: &[(u32, Coin)]) -> Result<Self, CoinError> {
        let mut sorted = pairs.to_vec();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CoinError::DuplicateIndex(w[0].0));
            }
        }
        if sorted.first().is_some_and(|p| p.0 == 0) {
            return Err(CoinError::ZeroIndex);
        }
        if sorted.len() > MAX_INDICES {
            return Err(CoinError::TooManyIndices(sorted.len()));
        }
        let row = sorted
            .iter()
            .enumerate()
            .fold(0u64, |acc, (b, (_, t))| acc | (t.bit() << b));
        Ok(Self {
            indices: sorted.iter().map(|p| p.0).collect(),
            rows: [row].into_iter().collect(),
            ..Self::empty()
        })
    }

    pub fn singleton(w: CoinOutcome) -> Self {
        Self::outcomes([w])
    }

    pub fn outcomes(ws: impl IntoIterator<Item = CoinOutcome>) -> Self {
        Self {
            added: ws.into_iter().collect(),
            ..Self::empty()
        }
    }

    /// Builds an event from raw parts. Non-minimal index sets are reduced;
    /// inconsistent corrections are rejected.
    pub fn from_parts(
        indices: Vec<u32>,
        rows: impl IntoIterator<Item = u64>,
        added: impl IntoIterator<Item = CoinOutcome>,
        removed: impl IntoIterator<Item = CoinOutcome>,
    ) -> Result<Self, CoinError> {
        if indices.first() == Some(&0) {
            return Err(CoinError::ZeroIndex);
        }
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(CoinError::DuplicateIndex(w[0]));
            }
            if w[0] > w[1] {
                return Err(CoinError::UnsortedIndices);
            }
        }
        if indices.len() > MAX_INDICES {
            return Err(CoinError::TooManyIndices(indices.len()));
        }
        let rows: BTreeSet<u64> = rows.into_iter().collect();
        if let Some(&r) = rows.iter().find(|&&r| r >> indices.len() != 0) {
            return Err(CoinError::RowOutOfRange(r));
        }
        let (indices, rows) = minimize(indices, rows);
        let canon = |w: CoinOutcome| CoinOutcome::new(w.prefix, w.tail);
        let added: BTreeSet<CoinOutcome> = added.into_iter().map(canon).collect();
        let removed: BTreeSet<CoinOutcome> = removed.into_iter().map(canon).collect();
        if let Some(w) = added.intersection(&removed).next() {
            return Err(CoinError::ConflictingOutcome(w.clone()));
        }
        let ev = Self {
            indices,
            rows,
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        };
        if let Some(w) = added.iter().find(|w| ev.cylinder_contains(w)) {
            return Err(CoinError::AddedInside(w.clone()));
        }
        if let Some(w) = removed.iter().find(|w| !ev.cylinder_contains(w)) {
            return Err(CoinError::RemovedOutside(w.clone()));
        }
        Ok(Self { added, removed, ..ev })
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn rows(&self) -> &BTreeSet<u64> {
        &self.rows
    }

    pub fn added(&self) -> &BTreeSet<CoinOutcome> {
        &self.added
    }

    pub fn removed(&self) -> &BTreeSet<CoinOutcome> {
        &self.removed
    }

    /// Number of fixed coordinates when the event is a single cylinder.
    pub fn codimension(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.added.is_empty()
    }

    /// True when the event is a finite set of outcomes.
    pub fn is_finite(&self) -> bool {
        self.rows.is_empty()
    }

    fn cylinder_contains(&self, w: &CoinOutcome) -> bool {
        self.rows.contains(&row_of(&self.indices, w))
    }

    pub fn contains(&self, w: &CoinOutcome) -> bool {
        if self.added.contains(w) {
            return true;
        }
        self.cylinder_contains(w) && !self.removed.contains(w)
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self, CoinError> {
        let indices = merge_indices(&self.indices, &other.indices);
        if indices.len() > MAX_INDICES {
            return Err(CoinError::TooManyIndices(indices.len()));
        }
        let lhs = lift(&self.rows, &self.indices, &indices);
        let rhs = lift(&other.rows, &other.indices, &indices);
        let rows: BTreeSet<u64> = (0..(1u64 << indices.len()))
            .filter(|r| op(lhs.contains(r), rhs.contains(r)))
            .collect();
        let (indices, rows) = minimize(indices, rows);
        let mut out = Self {
            indices,
            rows,
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        };
        let candidates: BTreeSet<&CoinOutcome> = self
            .added
            .iter()
            .chain(&self.removed)
            .chain(&other.added)
            .chain(&other.removed)
            .collect();
        for w in candidates {
            let want = op(self.contains(w), other.contains(w));
            let base = out.cylinder_contains(w);
            if base && !want {
                out.removed.insert(w.clone());
            } else if !base && want {
                out.added.insert(w.clone());
            }
        }
        Ok(out)
    }

    pub fn union(&self, other: &Self) -> Result<Self, CoinError> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, CoinError> {
        self.combine(other, |a, b| a && b)
    }

    pub fn diff(&self, other: &Self) -> Result<Self, CoinError> {
        self.combine(other, |a, b| a && !b)
    }

    /// `Omega \ self`
    pub fn complement(&self) -> Self {
        Self::omega()
            .diff(self)
            .expect("complement does not enlarge the index set")
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool, CoinError> {
        Ok(self.diff(other)?.is_empty())
    }

    /// `|S| / 2^|I|`; finite corrections are null.
    pub fn kolmogorov(&self) -> Rational {
        Rational::new(BigInt::from(self.rows.len()), BigInt::one() << self.indices.len())
    }

    /// `kolmogorov(E) * a + #added - #removed`, with `num(Omega) = a`.
    pub fn numerosity(&self) -> FieldElement {
        let correction = self.added.len() as i64 - self.removed.len() as i64;
        &FieldElement::monomial(self.kolmogorov(), 1) + &FieldElement::from_int(correction)
    }

    /// `num(E) / num(Omega)`
    pub fn probability(&self) -> FieldElement {
        &self.numerosity() / &FieldElement::alpha()
    }

    /// `P(E | F) = |E n F| / |F|` for a finite non-empty `F`, by counting.
    pub fn conditional(&self, given: &BTreeSet<CoinOutcome>) -> Result<Rational, CoinError> {
        if given.is_empty() {
            return Err(CoinError::EmptyConditioningSet);
        }
        let hits = given.iter().filter(|w| self.contains(w)).count();
        Ok(Rational::new(BigInt::from(hits), BigInt::from(given.len())))
    }

    /// The same conditional probability computed in the field as
    /// `P(E n F) / P(F)`.
    pub fn conditional_in_field(&self, given: &BTreeSet<CoinOutcome>) -> Result<FieldElement, CoinError> {
        if given.is_empty() {
            return Err(CoinError::EmptyConditioningSet);
        }
        let f = Self::outcomes(given.iter().cloned());
        let joint = self.intersect(&f)?.probability();
        Ok(&joint / &f.probability())
    }

    /// `count` distinct outcomes of the event avoiding `avoid`, or `None`
    /// when the event is finite. Outcomes follow the least selected row on
    /// the event's indices (other tosses before the last index are H), then
    /// the binary digits of `j + 1` (1 = H, least significant first), then
    /// T forever, for `j = 0, 1, ...`.
    pub fn sample_points(&self, count: usize, avoid: &BTreeSet<CoinOutcome>) -> Option<Vec<CoinOutcome>> {
        let &row = self.rows.first()?;
        let last = self.indices.last().copied().unwrap_or(0) as usize;
        let mut head = vec![Coin::H; last];
        for (b, &i) in self.indices.iter().enumerate() {
            head[i as usize - 1] = Coin::from_bit(row >> b);
        }
        let mut out = Vec::with_capacity(count);
        let mut j: u64 = 0;
        while out.len() < count {
            j += 1;
            let mut seq = head.clone();
            let mut v = j;
            while v > 0 {
                seq.push(Coin::from_bit(v));
                v >>= 1;
            }
            let w = CoinOutcome::new(seq, Coin::T);
            if !self.removed.contains(&w) && !avoid.contains(&w) {
                out.push(w);
            }
        }
        Some(out)
    }

    /// The outcomes of a finite event, or `None` otherwise.
    pub fn finite_points(&self) -> Option<Vec<CoinOutcome>> {
        self.is_finite().then(|| self.added.iter().cloned().collect())
    }
}

fn write_outcomes<'a>(f: &mut fmt::Formatter<'_>, ws: impl Iterator<Item = &'a CoinOutcome>) -> fmt::Result {
    f.write_str("{")?;
    for (k, w) in ws.enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{w}")?;
    }
    f.write_str("}")
}

/// Prints in the event DSL, e.g. `C(1:H, 2:T) u C(1:T) \ {O(HT|H)}`.
impl fmt::Display for CoinEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        for (k, &r) in self.rows.iter().enumerate() {
            if k > 0 {
                f.write_str(" u ")?;
            }
            f.write_str("C(")?;
            for (b, i) in self.indices.iter().enumerate() {
                if b > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{i}:{}", Coin::from_bit(r >> b))?;
            }
            f.write_str(")")?;
        }
        if !self.removed.is_empty() {
            f.write_str(" \\ ")?;
            write_outcomes(f, self.removed.iter())?;
        }
        if !self.added.is_empty() {
            if !self.rows.is_empty() {
                f.write_str(" u ")?;
            }
            write_outcomes(f, self.added.iter())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for CoinEvent {
    type Err = CoinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_event(s)
    }
}

impl std::str::FromStr for CoinOutcome {
    type Err = CoinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_outcome(s)
    }
}

impl Default for CoinEvent {
    fn default() -> Self {
        Self::empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use Coin::{H, T};

    fn ev(s: &str) -> CoinEvent {
        s.parse().unwrap()
    }

    fn w(s: &str) -> CoinOutcome {
        s.parse().unwrap()
    }

    #[test]
    fn cylinder_examples() {
        let c = CoinEvent::cylinder(&[(1, H)]).unwrap();
        assert_eq!(c.codimension(), 1);
        assert_eq!(CoinEvent::cylinder(&[]).unwrap(), CoinEvent::omega());
        let c = CoinEvent::cylinder(&[(5, T), (2, H)]).unwrap();
        assert_eq!(c.codimension(), 2);
        assert_eq!(c.kolmogorov(), ratio(1, 4));
        assert_eq!(
            CoinEvent::cylinder(&[(2, H), (2, T)]),
            Err(CoinError::DuplicateIndex(2))
        );
        assert_eq!(CoinEvent::cylinder(&[(0, H)]), Err(CoinError::ZeroIndex));
    }

    #[test]
    fn set_operation_examples() {
        assert_eq!(ev("C(1:H)").complement(), ev("C(1:T)"));
        assert_eq!(ev("C(1:H) n C(2:T)").to_string(), "C(1:H, 2:T)");
        let all = ev("C(1:H,2:H) u C(1:H,2:T) u C(1:T,2:H) u C(1:T,2:T)");
        assert_eq!(all, CoinEvent::omega());
        assert_eq!(all.to_string(), "C()");
        assert_eq!(ev("C(3:H) u C(3:T)"), CoinEvent::omega());
    }

    #[test]
    fn minimal_index_set() {
        // C(1:H,2:H) u C(1:H,2:T) only depends on toss 1
        let e = ev("C(1:H,2:H) u C(1:H,2:T)");
        assert_eq!(e.indices(), &[1]);
        let e = ev("C(1:H) \\ C(1:H)");
        assert_eq!(e, CoinEvent::empty());
        assert!(e.indices().is_empty());
    }

    #[test]
    fn kolmogorov_examples() {
        assert_eq!(ev("C(1:H, 4:T, 9:H)").kolmogorov(), ratio(1, 8));
        assert_eq!(CoinEvent::omega().kolmogorov(), int(1));
        let three = ev("C(1:H,2:H) u C(1:H,2:T) u C(1:T,2:H)");
        // additivity oracle: three disjoint codimension-2 cylinders
        let sum: Rational = ["C(1:H,2:H)", "C(1:H,2:T)", "C(1:T,2:H)"]
            .iter()
            .map(|s| ev(s).kolmogorov())
            .sum();
        assert_eq!(three.kolmogorov(), sum);
        assert_eq!(sum, ratio(3, 4));
    }

    #[test]
    fn numerosity_examples() {
        let a = FieldElement::alpha();
        assert_eq!(ev("C(1:H, 2:T)").numerosity(), &a / &FieldElement::from_int(4));
        assert_eq!(CoinEvent::singleton(w("O(HT|H)")).numerosity(), FieldElement::one());
        let e = ev("C() \\ {O(|H), O(T|H)}");
        assert_eq!(e.numerosity(), &a - &FieldElement::from_int(2));
    }

    #[test]
    fn probability_examples() {
        let e = ev("C(1:H, 2:T, 3:T, 7:H)");
        assert_eq!(e.probability(), FieldElement::from_rational(ratio(1, 16)));
        let p = CoinEvent::singleton(w("O(H|T)")).probability();
        assert_eq!(p, "1/a".parse().unwrap());
        assert!(p.is_positive() && p.is_infinitesimal());
        assert_eq!(CoinEvent::omega().probability(), FieldElement::one());
        assert_eq!(CoinEvent::empty().probability(), FieldElement::zero());
    }

    #[test]
    fn conditional_examples() {
        let f: BTreeSet<_> = [w("O(|H)"), w("O(T|H)")].into_iter().collect();
        assert_eq!(ev("C(1:H)").conditional(&f).unwrap(), ratio(1, 2));
        assert_eq!(CoinEvent::omega().conditional(&f).unwrap(), int(1));
        assert_eq!(
            ev("C(1:H)").conditional(&BTreeSet::new()),
            Err(CoinError::EmptyConditioningSet)
        );
        assert_eq!(
            ev("C(1:H)").conditional_in_field(&f).unwrap(),
            FieldElement::from_rational(ratio(1, 2))
        );
    }

    #[test]
    fn member_examples() {
        let hhh = w("O(|H)");
        assert!(ev("C(1:H)").contains(&hhh));
        let e = ev("C(1:H)");
        let minus = e.diff(&CoinEvent::singleton(hhh.clone())).unwrap();
        assert!(!minus.contains(&hhh));
        assert!(minus.contains(&w("O(HT|H)")));
        assert!(!minus.complement().contains(&w("O(HT|H)")));
        assert!(minus.complement().contains(&hhh));
    }

    #[test]
    fn outcome_canonical_form() {
        assert_eq!(CoinOutcome::new(vec![H, T, H, H], H), w("O(HT|H)"));
        assert_eq!(w("O(HHH|H)").to_string(), "O(|H)");
        let x = w("O(HT|H)");
        assert_eq!((x.at(1), x.at(2), x.at(3), x.at(100)), (H, T, H, H));
    }

    #[test]
    fn from_parts_repairs_and_rejects() {
        // table on {1,2} that ignores toss 2 is reduced to C(1:H)
        let e = CoinEvent::from_parts(vec![1, 2], [0b01, 0b11], [], []).unwrap();
        assert_eq!(e, ev("C(1:H)"));
        assert_eq!(
            CoinEvent::from_parts(vec![2, 1], [0], [], []),
            Err(CoinError::UnsortedIndices)
        );
        assert_eq!(
            CoinEvent::from_parts(vec![1], [2], [], []),
            Err(CoinError::RowOutOfRange(2))
        );
        assert!(matches!(
            CoinEvent::from_parts(vec![1], [1], [w("O(|H)")], []),
            Err(CoinError::AddedInside(_))
        ));
        assert!(matches!(
            CoinEvent::from_parts(vec![1], [1], [], [w("O(|T)")]),
            Err(CoinError::RemovedOutside(_))
        ));
    }

    #[test]
    fn index_limit_is_enforced() {
        let a = CoinEvent::cylinder(&(1..=12).map(|i| (i, H)).collect::<Vec<_>>()).unwrap();
        let b = CoinEvent::cylinder(&(13..=24).map(|i| (i, T)).collect::<Vec<_>>()).unwrap();
        assert_eq!(a.union(&b), Err(CoinError::TooManyIndices(24)));
    }

    #[test]
    fn sampling_stays_inside_event() {
        let e = ev("C(2:T, 4:H) \\ {O(HTHHH|T)}");
        let avoid: BTreeSet<_> = [w("O(HTHHT|T)")].into_iter().collect();
        let pts = e.sample_points(50, &avoid).unwrap();
        let distinct: BTreeSet<_> = pts.iter().collect();
        assert_eq!(distinct.len(), 50);
        for p in &pts {
            assert!(e.contains(p));
            assert!(!avoid.contains(p));
        }
        assert!(CoinEvent::singleton(w("O(|H)")).sample_points(1, &avoid).is_none());
    }
}
