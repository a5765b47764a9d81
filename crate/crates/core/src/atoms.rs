//! A universe made of finitely many infinite blocks ("atoms" of the set
//! algebra, not points). Block `i` is `{i} x N` and carries weight `w_i`;
//! a set is a union of whole blocks with finitely many points added or
//! removed, so single points are null and the measure is non-atomic.
//!
//! Set syntax: `A(0, 2)` for a union of blocks, `{0:5, 1:3}` for finite
//! point sets (`block:serial`), combined with `u`, `n`, `\` and parentheses
//! exactly like the real-line grammar.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::algebra::{AlgebraError, SetAlgebra};
use crate::dsl::Cursor;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomPoint {
    pub atom: usize,
    pub serial: u64,
}

impl fmt::Display for AtomPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.atom, self.serial)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AtomSet {
    atoms: BTreeSet<usize>,
    removed: BTreeSet<AtomPoint>,
    added: BTreeSet<AtomPoint>,
}

impl AtomSet {
    pub fn blocks(atoms: impl IntoIterator<Item = usize>) -> Self {
        Self {
            atoms: atoms.into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn points(pts: impl IntoIterator<Item = AtomPoint>) -> Self {
        Self {
            added: pts.into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn atoms(&self) -> &BTreeSet<usize> {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.added.is_empty()
    }

    pub fn contains(&self, x: &AtomPoint) -> bool {
        self.added.contains(x) || (self.atoms.contains(&x.atom) && !self.removed.contains(x))
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let atoms: BTreeSet<usize> = self
            .atoms
            .union(&other.atoms)
            .copied()
            .filter(|a| op(self.atoms.contains(a), other.atoms.contains(a)))
            .collect();
        let mut out = Self {
            atoms,
            ..Self::default()
        };
        let candidates: BTreeSet<&AtomPoint> = self
            .added
            .iter()
            .chain(&self.removed)
            .chain(&other.added)
            .chain(&other.removed)
            .collect();
        for x in candidates {
            let want = op(self.contains(x), other.contains(x));
            let base = out.atoms.contains(&x.atom);
            if base && !want {
                out.removed.insert(*x);
            } else if !base && want {
                out.added.insert(*x);
            }
        }
        out
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

    fn max_atom(&self) -> Option<usize> {
        let pts = self.added.iter().chain(&self.removed).map(|p| p.atom);
        self.atoms.iter().copied().chain(pts).max()
    }
}

fn write_points(f: &mut fmt::Formatter<'_>, pts: &BTreeSet<AtomPoint>) -> fmt::Result {
    f.write_str("{")?;
    for (k, p) in pts.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str("}")
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        if !self.atoms.is_empty() {
            f.write_str("A(")?;
            for (k, a) in self.atoms.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        if !self.removed.is_empty() {
            f.write_str(" \\ ")?;
            write_points(f, &self.removed)?;
        }
        if !self.added.is_empty() {
            if !self.atoms.is_empty() {
                f.write_str(" u ")?;
            }
            write_points(f, &self.added)?;
        }
        Ok(())
    }
}

/// Weighted block universe. Weights written with a decimal point are
/// treated as truncated readings of real numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSpace {
    weights: Vec<Rational>,
    decimal: bool,
}

impl AtomSpace {
    pub fn new(weights: Vec<Rational>) -> Result<Self, AlgebraError> {
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(AlgebraError(format!("atom weight {w} is not positive")));
        }
        Ok(Self {
            weights,
            decimal: false,
        })
    }

    /// Parses weights such as `"1/3"` or `"0.41421356"`; any decimal literal
    /// switches the space to decimal mode.
    pub fn parse<S: AsRef<str>>(literals: &[S]) -> Result<Self, AlgebraError> {
        let weights = literals
            .iter()
            .map(|s| {
                parse_rational(s.as_ref()).ok_or_else(|| AlgebraError(format!("bad atom weight {:?}", s.as_ref())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut space = Self::new(weights)?;
        space.decimal = literals.iter().any(|s| s.as_ref().contains('.'));
        Ok(space)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    fn check(&self, set: AtomSet) -> Result<AtomSet, AlgebraError> {
        match set.max_atom() {
            Some(a) if a >= self.weights.len() => Err(AlgebraError(format!(
                "atom {a} out of range (space has {} atoms)",
                self.weights.len()
            ))),
            _ => Ok(set),
        }
    }
}

impl SetAlgebra for AtomSpace {
    type Set = AtomSet;
    type Point = AtomPoint;

    fn empty(&self) -> AtomSet {
        AtomSet::default()
    }

    fn union(&self, a: &AtomSet, b: &AtomSet) -> Result<AtomSet, AlgebraError> {
        Ok(a.union(b))
    }

    fn intersect(&self, a: &AtomSet, b: &AtomSet) -> Result<AtomSet, AlgebraError> {
        Ok(a.intersect(b))
    }

    fn diff(&self, a: &AtomSet, b: &AtomSet) -> Result<AtomSet, AlgebraError> {
        Ok(a.diff(b))
    }

    fn is_empty(&self, a: &AtomSet) -> bool {
        a.is_empty()
    }

    fn contains(&self, a: &AtomSet, x: &AtomPoint) -> bool {
        a.contains(x)
    }

    fn singleton(&self, x: &AtomPoint) -> AtomSet {
        AtomSet::points([*x])
    }

    fn measure(&self, a: &AtomSet) -> Rational {
        a.atoms.iter().map(|&i| self.weights[i].clone()).sum()
    }

    /// Serials `0, 1, 2, ...` of the lowest block in the set.
    fn sample(&self, a: &AtomSet, count: usize, avoid: &BTreeSet<AtomPoint>) -> Option<Vec<AtomPoint>> {
        let &atom = a.atoms.first()?;
        Some(
            (0u64..)
                .map(|serial| AtomPoint { atom, serial })
                .filter(|p| !a.removed.contains(p) && !avoid.contains(p))
                .take(count)
                .collect(),
        )
    }

    fn finite_points(&self, a: &AtomSet) -> Option<Vec<AtomPoint>> {
        a.atoms.is_empty().then(|| a.added.iter().copied().collect())
    }

    fn parse_set(&self, src: &str) -> Result<AtomSet, AlgebraError> {
        let mut cur = Cursor::new(src);
        let set = expr(&mut cur)?;
        if !cur.at_end() {
            return Err(perr(&cur, "unexpected trailing input"));
        }
        self.check(set)
    }

    fn parse_point(&self, src: &str) -> Result<AtomPoint, AlgebraError> {
        let mut cur = Cursor::new(src);
        let p = point(&mut cur)?;
        if !cur.at_end() {
            return Err(perr(&cur, "unexpected trailing input"));
        }
        self.check(AtomSet::points([p])).map(|_| p)
    }

    fn decimal_weights(&self) -> bool {
        self.decimal
    }
}

fn perr(cur: &Cursor<'_>, msg: &str) -> AlgebraError {
    AlgebraError(format!("parse error at byte {}: {msg}", cur.pos))
}

fn small(cur: &mut Cursor<'_>) -> Result<u64, AlgebraError> {
    let n: BigInt = cur.unsigned().ok_or_else(|| perr(cur, "expected integer"))?;
    n.try_into().map_err(|_| perr(cur, "integer out of range"))
}

fn point(cur: &mut Cursor<'_>) -> Result<AtomPoint, AlgebraError> {
    let atom = small(cur)? as usize;
    if !cur.eat(':') {
        return Err(perr(cur, "expected ':'"));
    }
    let serial = small(cur)?;
    Ok(AtomPoint { atom, serial })
}

fn expr(cur: &mut Cursor<'_>) -> Result<AtomSet, AlgebraError> {
    let mut acc = inter(cur)?;
    loop {
        if cur.eat_keyword('u') {
            acc = acc.union(&inter(cur)?);
        } else if cur.eat('\\') {
            acc = acc.diff(&inter(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn inter(cur: &mut Cursor<'_>) -> Result<AtomSet, AlgebraError> {
    let mut acc = atom(cur)?;
    while cur.eat_keyword('n') {
        acc = acc.intersect(&atom(cur)?);
    }
    Ok(acc)
}

fn atom(cur: &mut Cursor<'_>) -> Result<AtomSet, AlgebraError> {
    match cur.peek() {
        Some('A') => {
            cur.bump();
            if !cur.eat('(') {
                return Err(perr(cur, "expected '('"));
            }
            let mut blocks = Vec::new();
            if !cur.eat(')') {
                loop {
                    blocks.push(small(cur)? as usize);
                    if cur.eat(')') {
                        break;
                    }
                    if !cur.eat(',') {
                        return Err(perr(cur, "expected ',' or ')'"));
                    }
                }
            }
            Ok(AtomSet::blocks(blocks))
        }
        Some('{') => {
            cur.bump();
            let mut pts = Vec::new();
            if !cur.eat('}') {
                loop {
                    pts.push(point(cur)?);
                    if cur.eat('}') {
                        break;
                    }
                    if !cur.eat(',') {
                        return Err(perr(cur, "expected ',' or '}'"));
                    }
                }
            }
            Ok(AtomSet::points(pts))
        }
        Some('(') => {
            cur.bump();
            let inner = expr(cur)?;
            if !cur.eat(')') {
                return Err(perr(cur, "expected ')'"));
            }
            Ok(inner)
        }
        _ => Err(perr(cur, "expected 'A(', '{' or '('")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn space() -> AtomSpace {
        AtomSpace::parse(&["1/2", "1/3", "1/6"]).unwrap()
    }

    #[test]
    fn measure_is_sum_of_block_weights() {
        let s = space();
        let a = s.parse_set("A(0, 2) \\ {0:3} u {1:7}").unwrap();
        assert_eq!(s.measure(&a), ratio(2, 3));
        assert!(!a.contains(&AtomPoint { atom: 0, serial: 3 }));
        assert!(a.contains(&AtomPoint { atom: 1, serial: 7 }));
        assert!(!a.contains(&AtomPoint { atom: 1, serial: 6 }));
    }

    #[test]
    fn display_round_trips() {
        let s = space();
        for src in ["A(0, 2) \\ {0:3} u {1:7}", "{}", "{2:0, 2:9}", "A(1)"] {
            let a = s.parse_set(src).unwrap();
            assert_eq!(s.parse_set(&a.to_string()).unwrap(), a);
        }
    }

    #[test]
    fn rejects_out_of_range_atoms() {
        assert!(space().parse_set("A(3)").is_err());
        assert!(space().parse_point("5:1").is_err());
        assert!(AtomSpace::parse(&["0"]).is_err());
    }

    #[test]
    fn decimal_mode_is_detected() {
        assert!(!space().decimal_weights());
        assert!(AtomSpace::parse(&["0.41421356", "1"]).unwrap().decimal_weights());
    }

    #[test]
    fn sampling_skips_removed_points() {
        let s = space();
        let a = s.parse_set("A(1) \\ {1:0, 1:2}").unwrap();
        let pts = s.sample(&a, 3, &BTreeSet::new()).unwrap();
        let serials: Vec<u64> = pts.iter().map(|p| p.serial).collect();
        assert_eq!(serials, vec![1, 3, 4]);
    }
}
