//! Parser for real-line set expressions.
//!
//! ```text
//! expr   := inter (('u' | '\') inter)*        left-associative
//! inter  := atom ('n' atom)*
//! atom   := '[' rat ',' rat ')' | '{' (rat (',' rat)*)? '}' | '(' expr ')'
//! rat    := '-'? digits ('/' digits)?
//! ```

use super::{RealSet, RealSetError};
use crate::dsl::Cursor;

pub fn parse_real_set(src: &str) -> Result<RealSet, RealSetError> {
    let mut cur = Cursor::new(src);
    let set = expr(&mut cur)?;
    if !cur.at_end() {
        return Err(err(&cur, "unexpected trailing input"));
    }
    Ok(set)
}

fn err(cur: &Cursor<'_>, msg: &str) -> RealSetError {
    RealSetError::Parse {
        pos: cur.pos,
        msg: msg.to_string(),
    }
}

fn expr(cur: &mut Cursor<'_>) -> Result<RealSet, RealSetError> {
    let mut acc = inter(cur)?;
    loop {
        if cur.eat_keyword('u') || cur.eat('∪') {
            acc = acc.union(&inter(cur)?);
        } else if cur.eat('\\') {
            acc = acc.diff(&inter(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn inter(cur: &mut Cursor<'_>) -> Result<RealSet, RealSetError> {
    let mut acc = atom(cur)?;
    while cur.eat_keyword('n') || cur.eat('∩') {
        acc = acc.intersect(&atom(cur)?);
    }
    Ok(acc)
}

fn rat(cur: &mut Cursor<'_>) -> Result<crate::rational::Rational, RealSetError> {
    cur.rational().map_err(|m| err(cur, m))
}

fn atom(cur: &mut Cursor<'_>) -> Result<RealSet, RealSetError> {
    match cur.peek() {
        Some('[') => {
            cur.bump();
            let lo = rat(cur)?;
            if !cur.eat(',') {
                return Err(err(cur, "expected ','"));
            }
            let hi = rat(cur)?;
            if !cur.eat(')') {
                return Err(err(cur, "expected ')' closing a half-open interval"));
            }
            RealSet::interval(lo, hi)
        }
        Some('{') => {
            cur.bump();
            let mut pts = Vec::new();
            if !cur.eat('}') {
                loop {
                    pts.push(rat(cur)?);
                    if cur.eat('}') {
                        break;
                    }
                    if !cur.eat(',') {
                        return Err(err(cur, "expected ',' or '}'"));
                    }
                }
            }
            Ok(RealSet::points(pts))
        }
        Some('(') => {
            cur.bump();
            let inner = expr(cur)?;
            if !cur.eat(')') {
                return Err(err(cur, "expected ')'"));
            }
            Ok(inner)
        }
        Some(_) => Err(err(cur, "expected '[', '{' or '('")),
        None => Err(err(cur, "unexpected end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_points_and_intervals() {
        let s = parse_real_set("[0,3/4) u {2}").unwrap();
        assert_eq!(s.lebesgue(), ratio(3, 4));
        assert!(s.contains(&int(2)));
        assert_eq!(parse_real_set("{}").unwrap(), RealSet::empty());
        assert_eq!(parse_real_set("{ 3/4 , 2 }").unwrap().added().len(), 2);
    }

    #[test]
    fn intersection_binds_tighter() {
        let s = parse_real_set("[0,1) u [2,4) n [3,5)").unwrap();
        assert_eq!(s, parse_real_set("[0,1) u [3,4)").unwrap());
        let t = parse_real_set("[0,5) \\ [1,2) \\ [3,4)").unwrap();
        assert_eq!(t, parse_real_set("[0,1) u [2,3) u [4,5)").unwrap());
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "[0,1]",
            "[1,0)",
            "[0,1) u",
            "sqrt(2)",
            "[0,1.5)",
            "{1/0}",
            "[0,1) x [2,3)",
            "(",
            "u",
        ] {
            assert!(parse_real_set(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn empty_interval_is_an_error() {
        assert!(matches!(parse_real_set("[1,1)"), Err(RealSetError::EmptyInterval(..))));
    }
}
