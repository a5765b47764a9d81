//! Parser for coin-toss event expressions.
//!
//! ```text
//! expr    := inter (('u' | '\') inter)*           left-associative
//! inter   := unary ('n' unary)*
//! unary   := '~' unary | atom
//! atom    := 'C' '(' (pair (',' pair)*)? ')'     cylinder; C() is Omega
//!          | outcome                              singleton
//!          | '{' (outcome (',' outcome)*)? '}'    finite outcome set
//!          | 'Omega' | '(' expr ')'
//! pair    := index ':' coin
//! outcome := 'O' '(' coin* '|' coin ')'           prefix, then constant tail
//! coin    := 'H' | 'T'
//! ```

use std::collections::BTreeSet;

use super::{Coin, CoinError, CoinEvent, CoinOutcome};
use crate::dsl::Cursor;

pub fn parse_event(src: &str) -> Result<CoinEvent, CoinError> {
    let mut cur = Cursor::new(src);
    let e = expr(&mut cur)?;
    if !cur.at_end() {
        return Err(err(&cur, "unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_outcome(src: &str) -> Result<CoinOutcome, CoinError> {
    let mut cur = Cursor::new(src);
    let w = outcome(&mut cur)?;
    if !cur.at_end() {
        return Err(err(&cur, "unexpected trailing input"));
    }
    Ok(w)
}

/// Parses a braced outcome list such as `{O(H|T), O(|H)}`.
pub fn parse_outcomes(src: &str) -> Result<BTreeSet<CoinOutcome>, CoinError> {
    let mut cur = Cursor::new(src);
    if !cur.eat('{') {
        return Err(err(&cur, "expected '{'"));
    }
    let ws = outcome_list(&mut cur)?;
    if !cur.at_end() {
        return Err(err(&cur, "unexpected trailing input"));
    }
    Ok(ws)
}

fn err(cur: &Cursor<'_>, msg: &str) -> CoinError {
    CoinError::Parse {
        pos: cur.pos,
        msg: msg.to_string(),
    }
}

fn expr(cur: &mut Cursor<'_>) -> Result<CoinEvent, CoinError> {
    let mut acc = inter(cur)?;
    loop {
        if cur.eat_keyword('u') || cur.eat('∪') {
            acc = acc.union(&inter(cur)?)?;
        } else if cur.eat('\\') {
            acc = acc.diff(&inter(cur)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn inter(cur: &mut Cursor<'_>) -> Result<CoinEvent, CoinError> {
    let mut acc = unary(cur)?;
    while cur.eat_keyword('n') || cur.eat('∩') {
        acc = acc.intersect(&unary(cur)?)?;
    }
    Ok(acc)
}

fn unary(cur: &mut Cursor<'_>) -> Result<CoinEvent, CoinError> {
    if cur.eat('~') {
        return Ok(unary(cur)?.complement());
    }
    atom(cur)
}

fn coin(cur: &mut Cursor<'_>) -> Result<Coin, CoinError> {
    match cur.peek() {
        Some('H') => {
            cur.bump();
            Ok(Coin::H)
        }
        Some('T') => {
            cur.bump();
            Ok(Coin::T)
        }
        _ => Err(err(cur, "expected 'H' or 'T'")),
    }
}

fn outcome(cur: &mut Cursor<'_>) -> Result<CoinOutcome, CoinError> {
    if !(cur.eat('O') && cur.eat('(')) {
        return Err(err(cur, "expected outcome 'O(...)'"));
    }
    let mut prefix = Vec::new();
    while matches!(cur.peek(), Some('H' | 'T')) {
        prefix.push(coin(cur)?);
    }
    if !cur.eat('|') {
        return Err(err(cur, "expected '|' before the constant tail"));
    }
    let tail = coin(cur)?;
    if !cur.eat(')') {
        return Err(err(cur, "expected ')'"));
    }
    Ok(CoinOutcome::new(prefix, tail))
}

/// Outcomes after an opening brace, through the closing brace.
fn outcome_list(cur: &mut Cursor<'_>) -> Result<BTreeSet<CoinOutcome>, CoinError> {
    let mut ws = BTreeSet::new();
    if cur.eat('}') {
        return Ok(ws);
    }
    loop {
        ws.insert(outcome(cur)?);
        if cur.eat('}') {
            return Ok(ws);
        }
        if !cur.eat(',') {
            return Err(err(cur, "expected ',' or '}'"));
        }
    }
}

fn atom(cur: &mut Cursor<'_>) -> Result<CoinEvent, CoinError> {
    match cur.peek() {
        Some('C') => {
            cur.bump();
            if !cur.eat('(') {
                return Err(err(cur, "expected '(' after 'C'"));
            }
            let mut pairs = Vec::new();
            if !cur.eat(')') {
                loop {
                    let i = cur.unsigned().ok_or_else(|| err(cur, "expected toss index"))?;
                    let i: u32 = i.try_into().map_err(|_| err(cur, "toss index out of range"))?;
                    if !cur.eat(':') {
                        return Err(err(cur, "expected ':'"));
                    }
                    pairs.push((i, coin(cur)?));
                    if cur.eat(')') {
                        break;
                    }
                    if !cur.eat(',') {
                        return Err(err(cur, "expected ',' or ')'"));
                    }
                }
            }
            CoinEvent::cylinder(&pairs)
        }
        Some('O') => {
            if cur.eat_str("Omega") {
                return Ok(CoinEvent::omega());
            }
            Ok(CoinEvent::singleton(outcome(cur)?))
        }
        Some('Ω') => {
            cur.bump();
            Ok(CoinEvent::omega())
        }
        Some('{') => {
            cur.bump();
            Ok(CoinEvent::outcomes(outcome_list(cur)?))
        }
        Some('(') => {
            cur.bump();
            let inner = expr(cur)?;
            if !cur.eat(')') {
                return Err(err(cur, "expected ')'"));
            }
            Ok(inner)
        }
        Some(_) => Err(err(cur, "expected an event")),
        None => Err(err(cur, "unexpected end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let e = parse_event("C(1:H, 5:T)").unwrap();
        assert_eq!(e.indices(), &[1, 5]);
        assert_eq!(parse_event("Omega").unwrap(), CoinEvent::omega());
        assert_eq!(parse_event("~{}").unwrap(), CoinEvent::omega());
        let w = parse_outcome("O(HHT|H)").unwrap();
        assert_eq!(w.prefix(), &[Coin::H, Coin::H, Coin::T]);
        assert_eq!(parse_outcomes("{O(H|T), O(|H), O(H|T)}").unwrap().len(), 2);
    }

    #[test]
    fn complement_binds_tightest() {
        let a = parse_event("~C(1:H) n C(2:H)").unwrap();
        assert_eq!(a, parse_event("C(1:T, 2:H)").unwrap());
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "C(1:X)",
            "C(1:H",
            "O(HH)",
            "C(0:H)",
            "C(1:H, 1:T)",
            "Omg",
            "C(1:H) v C(2:H)",
            "",
        ] {
            assert!(parse_event(bad).is_err(), "{bad} should not parse");
        }
    }
}
