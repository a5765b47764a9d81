//! Character cursor shared by the set and event expression parsers.

use num_bigint::BigInt;

use crate::rational::Rational;

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    pub fn skip_ws(&mut self) {
        while self.peek_raw().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    /// Next non-whitespace character.
    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek_raw()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Consumes a single-letter operator keyword such as `u` only when it is
    /// not the start of a longer word.
    pub fn eat_keyword(&mut self, kw: char) -> bool {
        if self.peek() != Some(kw) {
            return false;
        }
        let next = self.src[self.pos + kw.len_utf8()..].chars().next();
        if next.is_some_and(|c| c.is_alphanumeric() || c == '_') {
            return false;
        }
        self.bump();
        true
    }

    pub fn eat_str(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    pub fn unsigned(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            None
        } else {
            d.parse().ok()
        }
    }

    /// `-?digits(/digits)?`; a zero denominator yields `Err`.
    pub fn rational(&mut self) -> Result<Rational, &'static str> {
        self.skip_ws();
        let negative = self.eat('-');
        let n = self.unsigned().ok_or("expected rational literal")?;
        let value = if self.peek() == Some('/') {
            self.bump();
            let d = self.unsigned().ok_or("expected denominator")?;
            if d == BigInt::from(0) {
                return Err("zero denominator");
            }
            Rational::new(n, d)
        } else {
            Rational::from_integer(n)
        };
        if self.peek_raw() == Some('.') {
            return Err("decimal literals are not accepted; write p/q");
        }
        Ok(if negative { -value } else { value })
    }
}
