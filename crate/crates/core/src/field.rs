//! The ordered field of rational functions `Q(a)` ordered at `+inf`.
//!
//! `a` is a fixed positive infinite element: `a > n` for every integer `n`,
//! so `1/a` is a positive infinitesimal. An element `p(a)/q(a)` is positive
//! exactly when the rational function is eventually positive, which for a
//! monic denominator is the sign of the numerator's leading coefficient.
//!
//! Every value is kept in canonical form: numerator and denominator coprime,
//! denominator monic, zero stored as `0/1`. Equality is therefore structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: Poly,
    den: Poly,
}

/// Standard part of a field element, with the usual `+inf`/`-inf` convention
/// for infinite elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shadow {
    Finite(Rational),
    PosInfinity,
    NegInfinity,
}

impl Shadow {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Shadow::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shadow::Finite(r) => write!(f, "{r}"),
            Shadow::PosInfinity => f.write_str("+inf"),
            Shadow::NegInfinity => f.write_str("-inf"),
        }
    }
}

impl FieldElement {
    /// Builds `num/den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().expect("non-zero denominator").clone();
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = lc.recip();
            Self {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// The infinite unit `a`.
    pub fn alpha() -> Self {
        Self {
            num: Poly::monomial(Rational::one(), 1),
            den: Poly::one(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Self {
            num: Poly::constant(r),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `c * a^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        Self {
            num: Poly::monomial(c, k),
            den: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(r)` when the element is the rational constant `r`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.degree() == Some(0) {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn signum(&self) -> Ordering {
        // the denominator is monic, so only the numerator decides
        self.num.sign_at_infinity().cmp(&0)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        if rhs.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::canonical(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Integer power; negative exponents fail on zero.
    pub fn powi(&self, exp: i64) -> Result<Self, FieldError> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..exp.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    pub fn shadow(&self) -> Shadow {
        let dn = self.num.degree();
        let dd = self.den.degree().expect("non-zero denominator");
        match dn {
            None => Shadow::Finite(Rational::zero()),
            Some(dn) if dn < dd => Shadow::Finite(Rational::zero()),
            Some(dn) if dn == dd => Shadow::Finite(self.num.leading().unwrap().clone()),
            Some(_) => {
                if self.num.leading().unwrap().is_positive() {
                    Shadow::PosInfinity
                } else {
                    Shadow::NegInfinity
                }
            }
        }
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.shadow() == Shadow::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.shadow(), Shadow::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum()
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for FieldElement {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &FieldElement) -> FieldElement {
        if self.den == rhs.den {
            return FieldElement::canonical(&self.num + &rhs.num, self.den.clone());
        }
        FieldElement::canonical(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; use [`FieldElement::checked_div`] otherwise.
impl Div for &FieldElement {
    type Output = FieldElement;

    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.checked_div(rhs).expect("division by zero in field")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::zero(), |acc, x| &acc + &x)
    }
}

fn write_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else if c.is_negative() {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        first = false;
        if k == 0 {
            write!(f, "{mag}")?;
            continue;
        }
        if !mag.is_one() {
            if mag.is_integer() {
                write!(f, "{mag}*")?;
            } else {
                write!(f, "({mag})*")?;
            }
        }
        if k == 1 {
            f.write_str("a")?;
        } else {
            write!(f, "a^{k}")?;
        }
    }
    Ok(())
}

struct PolyDisplay<'a>(&'a Poly);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(self.0, f)
    }
}

/// Renders as a reduced rational function in `a`, e.g. `(2*a^2 + 3)/(a + 1)`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_zero() || self.den == Poly::one() {
            return write_poly(&self.num, f);
        }
        let num = PolyDisplay(&self.num).to_string();
        if self.num.term_count() > 1 || num.contains('/') {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        f.write_str("/")?;
        if self.den.term_count() > 1 {
            write!(f, "({})", PolyDisplay(&self.den))
        } else {
            write!(f, "{}", PolyDisplay(&self.den))
        }
    }
}

impl FromStr for FieldElement {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ExprParser { src: s, pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(v)
    }
}

/// Recursive-descent evaluator for field expressions.
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := unary (('*' | '/') unary)*
/// unary  := '-' unary | power
/// power  := atom ('^' '-'? integer)?
/// atom   := integer | 'a' | '(' expr ')'
/// ```
struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> FieldError {
        FieldError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElement, FieldError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<FieldElement, FieldError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected integer exponent"));
        }
        let exp: i64 = digits.parse().map_err(|_| self.error("exponent out of range"))?;
        if exp > 4096 {
            return Err(self.error("exponent out of range"));
        }
        let exp = if negative { -exp } else { exp };
        base.powi(exp)
            .map_err(|_| self.error("zero raised to a negative power"))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<FieldElement, FieldError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some('a') | Some('α') => {
                self.bump();
                Ok(FieldElement::alpha())
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().parse().expect("ascii digits");
                Ok(FieldElement::from_rational(Rational::from_integer(n)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
