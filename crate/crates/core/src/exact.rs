//! Canonical quadratic irrationals `(A + B*sqrt(D))/C` over arbitrary-size
//! integers, together with the text grammar used everywhere else.
//!
//! Canonical form invariants, restored by every constructor:
//! * `C > 0`, `gcd(A, B, C) = 1`;
//! * `D >= 0`, square factors of `D` are folded into `B`;
//! * rational values are stored with `B = 0, D = 0`, so "is irrational" is a
//!   cheap structural predicate.
//!
//! Square extraction runs trial division up to a fixed bound and then
//! collapses a perfect-square residue, which reduces every radicand produced
//! by the continued-fraction and topograph code paths in this crate; a
//! radicand whose square part mixes primes above the bound with a non-square
//! cofactor stays partially reduced and is documented as such.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest trial divisor used while folding square factors out of a radicand.
/// Complete for radicands below `TRIAL_BOUND^2` and for any radicand whose
/// leftover square part is itself a perfect square.
const TRIAL_BOUND: u64 = 10_000;

/// A real quadratic irrational (or rational) `(A + B*sqrt(D))/C` in canonical
/// form. Structural equality coincides with value equality on canonical
/// representatives, so the type can key hash maps during period detection.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticIrrational {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

impl QuadraticIrrational {
    /// Builds `(a + b*sqrt(d))/c` and restores the canonical form.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        d: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Result<Self> {
        let (mut a, mut b, mut d, mut c) = (a.into(), b.into(), d.into(), c.into());
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if b.is_zero() {
            d = BigInt::zero();
        } else {
            match d.sign() {
                Sign::Minus => return Err(Error::NegativeRadicand(d)),
                Sign::NoSign => b = BigInt::zero(),
                Sign::Plus => {
                    let (root, free) = extract_square(&d);
                    b *= root;
                    d = free;
                    if d.is_one() {
                        a += &b;
                        b = BigInt::zero();
                        d = BigInt::zero();
                    }
                }
            }
        }
        if b.is_zero() {
            d = BigInt::zero();
        }
        if c.sign() == Sign::Minus {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(Self { a, b, d, c })
    }

    /// Same-shape constructor for values whose radicand is already reduced;
    /// skips square extraction but keeps every other canonicalization step.
    fn renorm(mut a: BigInt, mut b: BigInt, d: BigInt, mut c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = if b.is_zero() { BigInt::zero() } else { d };
        if c.sign() == Sign::Minus {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(Self { a, b, d, c })
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self {
            a: n.into(),
            b: BigInt::zero(),
            d: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        // BigRational is already reduced with a positive denominator.
        Self {
            a: r.numer().clone(),
            b: BigInt::zero(),
            d: BigInt::zero(),
            c: r.denom().clone(),
        }
    }

    /// `sqrt(d)` for `d >= 0`.
    pub fn sqrt_of(d: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, 1, d, 1)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    /// Numerator constant `A`.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Radical coefficient `B`; zero exactly for rational values.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// Radicand `D`; zero exactly for rational values.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Denominator `C > 0`.
    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_irrational(&self) -> bool {
        !self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    /// Field conjugate: flips the sign of the radical part. Involutive, and
    /// the identity on rationals.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
            c: self.c.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
            c: self.c.clone(),
        }
    }

    /// Exact floor. Uses the integer square root of `B^2 D` to trap the
    /// radical part between consecutive integers; the radicand of an
    /// irrational value is never a perfect square, so both bounds are strict.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.div_floor(&self.c);
        }
        let n2 = &self.b * &self.b * &self.d;
        let s = n2.sqrt();
        let radical_floor = if self.b.sign() == Sign::Plus {
            s
        } else {
            debug_assert!(&s * &s != n2, "irrational value with square radicand");
            -(s + 1u8)
        };
        (&self.a + radical_floor).div_floor(&self.c)
    }

    /// `1/(x - n)`; the reciprocal keeps the radicand, so repeated remainders
    /// of a continued-fraction expansion stay in one comparison domain.
    pub fn recip_shift(&self, n: &BigInt) -> Result<Self> {
        let shifted = &self.a - n * &self.c;
        if self.b.is_zero() {
            if shifted.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Self::renorm(self.c.clone(), BigInt::zero(), BigInt::zero(), shifted);
        }
        // (A' )^2 - B^2 D vanishes only when the value is rational.
        let denom = &shifted * &shifted - &self.b * &self.b * &self.d;
        debug_assert!(!denom.is_zero());
        Self::renorm(
            &self.c * &shifted,
            -(&self.c * &self.b),
            self.d.clone(),
            denom,
        )
    }

    pub(crate) fn recip(&self) -> Result<Self> {
        self.recip_shift(&BigInt::zero())
    }

    /// Purely periodic continued-fraction criterion: `x > 1` and the
    /// conjugate lies strictly inside `(-1, 0)`.
    pub fn is_galois(&self) -> bool {
        if self.is_rational() {
            return false;
        }
        let one = Self::from_integer(1);
        let conj = self.conjugate();
        *self > one && conj < Self::zero() && conj > Self::from_integer(-1)
    }

    /// `floor(x * 2^bits)`, exact; the workhorse behind logarithms and
    /// decimal printing.
    pub fn fixed_point(&self, bits: u32) -> BigInt {
        let num = &self.a << bits;
        if self.b.is_zero() {
            return num.div_floor(&self.c);
        }
        let n2 = (&self.b * &self.b * &self.d) << (2 * bits);
        let s = n2.sqrt();
        let radical = if self.b.sign() == Sign::Plus {
            s
        } else {
            -(s + 1u8)
        };
        (num + radical).div_floor(&self.c)
    }

    /// Decimal approximation with `digits` fractional digits, rounded to
    /// nearest (ties away from the value's floor).
    pub fn to_decimal(&self, digits: usize) -> String {
        let guard: u32 = 8;
        let scale = BigInt::from(10u8).pow(digits as u32 + guard);
        let num = &self.a * &scale;
        let scaled = if self.b.is_zero() {
            num.div_floor(&self.c)
        } else {
            let n2 = &self.b * &self.b * &self.d * &scale * &scale;
            let s = n2.sqrt();
            let radical = if self.b.sign() == Sign::Plus { s } else { -(s + 1u8) };
            (num + radical).div_floor(&self.c)
        };
        let half = BigInt::from(5u8) * BigInt::from(10u8).pow(guard - 1);
        let rounded = (scaled + half).div_floor(&BigInt::from(10u8).pow(guard));
        let ten_d = BigInt::from(10u8).pow(digits as u32);
        let (int_part, frac_part) = rounded.div_mod_floor(&ten_d);
        if digits == 0 {
            return int_part.to_string();
        }
        // div_mod_floor keeps 0 <= frac < 10^digits for negatives as well,
        // so -0.5 prints through its floor/remainder pair as "-0.500..".
        let (int_part, frac_part) = if int_part.sign() == Sign::Minus && !frac_part.is_zero() {
            (int_part + 1u8, ten_d - frac_part)
        } else {
            (int_part, frac_part)
        };
        let sign = if self.is_negative() && int_part.is_zero() {
            "-"
        } else {
            ""
        };
        format!(
            "{sign}{int_part}.{frac:0>width$}",
            frac = frac_part.magnitude().to_string(),
            width = digits
        )
    }

    pub fn to_f64(&self) -> f64 {
        const BITS: u32 = 128;
        let fixed = self.fixed_point(BITS);
        fixed.to_f64().unwrap_or(f64::NAN) * (2f64).powi(-(BITS as i32))
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    /// Exact comparison via sign analysis; at most two squarings eliminate
    /// the radicals, so no precision parameter is involved.
    fn exact_cmp(&self, other: &Self) -> Ordering {
        let p = &self.a * &other.c - &other.a * &self.c;
        let q = &self.b * &other.c;
        let r = -(&other.b * &self.c);
        if self.d == other.d || q.is_zero() || r.is_zero() {
            // One radicand at most; a shared radicand merges coefficients.
            return if self.d == other.d {
                radical_sign(&p, &(q + r), &self.d)
            } else if q.is_zero() {
                radical_sign(&p, &r, &other.d)
            } else {
                radical_sign(&p, &q, &self.d)
            };
        }
        // sign(p + q*sqrt(d1) + r*sqrt(d2)) with both radical terms alive:
        // compare L = p + q*sqrt(d1) against -r*sqrt(d2) by sign, then by
        // squared magnitude, which is again a single-radical sign.
        let s1 = radical_sign(&p, &q, &self.d);
        let s2 = r.cmp(&BigInt::zero());
        if s1 == Ordering::Equal {
            return s2;
        }
        if s1 == s2 {
            return s1;
        }
        let fixed = &p * &p + &q * &q * &self.d - &r * &r * &other.d;
        let two_pq = BigInt::from(2u8) * &p * &q;
        match radical_sign(&fixed, &two_pq, &self.d) {
            Ordering::Greater => s1,
            Ordering::Less => s2,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

/// Larger root of `aa*x^2 + bb*x + cc = 0` with `aa != 0`, as an exact
/// value; the smaller root is its conjugate. The coefficient triple is
/// content-reduced before the discriminant is formed, which keeps radicands
/// small for the period matrices and topograph forms that call this.
pub fn larger_quadratic_root(aa: &BigInt, bb: &BigInt, cc: &BigInt) -> Result<QuadraticIrrational> {
    if aa.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let g = aa.gcd(bb).gcd(cc);
    let (mut aa, mut bb, mut cc) = (aa / &g, bb / &g, cc / &g);
    if aa.sign() == Sign::Minus {
        aa = -aa;
        bb = -bb;
        cc = -cc;
    }
    let disc = &bb * &bb - BigInt::from(4u8) * &aa * &cc;
    if disc.sign() == Sign::Minus {
        return Err(Error::NegativeRadicand(disc));
    }
    QuadraticIrrational::new(-bb, BigInt::one(), disc, BigInt::from(2u8) * aa)
}

/// Sign of `p + q*sqrt(d)` as an ordering against zero.
fn radical_sign(p: &BigInt, q: &BigInt, d: &BigInt) -> Ordering {
    let zero = BigInt::zero();
    if q.is_zero() || d.is_zero() {
        return p.cmp(&zero);
    }
    match (p.sign(), q.sign()) {
        (Sign::NoSign, _) => q.cmp(&zero),
        (Sign::Plus, Sign::Plus) => Ordering::Greater,
        (Sign::Minus, Sign::Minus) => Ordering::Less,
        (Sign::Plus, Sign::Minus) => (p * p).cmp(&(q * q * d)),
        (Sign::Minus, Sign::Plus) => (q * q * d).cmp(&(p * p)),
        (_, Sign::NoSign) => unreachable!(),
    }
}

/// Splits `d > 0` as `root^2 * free` with `free` square-reduced per the
/// module policy.
fn extract_square(d: &BigInt) -> (BigInt, BigInt) {
    if let Some(small) = d.to_u64() {
        let (root, free) = extract_square_u64(small);
        return (BigInt::from(root), BigInt::from(free));
    }
    let mut free = d.clone();
    let mut root = BigInt::one();
    let mut f: u64 = 2;
    while f <= TRIAL_BOUND {
        let f2 = BigInt::from(f) * BigInt::from(f);
        if f2 > free {
            break;
        }
        while (&free % &f2).is_zero() {
            free /= &f2;
            root *= f;
        }
        f = if f == 2 { 3 } else { f + 2 };
    }
    let s = free.sqrt();
    if &s * &s == free {
        root *= s;
        free = BigInt::one();
    }
    (root, free)
}

fn extract_square_u64(d: u64) -> (u64, u64) {
    let mut free = d;
    let mut root: u64 = 1;
    let mut f: u64 = 2;
    while f <= TRIAL_BOUND {
        let f2 = f * f;
        if f2 > free {
            break;
        }
        while free % f2 == 0 {
            free /= f2;
            root *= f;
        }
        f = if f == 2 { 3 } else { f + 2 };
    }
    let s = free.sqrt();
    if s * s == free {
        root *= s;
        free = 1;
    }
    (root, free)
}

impl Ord for QuadraticIrrational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exact_cmp(other)
    }
}

impl PartialOrd for QuadraticIrrational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadraticIrrational {
    /// Canonical text form; always re-parses to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            };
        }
        let radical = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if self.b == BigInt::from(-1) {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.b, self.d)
        };
        if self.a.is_zero() && self.c.is_one() {
            return write!(f, "{radical}");
        }
        let signed_radical = if self.b.sign() == Sign::Plus {
            format!("+{radical}")
        } else {
            radical
        };
        let sum = if self.a.is_zero() {
            radical_without_leading_plus(&signed_radical)
        } else {
            format!("{}{signed_radical}", self.a)
        };
        if self.c.is_one() {
            write!(f, "({sum})")
        } else {
            write!(f, "({sum})/{}", self.c)
        }
    }
}

fn radical_without_leading_plus(s: &str) -> String {
    s.strip_prefix('+').unwrap_or(s).to_string()
}

impl FromStr for QuadraticIrrational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_value(s)
    }
}

// ---------------------------------------------------------------------------
// value grammar
//
//   value := expression over integers, "sqrt(<int>)", + - * /, parentheses
//
// evaluated exactly in one quadratic field; two distinct radicands in one
// expression are rejected.

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Sqrt,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &s[start..i];
                let n = BigInt::parse_bytes(digits.as_bytes(), 10)
                    .ok_or_else(|| Error::Parse(format!("bad integer literal {digits:?}")))?;
                out.push(Token::Int(n));
            }
            's' => {
                if s[i..].starts_with("sqrt") {
                    out.push(Token::Sqrt);
                    i += 4;
                } else {
                    return Err(Error::Parse(format!("unexpected input at {:?}", &s[i..])));
                }
            }
            _ => return Err(Error::Parse(format!("unexpected character {ch:?}"))),
        }
    }
    Ok(out)
}

struct ValueParser {
    tokens: Vec<Token>,
    pos: usize,
}

type Qi = QuadraticIrrational;

impl ValueParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        match self.next() {
            Some(found) if found == t => Ok(()),
            other => Err(Error::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn sum(&mut self) -> Result<Qi> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let rhs = self.product()?;
                    acc = field_add(&acc, &rhs)?;
                }
                Some(Token::Minus) => {
                    self.next();
                    let rhs = self.product()?;
                    acc = field_add(&acc, &rhs.neg())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Qi> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    let rhs = self.atom()?;
                    acc = field_mul(&acc, &rhs)?;
                }
                Some(Token::Slash) => {
                    self.next();
                    let rhs = self.atom()?;
                    acc = field_mul(&acc, &rhs.recip()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<Qi> {
        match self.next() {
            Some(Token::Int(n)) => Ok(Qi::from_integer(n)),
            Some(Token::Minus) => Ok(self.atom()?.neg()),
            Some(Token::Sqrt) => {
                self.expect(Token::LParen)?;
                let inner = self.sum()?;
                self.expect(Token::RParen)?;
                let n = inner
                    .to_rational()
                    .filter(|r| r.is_integer())
                    .map(|r| r.to_integer())
                    .ok_or_else(|| Error::Parse("sqrt expects an integer argument".into()))?;
                Qi::sqrt_of(n)
            }
            Some(Token::LParen) => {
                let inner = self.sum()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn field_add(x: &Qi, y: &Qi) -> Result<Qi> {
    if x.is_irrational() && y.is_irrational() && x.d != y.d {
        return Err(Error::Parse(
            "expression mixes two different radicands".into(),
        ));
    }
    let d = if x.is_irrational() {
        x.d.clone()
    } else {
        y.d.clone()
    };
    Qi::new(
        &x.a * &y.c + &y.a * &x.c,
        &x.b * &y.c + &y.b * &x.c,
        d,
        &x.c * &y.c,
    )
}

fn field_mul(x: &Qi, y: &Qi) -> Result<Qi> {
    if x.is_irrational() && y.is_irrational() && x.d != y.d {
        return Err(Error::Parse(
            "expression mixes two different radicands".into(),
        ));
    }
    let d = if x.is_irrational() {
        x.d.clone()
    } else {
        y.d.clone()
    };
    Qi::new(
        &x.a * &y.a + &x.b * &y.b * &d,
        &x.a * &y.b + &x.b * &y.a,
        d,
        &x.c * &y.c,
    )
}

/// Parses the value grammar: integers, `A/C`, `sqrt(D)`, and signed sums
/// such as `(11523+sqrt(15006))/9222`. Malformed text is a parse error;
/// well-formed text with impossible content (zero denominator, negative
/// radicand) keeps its domain error.
pub fn parse_value(s: &str) -> Result<QuadraticIrrational> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty value".into()));
    }
    let mut p = ValueParser { tokens, pos: 0 };
    let v = p.sum()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after value: {:?}",
            &p.tokens[p.pos..]
        )));
    }
    Ok(v)
}
