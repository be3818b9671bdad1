//! Integer binary quadratic forms `Q(x,y) = a x^2 + h xy + b y^2` and their
//! discriminant classification.
//!
//! The five classes drive everything downstream: definite forms have a
//! single extremum well, a zero discriminant degenerates, indefinite forms
//! with nonsquare discriminant carry a river, and a square discriminant
//! (isotropic case) trades the river for lakes of zero regions.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cursor::{Mat2, SuperbaseTriple, TopographCursor};
use crate::error::{Error, Result};
use crate::exact::QuadraticIrrational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticForm {
    a: BigInt,
    h: BigInt,
    b: BigInt,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FormClass {
    PositiveDefinite,
    NegativeDefinite,
    Semidefinite,
    IndefiniteAnisotropic,
    IndefiniteIsotropic,
}

impl FormClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FormClass::PositiveDefinite => "positive definite",
            FormClass::NegativeDefinite => "negative definite",
            FormClass::Semidefinite => "semidefinite",
            FormClass::IndefiniteAnisotropic => "indefinite anisotropic",
            FormClass::IndefiniteIsotropic => "indefinite isotropic",
        }
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A projective slope where the form vanishes or, for anisotropic forms,
/// the slope its small values cluster around.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FormRoot {
    Finite(QuadraticIrrational),
    Infinite,
}

impl fmt::Display for FormRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormRoot::Finite(x) => write!(f, "{x}"),
            FormRoot::Infinite => f.write_str("inf"),
        }
    }
}

impl QuadraticForm {
    pub fn new(a: impl Into<BigInt>, h: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            h: h.into(),
            b: b.into(),
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn h(&self) -> &BigInt {
        &self.h
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn coeffs(&self) -> (BigInt, BigInt, BigInt) {
        (self.a.clone(), self.h.clone(), self.b.clone())
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.h * x * y + &self.b * y * y
    }

    pub fn discriminant(&self) -> BigInt {
        &self.h * &self.h - BigInt::from(4u8) * &self.a * &self.b
    }

    pub fn classify(&self) -> FormClass {
        let d = self.discriminant();
        match d.sign() {
            Sign::Minus => {
                // ab > h^2/4 >= 0 here, so a is nonzero and carries the sign
                if self.a.sign() == Sign::Plus {
                    FormClass::PositiveDefinite
                } else {
                    FormClass::NegativeDefinite
                }
            }
            Sign::NoSign => FormClass::Semidefinite,
            Sign::Plus => {
                let s = d.sqrt();
                if &s * &s == d {
                    FormClass::IndefiniteIsotropic
                } else {
                    FormClass::IndefiniteAnisotropic
                }
            }
        }
    }

    /// Cursor on the root edge of this form's topograph.
    pub fn cursor(&self) -> TopographCursor {
        TopographCursor::new(self.a.clone(), self.h.clone(), self.b.clone())
    }

    /// Values around the root vertex: `(Q(1,0), Q(0,1), Q(1,1))`.
    pub fn root_triple(&self) -> SuperbaseTriple {
        SuperbaseTriple::new(
            self.a.clone(),
            self.b.clone(),
            &self.a + &self.h + &self.b,
        )
    }

    /// Form whose root triple is the given vertex.
    pub fn from_triple(t: &SuperbaseTriple) -> Self {
        Self {
            a: t.a.clone(),
            h: &t.c - &t.a - &t.b,
            b: t.b.clone(),
        }
    }

    /// Coefficients of the substituted form `Q(A v)` (any integer matrix,
    /// not only unimodular ones).
    pub fn transform(&self, m: &Mat2) -> Self {
        let (p, r) = (&m.m[0][0], &m.m[0][1]);
        let (q, s) = (&m.m[1][0], &m.m[1][1]);
        let a = self.eval(p, q);
        let b = self.eval(r, s);
        let h = BigInt::from(2u8) * &self.a * p * r
            + &self.h * (p * s + q * r)
            + BigInt::from(2u8) * &self.b * q * s;
        Self { a, h, b }
    }

    /// The two projective slopes `x/y` annihilating (for `D` a square) or
    /// bisecting (otherwise) the form: the roots of `a t^2 + h t + b`, the
    /// dominant (larger) one first. Complex roots are refused.
    pub fn roots(&self) -> Result<(FormRoot, FormRoot)> {
        let d = self.discriminant();
        if d.sign() == Sign::Minus {
            return Err(Error::NegativeRadicand(d));
        }
        if !self.a.is_zero() {
            // dividing by a negative 2a reverses the branch order
            let sign = BigInt::from(if self.a.sign() == Sign::Plus { 1 } else { -1 });
            let dominant = QuadraticIrrational::new(
                -&self.h,
                sign.clone(),
                d.clone(),
                BigInt::from(2u8) * &self.a,
            )?;
            let other = QuadraticIrrational::new(
                -&self.h,
                -sign,
                d,
                BigInt::from(2u8) * &self.a,
            )?;
            return Ok((FormRoot::Finite(dominant), FormRoot::Finite(other)));
        }
        if !self.h.is_zero() {
            // a = 0: one slope escapes to infinity, the other is -b/h
            let finite = QuadraticIrrational::new(
                -&self.b,
                BigInt::zero(),
                BigInt::zero(),
                self.h.clone(),
            )?;
            return Ok((FormRoot::Infinite, FormRoot::Finite(finite)));
        }
        Ok((FormRoot::Infinite, FormRoot::Infinite))
    }

    /// Purely periodic slope criterion from the root vertex alone: with the
    /// triple `(a, b, c)`, the `+sqrt` root has a purely periodic expansion
    /// exactly when `ab < 0`, `ac < 0` and `a(2a + 2b - c) > 0`.
    pub fn is_galois(&self) -> bool {
        let t = self.root_triple();
        let (a, b, c) = (&t.a, &t.b, &t.c);
        (a * b).sign() == Sign::Minus
            && (a * c).sign() == Sign::Minus
            && (a * (BigInt::from(2u8) * (a + b) - c)).sign() == Sign::Plus
    }

    /// Primitive integer vectors (up to sign) on which the form vanishes.
    /// Two for an isotropic form, one for a nonzero semidefinite form.
    pub fn zero_directions(&self) -> Result<Vec<(BigInt, BigInt)>> {
        match self.classify() {
            FormClass::IndefiniteIsotropic => {
                let s = self.discriminant().sqrt();
                if self.a.is_zero() {
                    let mut out = vec![(BigInt::one(), BigInt::zero())];
                    out.push(primitive_slope(&-&self.b, &self.h));
                    Ok(out)
                } else {
                    // dominant root's direction first, matching `roots`
                    let s = if self.a.sign() == Sign::Plus { s } else { -s };
                    let plus = primitive_slope(&(-&self.h + &s), &(BigInt::from(2u8) * &self.a));
                    let minus = primitive_slope(&(-&self.h - &s), &(BigInt::from(2u8) * &self.a));
                    Ok(vec![plus, minus])
                }
            }
            FormClass::Semidefinite => {
                if self.a.is_zero() && self.h.is_zero() && self.b.is_zero() {
                    return Err(Error::Precondition(
                        "the zero form vanishes everywhere".into(),
                    ));
                }
                if self.a.is_zero() && self.h.is_zero() {
                    return Ok(vec![(BigInt::one(), BigInt::zero())]);
                }
                // double root -h/(2a); h = 0 with a = 0 was handled above
                Ok(vec![primitive_slope(
                    &-&self.h,
                    &(BigInt::from(2u8) * &self.a),
                )])
            }
            other => Err(Error::WrongClass {
                expected: "an isotropic or semidefinite form",
                found: other.as_str(),
            }),
        }
    }
}

/// Reduces the slope `p/q` to a primitive vector `(x, y)` with `y >= 0`
/// (and `x > 0` when `y = 0`).
fn primitive_slope(p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(!q.is_zero());
    let g = p.gcd(q);
    let (mut x, mut y) = (p / &g, q / &g);
    if y.sign() == Sign::Minus || (y.is_zero() && x.sign() == Sign::Minus) {
        x = -x;
        y = -y;
    }
    (x, y)
}

impl fmt::Display for QuadraticForm {
    /// Polynomial rendering such as `17x^2-12xy+2y^2`; the zero form is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut push_term = |coef: &BigInt, var: &str| {
            if coef.is_zero() {
                return;
            }
            if coef.sign() == Sign::Plus && !out.is_empty() {
                out.push('+');
            }
            if coef.is_one() {
                out.push_str(var);
            } else if *coef == BigInt::from(-1) {
                out.push('-');
                out.push_str(var);
            } else {
                out.push_str(&coef.to_string());
                out.push_str(var);
            }
        };
        push_term(&self.a, "x^2");
        push_term(&self.h, "xy");
        push_term(&self.b, "y^2");
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl FromStr for QuadraticForm {
    type Err = Error;

    /// Parses a coefficient triple `a,h,b` or polynomial text such as
    /// `x^2-2*x*y-2*y^2` (the `*` are optional, `yx` counts as `xy`).
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('x') || s.contains('y') {
            return parse_polynomial(s);
        }
        if s.trim() == "0" {
            return Ok(Self::new(0, 0, 0));
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "a form is a coefficient triple a,h,b or a polynomial in x,y; found {s:?}"
            )));
        }
        let nums: Vec<BigInt> = parts
            .iter()
            .map(|tok| {
                BigInt::parse_bytes(tok.as_bytes(), 10)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient {tok:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(Self::new(nums[0].clone(), nums[1].clone(), nums[2].clone()))
    }
}

fn parse_polynomial(s: &str) -> Result<QuadraticForm> {
    let compact: String = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*')
        .collect();
    let mut terms: Vec<String> = Vec::new();
    for (i, ch) in compact.char_indices() {
        if terms.is_empty() || ((ch == '+' || ch == '-') && i > 0) {
            terms.push(String::new());
        }
        terms.last_mut().unwrap().push(ch);
    }
    let mut a = BigInt::zero();
    let mut h = BigInt::zero();
    let mut b = BigInt::zero();
    for term in &terms {
        let (slot, head) = if let Some(r) = term.strip_suffix("x^2") {
            (&mut a, r)
        } else if let Some(r) = term.strip_suffix("y^2") {
            (&mut b, r)
        } else if let Some(r) = term.strip_suffix("xy").or_else(|| term.strip_suffix("yx")) {
            (&mut h, r)
        } else {
            return Err(Error::Parse(format!(
                "term {term:?} is not a multiple of x^2, xy, or y^2"
            )));
        };
        let coef = match head {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            _ => BigInt::parse_bytes(head.as_bytes(), 10)
                .ok_or_else(|| Error::Parse(format!("bad coefficient in term {term:?}")))?,
        };
        *slot += coef;
    }
    Ok(QuadraticForm::new(a, h, b))
}
