//! Continued fractions with an eventually periodic digit part.
//!
//! A value is written `[a0, a1, ...; (b1, ..., bl)]`: the bracketed prefix is
//! the preperiod, the parenthesized block repeats forever. Rationals have an
//! empty period. Canonical digit sequences have positive inner digits, a
//! minimal period in its unique rotation, and a last preperiod digit that
//! differs from the last period digit; `expand` only ever produces canonical
//! sequences, and `canonicalize` maps any well-formed sequence (inner zeros
//! allowed) onto the canonical one with the same value.
//!
//! A sequence can additionally carry a global minus sign, printed as a
//! leading `-`: `-[0;(1)]` is the negation of `[0;(1)]`. Some conjugation
//! cases produce their result in this presentation because the digits are
//! then a plain reversal-and-rotation of the input period; `canonicalize`
//! folds the sign into an ordinary leading-digit-negative sequence.
//!
//! Conjugation is implemented on digits. The rewrite depends on how the last
//! preperiod digit compares with the last period digit, and the period comes
//! back reversed and rotated; the scratch sequences it builds may contain
//! zeros, which the final canonicalization pass removes using the identities
//!   [.., c, 0, c', ..] = [.., c + c', ..]
//!   -[c0, c1, c2, ..]  = [-c0 - 1, 1, c1 - 1, c2, ..]

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{larger_quadratic_root, QuadraticIrrational};

/// Expansion stops with an error beyond this many digits; periods of honest
/// inputs in this crate's working range are far shorter.
const MAX_EXPANSION_STEPS: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContinuedFraction {
    neg: bool,
    pre: Vec<BigInt>,
    per: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Wraps raw digit sequences. Nothing is validated here; the operations
    /// check digit ranges and report `MalformedDigits` with a stream index.
    pub fn new(pre: Vec<BigInt>, per: Vec<BigInt>) -> Self {
        Self {
            neg: false,
            pre,
            per,
        }
    }

    /// The same digits under a global minus sign.
    pub fn negative_presentation(mut self) -> Self {
        self.neg = !self.neg;
        self
    }

    /// `-1` for a sequence carrying the global minus sign, `1` otherwise.
    pub fn global_sign(&self) -> i32 {
        if self.neg {
            -1
        } else {
            1
        }
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.pre
    }

    pub fn period(&self) -> &[BigInt] {
        &self.per
    }

    pub fn is_finite(&self) -> bool {
        self.per.is_empty()
    }

    pub fn is_purely_periodic(&self) -> bool {
        !self.neg && self.pre.is_empty() && !self.per.is_empty()
    }

    /// Periodic expansion of an exact value; finite for rationals. The digit
    /// loop stores each remainder state, and the first repeated state closes
    /// the period, which automatically yields the minimal preperiod, the
    /// minimal period, and the canonical rotation.
    pub fn expand(x: &QuadraticIrrational) -> Result<Self> {
        if let Some(r) = x.to_rational() {
            let mut digits = Vec::new();
            let mut num = r.numer().clone();
            let mut den = r.denom().clone();
            loop {
                let (q, rem) = num.div_mod_floor(&den);
                digits.push(q);
                if rem.is_zero() {
                    break;
                }
                num = den;
                den = rem;
            }
            return Ok(Self::new(digits, Vec::new()));
        }
        let mut digits: Vec<BigInt> = Vec::new();
        let mut seen: HashMap<QuadraticIrrational, usize> = HashMap::new();
        let mut state = x.clone();
        loop {
            if let Some(&start) = seen.get(&state) {
                let per = digits.split_off(start);
                return Ok(Self::new(digits, per));
            }
            if digits.len() >= MAX_EXPANSION_STEPS {
                return Err(Error::Precondition(format!(
                    "expansion of {x} did not cycle within {MAX_EXPANSION_STEPS} digits"
                )));
            }
            seen.insert(state.clone(), digits.len());
            let a = state.floor();
            state = state.recip_shift(&a)?;
            digits.push(a);
        }
    }

    /// Exact value of the digit sequence.
    ///
    /// Inner digits must be nonnegative; zeros are fine and are interpreted
    /// through the usual Mobius-matrix semantics, so `[2,3,0]` is `2`. A
    /// sequence whose tail degenerates (a period that folds to a rational,
    /// or a finite sequence ending in an infinite partial value) is reported
    /// as `MalformedDigits`.
    pub fn value(&self) -> Result<QuadraticIrrational> {
        let v = self.digits_value()?;
        Ok(if self.neg { v.neg() } else { v })
    }

    fn digits_value(&self) -> Result<QuadraticIrrational> {
        self.validate_digit_ranges()?;
        if self.per.is_empty() {
            let m = fold_digits(&self.pre);
            if m.q.is_zero() {
                return Err(Error::MalformedDigits(self.pre.len().saturating_sub(1)));
            }
            return QuadraticIrrational::new(m.p, BigInt::zero(), BigInt::zero(), m.q);
        }
        let head = fold_digits(&self.pre);
        let block = fold_digits(&self.per);
        // Tail t is the fixed point of the period's Mobius map:
        //   q t^2 + (q' - p) t - p' = 0,
        // and the expansion converges to the larger root.
        if block.q.is_zero() {
            return Err(Error::MalformedDigits(self.pre.len()));
        }
        let t = larger_quadratic_root(&block.q, &(&block.q1 - &block.p), &-&block.p1)?;
        if t.is_rational() {
            return Err(Error::MalformedDigits(self.pre.len()));
        }
        // x = (head.p * t + head.p1) / (head.q * t + head.q1), expanded over
        // the tail's own (A + B sqrt(D))/C parts and rationalized.
        let (ta, tb, td, tc) = (t.a(), t.b(), t.d(), t.c());
        let n0 = &head.p * ta + &head.p1 * tc;
        let n1 = &head.p * tb;
        let d0 = &head.q * ta + &head.q1 * tc;
        let d1 = &head.q * tb;
        let denom = &d0 * &d0 - &d1 * &d1 * td;
        debug_assert!(!denom.is_zero(), "denominator conjugate-rationalizes to zero");
        QuadraticIrrational::new(
            &n0 * &d0 - &n1 * &d1 * td,
            &n1 * &d0 - &n0 * &d1,
            td.clone(),
            denom,
        )
    }

    /// Canonical digit sequence with the same value: inner zeros merged,
    /// trailing `1` folded, period minimal and canonically rotated, global
    /// minus sign folded into the leading digit.
    pub fn canonicalize(&self) -> Result<Self> {
        Self::expand(&self.value()?)
    }

    /// Digits of `-x`, canonical.
    pub fn negate(&self) -> Result<Self> {
        if self.neg {
            return Self::new(self.pre.clone(), self.per.clone()).canonicalize();
        }
        let c = self.canonicalize()?;
        Self::from_raw_negation(&c)?.canonicalize()
    }

    fn from_raw_negation(c: &Self) -> Result<Self> {
        let one = BigInt::one();
        if c.per.is_empty() {
            if c.pre.len() == 1 {
                return Ok(Self::new(vec![-&c.pre[0]], Vec::new()));
            }
            let mut pre = vec![-&c.pre[0] - &one, one.clone(), &c.pre[1] - &one];
            pre.extend(c.pre[2..].iter().cloned());
            return Ok(Self::new(pre, Vec::new()));
        }
        let (pre, per) = if c.pre.is_empty() {
            // unroll one period digit so the rewrite has a second digit
            let mut p = c.per.clone();
            p.rotate_left(1);
            (vec![c.per[0].clone()], p)
        } else {
            (c.pre.clone(), c.per.clone())
        };
        if pre.len() == 1 {
            let mut p = per.clone();
            p.rotate_left(1);
            Ok(Self::new(
                vec![-&pre[0] - &one, one.clone(), &per[0] - &one],
                p,
            ))
        } else {
            let mut head = vec![-&pre[0] - &one, one.clone(), &pre[1] - &one];
            head.extend(pre[2..].iter().cloned());
            Ok(Self::new(head, per))
        }
    }

    /// Digits of the field conjugate, derived from the digits alone.
    /// Rationals are their own conjugate. Two of the rewrite cases (a purely
    /// periodic input, and a one-digit preperiod below the last period digit)
    /// return their result under a global minus sign, since the conjugate is
    /// negative there and the digits stay a clean reversal of the period;
    /// `canonicalize` converts on demand.
    pub fn conjugate(&self) -> Result<Self> {
        if self.neg {
            // conj(-x) = -conj(x): conjugate the digit part, flip the sign
            let flipped = Self::new(self.pre.clone(), self.per.clone())
                .conjugate()?
                .negative_presentation();
            return Ok(if flipped.neg && flipped.per.is_empty() {
                // rationals are sign-canonicalized instead
                flipped.canonicalize()?
            } else {
                flipped
            });
        }
        let c = self.canonicalize()?;
        if c.per.is_empty() {
            return Ok(c);
        }
        let l = c.per.len();
        let bl = c.per[l - 1].clone();
        let one = BigInt::one();
        if c.pre.is_empty() {
            // purely periodic: conj = -[0, (b_l, ..., b_1)]
            let digits = Self::new(vec![BigInt::zero()], rev_rot(&c.per, 0));
            return Ok(digits.canonicalize()?.negative_presentation());
        }
        let k = c.pre.len() - 1;
        let ak = c.pre[k].clone();
        debug_assert!(ak != bl, "canonical sequences keep a_k != b_l");
        let raw = if k >= 1 {
            if ak < bl {
                let mut pre = c.pre[..k - 1].to_vec();
                pre.push(&c.pre[k - 1] - &one);
                pre.push(one.clone());
                pre.push(&bl - &ak - &one);
                Self::new(pre, rev_rot(&c.per, 1))
            } else {
                let bl1 = c.per[(l + l - 2) % l].clone(); // b_{l-1}, cyclically
                let mut pre = c.pre[..k].to_vec();
                pre.push(&ak - &bl - &one);
                pre.push(one.clone());
                pre.push(&bl1 - &one);
                Self::new(pre, rev_rot(&c.per, 2))
            }
        } else if ak < bl {
            // conj = -[b_l - a_0, (b_{l-1}, ..., b_1, b_l)]; the head consumes
            // b_l, so the reversed period continues one step further along
            let digits = Self::new(vec![&bl - &ak], rev_rot(&c.per, 1));
            return Ok(digits.canonicalize()?.negative_presentation());
        } else {
            let bl1 = c.per[(l + l - 2) % l].clone();
            Self::new(
                vec![&ak - &bl - &one, one.clone(), &bl1 - &one],
                rev_rot(&c.per, 2),
            )
        };
        raw.canonicalize()
    }

    /// For a purely periodic sequence, the purely periodic sequence with the
    /// reversed period; its value is `-1/conj(x)`. `None` otherwise.
    pub fn reversed_period(&self) -> Option<Self> {
        self.is_purely_periodic()
            .then(|| Self::new(Vec::new(), rev_rot(&self.per, 0)))
    }

    fn validate_digit_ranges(&self) -> Result<()> {
        if self.pre.is_empty() && self.per.is_empty() {
            return Err(Error::MalformedDigits(0));
        }
        for (i, d) in self.pre.iter().enumerate().skip(1) {
            if d.is_negative() {
                return Err(Error::MalformedDigits(i));
            }
        }
        for (i, d) in self.per.iter().enumerate() {
            // every period digit recurs at inner positions
            if d.is_negative() {
                return Err(Error::MalformedDigits(self.pre.len() + i));
            }
        }
        Ok(())
    }
}

/// Reverse the period and rotate the reversal left by `k`.
pub(crate) fn rev_rot(per: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = per.iter().rev().cloned().collect();
    let l = v.len();
    if l > 0 {
        v.rotate_left(k % l);
    }
    v
}

struct Fold {
    p: BigInt,
    p1: BigInt,
    q: BigInt,
    q1: BigInt,
}

/// Product of the digit matrices [[a,1],[1,0]]; columns are consecutive
/// convergents.
fn fold_digits(digits: &[BigInt]) -> Fold {
    let mut m = Fold {
        p: BigInt::one(),
        p1: BigInt::zero(),
        q: BigInt::zero(),
        q1: BigInt::one(),
    };
    for a in digits {
        let np = &m.p * a + &m.p1;
        let nq = &m.q * a + &m.q1;
        m.p1 = std::mem::replace(&mut m.p, np);
        m.q1 = std::mem::replace(&mut m.q, nq);
    }
    m
}

impl fmt::Display for ContinuedFraction {
    /// `[1,1,2]`, `[0,2,3;(2)]`, `[;(1)]`; a global minus sign prints as a
    /// leading `-` outside the brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ds: &[BigInt]| {
            ds.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        if self.neg {
            write!(f, "-")?;
        }
        write!(f, "[")?;
        write!(f, "{}", join(&self.pre))?;
        if !self.per.is_empty() {
            write!(f, ";({})", join(&self.per))?;
        }
        write!(f, "]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    /// Accepts `[a0,a1;(b1,b2)]` with optional whitespace, a comma in place
    /// of the semicolon, and an optional leading `-`, which is kept as the
    /// global sign of the presentation.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (negated, rest) = match compact.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, compact.as_str()),
        };
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse("continued fraction must be bracketed".into()))?;
        let (pre_str, per_str) = match inner.find('(') {
            Some(i) => {
                let per = inner[i..]
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse("unterminated period".into()))?;
                let head = inner[..i].trim_end_matches([',', ';']);
                (head, per)
            }
            None => (inner.trim_end_matches(';'), ""),
        };
        let parse_list = |part: &str| -> Result<Vec<BigInt>> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|tok| {
                    BigInt::parse_bytes(tok.as_bytes(), 10)
                        .ok_or_else(|| Error::Parse(format!("bad digit {tok:?}")))
                })
                .collect()
        };
        let cf = Self::new(parse_list(pre_str)?, parse_list(per_str)?);
        if cf.pre.is_empty() && cf.per.is_empty() {
            return Err(Error::Parse("empty continued fraction".into()));
        }
        Ok(if negated {
            cf.negative_presentation()
        } else {
            cf
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(pre: &[i64], per: &[i64]) -> ContinuedFraction {
        ContinuedFraction::new(
            pre.iter().map(|&d| BigInt::from(d)).collect(),
            per.iter().map(|&d| BigInt::from(d)).collect(),
        )
    }

    fn qi(a: i64, b: i64, d: i64, c: i64) -> QuadraticIrrational {
        QuadraticIrrational::new(a, b, d, c).unwrap()
    }

    #[test]
    fn expands_pinned_values() {
        assert_eq!(
            ContinuedFraction::expand(&qi(1, 1, 5, 2)).unwrap(),
            cf(&[], &[1])
        );
        assert_eq!(
            ContinuedFraction::expand(&qi(6, 1, 2, 17)).unwrap(),
            cf(&[0, 2, 3], &[2])
        );
        assert_eq!(
            ContinuedFraction::expand(&qi(6, -1, 2, 17)).unwrap(),
            cf(&[0, 3, 1], &[2])
        );
        assert_eq!(
            ContinuedFraction::expand(&qi(11523, 1, 15006, 9222)).unwrap(),
            cf(&[1, 3, 1, 4], &[7, 2, 3, 9])
        );
        assert_eq!(
            ContinuedFraction::expand(&qi(1, 1, 3, 1)).unwrap(),
            cf(&[], &[2, 1])
        );
        assert_eq!(
            ContinuedFraction::expand(&qi(5, 0, 0, 3)).unwrap(),
            cf(&[1, 1, 2], &[])
        );
        assert_eq!(
            ContinuedFraction::expand(&qi(355, 0, 0, 113)).unwrap(),
            cf(&[3, 7, 16], &[])
        );
    }

    #[test]
    fn value_inverts_expand() {
        for x in [
            qi(1, 1, 5, 2),
            qi(6, 1, 2, 17),
            qi(6, -1, 2, 17),
            qi(11523, -1, 15006, 9222),
            qi(0, -1, 2, 1),
            qi(-8, 3, 7, 5),
            qi(355, 0, 0, 113),
            qi(-7, 0, 0, 3),
        ] {
            let e = ContinuedFraction::expand(&x).unwrap();
            assert_eq!(e.value().unwrap(), x, "value of {e}");
        }
    }

    #[test]
    fn zero_rules_via_canonicalize() {
        assert_eq!(cf(&[1, 0, 3], &[]).canonicalize().unwrap(), cf(&[4], &[]));
        assert_eq!(
            cf(&[1, 3, 0, 0, 4], &[]).canonicalize().unwrap(),
            cf(&[1, 3, 4], &[])
        );
        assert_eq!(cf(&[2, 3, 0], &[]).canonicalize().unwrap(), cf(&[2], &[]));
        // trailing 1 folds into the digit before it
        assert_eq!(cf(&[3, 1], &[]).canonicalize().unwrap(), cf(&[4], &[]));
        // doubled period collapses, and the rotation rule picks the
        // representative with a_k != b_l
        assert_eq!(
            cf(&[1], &[2, 2]).canonicalize().unwrap(),
            cf(&[1], &[2])
        );
        assert_eq!(
            cf(&[1, 2], &[3, 2]).canonicalize().unwrap(),
            cf(&[1], &[2, 3])
        );
    }

    #[test]
    fn malformed_sequences_are_rejected() {
        assert!(matches!(
            cf(&[1, -2, 3], &[]).value(),
            Err(Error::MalformedDigits(1))
        ));
        assert!(matches!(
            cf(&[1, 0], &[]).value(),
            Err(Error::MalformedDigits(_))
        ));
        // period that folds to a rational tail
        assert!(matches!(
            cf(&[1], &[0]).value(),
            Err(Error::MalformedDigits(_))
        ));
        assert!(matches!(
            cf(&[2], &[2, 0]).value(),
            Err(Error::MalformedDigits(_))
        ));
        assert!(matches!(cf(&[], &[]).value(), Err(Error::MalformedDigits(0))));
    }

    #[test]
    fn negation_identity() {
        let e = ContinuedFraction::expand(&qi(0, 1, 2, 1)).unwrap();
        assert_eq!(e, cf(&[1], &[2]));
        assert_eq!(e.negate().unwrap(), cf(&[-2, 1, 1], &[2]));
        // negation is an involution on values
        let back = e.negate().unwrap().negate().unwrap();
        assert_eq!(back, e);
        assert_eq!(
            cf(&[1, 1, 2], &[]).negate().unwrap().value().unwrap(),
            qi(-5, 0, 0, 3)
        );
    }

    #[test]
    fn conjugation_matches_field_conjugate() {
        // one example per rewrite case, digits pinned by hand
        let sqrt2 = ContinuedFraction::expand(&qi(0, 1, 2, 1)).unwrap();
        let minus_sqrt2 = sqrt2.conjugate().unwrap();
        assert_eq!(minus_sqrt2, cf(&[1], &[2]).negative_presentation());
        assert_eq!(minus_sqrt2.canonicalize().unwrap(), cf(&[-2, 1, 1], &[2]));

        let two_plus = ContinuedFraction::expand(&qi(2, 1, 2, 1)).unwrap();
        assert_eq!(two_plus, cf(&[3], &[2]));
        assert_eq!(two_plus.conjugate().unwrap(), cf(&[0, 1, 1], &[2]));

        let golden = ContinuedFraction::expand(&qi(1, 1, 5, 2)).unwrap();
        let golden_conj = golden.conjugate().unwrap();
        assert_eq!(golden_conj, cf(&[0], &[1]).negative_presentation());
        assert_eq!(golden_conj.to_string(), "-[0;(1)]");
        assert_eq!(
            golden_conj.canonicalize().unwrap(),
            ContinuedFraction::expand(&qi(1, -1, 5, 2)).unwrap()
        );

        let deep = ContinuedFraction::expand(&qi(11523, 1, 15006, 9222)).unwrap();
        assert_eq!(deep.conjugate().unwrap(), cf(&[1, 4, 4], &[3, 2, 7, 9]));

        for x in [
            qi(11523, 1, 15006, 9222),
            qi(6, 1, 2, 17),
            qi(1, 1, 3, 1),
            qi(-3, 2, 7, 5),
            qi(9, -2, 13, 4),
        ] {
            let via_digits = ContinuedFraction::expand(&x).unwrap().conjugate().unwrap();
            let via_field = ContinuedFraction::expand(&x.conjugate()).unwrap();
            assert_eq!(
                via_digits.canonicalize().unwrap(),
                via_field,
                "conjugate digits of {x}"
            );
            assert_eq!(via_digits.value().unwrap(), x.conjugate());
        }
    }

    #[test]
    fn conjugation_is_an_involution_across_presentations() {
        for x in [
            qi(0, 1, 2, 1),
            qi(1, 1, 5, 2),
            qi(1, 1, 3, 1),
            qi(6, 1, 2, 17),
            qi(-3, 2, 7, 5),
        ] {
            let e = ContinuedFraction::expand(&x).unwrap();
            let twice = e.conjugate().unwrap().conjugate().unwrap();
            assert_eq!(twice.canonicalize().unwrap(), e, "double conjugate of {x}");
        }
    }

    #[test]
    fn reversed_period_is_minus_inverse_conjugate() {
        let g = ContinuedFraction::expand(&qi(1, 1, 3, 1)).unwrap();
        assert_eq!(g, cf(&[], &[2, 1]));
        let rev = g.reversed_period().unwrap();
        assert_eq!(rev, cf(&[], &[1, 2]));
        let expect = qi(1, 1, 3, 2); // -1/(1 - sqrt(3))
        assert_eq!(rev.value().unwrap(), expect);
        assert!(ContinuedFraction::expand(&qi(6, 1, 2, 17))
            .unwrap()
            .reversed_period()
            .is_none());
    }

    #[test]
    fn parse_and_display() {
        for text in [
            "[1,3,1,4;(7,2,3,9)]",
            "[;(1)]",
            "[3,7,16]",
            "[-2,1,1;(2)]",
            "-[0;(1)]",
        ] {
            let c: ContinuedFraction = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
        let spaced: ContinuedFraction = " [ 0 , 2 , 3 ; ( 2 ) ] ".parse().unwrap();
        assert_eq!(spaced, cf(&[0, 2, 3], &[2]));
        // comma in place of the semicolon is tolerated on input
        let legacy: ContinuedFraction = "[0,2,3,(2)]".parse().unwrap();
        assert_eq!(legacy, spaced);
        let negated: ContinuedFraction = "-[1;(2)]".parse().unwrap();
        assert_eq!(negated, cf(&[1], &[2]).negative_presentation());
        assert_eq!(negated.canonicalize().unwrap(), cf(&[-2, 1, 1], &[2]));
        assert!("1,2,3".parse::<ContinuedFraction>().is_err());
        assert!("[1,(2]".parse::<ContinuedFraction>().is_err());
        assert!("[]".parse::<ContinuedFraction>().is_err());
    }
}
