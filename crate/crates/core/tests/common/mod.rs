//! Shared oracles for the integration suites.
//!
//! Everything here recomputes reference answers from first principles with
//! `num-bigint` only, so the checks do not lean on the code under test:
//! floors come from integer square roots, digit streams from interval
//! arithmetic over scaled integers, and walks from direct evaluation of the
//! form on matrix columns.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use topograph::{ContinuedFraction, QuadraticIrrational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Random irrational `(A + B sqrt(D)) / C` with `|A|, |C| <= bound_ac`,
/// `2 <= D <= bound_d` nonsquare, `1 <= |B| <= bound_b`.
pub fn random_irrational(
    rng: &mut ChaCha8Rng,
    bound_ac: i64,
    bound_b: i64,
    bound_d: i64,
) -> QuadraticIrrational {
    loop {
        let a = rng.gen_range(-bound_ac..=bound_ac);
        let b = rng.gen_range(1..=bound_b) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let d = rng.gen_range(2..=bound_d);
        let c = rng.gen_range(1..=bound_ac);
        if is_square(&big(d)) {
            continue;
        }
        let x = QuadraticIrrational::new(a, b, d, c).unwrap();
        if x.is_irrational() {
            return x;
        }
    }
}

/// Floor of `(A + B sqrt(D)) / C` computed from scratch with an integer
/// square root: with `s = isqrt(B^2 D)` the surd lies strictly between
/// consecutive integers, so the floor of the numerator is exact and the
/// division floors through.
pub fn floor_oracle(x: &QuadraticIrrational) -> BigInt {
    let (a, b, d, c) = (x.a(), x.b(), x.d(), x.c());
    assert!(c.is_positive(), "canonical values keep C > 0");
    let num_floor = if b.is_zero() {
        a.clone()
    } else {
        let s = (b * b * d).sqrt();
        if b.is_positive() {
            a + &s
        } else {
            a - &s - BigInt::one()
        }
    };
    num_floor.div_floor(c)
}

/// An exact rational with an explicit denominator, kept raw on purpose.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rat {
    pub num: BigInt,
    pub den: BigInt,
}

impl Rat {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(den.is_positive());
        Self { num, den }
    }

    pub fn cmp_rat(&self, other: &Rat) -> std::cmp::Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

/// Lower and upper rational bounds around `x` that differ by `10^-digits`.
pub fn decimal_bounds(x: &QuadraticIrrational, digits: u32) -> (Rat, Rat) {
    let (a, b, d, c) = (x.a(), x.b(), x.d(), x.c());
    let scale = BigInt::from(10u8).pow(digits);
    let den = c * &scale;
    if b.is_zero() {
        let n = a * &scale;
        return (Rat::new(n.clone(), den.clone()), Rat::new(n, den));
    }
    // s <= |B| sqrt(D) * 10^digits < s + 1, strict since B^2 D 10^2d is
    // never a perfect square here (D nonsquare, the rest squares)
    let s = (b * b * d * &scale * &scale).sqrt();
    let (lo_num, hi_num) = if b.is_positive() {
        (a * &scale + &s, a * &scale + &s + BigInt::one())
    } else {
        (a * &scale - &s - BigInt::one(), a * &scale - &s)
    };
    (Rat::new(lo_num, den.clone()), Rat::new(hi_num, den))
}

/// Continued-fraction digits of a nonnegative-denominator rational by the
/// Euclidean algorithm, cut off after `max` digits.
pub fn euclid_digits(mut num: BigInt, mut den: BigInt, max: usize) -> Vec<BigInt> {
    assert!(den.is_positive());
    let mut out = Vec::new();
    while out.len() < max {
        let (q, r) = num.div_mod_floor(&den);
        out.push(q);
        if r.is_zero() {
            break;
        }
        num = den;
        den = r;
    }
    out
}

/// Leading digits of the expansion of `x`, certified by interval agreement:
/// both endpoint rationals of a `10^-digits` bracket are expanded and the
/// common strict prefix is kept (minus the final position of the shorter
/// side, whose last quotient is unstable).
pub fn certified_cf_prefix(x: &QuadraticIrrational, digits: u32, max: usize) -> Vec<BigInt> {
    let (lo, hi) = decimal_bounds(x, digits);
    let a = euclid_digits(lo.num, lo.den, max + 2);
    let b = euclid_digits(hi.num, hi.den, max + 2);
    let keep = a.len().min(b.len()).saturating_sub(1).min(max);
    let mut out = Vec::new();
    for i in 0..keep {
        if a[i] != b[i] {
            break;
        }
        out.push(a[i].clone());
    }
    out
}

/// First `n` digits of an eventually periodic sequence, unrolled.
pub fn stream_prefix(cf: &ContinuedFraction, n: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = cf.preperiod().to_vec();
    if cf.period().is_empty() {
        out.truncate(n);
        return out;
    }
    while out.len() < n {
        let i = (out.len() - cf.preperiod().len()) % cf.period().len();
        out.push(cf.period()[i].clone());
    }
    out
}

/// Direct evaluation `a x^2 + h x y + b y^2`.
pub fn eval_form(a: &BigInt, h: &BigInt, b: &BigInt, x: &BigInt, y: &BigInt) -> BigInt {
    a * x * x + h * x * y + b * y * y
}

/// Test-side 2x2 integer matrices, column-major pairs ((p, r), (q, s)).
pub type OracleMat = [[BigInt; 2]; 2];

pub fn mat_identity() -> OracleMat {
    [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ]
}

pub fn mat_left() -> OracleMat {
    [
        [BigInt::one(), BigInt::one()],
        [BigInt::zero(), BigInt::one()],
    ]
}

pub fn mat_right() -> OracleMat {
    [
        [BigInt::one(), BigInt::zero()],
        [BigInt::one(), BigInt::one()],
    ]
}

pub fn mat_mul(a: &OracleMat, b: &OracleMat) -> OracleMat {
    let mut out = [
        [BigInt::zero(), BigInt::zero()],
        [BigInt::zero(), BigInt::zero()],
    ];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        }
    }
    out
}

/// Natural log of a positive big integer through its decimal length; the
/// relative error is far below any tolerance used in the suites.
pub fn ln_big(x: &BigInt) -> f64 {
    assert!(x.is_positive());
    let s = x.to_string();
    let head: f64 = s[..s.len().min(15)].parse().unwrap();
    head.ln() + (s.len().saturating_sub(15) as f64) * std::f64::consts::LN_10
}

/// Rotation-insensitive cycle comparison.
pub fn cycles_equal<T: PartialEq + Clone>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|k| (0..a.len()).all(|i| a[(i + k) % a.len()] == b[i]))
}
