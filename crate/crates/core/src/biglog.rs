//! Natural logarithms of huge integers in fixed-point arithmetic.
//!
//! Growth statistics need `ln` of values with hundreds of thousands of
//! digits, far outside `f64` range. Everything here works on scaled integers
//! `round(x * 2^FRAC_BITS)`; conversion to `f64` or decimal text happens only
//! after ratios are formed, so magnitude never leaves integer land.
//!
//! Accuracy: the Taylor tail and the per-operation floor losses keep the
//! absolute error of any published ratio below `1e-45`, comfortably inside
//! the `1e-12` tolerance quoted in the public API.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::QuadraticIrrational;

/// Binary fraction bits carried by every fixed-point value in this module.
pub const FRAC_BITS: u32 = 192;

/// `ln(x) * 2^FRAC_BITS` for an integer `x >= 1`.
///
/// Splits `x = m * 2^k` with `m` in `[1, 2)` and evaluates
/// `ln m = 2 atanh((m-1)/(m+1))` by series; the argument is below `1/3`, so
/// around sixty terms reach full precision.
pub fn ln_fixed_int(x: &BigInt) -> BigInt {
    assert!(
        x.sign() == Sign::Plus,
        "logarithm of a non-positive integer"
    );
    let k = x.bits() - 1;
    let mantissa = (x << FRAC_BITS) >> k;
    ln_mantissa(&mantissa) + BigInt::from(k) * ln2_fixed()
}

/// `ln(x) * 2^FRAC_BITS` for an exact value `x >= 1`.
pub fn ln_fixed_value(x: &QuadraticIrrational) -> Result<BigInt> {
    let one = QuadraticIrrational::from_integer(1);
    if *x < one {
        return Err(Error::Precondition(format!(
            "logarithm domain here is x >= 1, got {x}"
        )));
    }
    // x is captured to FRAC_BITS first; the capture error is below 2^-192
    // and ln is 1-Lipschitz on [1, inf), so nothing of it survives rounding.
    let fixed = x.fixed_point(FRAC_BITS);
    Ok(ln_fixed_int(&fixed) - BigInt::from(FRAC_BITS) * ln2_fixed())
}

/// Fixed-point quotient `num/den`, rounded to nearest.
pub fn fixed_ratio(num: &BigInt, den: &BigInt) -> BigInt {
    assert!(!den.is_zero());
    let (num, den) = if den.sign() == Sign::Minus {
        (-num, -den)
    } else {
        (num.clone(), den.clone())
    };
    ((num << FRAC_BITS) + (&den >> 1u8)).div_floor(&den)
}

/// Fixed-point quotient by a plain integer (used for `ln(rho) / m`).
pub fn fixed_div_int(v: &BigInt, n: &BigInt) -> BigInt {
    assert!(n.sign() == Sign::Plus);
    (v + (n >> 1u8)).div_floor(n)
}

pub fn fixed_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN) * (2f64).powi(-(FRAC_BITS as i32))
}

/// Decimal rendering of a fixed-point value with `digits` fractional digits.
pub fn fixed_to_decimal(v: &BigInt, digits: usize) -> String {
    let ten_d = BigInt::from(10u8).pow(digits as u32);
    let scaled = (v * &ten_d + (BigInt::one() << (FRAC_BITS - 1))) >> FRAC_BITS;
    if digits == 0 {
        return scaled.to_string();
    }
    let (mut int_part, mut frac_part) = scaled.div_mod_floor(&ten_d);
    if int_part.sign() == Sign::Minus && !frac_part.is_zero() {
        int_part += 1u8;
        frac_part = ten_d - frac_part;
    }
    let sign = if v.is_negative() && int_part.is_zero() && !frac_part.is_zero() {
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

/// `ln(num)/ln(den)` for integers `num >= 1`, `den >= 2`, as a fixed-point
/// value; `None` when either side leaves the domain.
pub fn log_ratio_fixed(num: &BigInt, den: &BigInt) -> Option<BigInt> {
    if num < &BigInt::one() || den < &BigInt::from(2u8) {
        return None;
    }
    Some(fixed_ratio(&ln_fixed_int(num), &ln_fixed_int(den)))
}

fn ln2_fixed() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| {
        let z = (BigInt::one() << FRAC_BITS) / BigInt::from(3u8);
        atanh_fixed(&z) << 1u8
    })
}

/// `ln(m/2^FRAC_BITS) * 2^FRAC_BITS` for a mantissa in `[2^F, 2^{F+1})`.
fn ln_mantissa(m: &BigInt) -> BigInt {
    let one = BigInt::one() << FRAC_BITS;
    let num = (m - &one) << FRAC_BITS;
    let den = m + &one;
    let z = num / den;
    atanh_fixed(&z) << 1u8
}

/// Series for `atanh(z)` with `0 <= z <= 2^F/3`; each term shrinks by at
/// least a factor of nine, so the loop stops on its own within ~70 rounds.
fn atanh_fixed(z: &BigInt) -> BigInt {
    let z2 = (z * z) >> FRAC_BITS;
    let mut power = z.clone();
    let mut acc = z.clone();
    let mut odd = 3u32;
    loop {
        power = (&power * &z2) >> FRAC_BITS;
        if power.is_zero() {
            return acc;
        }
        acc += &power / BigInt::from(odd);
        odd += 2;
    }
}
