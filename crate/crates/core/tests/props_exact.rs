//! Property checks for the exact value type: canonicalization, ordering,
//! floors, conjugation, and the text grammar, validated against integer
//! square-root oracles and 50-digit interval arithmetic.

mod common;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use common::{decimal_bounds, floor_oracle, random_irrational, rng, Rat};
use topograph::{parse_value, Error, QuadraticIrrational};

fn qi(a: i64, b: i64, d: i64, c: i64) -> QuadraticIrrational {
    QuadraticIrrational::new(a, b, d, c).unwrap()
}

#[test]
fn normalization_is_idempotent_and_folds_squares() {
    assert_eq!(qi(12, 2, 2, 34), qi(6, 1, 2, 17));
    // square factors of the radicand move into B
    assert_eq!(qi(0, 1, 8, 1), qi(0, 2, 2, 1));
    assert_eq!(qi(0, 1, 12, 2), qi(0, 1, 3, 1));
    // perfect-square radicand collapses to a rational
    let r = qi(3, 1, 4, 2);
    assert!(r.is_rational());
    assert_eq!(r, qi(5, 0, 0, 2));
    // negative C folds into the numerator
    assert_eq!(
        QuadraticIrrational::new(3, 1, 2, -5).unwrap(),
        qi(-3, -1, 2, 5)
    );
    let mut g = rng(11);
    for _ in 0..500 {
        let x = random_irrational(&mut g, 200, 30, 500);
        let again = QuadraticIrrational::new(
            x.a().clone(),
            x.b().clone(),
            x.d().clone(),
            x.c().clone(),
        )
        .unwrap();
        assert_eq!(again, x);
        assert!(x.c().is_positive());
        assert_eq!(
            x.a().gcd(x.b()).gcd(x.c()),
            BigInt::one(),
            "entries of {x} share a factor"
        );
    }
}

#[test]
fn constructor_rejects_bad_domains() {
    assert!(matches!(
        QuadraticIrrational::new(1, 1, 2, 0),
        Err(Error::DivisionByZero)
    ));
    assert!(matches!(
        QuadraticIrrational::new(1, 1, -2, 3),
        Err(Error::NegativeRadicand(_))
    ));
}

#[test]
fn conjugation_is_an_involution_fixing_rationals() {
    let mut g = rng(12);
    for _ in 0..500 {
        let x = random_irrational(&mut g, 200, 30, 500);
        let c = x.conjugate();
        assert_ne!(c, x, "irrational values move");
        assert_eq!(c.conjugate(), x);
        // conjugation flips only the sign of the surd part
        assert_eq!(c.a(), x.a());
        assert_eq!(c.b(), &-x.b());
    }
    let r = qi(5, 0, 0, 2);
    assert_eq!(r.conjugate(), r);
}

#[test]
fn floors_sit_under_their_value() {
    // 1000 samples in the documented range, checked two ways: against the
    // independent integer-sqrt oracle and through exact comparison
    let mut g = rng(13);
    for _ in 0..1000 {
        let x = random_irrational(&mut g, 10_000, 40, 10_000);
        let f = x.floor();
        assert_eq!(f, floor_oracle(&x), "oracle floor of {x}");
        let fv = QuadraticIrrational::new(f.clone(), BigInt::zero(), BigInt::zero(), BigInt::one())
            .unwrap();
        let next = QuadraticIrrational::new(
            f + BigInt::one(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::one(),
        )
        .unwrap();
        assert!(fv <= x && x < next, "floor bracket of {x}");
    }
    assert_eq!(qi(6, 1, 2, 17).floor(), BigInt::zero());
    assert_eq!(qi(1, 1, 5, 2).floor(), BigInt::one());
    assert_eq!(qi(0, -1, 2, 1).floor(), BigInt::from(-2));
}

#[test]
fn comparison_agrees_with_interval_arithmetic() {
    // pairs from the same sampler; 50 fractional digits separate any two
    // distinct values in this range
    let mut g = rng(14);
    for _ in 0..1000 {
        let x = random_irrational(&mut g, 10_000, 40, 10_000);
        let y = if g.gen_bool(0.1) {
            x.clone()
        } else {
            random_irrational(&mut g, 10_000, 40, 10_000)
        };
        let got = x.cmp(&y);
        if x == y {
            assert_eq!(got, Ordering::Equal);
            continue;
        }
        let (xl, xh) = decimal_bounds(&x, 50);
        let (yl, yh) = decimal_bounds(&y, 50);
        if xh.cmp_rat(&yl) == Ordering::Less {
            assert_eq!(got, Ordering::Less, "{x} vs {y}");
        } else if yh.cmp_rat(&xl) == Ordering::Less {
            assert_eq!(got, Ordering::Greater, "{x} vs {y}");
        } else {
            panic!("distinct values {x}, {y} collide at 50 digits");
        }
    }
}

#[test]
fn recip_shift_is_the_digit_step() {
    let phi = qi(1, 1, 5, 2);
    assert_eq!(phi.recip_shift(&BigInt::one()).unwrap(), phi);
    assert_eq!(
        qi(6, 1, 2, 17).recip_shift(&BigInt::zero()).unwrap(),
        qi(6, -1, 2, 2)
    );
    assert_eq!(
        qi(5, 0, 0, 2).recip_shift(&BigInt::from(2)).unwrap(),
        qi(2, 0, 0, 1)
    );
    // x - n = 0 is refused
    let exact = qi(7, 0, 0, 1);
    assert!(matches!(
        exact.recip_shift(&BigInt::from(7)),
        Err(Error::DivisionByZero)
    ));
}

#[test]
fn decimal_printing_respects_the_bracket() {
    let mut g = rng(15);
    for _ in 0..200 {
        let x = random_irrational(&mut g, 200, 30, 500);
        let printed = x.to_decimal(12);
        // parse "d.ddd" or "-d.ddd" back into a scaled rational
        let neg = printed.starts_with('-');
        let body = printed.trim_start_matches('-');
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
        let mut num: BigInt = int_part.parse::<BigInt>().unwrap() * &scale;
        if !frac_part.is_empty() {
            num += frac_part.parse::<BigInt>().unwrap();
        }
        if neg {
            num = -num;
        }
        let (lo, hi) = decimal_bounds(&x, 14);
        // the printed value must sit within one ulp of the true bracket
        let slack = Rat::new(BigInt::one(), scale.clone());
        let printed_lo = Rat::new(&num - BigInt::one(), scale.clone());
        let printed_hi = Rat::new(&num + BigInt::one(), scale.clone());
        assert!(
            printed_lo.cmp_rat(&hi) == Ordering::Less
                && lo.cmp_rat(&printed_hi) == Ordering::Less,
            "printed {printed} drifts from {x} (slack {slack:?})"
        );
    }
}

#[test]
fn text_grammar_round_trips() {
    for text in [
        "(6+sqrt(2))/17",
        "(1+sqrt(5))/2",
        "sqrt(2)",
        "1+sqrt(3)",
        "-7/3",
        "42",
        "(-3+2*sqrt(7))/5",
    ] {
        let v = parse_value(text).unwrap();
        let back = parse_value(&v.to_string()).unwrap();
        assert_eq!(back, v, "round trip of {text}");
    }
    let mut g = rng(16);
    for _ in 0..300 {
        let x = random_irrational(&mut g, 200, 30, 500);
        assert_eq!(parse_value(&x.to_string()).unwrap(), x);
    }
    assert!(parse_value("sqrt(-1)").is_err());
    assert!(parse_value("").is_err());
    assert!(parse_value("(1+sqrt(2)/3").is_err());
}

proptest! {
    // addition-free canonicalization property over raw 4-tuples: building a
    // value twice from the same data is stable, and scaling all entries by a
    // common factor changes nothing
    #[test]
    fn scaling_invariance(a in -50i64..=50, b in -8i64..=8, d in 0i64..=60, c in 1i64..=50, k in 1i64..=7) {
        let x = QuadraticIrrational::new(a, b, d, c);
        let y = QuadraticIrrational::new(a * k, b * k, d, c * k);
        match (x, y) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "scaling changed the outcome: {:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn order_is_total_and_translation_invariant(
        a1 in -30i64..=30, b1 in -5i64..=5, d1 in 2i64..=40, c1 in 1i64..=30,
        a2 in -30i64..=30, b2 in -5i64..=5, d2 in 2i64..=40, c2 in 1i64..=30,
    ) {
        let x = QuadraticIrrational::new(a1, b1, d1, c1).unwrap();
        let y = QuadraticIrrational::new(a2, b2, d2, c2).unwrap();
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        // compare through the difference against zero: x < y iff x - y < 0,
        // where the difference is formed over a common denominator when the
        // radicands agree
        if x.d() == y.d() {
            let diff = QuadraticIrrational::new(
                x.a() * y.c() - y.a() * x.c(),
                x.b() * y.c() - y.b() * x.c(),
                x.d().clone(),
                x.c() * y.c(),
            ).unwrap();
            let zero = QuadraticIrrational::zero();
            prop_assert_eq!(x.cmp(&y), diff.cmp(&zero));
        }
    }
}
