//! Rivers and lakes: the sign-separating structures of indefinite forms.
//!
//! For an anisotropic indefinite form the edges flanked by one positive and
//! one negative region form a single bi-infinite path, the river, and the
//! values along it repeat. `find_river` builds a walkable description: an
//! entry word computed from the continued-fraction digits of the form's
//! positive root, a short sign-steered approach, and one full period of
//! river states. For an isotropic form the river degenerates into two lakes
//! of zero regions joined by a finite shore path; `find_lakes` reduces the
//! form to a lake normal form and reads the shore word off a rational
//! continued fraction.
//!
//! Orientation convention: a river edge keeps the positive region on its
//! left. At a river vertex the forward region joins the flank of its own
//! sign, which forces the turn: left when the forward value matches the
//! right flank's sign, right otherwise.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cfrac::ContinuedFraction;
use crate::cursor::{Mat2, SuperbaseTriple, TopographCursor, Turn, TurnWord};
use crate::error::{Error, Result};
use crate::exact::QuadraticIrrational;
use crate::form::{FormClass, FormRoot, QuadraticForm};

/// Hard cap on river tracing and descent; periods and approaches of the
/// supported input sizes are far below it.
const MAX_RIVER_STEPS: usize = 1_000_000;

/// One periodic river edge: the values at its head vertex and the turn the
/// river takes there.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RiverState {
    pub triple: SuperbaseTriple,
    pub turn: Turn,
}

/// A walkable description of the river of an anisotropic indefinite form.
///
/// Reconstruction: start from the root edge (the reversed root edge when
/// `mirrored`), walk `entry_path`, reverse the edge if `reversed`, walk
/// `approach`; the cursor then sits on `start_basis`, and repeating
/// `period_word()` cycles through `period` forever.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RiverDescription {
    /// Digit-derived path from the root edge toward the river.
    pub entry_path: TurnWord,
    /// True when the digit plan came from the form with `h` negated; the
    /// walk then starts on the reversed root edge.
    pub mirrored: bool,
    /// True when the edge had to be flipped once between `entry_path` and
    /// `approach` to match the positive-left orientation.
    pub reversed: bool,
    /// Sign-steered turns closing the gap between the entry path and the
    /// first periodic river edge.
    pub approach: TurnWord,
    /// Basis of the first periodic river edge.
    pub start_basis: Mat2,
    /// One full period of river edges.
    pub period: Vec<RiverState>,
    /// Unimodular matrix fixing the form; advancing the river by one period.
    pub automorphism: Mat2,
    /// Larger root of `Q(x,1) = 0`; the river flows toward its direction.
    pub dominant_root: QuadraticIrrational,
    /// The other root; the direction the river comes from.
    pub conjugate_root: QuadraticIrrational,
}

impl RiverDescription {
    pub fn period_word(&self) -> TurnWord {
        self.period.iter().map(|s| s.turn).collect()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// The flanking values of each period edge as (positive side, negative
    /// side); the walk keeps positive values on the left.
    pub fn period_value_pairs(&self) -> Vec<(BigInt, BigInt)> {
        self.period
            .iter()
            .map(|s| (s.triple.a.clone(), s.triple.b.clone()))
            .collect()
    }
}

/// The two lakes of an isotropic form and the shore path joining them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LakeDescription {
    /// Primitive zero vectors in input coordinates, `+sqrt` branch first.
    pub zero_directions: Vec<(BigInt, BigInt)>,
    /// Lake normal form `(sqrt(D), b)` with `0 <= b < sqrt(D)`: coordinates
    /// in which the near lake is the region `(1,0)` and the far lake has
    /// slope `b/sqrt(D)`.
    pub reduced_pair: (BigInt, BigInt),
    /// Coordinate change into the normal form (determinant +-1).
    pub reduction: Mat2,
    /// Shore path from the near lake to the far lake in normal-form
    /// coordinates; empty exactly when the lakes border a common edge.
    pub connecting_word: TurnWord,
    pub adjacent: bool,
}

fn sign_of(x: &BigInt) -> Sign {
    x.sign()
}

fn all_same_sign(t: &SuperbaseTriple) -> bool {
    let s = sign_of(&t.a);
    s != Sign::NoSign && sign_of(&t.b) == s && sign_of(&t.c) == s
}

/// Flip-largest descent followed by river orientation.
///
/// From any edge of an anisotropic indefinite topograph this reaches a river
/// edge with the positive region on the left. While the head triple is all
/// one sign, flipping its largest entry strictly shrinks it, so the walk
/// drains to the river; the largest entry is unique, and only the very first
/// move can be an edge reversal. Returns the reversal flag and the turns.
pub fn descend_to_river(cur: &mut TopographCursor) -> Result<(bool, TurnWord)> {
    let d = cur.triple().vertex_invariant();
    if d.sign() != Sign::Plus || {
        let s = d.sqrt();
        &s * &s == d
    } {
        return Err(Error::WrongClass {
            expected: "an indefinite anisotropic form",
            found: "a form without a river",
        });
    }
    let mut reversed = false;
    let mut word = TurnWord::new();
    for _ in 0..MAX_RIVER_STEPS {
        let t = cur.triple();
        if all_same_sign(&t) {
            let (aa, ab, ac) = (t.a.abs(), t.b.abs(), t.c.abs());
            if ac > aa && ac > ab {
                // the largest value sits past the vertex; flipping it means
                // looking back across this edge, possible only before any
                // turn was taken
                debug_assert!(word.is_empty() && !reversed);
                cur.reverse();
                reversed = true;
            } else if aa > ab {
                cur.step(Turn::R);
                word.push(Turn::R);
            } else {
                debug_assert!(ab > aa);
                cur.step(Turn::L);
                word.push(Turn::L);
            }
            continue;
        }
        match (sign_of(&t.a), sign_of(&t.b)) {
            (Sign::Plus, Sign::Minus) => return Ok((reversed, word)),
            (Sign::Minus, Sign::Plus) => {
                // only reachable on the starting edge; later steps place
                // fresh values ahead, never astride the edge
                if !word.is_empty() || reversed {
                    return Err(Error::Precondition(
                        "internal: river orientation required a second reversal".into(),
                    ));
                }
                cur.reverse();
                reversed = true;
            }
            (Sign::Plus, Sign::Plus) => {
                cur.step(Turn::L);
                word.push(Turn::L);
            }
            (Sign::Minus, Sign::Minus) => {
                cur.step(Turn::R);
                word.push(Turn::R);
            }
            _ => unreachable!("anisotropic values are never zero"),
        }
    }
    Err(Error::Precondition(format!(
        "descent exceeded {MAX_RIVER_STEPS} steps"
    )))
}

/// Entry digits toward the river, read off the continued fraction of the
/// positive root. Defined for forms whose root triple is all positive with
/// `h < 0`; the resulting digits are turn blocks starting with a left block.
fn entry_digits(q: &QuadraticForm) -> Result<Vec<BigInt>> {
    let (plus, _) = q.roots()?;
    let FormRoot::Finite(alpha) = plus else {
        return Err(Error::Precondition(
            "entry digits need a finite positive root".into(),
        ));
    };
    let cf = ContinuedFraction::expand(&alpha)?;
    let pre = cf.preperiod();
    let per = cf.period();
    debug_assert!(!per.is_empty(), "anisotropic roots are irrational");
    if pre.is_empty() {
        return Ok(Vec::new());
    }
    let bl = per.last().expect("nonempty period").clone();
    let k = pre.len() - 1;
    let ak = pre[k].clone();
    let one = BigInt::one();
    debug_assert!(ak != bl, "canonical expansions keep a_k != b_l");
    let digits = if k >= 1 {
        if ak > bl {
            let mut d = pre[..k].to_vec();
            d.push(&ak - &bl - &one);
            d
        } else {
            let mut d = pre[..k - 1].to_vec();
            d.push(&pre[k - 1] - &one);
            d
        }
    } else if ak > bl {
        vec![&ak - &bl]
    } else {
        Vec::new()
    };
    Ok(digits)
}

/// Builds the river description of an anisotropic indefinite form.
pub fn find_river(q: &QuadraticForm) -> Result<RiverDescription> {
    match q.classify() {
        FormClass::IndefiniteAnisotropic => {}
        other => {
            return Err(Error::WrongClass {
                expected: "an indefinite anisotropic form",
                found: other.as_str(),
            })
        }
    }
    let root = q.root_triple();
    let (entry_path, base, mirrored) = if all_same_sign(&root) {
        // digit plans assume positive values; a negated form shares the
        // river and every steering decision, so plan there if needed
        let (wa, wh, wb) = if root.a.sign() == Sign::Minus {
            (-q.a(), -q.h(), -q.b())
        } else {
            q.coeffs()
        };
        if wh.sign() != Sign::Plus {
            let digits = entry_digits(&QuadraticForm::new(wa, wh, wb))?;
            (
                TurnWord::from_digit_blocks(&digits, Turn::L)?,
                Mat2::identity(),
                false,
            )
        } else {
            // mirror: plan on the h-negated form, walk the swapped word
            // from the reversed root edge
            let digits = entry_digits(&QuadraticForm::new(wa, -wh, wb))?;
            (
                TurnWord::from_digit_blocks(&digits, Turn::L)?.mirrored(),
                Mat2::reversal(),
                true,
            )
        }
    } else {
        (TurnWord::new(), Mat2::identity(), false)
    };
    let (qa, qh, qb) = q.coeffs();
    let mut cur = TopographCursor::with_basis(qa, qh, qb, base)?;
    cur.walk(&entry_path);
    let (reversed, approach) = descend_to_river(&mut cur)?;
    let start_basis = cur.basis().clone();
    let first = cur.triple();
    let mut period = Vec::new();
    loop {
        let t = cur.triple();
        debug_assert!(
            t.a.sign() == Sign::Plus && t.b.sign() == Sign::Minus,
            "river edges keep the positive region on the left"
        );
        let turn = if sign_of(&t.c) == sign_of(&t.b) {
            Turn::L
        } else {
            Turn::R
        };
        period.push(RiverState {
            triple: t,
            turn,
        });
        cur.step(turn);
        if cur.triple() == first {
            break;
        }
        if period.len() >= MAX_RIVER_STEPS {
            return Err(Error::Precondition(format!(
                "river period exceeds {MAX_RIVER_STEPS} edges"
            )));
        }
    }
    let word: TurnWord = period.iter().map(|s| s.turn).collect();
    let automorphism = start_basis
        .mul(&word.matrix())
        .mul(&start_basis.inverse_unimodular()?);
    debug_assert_eq!(&q.transform(&automorphism), q);
    // anisotropic forms have a != 0 (a = 0 makes D = h^2 a square), so both
    // roots are finite quadratic irrationals
    let (dominant_root, conjugate_root) = match q.roots()? {
        (FormRoot::Finite(d), FormRoot::Finite(c)) => (d, c),
        _ => unreachable!("anisotropic form with a root at infinity"),
    };
    Ok(RiverDescription {
        entry_path,
        mirrored,
        reversed,
        approach,
        start_basis,
        period,
        automorphism,
        dominant_root,
        conjugate_root,
    })
}

/// Builds the lake description of an isotropic form.
pub fn find_lakes(q: &QuadraticForm) -> Result<LakeDescription> {
    match q.classify() {
        FormClass::IndefiniteIsotropic => {}
        other => {
            return Err(Error::WrongClass {
                expected: "an isotropic form",
                found: other.as_str(),
            })
        }
    }
    let dirs = q.zero_directions()?;
    debug_assert_eq!(dirs.len(), 2);
    // place the minus-branch lake on the region (1,0): first column is its
    // zero vector, second column any unimodular completion
    let (p, yq) = dirs[1].clone();
    let e = p.extended_gcd(&yq);
    debug_assert!(e.gcd.is_one());
    // e.x * p + e.y * q = 1, so det [[p, -e.y], [q, e.x]] = 1
    let mut a = Mat2::new(p, -e.y, yq, e.x);
    let mut t = q.transform(&a);
    debug_assert!(t.a().is_zero());
    if t.h().sign() == Sign::Minus {
        // negate the completion column; determinant sign flips, the zero
        // region stays put
        a = a.mul(&Mat2::new(1, 0, 0, -1));
        t = q.transform(&a);
    }
    let h = t.h().clone();
    debug_assert!(&h * &h == q.discriminant(), "h must reduce to sqrt(D)");
    // slide the completion column so the remaining coefficient lands in
    // (-h, 0]
    let r = t.b().mod_floor(&h);
    let target = if r.is_zero() { BigInt::zero() } else { &r - &h };
    let shift = (&target - t.b()) / &h;
    a = a.mul(&Mat2::new(BigInt::one(), shift, BigInt::zero(), BigInt::one()));
    t = q.transform(&a);
    let bb = -t.b();
    debug_assert!(bb.sign() != Sign::Minus && bb < h);
    let (connecting_word, adjacent) = if bb.is_zero() {
        (TurnWord::new(), true)
    } else {
        let ratio = crate::exact::QuadraticIrrational::new(
            h.clone(),
            BigInt::zero(),
            BigInt::zero(),
            bb.clone(),
        )?;
        let digits = ContinuedFraction::expand(&ratio)?;
        (
            TurnWord::from_digit_blocks(digits.preperiod(), Turn::R)?,
            false,
        )
    };
    Ok(LakeDescription {
        zero_directions: dirs,
        reduced_pair: (h, bb),
        reduction: a,
        connecting_word,
        adjacent,
    })
}
