//! Oriented edges of the topograph and the matrices that move them.
//!
//! The topograph is the trivalent tree whose regions are primitive vectors
//! up to sign. A cursor sits on an oriented edge, carried as a 2x2 integer
//! basis matrix with columns `u, v`: the region left of the edge is `u`, the
//! region right of it is `v`, and the vertex ahead touches `u`, `v` and
//! `u + v`. Turning left or right at that vertex multiplies the basis on the
//! right by
//!
//!   L = [[1,1],[0,1]]   (keep u, move toward u+v)
//!   R = [[1,0],[1,1]]   (move toward u+v, keep v)
//!
//! and reversing the edge applies J = [[0,1],[-1,0]]. All three have
//! determinant one, so every reachable basis is unimodular and every walk is
//! exactly invertible.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// 2x2 integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2 {
    pub m: [[BigInt; 2]; 2],
}

impl Mat2 {
    pub fn new(m00: impl Into<BigInt>, m01: impl Into<BigInt>, m10: impl Into<BigInt>, m11: impl Into<BigInt>) -> Self {
        Self {
            m: [[m00.into(), m01.into()], [m10.into(), m11.into()]],
        }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn left() -> Self {
        Self::new(1, 1, 0, 1)
    }

    pub fn right() -> Self {
        Self::new(1, 0, 1, 1)
    }

    /// Edge reversal; swaps the flanking regions with one sign flip.
    pub fn reversal() -> Self {
        Self::new(0, 1, -1, 0)
    }

    /// `left()^k` in closed form.
    pub fn left_power(k: &BigInt) -> Self {
        Self {
            m: [
                [BigInt::one(), k.clone()],
                [BigInt::zero(), BigInt::one()],
            ],
        }
    }

    /// `right()^k` in closed form.
    pub fn right_power(k: &BigInt) -> Self {
        Self {
            m: [
                [BigInt::one(), BigInt::zero()],
                [k.clone(), BigInt::one()],
            ],
        }
    }

    pub fn det(&self) -> BigInt {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1]
    }

    /// First column: the region left of the edge.
    pub fn col_u(&self) -> (BigInt, BigInt) {
        (self.m[0][0].clone(), self.m[1][0].clone())
    }

    /// Second column: the region right of the edge.
    pub fn col_v(&self) -> (BigInt, BigInt) {
        (self.m[0][1].clone(), self.m[1][1].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [
            [BigInt::zero(), BigInt::zero()],
            [BigInt::zero(), BigInt::zero()],
        ];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = &self.m[i][0] * &rhs.m[0][j] + &self.m[i][1] * &rhs.m[1][j];
            }
        }
        Self { m: out }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let det = self.det();
        if !det.is_one() {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Self {
            m: [
                [self.m[1][1].clone(), -&self.m[0][1]],
                [-&self.m[1][0], self.m[0][0].clone()],
            ],
        })
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2::mul(self, rhs)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

/// 3x3 integer matrix acting on coefficient columns `(a, h, b)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat3 {
    pub m: [[BigInt; 3]; 3],
}

impl Mat3 {
    /// The action of a basis change on form coefficients: if the form `Q`
    /// has coefficients `(a, h, b)` and `A` has columns `(p, q)` and
    /// `(r, s)`, then `Q(A v)` has coefficients `coefficient_action(A) * (a,h,b)`.
    pub fn coefficient_action(a: &Mat2) -> Self {
        let (p, r) = (&a.m[0][0], &a.m[0][1]);
        let (q, s) = (&a.m[1][0], &a.m[1][1]);
        let two = BigInt::from(2u8);
        Self {
            m: [
                [p * p, p * q, q * q],
                [&two * p * r, p * s + q * r, &two * q * s],
                [r * r, r * s, s * s],
            ],
        }
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1] + &self.m[2][2]
    }

    pub fn apply(&self, v: &[BigInt; 3]) -> [BigInt; 3] {
        [0, 1, 2].map(|i| {
            &self.m[i][0] * &v[0] + &self.m[i][1] * &v[1] + &self.m[i][2] * &v[2]
        })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out: [[BigInt; 3]; 3] = Default::default();
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| &self.m[i][k] * &rhs.m[k][j]).sum();
            }
        }
        Self { m: out }
    }
}

/// One step at a trivalent vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Turn {
    L,
    R,
}

impl Turn {
    pub fn matrix(self) -> Mat2 {
        match self {
            Turn::L => Mat2::left(),
            Turn::R => Mat2::right(),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Turn::L => Turn::R,
            Turn::R => Turn::L,
        }
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Turn::L => "L",
            Turn::R => "R",
        })
    }
}

/// A finite sequence of turns, printed as a bare word like `LLRR`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TurnWord(pub Vec<Turn>);

impl TurnWord {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, t: Turn) {
        self.0.push(t);
    }

    pub fn iter(&self) -> impl Iterator<Item = Turn> + '_ {
        self.0.iter().copied()
    }

    /// Swap every turn; a walk of the mirrored word visits the mirror image
    /// of the original walk.
    pub fn mirrored(&self) -> Self {
        Self(self.0.iter().map(|t| t.flipped()).collect())
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
            .iter()
            .fold(Mat2::identity(), |acc, t| acc.mul(&t.matrix()))
    }

    /// Turns encoded by digit blocks: digit `c_i` contributes `c_i` copies
    /// of one direction, directions alternate, the first block uses `start`.
    /// A zero digit contributes no turns but still flips the direction.
    pub fn from_digit_blocks(digits: &[BigInt], start: Turn) -> Result<Self> {
        let mut word = Vec::new();
        let mut dir = start;
        for d in digits {
            if d.is_negative() {
                return Err(Error::Precondition(format!(
                    "negative digit {d} cannot encode turns"
                )));
            }
            let n = d.to_usize().ok_or_else(|| {
                Error::Precondition(format!("digit {d} is too large to materialize as turns"))
            })?;
            word.extend(std::iter::repeat(dir).take(n));
            dir = dir.flipped();
        }
        Ok(Self(word))
    }
}

impl fmt::Display for TurnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for TurnWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'L' => Ok(Turn::L),
                'R' => Ok(Turn::R),
                other => Err(Error::Parse(format!("turn must be L or R, found {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl FromIterator<Turn> for TurnWord {
    fn from_iter<I: IntoIterator<Item = Turn>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// The three form values around a vertex, in the order
/// (left region, right region, region ahead).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SuperbaseTriple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// Selects one entry of a [`SuperbaseTriple`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriplePosition {
    A,
    B,
    C,
}

impl SuperbaseTriple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// The fourth value across the near edge: the parallelogram law gives
    /// `Q(u-v) = 2(Q(u) + Q(v)) - Q(u+v)`.
    pub fn opposite(&self) -> BigInt {
        BigInt::from(2u8) * (&self.a + &self.b) - &self.c
    }

    /// Replaces the selected entry `x` by `2(sum of the other two) - x`, the
    /// Vieta involution on the quadric of constant vertex invariant; flipping
    /// `c` crosses the near edge of the topograph.
    pub fn vieta_flip(&self, pos: TriplePosition) -> Self {
        let two = BigInt::from(2u8);
        let mut t = self.clone();
        match pos {
            TriplePosition::A => t.a = &two * (&self.b + &self.c) - &self.a,
            TriplePosition::B => t.b = &two * (&self.a + &self.c) - &self.b,
            TriplePosition::C => t.c = &two * (&self.a + &self.b) - &self.c,
        }
        t
    }

    /// `a^2 + b^2 + c^2 - 2ab - 2bc - 2ca`; equals the discriminant of the
    /// underlying form at every vertex.
    pub fn vertex_invariant(&self) -> BigInt {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        a * a + b * b + c * c
            - BigInt::from(2u8) * (a * b + b * c + c * a)
    }
}

impl fmt::Display for SuperbaseTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// A form together with an oriented edge of the topograph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TopographCursor {
    coeffs: (BigInt, BigInt, BigInt),
    basis: Mat2,
}

impl TopographCursor {
    /// Cursor on the root edge between the regions `(1,0)` and `(0,1)`.
    pub fn new(a: impl Into<BigInt>, h: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            coeffs: (a.into(), h.into(), b.into()),
            basis: Mat2::identity(),
        }
    }

    /// Cursor on an arbitrary oriented edge. The basis must be unimodular
    /// with determinant one so it is reachable from the root edge.
    pub fn with_basis(
        a: impl Into<BigInt>,
        h: impl Into<BigInt>,
        b: impl Into<BigInt>,
        basis: Mat2,
    ) -> Result<Self> {
        let det = basis.det();
        if !det.is_one() {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Self {
            coeffs: (a.into(), h.into(), b.into()),
            basis,
        })
    }

    pub fn basis(&self) -> &Mat2 {
        &self.basis
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let (a, h, b) = &self.coeffs;
        a * x * x + h * x * y + b * y * y
    }

    /// Value on the region left of the edge.
    pub fn left_value(&self) -> BigInt {
        let (x, y) = self.basis.col_u();
        self.eval(&x, &y)
    }

    /// Value on the region right of the edge.
    pub fn right_value(&self) -> BigInt {
        let (x, y) = self.basis.col_v();
        self.eval(&x, &y)
    }

    /// Value on the region past the vertex ahead.
    pub fn forward_value(&self) -> BigInt {
        let (ux, uy) = self.basis.col_u();
        let (vx, vy) = self.basis.col_v();
        self.eval(&(ux + vx), &(uy + vy))
    }

    /// Value on the region behind the edge.
    pub fn back_value(&self) -> BigInt {
        let (ux, uy) = self.basis.col_u();
        let (vx, vy) = self.basis.col_v();
        self.eval(&(ux - vx), &(uy - vy))
    }

    /// The vertex ahead as a value triple.
    pub fn triple(&self) -> SuperbaseTriple {
        SuperbaseTriple {
            a: self.left_value(),
            b: self.right_value(),
            c: self.forward_value(),
        }
    }

    pub fn step(&mut self, t: Turn) {
        self.basis = self.basis.mul(&t.matrix());
    }

    pub fn reverse(&mut self) {
        self.basis = self.basis.mul(&Mat2::reversal());
    }

    pub fn walk(&mut self, word: &TurnWord) {
        for t in word.iter() {
            self.step(t);
        }
    }

    /// Coefficients of the form pulled back along the current basis: the
    /// form whose root-edge picture matches what the cursor sees.
    pub fn transformed_coeffs(&self) -> (BigInt, BigInt, BigInt) {
        let (a, h, b) = &self.coeffs;
        let (p, r) = (&self.basis.m[0][0], &self.basis.m[0][1]);
        let (q, s) = (&self.basis.m[1][0], &self.basis.m[1][1]);
        let a2 = self.left_value();
        let b2 = self.right_value();
        let h2 = BigInt::from(2u8) * a * p * r + h * (p * s + q * r) + BigInt::from(2u8) * b * q * s;
        (a2, h2, b2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vieta_flips_preserve_the_invariant() {
        // the symmetric sum-of-squares root vertex is fixed by the c-flip
        let t = SuperbaseTriple::new(1, 1, 2);
        assert_eq!(t.vieta_flip(TriplePosition::C), t);
        // flipping c of (1,-1,-1) lands on c' = 1
        let g = SuperbaseTriple::new(1, -1, -1);
        assert_eq!(
            g.vieta_flip(TriplePosition::C),
            SuperbaseTriple::new(1, -1, 1)
        );
        assert_eq!(g.opposite(), BigInt::one());
        for t in [
            SuperbaseTriple::new(3, -5, 11),
            SuperbaseTriple::new(-2, 7, 0),
            SuperbaseTriple::new(17, 2, 7),
        ] {
            for pos in [TriplePosition::A, TriplePosition::B, TriplePosition::C] {
                let f = t.vieta_flip(pos);
                assert_eq!(f.vertex_invariant(), t.vertex_invariant());
                assert_eq!(f.vieta_flip(pos), t, "involution at {pos:?}");
            }
        }
    }

    #[test]
    fn turn_matrices_and_reversal() {
        assert_eq!(Mat2::left().det(), BigInt::one());
        assert_eq!(Mat2::right().det(), BigInt::one());
        assert_eq!(Mat2::reversal().det(), BigInt::one());
        let lr = Mat2::left().mul(&Mat2::right());
        assert_eq!(lr, Mat2::new(2, 1, 1, 1));
        assert_eq!(
            Mat2::left_power(&BigInt::from(5)),
            (0..5).fold(Mat2::identity(), |m, _| m.mul(&Mat2::left()))
        );
        assert_eq!(
            Mat2::right_power(&BigInt::from(4)),
            (0..4).fold(Mat2::identity(), |m, _| m.mul(&Mat2::right()))
        );
        let m = Mat2::new(3, 2, 4, 3);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), Mat2::identity());
        assert!(Mat2::new(2, 0, 0, 1).inverse_unimodular().is_err());
    }

    #[test]
    fn parallelogram_law_around_every_step() {
        let mut c = TopographCursor::new(3, -1, 5);
        for (i, t) in [Turn::L, Turn::R, Turn::R, Turn::L, Turn::R].iter().enumerate() {
            let tr = c.triple();
            assert_eq!(
                &tr.c + c.back_value(),
                BigInt::from(2u8) * (&tr.a + &tr.b),
                "parallelogram law after {i} steps"
            );
            assert_eq!(tr.vertex_invariant(), BigInt::from(-59), "h^2 - 4ab");
            c.step(*t);
        }
    }

    #[test]
    fn steps_move_the_advertised_regions() {
        let mut c = TopographCursor::new(1, 0, 1);
        let before = c.triple();
        c.step(Turn::L);
        let after = c.triple();
        // L keeps the left region and moves the right one to u+v
        assert_eq!(after.a, before.a);
        assert_eq!(after.b, before.c);
        let mut c2 = TopographCursor::new(1, 0, 1);
        c2.step(Turn::R);
        let after2 = c2.triple();
        // R keeps the right region and moves the left one to u+v
        assert_eq!(after2.b, before.b);
        assert_eq!(after2.a, before.c);
    }

    #[test]
    fn reverse_swaps_flanks_and_is_involutive() {
        let mut c = TopographCursor::new(2, -1, -3);
        c.step(Turn::L);
        c.step(Turn::R);
        let (l, r, fwd, back) = (
            c.left_value(),
            c.right_value(),
            c.forward_value(),
            c.back_value(),
        );
        let saved = c.clone();
        c.reverse();
        assert_eq!(c.left_value(), r);
        assert_eq!(c.right_value(), l);
        assert_eq!(c.forward_value(), back);
        assert_eq!(c.back_value(), fwd);
        c.reverse();
        // J^2 = -I, which evaluates identically on every region
        assert_eq!(c.triple(), saved.triple());
    }

    #[test]
    fn coefficient_action_matches_direct_transform() {
        let words: [&[Turn]; 3] = [
            &[Turn::L],
            &[Turn::R, Turn::R, Turn::L],
            &[Turn::L, Turn::L, Turn::R, Turn::L, Turn::R],
        ];
        for turns in words {
            let word: TurnWord = turns.iter().copied().collect();
            let a = word.matrix();
            let hat = Mat3::coefficient_action(&a);
            for (fa, fh, fb) in [(1i64, 0i64, 1i64), (17, -12, 2), (3, -13, 13)] {
                let mut cur = TopographCursor::new(fa, fh, fb);
                cur.walk(&word);
                let (ta, th, tb) = cur.transformed_coeffs();
                let applied = hat.apply(&[BigInt::from(fa), BigInt::from(fh), BigInt::from(fb)]);
                assert_eq!(applied, [ta, th, tb]);
            }
            // trace identity for the induced coefficient action
            assert_eq!(hat.trace(), &a.trace() * &a.trace() - 1);
        }
    }

    #[test]
    fn turn_words_from_digit_blocks() {
        let digits: Vec<BigInt> = [2i64, 1, 2].iter().map(|&d| BigInt::from(d)).collect();
        let w = TurnWord::from_digit_blocks(&digits, Turn::L).unwrap();
        assert_eq!(w.to_string(), "LLRLL");
        // leading zero flips the starting direction without a step
        let digits0: Vec<BigInt> = [0i64, 3].iter().map(|&d| BigInt::from(d)).collect();
        let w0 = TurnWord::from_digit_blocks(&digits0, Turn::L).unwrap();
        assert_eq!(w0.to_string(), "RRR");
        assert_eq!("LLRR".parse::<TurnWord>().unwrap().to_string(), "LLRR");
        assert!("LXR".parse::<TurnWord>().is_err());
        assert_eq!(w.mirrored().to_string(), "RRLRR");
    }
}
