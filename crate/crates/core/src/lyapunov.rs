//! Growth of form values along tree paths.
//!
//! A nonnegative target `xi` selects a path from the root edge: its
//! continued-fraction digits become blocks of left turns, right turns,
//! left turns, and so on. Irrational targets give infinite eventually
//! periodic paths, positive rationals give the finite path ending on the
//! edge whose forward region is the target fraction, and zero follows the
//! right spine forever.
//!
//! Along such a path the basis matrix after `n` turns has the two flanking
//! Farey fractions as columns. The weight `w_n` (the denominator row sum,
//! or the numerator row sum for targets above 1) measures the matrix
//! growth, and the transformed form coefficients measure the value growth.
//! The two are locked together: the coefficient height grows like `w_n^2`
//! on every path except the two that run down the river of an indefinite
//! form, where the values stay periodic. `GrowthSeries` exposes the exact
//! integers step by step; `lambda_monoid_exact` and `lambda_for_form` give
//! the closed-form growth rates of the eventually periodic paths.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::biglog;
use crate::cfrac::ContinuedFraction;
use crate::cursor::{Mat2, SuperbaseTriple, TopographCursor, Turn};
use crate::error::{Error, Result};
use crate::exact::QuadraticIrrational;
use crate::form::{FormClass, FormRoot, QuadraticForm};

/// A path toward a nonnegative target on the boundary of the tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathSpec {
    target: QuadraticIrrational,
    digits: ContinuedFraction,
    /// Targets above 1 measure growth on the numerator row.
    upper: bool,
    /// The zero target walks the right spine forever.
    spine: bool,
}

impl PathSpec {
    pub fn new(target: QuadraticIrrational) -> Result<Self> {
        let zero = QuadraticIrrational::zero();
        if target < zero {
            return Err(Error::NegativePath(format!(
                "paths are defined for targets >= 0, got {target}"
            )));
        }
        let digits = ContinuedFraction::expand(&target)?;
        let upper = target > QuadraticIrrational::from_integer(1);
        let spine = target == zero;
        Ok(Self {
            target,
            digits,
            upper,
            spine,
        })
    }

    pub fn target(&self) -> &QuadraticIrrational {
        &self.target
    }

    pub fn digits(&self) -> &ContinuedFraction {
        &self.digits
    }

    /// True when weights are read off the numerator row (targets above 1).
    pub fn upper(&self) -> bool {
        self.upper
    }

    /// True for positive rational targets, whose paths end at the target
    /// region after one less turn than the digit sum.
    pub fn is_finite(&self) -> bool {
        self.digits.is_finite() && !self.spine
    }

    pub fn turns(&self) -> TurnStream {
        let budget = if self.is_finite() {
            let total: BigInt = self.digits.preperiod().iter().sum();
            Some(total - BigInt::one())
        } else {
            None
        };
        TurnStream {
            pre: self.digits.preperiod().to_vec(),
            per: self.digits.period().to_vec(),
            idx: 0,
            block: BigInt::zero(),
            dir: Turn::L,
            budget,
            spine: self.spine,
        }
    }
}

/// Lazy turn iterator for a path; digit blocks alternate directions
/// starting with left turns, so even-indexed digits turn left.
#[derive(Clone, Debug)]
pub struct TurnStream {
    pre: Vec<BigInt>,
    per: Vec<BigInt>,
    idx: usize,
    block: BigInt,
    dir: Turn,
    budget: Option<BigInt>,
    spine: bool,
}

impl TurnStream {
    fn digit_at(&self, idx: usize) -> Option<BigInt> {
        if idx < self.pre.len() {
            Some(self.pre[idx].clone())
        } else if self.per.is_empty() {
            None
        } else {
            Some(self.per[(idx - self.pre.len()) % self.per.len()].clone())
        }
    }
}

impl Iterator for TurnStream {
    type Item = Turn;

    fn next(&mut self) -> Option<Turn> {
        if self.spine {
            return Some(Turn::R);
        }
        if let Some(b) = &self.budget {
            if b.is_zero() {
                return None;
            }
        }
        while self.block.is_zero() {
            let d = self.digit_at(self.idx)?;
            self.dir = if self.idx % 2 == 0 { Turn::L } else { Turn::R };
            self.block = d;
            self.idx += 1;
        }
        self.block -= 1;
        if let Some(b) = self.budget.take() {
            self.budget = Some(b - BigInt::one());
        }
        Some(self.dir)
    }
}

/// Exact measurements after `n` turns along a path.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrowthStep {
    pub n: usize,
    /// Turn taken to arrive here; `None` on the root edge.
    pub turn: Option<Turn>,
    /// Farey weight of the edge.
    pub w: BigInt,
    /// Form values around the head vertex.
    pub triple: SuperbaseTriple,
    /// `max(|a_n|, |h_n|, |b_n|)` of the transformed coefficients.
    pub height: BigInt,
    /// `max(|a_n|, |b_n|, |c_n|)` of the triple.
    pub norm: BigInt,
    /// `ln(norm) / ln(w^2)` in fixed point, the quantity that tends to 1
    /// off the river and to 0 on it; `None` while the logs are degenerate.
    pub log_ratio: Option<BigInt>,
}

impl GrowthStep {
    pub fn ratio_f64(&self) -> Option<f64> {
        self.log_ratio.as_ref().map(biglog::fixed_to_f64)
    }
}

/// Step-by-step exact growth of a form's values along a path.
#[derive(Clone, Debug)]
pub struct GrowthSeries {
    cursor: TopographCursor,
    turns: TurnStream,
    upper: bool,
    n: usize,
    primed: bool,
}

impl GrowthSeries {
    pub fn new(q: &QuadraticForm, path: &PathSpec) -> Self {
        Self {
            cursor: q.cursor(),
            turns: path.turns(),
            upper: path.upper,
            n: 0,
            primed: false,
        }
    }

    pub fn cursor(&self) -> &TopographCursor {
        &self.cursor
    }

    fn snapshot(&self, turn: Option<Turn>) -> GrowthStep {
        let b = self.cursor.basis();
        let w = if self.upper {
            &b.m[0][0] + &b.m[0][1]
        } else {
            &b.m[1][0] + &b.m[1][1]
        };
        let triple = self.cursor.triple();
        let (a, h, bb) = self.cursor.transformed_coeffs();
        let height = a.abs().max(h.abs()).max(bb.abs());
        let norm = triple.a.abs().max(triple.b.abs()).max(triple.c.abs());
        let log_ratio = biglog::log_ratio_fixed(&norm, &(&w * &w));
        GrowthStep {
            n: self.n,
            turn,
            w,
            triple,
            height,
            norm,
            log_ratio,
        }
    }
}

impl Iterator for GrowthSeries {
    type Item = GrowthStep;

    fn next(&mut self) -> Option<GrowthStep> {
        if !self.primed {
            self.primed = true;
            return Some(self.snapshot(None));
        }
        let t = self.turns.next()?;
        self.cursor.step(t);
        self.n += 1;
        Some(self.snapshot(Some(t)))
    }
}

/// Outcome of an exact two-sided growth check; `holds` stays true unless
/// arithmetic disproves one of the bounds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SandwichReport {
    /// Steps actually examined (the path may end earlier than requested).
    pub steps: usize,
    pub holds: bool,
    pub first_violation: Option<usize>,
}

/// Verifies, exactly in integers, that the squared Farey weight and the
/// transformed coefficients sandwich each other along the path:
/// `w_n^2 <= 2 c_n` and `max(|a_n|, |h_n|, |b_n|) <= 4 w_n^2 max(a, h, b)`.
///
/// The lower bound controls the coefficient sum `a_n + h_n + b_n`, which is
/// the forward value `c_n`; the max alone only admits the weaker constant
/// one sixth. Requires `a, b, h >= 1` and a target in `(0, 1]`, which keep
/// every numerator below its denominator along the walk.
pub fn sandwich_check(q: &QuadraticForm, path: &PathSpec, n: usize) -> Result<SandwichReport> {
    let one = BigInt::one();
    if q.a() < &one || q.h() < &one || q.b() < &one {
        return Err(Error::Precondition(
            "the sandwich bounds need coefficients a, h, b >= 1".into(),
        ));
    }
    let target = path.target();
    if target <= &QuadraticIrrational::zero()
        || target > &QuadraticIrrational::from_integer(1)
    {
        return Err(Error::Precondition(
            "the sandwich bounds need a target in (0, 1]".into(),
        ));
    }
    let bound = q.a().max(q.h()).max(q.b()).clone();
    let four = BigInt::from(4u8);
    let two = BigInt::from(2u8);
    let mut report = SandwichReport {
        steps: 0,
        holds: true,
        first_violation: None,
    };
    for step in GrowthSeries::new(q, path).take(n + 1) {
        report.steps = step.n;
        let w2 = &step.w * &step.w;
        if w2 > &two * &step.triple.c || step.height > &four * &w2 * &bound {
            report.holds = false;
            report.first_violation.get_or_insert(step.n);
        }
    }
    Ok(report)
}

/// One edge of a path with its matrix product and Farey weight, without any
/// form attached.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonoidStep {
    pub n: usize,
    /// Turn taken to arrive here; `None` on the root edge.
    pub turn: Option<Turn>,
    /// Product of the turn matrices so far.
    pub matrix: Mat2,
    /// Farey weight of the edge.
    pub w: BigInt,
}

impl MonoidStep {
    /// `ln(w) / n` in fixed point; tends to the path's matrix growth rate.
    pub fn rate_fixed(&self) -> Option<BigInt> {
        if self.n == 0 {
            return None;
        }
        let ln = biglog::ln_fixed_int(&self.w);
        Some(biglog::fixed_div_int(&ln, &BigInt::from(self.n)))
    }

    pub fn rate_f64(&self) -> Option<f64> {
        self.rate_fixed().as_ref().map(biglog::fixed_to_f64)
    }
}

/// Step-by-step weights of the matrix products along a path, form-free.
#[derive(Clone, Debug)]
pub struct MonoidSeries {
    matrix: Mat2,
    turns: TurnStream,
    upper: bool,
    n: usize,
    primed: bool,
}

impl MonoidSeries {
    pub fn new(path: &PathSpec) -> Self {
        Self {
            matrix: Mat2::identity(),
            turns: path.turns(),
            upper: path.upper,
            n: 0,
            primed: false,
        }
    }

    fn snapshot(&self, turn: Option<Turn>) -> MonoidStep {
        let w = if self.upper {
            &self.matrix.m[0][0] + &self.matrix.m[0][1]
        } else {
            &self.matrix.m[1][0] + &self.matrix.m[1][1]
        };
        MonoidStep {
            n: self.n,
            turn,
            matrix: self.matrix.clone(),
            w,
        }
    }
}

impl Iterator for MonoidSeries {
    type Item = MonoidStep;

    fn next(&mut self) -> Option<MonoidStep> {
        if !self.primed {
            self.primed = true;
            return Some(self.snapshot(None));
        }
        let t = self.turns.next()?;
        self.matrix = self.matrix.mul(&t.matrix());
        self.n += 1;
        Some(self.snapshot(Some(t)))
    }
}

/// Exact spectral radius of a unimodular matrix: `(t + sqrt(t^2 - 4)) / 2`
/// with `t = |trace|` when `t >= 2`, and 1 when the eigenvalues lie on the
/// unit circle.
pub fn spectral_radius(m: &Mat2) -> Result<QuadraticIrrational> {
    if !m.det().is_one() {
        return Err(Error::NotUnimodular(m.det()));
    }
    let t = m.trace().abs();
    if t < BigInt::from(2u8) {
        return Ok(QuadraticIrrational::from_integer(1));
    }
    let disc = &t * &t - BigInt::from(4u8);
    QuadraticIrrational::new(t, BigInt::one(), disc, BigInt::from(2u8))
}

/// Closed-form growth rate of the matrix products along an eventually
/// periodic path: the rate is `ln(rho) / period_turns`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaDescriptor {
    /// Spectral radius of the period matrix, exact.
    pub rho: QuadraticIrrational,
    /// Number of turns in one turn-word period.
    pub period_turns: BigInt,
    /// The period matrix itself.
    pub period_matrix: Mat2,
}

impl LambdaDescriptor {
    fn trivial() -> Self {
        Self {
            rho: QuadraticIrrational::from_integer(1),
            period_turns: BigInt::one(),
            period_matrix: Mat2::identity(),
        }
    }

    pub fn lambda_fixed(&self) -> Result<BigInt> {
        let ln = biglog::ln_fixed_value(&self.rho)?;
        Ok(biglog::fixed_div_int(&ln, &self.period_turns))
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda_fixed()
            .map(|v| biglog::fixed_to_f64(&v))
            .unwrap_or(f64::NAN)
    }

    pub fn lambda_decimal(&self, digits: usize) -> Result<String> {
        Ok(biglog::fixed_to_decimal(&self.lambda_fixed()?, digits))
    }
}

/// Growth rate data of a path's matrices: rationals (and the zero spine)
/// grow subexponentially, irrational targets repeat a hyperbolic period
/// matrix whose spectral radius is exact.
///
/// The digit period alternates block directions, so an odd-length digit
/// period only closes up as a turn word after two passes.
pub fn lambda_monoid_exact(xi: &QuadraticIrrational) -> Result<LambdaDescriptor> {
    if xi < &QuadraticIrrational::zero() {
        return Err(Error::NegativePath(format!(
            "growth rates are defined for targets >= 0, got {xi}"
        )));
    }
    let cf = ContinuedFraction::expand(xi)?;
    if cf.is_finite() {
        return Ok(LambdaDescriptor::trivial());
    }
    let pre_len = cf.preperiod().len();
    let per = cf.period();
    let passes = if per.len() % 2 == 0 { 1 } else { 2 };
    let mut p = Mat2::identity();
    let mut m = BigInt::zero();
    for pass in 0..passes {
        for (j, d) in per.iter().enumerate() {
            let idx = pre_len + pass * per.len() + j;
            let power = if idx % 2 == 0 {
                Mat2::left_power(d)
            } else {
                Mat2::right_power(d)
            };
            p = p.mul(&power);
            m += d;
        }
    }
    let rho = spectral_radius(&p)?;
    Ok(LambdaDescriptor {
        rho,
        period_turns: m,
        period_matrix: p,
    })
}

/// Growth rate of a form's values along a path: twice the matrix rate,
/// except on the paths that stay on a river (the irrational root targets
/// of an anisotropic indefinite form) and for semidefinite forms, where
/// the values stay bounded or grow only polynomially.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormGrowth {
    pub monoid: LambdaDescriptor,
    pub doubled: bool,
}

impl FormGrowth {
    pub fn lambda_fixed(&self) -> Result<BigInt> {
        if self.doubled {
            Ok(self.monoid.lambda_fixed()? * BigInt::from(2u8))
        } else {
            Ok(BigInt::zero())
        }
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda_fixed()
            .map(|v| biglog::fixed_to_f64(&v))
            .unwrap_or(f64::NAN)
    }

    pub fn lambda_decimal(&self, digits: usize) -> Result<String> {
        Ok(biglog::fixed_to_decimal(&self.lambda_fixed()?, digits))
    }
}

pub fn lambda_for_form(q: &QuadraticForm, xi: &QuadraticIrrational) -> Result<FormGrowth> {
    let monoid = lambda_monoid_exact(xi)?;
    let doubled = match q.classify() {
        FormClass::Semidefinite => false,
        FormClass::IndefiniteAnisotropic => {
            let (plus, minus) = q.roots()?;
            let hits = |r: &FormRoot| matches!(r, FormRoot::Finite(v) if v == xi);
            !(hits(&plus) || hits(&minus))
        }
        _ => true,
    };
    Ok(FormGrowth { monoid, doubled })
}
