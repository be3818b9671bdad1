//! Exact arithmetic on the topograph of integer binary quadratic forms.
//!
//! The topograph is the trivalent tree whose regions are the primitive
//! lattice directions and whose vertices are superbases; a binary quadratic
//! form decorates every region with an integer value. This crate walks that
//! tree exactly:
//!
//! * [`exact`] - quadratic irrationals `(A + B*sqrt(D))/C` in canonical form,
//!   with exact floor, comparison, and conjugation.
//! * [`cfrac`] - eventually periodic continued fractions: expansion, exact
//!   value recovery, digit normalization, negation, and conjugation.
//! * [`form`], [`cursor`], [`river`] - quadratic forms, superbase triples,
//!   edge-to-edge navigation, and the separating river / lake structure.
//! * [`lyapunov`] - growth of matrix products and form values along tree
//!   paths, both as exact integer series and as closed-form growth rates.
//! * [`render`] - DOT and SVG pictures of a depth-limited neighborhood.
//!
//! Everything outside the final logarithms is integer or field exact. All
//! types are plain immutable values; operations are pure functions, so the
//! API is `Send + Sync` without interior mutability.

pub mod biglog;
pub mod cfrac;
pub mod cursor;
mod error;
pub mod exact;
pub mod form;
pub mod lyapunov;
pub mod render;
pub mod river;

pub use cfrac::ContinuedFraction;
pub use cursor::{Mat2, Mat3, SuperbaseTriple, TopographCursor, TriplePosition, Turn, TurnWord};
pub use error::{Error, Result};
pub use exact::{larger_quadratic_root, parse_value, QuadraticIrrational};
pub use form::{FormClass, FormRoot, QuadraticForm};
pub use lyapunov::{
    lambda_for_form, lambda_monoid_exact, sandwich_check, spectral_radius, FormGrowth,
    GrowthSeries, GrowthStep, LambdaDescriptor, MonoidSeries, MonoidStep, PathSpec,
    SandwichReport, TurnStream,
};
pub use render::{sketch, to_dot, to_svg, SketchNode, TopographSketch};
pub use river::{
    descend_to_river, find_lakes, find_river, LakeDescription, RiverDescription, RiverState,
};
