//! Exact-rational laboratory for branch-and-bound, cutting-plane and
//! branch-and-cut algorithms over disjunction families.
//!
//! The geometric core ([`kernel`], [`disjunctions`], [`cuts`]) is generic over
//! an exact ordered field (see [`scalar::Scalar`]); the algorithm layers work
//! with the arbitrary-precision [`Rational`] alias.

pub mod closures;
pub mod cuts;
pub mod disjunctions;
pub mod engine;
pub mod format;
pub mod fuzz;
pub mod instances;
pub mod kernel;
pub mod proofs;
pub mod scalar;
pub mod transforms;

/// Arbitrary-precision rational: the default scalar everywhere.
pub type Rational = num_rational::BigRational;
/// Fixed-width rational for small experiments; overflow panics in debug builds.
pub type SmallRational = num_rational::Ratio<i128>;

pub type Inequality = kernel::LinearInequality<Rational>;
pub type Polytope = kernel::HPolytope<Rational>;
pub type Vertices = kernel::VRep<Rational>;

pub use scalar::Scalar;
