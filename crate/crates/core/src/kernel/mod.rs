//! Exact rational linear algebra, LP solving, vertex enumeration and hull
//! operations. Every other module is built on top of this one.

mod dd;
mod hull;
mod linalg;
pub(crate) mod lp;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::Rational;

pub use hull::{
    bounding_box, canonicalize, cartesian_product, convex_hull, disjunctive_hull,
    enumerate_vertices, intersect, is_subset, remove_redundant,
};
pub use linalg::dot;
pub use lp::{solve_lp, Sense};

/// Default dimension limit for vertex enumeration and hull computations.
pub const DEFAULT_SCALE_LIMIT: usize = 6;

/// Environment variable that raises the dimension limit.
pub const SCALE_GUARD_ENV: &str = "DLAB_SCALE_GUARD";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scale limit exceeded: dimension {dim} is above the limit {limit} (set {SCALE_GUARD_ENV} to raise it)")]
    ScaleLimit { dim: usize, limit: usize },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("empty point set")]
    EmptyPointSet,
}

pub fn scale_limit() -> usize {
    std::env::var(SCALE_GUARD_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.max(DEFAULT_SCALE_LIMIT))
        .unwrap_or(DEFAULT_SCALE_LIMIT)
}

pub fn check_scale(dim: usize) -> Result<(), KernelError> {
    let limit = scale_limit();
    if dim > limit {
        return Err(KernelError::ScaleLimit { dim, limit });
    }
    Ok(())
}

/// The halfspace `<normal, x> <= rhs`. A zero normal is allowed: `<0,x> <= 1`
/// is the trivial inequality and `<0,x> <= -1` describes the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearInequality<F = Rational> {
    pub normal: Vec<F>,
    pub rhs: F,
}

impl<F: Scalar> LinearInequality<F> {
    pub fn new(normal: Vec<F>, rhs: F) -> Self {
        Self { normal, rhs }
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(normal: &[i64], rhs: i64) -> Self {
        Self {
            normal: normal.iter().map(|&v| F::int(v)).collect(),
            rhs: F::int(rhs),
        }
    }

    /// `<0, x> <= 1`.
    pub fn trivial(dim: usize) -> Self {
        Self::new(vec![F::zero(); dim], F::one())
    }

    /// `<0, x> <= -1`.
    pub fn infeasible(dim: usize) -> Self {
        Self::new(vec![F::zero(); dim], -F::one())
    }

    /// `x_i <= value` when `upper`, otherwise `x_i >= value`.
    pub fn coordinate_bound(dim: usize, i: usize, value: F, upper: bool) -> Self {
        let mut normal = vec![F::zero(); dim];
        if upper {
            normal[i] = F::one();
            Self::new(normal, value)
        } else {
            normal[i] = -F::one();
            Self::new(normal, -value)
        }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn lhs(&self, x: &[F]) -> F {
        dot(&self.normal, x)
    }

    pub fn is_satisfied_by(&self, x: &[F]) -> bool {
        self.lhs(x) <= self.rhs
    }

    /// `<normal, x> - rhs`; positive means violated.
    pub fn violation(&self, x: &[F]) -> F {
        self.lhs(x) - self.rhs.clone()
    }

    pub fn is_tight_at(&self, x: &[F]) -> bool {
        self.lhs(x) == self.rhs
    }

    pub fn has_zero_normal(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    /// The reversed halfspace `<-normal, x> <= -rhs`.
    pub fn reversed(&self) -> Self {
        Self::new(self.normal.iter().map(|v| -v.clone()).collect(), -self.rhs.clone())
    }

    /// Positive rescaling with a primitive integer normal (gcd 1). A zero normal
    /// collapses to `<0,x> <= s` with `s` the sign of the rhs.
    pub fn canonical(&self) -> Self {
        if self.has_zero_normal() {
            let rhs = if self.rhs.is_zero() {
                F::zero()
            } else {
                self.rhs.signum()
            };
            return Self::new(self.normal.clone(), rhs);
        }
        let mut lcm = F::Int::one();
        for v in &self.normal {
            lcm = lcm.lcm(v.denom());
        }
        let mut gcd = F::Int::zero();
        for v in &self.normal {
            let scaled = v.numer().clone() * (lcm.clone() / v.denom().clone());
            gcd = gcd.gcd(&scaled);
        }
        let factor = F::from_ratio(lcm, gcd);
        self.scaled(&factor)
    }

    /// Multiplies both sides by `factor`, which must be positive.
    pub fn scaled(&self, factor: &F) -> Self {
        debug_assert!(factor.is_positive());
        Self::new(
            self.normal.iter().map(|v| v.clone() * factor.clone()).collect(),
            self.rhs.clone() * factor.clone(),
        )
    }

    /// True when both describe the same halfspace (equal up to positive scaling).
    pub fn same_halfspace(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl<F: Scalar> fmt::Display for LinearInequality<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.normal.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else if a.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = a.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "x{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " <= {}", self.rhs)
    }
}

/// `{x : <a, x> <= b for every (a, b) in ineqs}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPolytope<F = Rational> {
    pub dim: usize,
    pub ineqs: Vec<LinearInequality<F>>,
}

impl<F: Scalar> HPolytope<F> {
    pub fn new(dim: usize, ineqs: Vec<LinearInequality<F>>) -> Result<Self, KernelError> {
        for h in &ineqs {
            if h.dim() != dim {
                return Err(KernelError::DimensionMismatch {
                    expected: dim,
                    found: h.dim(),
                });
            }
        }
        Ok(Self { dim, ineqs })
    }

    /// The whole space (no inequalities).
    pub fn whole_space(dim: usize) -> Self {
        Self { dim, ineqs: vec![] }
    }

    /// Canonical empty polytope `{<0,x> <= -1}`.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            ineqs: vec![LinearInequality::infeasible(dim)],
        }
    }

    /// The box `lo <= x <= hi`, lower bounds first.
    pub fn box_from(lo: &[F], hi: &[F]) -> Self {
        assert_eq!(lo.len(), hi.len());
        let dim = lo.len();
        let mut ineqs = Vec::with_capacity(2 * dim);
        for (i, l) in lo.iter().enumerate() {
            ineqs.push(LinearInequality::coordinate_bound(dim, i, l.clone(), false));
        }
        for (i, h) in hi.iter().enumerate() {
            ineqs.push(LinearInequality::coordinate_bound(dim, i, h.clone(), true));
        }
        Self { dim, ineqs }
    }

    pub fn unit_cube(dim: usize) -> Self {
        Self::box_from(&vec![F::zero(); dim], &vec![F::one(); dim])
    }

    pub fn contains(&self, x: &[F]) -> bool {
        self.ineqs.iter().all(|h| h.is_satisfied_by(x))
    }

    /// A copy with `h` appended.
    pub fn with(&self, h: LinearInequality<F>) -> Self {
        let mut out = self.clone();
        out.ineqs.push(h);
        out
    }

    /// A copy with all of `hs` appended.
    pub fn with_all<'a, I>(&self, hs: I) -> Self
    where
        I: IntoIterator<Item = &'a LinearInequality<F>>,
        F: 'a,
    {
        let mut out = self.clone();
        out.ineqs.extend(hs.into_iter().cloned());
        out
    }

    /// Maximum of `objective` over the polytope, `None` if empty.
    pub fn max_of(&self, objective: &[F]) -> Result<Option<F>, KernelError> {
        Ok(solve_lp(self, objective, Sense::Max)?.value().cloned())
    }

    pub fn is_empty(&self) -> Result<bool, KernelError> {
        Ok(solve_lp(self, &vec![F::zero(); self.dim], Sense::Max)?.is_infeasible())
    }

    /// Whether `h` holds on every point (vacuously true when empty).
    pub fn implies(&self, h: &LinearInequality<F>) -> Result<bool, KernelError> {
        Ok(match self.max_of(&h.normal)? {
            None => true,
            Some(v) => v <= h.rhs,
        })
    }
}

/// A finite list of points: the vertices of some polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VRep<F = Rational> {
    pub vertices: Vec<Vec<F>>,
}

impl<F: Scalar> VRep<F> {
    pub fn new(mut vertices: Vec<Vec<F>>) -> Self {
        vertices.sort();
        vertices.dedup();
        Self { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<F>> {
        self.vertices.iter()
    }
}

/// Result of an LP over a bounded polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<F = Rational> {
    Infeasible,
    /// A vertex optimum; the lexicographically smallest optimal point.
    Optimal { point: Vec<F>, value: F },
}

impl<F: Scalar> LpOutcome<F> {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible)
    }

    pub fn value(&self) -> Option<&F> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Infeasible => None,
        }
    }

    pub fn point(&self) -> Option<&[F]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            LpOutcome::Infeasible => None,
        }
    }
}
