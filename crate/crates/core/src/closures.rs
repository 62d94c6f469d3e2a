//! Disjunctive closures: `CP(C)` is the intersection of the disjunctive hulls
//! of `C` over every member of a family, and `CP^N` iterates it.

use std::fmt;

use thiserror::Error;

use crate::disjunctions::{
    relevant_k_range, split_disjunction, variable_disjunction, Disjunction, DisjunctionFamily, FamilyKind,
    LatticeBox,
};
use crate::kernel::{bounding_box, canonicalize, disjunctive_hull, is_subset, KernelError};
use crate::transforms::{check_in_unit_cube, TransformError};
use crate::{Inequality, Polytope, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("target {0} is violated by the lattice point {1:?}")]
    TargetInvalid(String, Vec<String>),
    #[error("closure round {0} is not contained in its predecessor")]
    NotMonotone(usize),
}

/// The members of `family` that can change a polytope lying inside `bx`.
///
/// For variable disjunctions `K` ranges over `[floor(lo_i), ceil(hi_i) - 1]`;
/// for splits the same rule is applied to the range of `<pi, x>` over the box.
/// Every other member has one piece containing the box and the other missing
/// it, so its disjunctive hull is the polytope itself.
pub fn family_members(family: &DisjunctionFamily, bx: &LatticeBox) -> Vec<Disjunction> {
    let pattern = &family.pattern;
    let mut out = Vec::new();
    match &family.kind {
        FamilyKind::Variable => {
            for i in pattern.integral_coords() {
                let Some((a, b)) = relevant_k_range(&bx.lo[i], &bx.hi[i]) else {
                    continue;
                };
                let mut k = a;
                while k <= b {
                    out.push(variable_disjunction(i, k.clone(), pattern).expect("integral coordinate"));
                    k += Rational::int(1);
                }
            }
        }
        FamilyKind::SplitBounded(_) => {
            for pi in family.split_normals() {
                let (mut lo, mut hi) = (Rational::int(0), Rational::int(0));
                for ((p, l), h) in pi.iter().zip(&bx.lo).zip(&bx.hi) {
                    let (u, v) = (p * l, p * h);
                    if u <= v {
                        lo += u;
                        hi += v;
                    } else {
                        lo += v;
                        hi += u;
                    }
                }
                let Some((a, b)) = relevant_k_range(&lo, &hi) else {
                    continue;
                };
                let mut k = a;
                while k <= b {
                    out.push(split_disjunction(&pi, k.clone(), pattern).expect("integral split"));
                    k += Rational::int(1);
                }
            }
        }
        FamilyKind::ExplicitList(list) => out.extend(list.iter().cloned()),
    }
    out
}

fn box_of(p: &Polytope) -> Result<Option<LatticeBox>, KernelError> {
    Ok(bounding_box(p)?.map(|(lo, hi)| LatticeBox::new(lo, hi)))
}

/// One closure round. `bx` defaults to the bounding box of `p`.
pub fn closure(p: &Polytope, family: &DisjunctionFamily, bx: Option<&LatticeBox>) -> Result<Polytope, KernelError> {
    let owned;
    let bx = match bx {
        Some(b) => b,
        None => match box_of(p)? {
            Some(b) => {
                owned = b;
                &owned
            }
            None => return Ok(Polytope::empty(p.dim)),
        },
    };
    let mut ineqs: Vec<Inequality> = p.ineqs.clone();
    for d in family_members(family, bx) {
        let hull = disjunctive_hull(p, &d)?;
        if hull.is_empty()? {
            return Ok(Polytope::empty(p.dim));
        }
        ineqs.extend(hull.ineqs);
    }
    canonicalize(&Polytope::new(p.dim, ineqs)?)
}

/// `[P, CP(P), ..., CP^rounds(P)]`, each round certified to lie inside the
/// previous one. The box is fixed to that of `p` throughout.
pub fn iterated_closure(p: &Polytope, family: &DisjunctionFamily, rounds: usize) -> Result<Vec<Polytope>, ClosureError> {
    let mut chain = vec![p.clone()];
    let Some(bx) = box_of(p)? else {
        chain.extend(std::iter::repeat_n(p.clone(), rounds));
        return Ok(chain);
    };
    for r in 1..=rounds {
        let prev = chain.last().expect("nonempty");
        let next = closure(prev, family, Some(&bx))?;
        if !is_subset(&next, prev)? {
            return Err(ClosureError::NotMonotone(r));
        }
        chain.push(next);
    }
    Ok(chain)
}

/// Closure rank of an inequality, relative to a cap on the number of rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Finite(usize),
    Exceeds(usize),
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Exceeds(cap) => write!(f, ">{cap}"),
        }
    }
}

/// Smallest `N <= cap` with `target` valid on `CP^N(p)`.
///
/// The target must hold on every lattice point of `p`'s bounding box that
/// lies in `p`; otherwise no closure can ever imply it. Once a round leaves
/// the polytope unchanged the search stops early.
pub fn rank(p: &Polytope, family: &DisjunctionFamily, target: &Inequality, cap: usize) -> Result<Rank, ClosureError> {
    let Some(bx) = box_of(p)? else {
        return Ok(Rank::Finite(0));
    };
    for x in bx.lattice_points(&family.pattern) {
        if p.contains(&x) && !target.is_satisfied_by(&x) {
            return Err(ClosureError::TargetInvalid(
                target.to_string(),
                x.iter().map(|v| v.to_string()).collect(),
            ));
        }
    }
    let mut current = p.clone();
    for n in 0..=cap {
        if current.implies(target)? {
            return Ok(Rank::Finite(n));
        }
        if n == cap {
            break;
        }
        let next = closure(&current, family, Some(&bx))?;
        if is_subset(&current, &next)? {
            log::debug!("closure stabilised after {n} rounds");
            break;
        }
        current = next;
    }
    Ok(Rank::Exceeds(cap))
}

/// `P_0 = P`, `P_i = conv((P_{i-1} ∩ {x_j <= 0}) ∪ (P_{i-1} ∩ {x_j >= 1}))`
/// with `j = order[i - 1]`, for `P` inside the unit cube.
pub fn sequential_convexify(p: &Polytope, order: &[usize]) -> Result<Vec<Polytope>, ClosureError> {
    check_in_unit_cube(p)?;
    let n = p.dim;
    let mut chain = vec![canonicalize(p)?];
    for &j in order {
        let d = crate::disjunctions::var::<Rational>(j, 0, n);
        let prev = chain.last().expect("nonempty");
        chain.push(canonicalize(&disjunctive_hull(prev, &d)?)?);
    }
    Ok(chain)
}

/// Maximum of `c` over each polytope of a chain (`None` for empty members).
pub fn chain_bounds(chain: &[Polytope], c: &[Rational]) -> Result<Vec<Option<Rational>>, KernelError> {
    chain.iter().map(|p| p.max_of(c)).collect()
}
