//! The "choose" points of the algorithms: which disjunction, which cut.

use num_traits::Zero;

use super::{BranchRule, CutRule, RunConfig};
use crate::cuts::{cg_cut, cglp_cut, violated_piece};
use crate::disjunctions::{Disjunction, IntegralityPattern, Structure};
use crate::kernel::{dot, KernelError};
use crate::{Inequality, Polytope, Rational, Scalar};

/// How far the split value of `d` at `x` is from an integer (0 for custom pieces).
fn fractionality(d: &Disjunction, x: &[Rational]) -> Rational {
    match d.structure() {
        Some(Structure::Variable { i, .. }) => x[i].fractionality(),
        Some(Structure::Split { pi, .. }) => dot(&pi, x).fractionality(),
        None => Rational::zero(),
    }
}

/// Family members not containing `x`, in the order the branch rule prefers.
pub(crate) fn ordered_candidates(cfg: &RunConfig, x: &[Rational]) -> Vec<Disjunction> {
    let stream = cfg.family.candidates(x);
    match &cfg.branch_rule {
        BranchRule::FirstFractional => stream.collect(),
        BranchRule::MostFractional => {
            let mut scored: Vec<(Rational, Disjunction)> =
                stream.map(|d| (fractionality(&d, x), d)).collect();
            // stable: ties keep the canonical order
            scored.sort_by(|a, b| b.0.cmp(&a.0));
            scored.into_iter().map(|(_, d)| d).collect()
        }
        BranchRule::FixedOrder(list) => {
            let mut out: Vec<Disjunction> = list.iter().filter(|d| !d.contains(x)).cloned().collect();
            for d in stream {
                if !out.contains(&d) {
                    out.push(d);
                }
            }
            out
        }
    }
}

/// Coordinates connected to `seeds` through rows with two or more nonzeros.
fn component(region: &Polytope, seeds: &[usize]) -> Vec<bool> {
    let n = region.dim;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for h in &region.ineqs {
        let support: Vec<usize> = (0..n).filter(|&j| !h.normal[j].is_zero()).collect();
        for w in support.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let roots: Vec<usize> = seeds.iter().map(|&s| find(&mut parent, s)).collect();
    (0..n).map(|j| roots.contains(&find(&mut parent, j))).collect()
}

fn cg_objective_cut(
    region: &Polytope,
    d: &Disjunction,
    x: &[Rational],
    objective: &[Rational],
    pattern: &IntegralityPattern,
) -> Result<Option<Inequality>, KernelError> {
    let n = region.dim;
    let seeds: Vec<usize> = (0..n)
        .filter(|&j| d.pieces.iter().any(|p| p.ineqs.iter().any(|h| !h.normal[j].is_zero())))
        .collect();
    if seeds.is_empty() {
        return Ok(None);
    }
    let mask = component(region, &seeds);
    let a: Vec<Rational> = (0..n)
        .map(|j| if mask[j] { objective[j].clone() } else { Rational::zero() })
        .collect();
    let roundable = (0..n).all(|j| {
        if pattern.is_integral(j) {
            a[j].is_integral()
        } else {
            a[j].is_zero()
        }
    });
    if !roundable || a.iter().all(Zero::is_zero) {
        return Ok(None);
    }
    let cut = cg_cut(region, &a)?;
    if cut.is_satisfied_by(x) || violated_piece(region, d, &cut)?.is_some() {
        return Ok(None);
    }
    Ok(Some(cut))
}

/// A cut derived from `d` on `region` that `x` violates, according to the rule.
pub(crate) fn derive_cut(
    rule: CutRule,
    region: &Polytope,
    d: &Disjunction,
    x: &[Rational],
    objective: &[Rational],
    pattern: &IntegralityPattern,
) -> Result<Option<Inequality>, KernelError> {
    if rule == CutRule::CgObjective {
        if let Some(cut) = cg_objective_cut(region, d, x, objective, pattern)? {
            return Ok(Some(cut));
        }
    }
    cglp_cut(region, d, x)
}
