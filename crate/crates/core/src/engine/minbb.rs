use std::collections::HashMap;

use super::{EngineError, Instance};
use crate::disjunctions::var;
use crate::kernel::{check_scale, solve_lp, LpOutcome, Sense};
use crate::transforms::check_in_unit_cube;
use crate::Rational;

/// Exact minimum size of a branch-and-bound proof of `<c, x> <= gamma` that
/// branches only on `D_{i,0}`, over all such trees. `None` when no tree
/// proves the bound.
///
/// Memoised over partial fixings: a state is `(fixed to 0, fixed to 1)`. A
/// state is a leaf when its relaxation is infeasible or its LP bound is at
/// most `gamma`; otherwise its cost is the cheapest `2 + f(left) + f(right)`.
pub fn min_bb_tree_size(inst: &Instance, gamma: &Rational) -> Result<Option<usize>, EngineError> {
    let n = inst.dim();
    check_scale(n)?;
    check_in_unit_cube(&inst.polytope).map_err(|e| EngineError::Unsupported(e.to_string()))?;
    let mut memo = HashMap::new();
    solve(inst, gamma, 0, 0, &mut memo)
}

fn solve(
    inst: &Instance,
    gamma: &Rational,
    zeros: u64,
    ones: u64,
    memo: &mut HashMap<(u64, u64), Option<usize>>,
) -> Result<Option<usize>, EngineError> {
    if let Some(&v) = memo.get(&(zeros, ones)) {
        return Ok(v);
    }
    let n = inst.dim();
    let mut region = inst.polytope.clone();
    for i in 0..n {
        let d = var(i, 0, n);
        if zeros >> i & 1 == 1 {
            region.ineqs.extend(d.pieces[0].ineqs.iter().cloned());
        } else if ones >> i & 1 == 1 {
            region.ineqs.extend(d.pieces[1].ineqs.iter().cloned());
        }
    }
    let best = match solve_lp(&region, &inst.objective, Sense::Max)? {
        LpOutcome::Infeasible => Some(0),
        LpOutcome::Optimal { value, .. } if value <= *gamma => Some(0),
        LpOutcome::Optimal { .. } => {
            let mut best: Option<usize> = None;
            for i in 0..n {
                let bit = 1u64 << i;
                if (zeros | ones) & bit != 0 {
                    continue;
                }
                let Some(left) = solve(inst, gamma, zeros | bit, ones, memo)? else {
                    continue;
                };
                if best.is_some_and(|b| 2 + left >= b) {
                    continue;
                }
                let Some(right) = solve(inst, gamma, zeros, ones | bit, memo)? else {
                    continue;
                };
                let total = 2 + left + right;
                if best.is_none_or(|b| total < b) {
                    best = Some(total);
                }
            }
            best
        }
    };
    memo.insert((zeros, ones), best);
    Ok(best)
}
