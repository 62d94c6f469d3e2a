use super::select::{derive_cut, ordered_candidates};
use super::{
    check_runnable, BcRule, EngineError, Instance, NodeSelect, RunConfig, RunResult, Status, TraceEntry,
};
use crate::kernel::{solve_lp, LinearInequality, LpOutcome, Sense};
use crate::proofs::{BcNode, BcProofTree, NodeKind, Proof};
use crate::{Polytope, Rational};

/// Branch-and-bound: every processed node is pruned, closed by an integral
/// vertex, or split by a disjunction that does not contain its LP vertex.
pub fn run_bb(inst: &Instance, cfg: &RunConfig) -> Result<RunResult, EngineError> {
    run_bc(inst, cfg, BcRule::AlwaysBranch)
}

struct Slot {
    kind: NodeKind,
    children: Vec<usize>,
}

struct Open {
    slot: usize,
    region: Polytope,
    /// LP bound of the parent; `None` at the root.
    parent_bound: Option<Rational>,
    cuts_since_branch: usize,
}

fn pick(open: &[Open], sel: NodeSelect) -> usize {
    match sel {
        NodeSelect::Fifo => 0,
        NodeSelect::Dfs => open.len() - 1,
        NodeSelect::BestBound => {
            let mut best = 0;
            for (i, o) in open.iter().enumerate().skip(1) {
                let better = match (&o.parent_bound, &open[best].parent_bound) {
                    (_, None) => false,
                    (None, Some(_)) => true,
                    (Some(a), Some(b)) => a > b,
                };
                if better {
                    best = i;
                }
            }
            best
        }
    }
}

fn build(slots: &[Slot], i: usize) -> BcNode {
    BcNode {
        kind: slots[i].kind.clone(),
        children: slots[i].children.iter().map(|&c| build(slots, c)).collect(),
    }
}

/// Branch-and-cut: like branch-and-bound, but each node may instead add one
/// cut (a cutting node with a single child), as decided by `rule`.
pub fn run_bc(inst: &Instance, cfg: &RunConfig, rule: BcRule) -> Result<RunResult, EngineError> {
    check_runnable(inst, cfg)?;
    let settle = cfg.settle_bound(inst);
    let mut slots = vec![Slot {
        kind: NodeKind::Leaf,
        children: vec![],
    }];
    let mut open = vec![Open {
        slot: 0,
        region: inst.polytope.clone(),
        parent_bound: None,
        cuts_since_branch: 0,
    }];
    let mut incumbent: Option<(Vec<Rational>, Rational)> = None;
    // largest LP value over closed feasible leaves
    let mut leaf_bound: Option<Rational> = None;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut status = None;

    let raise = |b: &mut Option<Rational>, v: &Rational| {
        if b.as_ref().is_none_or(|cur| v > cur) {
            *b = Some(v.clone());
        }
    };

    while !open.is_empty() {
        if iterations >= cfg.max_iters {
            status = Some(Status::IterationCap);
            break;
        }
        let node = open.remove(pick(&open, cfg.node_select));
        iterations += 1;
        let (point, value) = match solve_lp(&node.region, &inst.objective, Sense::Max)? {
            LpOutcome::Infeasible => {
                trace.push(TraceEntry {
                    bound: None,
                    point: None,
                    disjunction: None,
                    cut: None,
                });
                continue;
            }
            LpOutcome::Optimal { point, value } => (point, value),
        };
        let mut entry = TraceEntry {
            bound: Some(value.clone()),
            point: Some(point.clone()),
            disjunction: None,
            cut: None,
        };
        let lb = incumbent.as_ref().map(|(_, v)| v);
        let threshold = match (lb, settle.as_ref()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        if threshold.is_some_and(|t| value <= *t) {
            raise(&mut leaf_bound, &value);
            trace.push(entry);
            continue;
        }
        if inst.pattern.admits(&point) {
            raise(&mut leaf_bound, &value);
            incumbent = Some((point, value));
            trace.push(entry);
            continue;
        }

        let want_cut = match rule {
            BcRule::AlwaysCut => true,
            BcRule::AlwaysBranch => false,
            BcRule::Rounds(r) => node.cuts_since_branch < r,
        };
        let candidates = ordered_candidates(cfg, &point);
        if candidates.is_empty() {
            open.push(node);
            trace.push(entry);
            status = Some(Status::NoDisjunctionFound);
            break;
        }
        if want_cut {
            let mut chosen = None;
            for d in &candidates {
                if let Some(cut) = derive_cut(cfg.cut_rule, &node.region, d, &point, &inst.objective, &inst.pattern)? {
                    chosen = Some((d.clone(), cut));
                    break;
                }
            }
            match chosen {
                Some((disjunction, cut)) => {
                    entry.disjunction = Some(disjunction.label.clone());
                    entry.cut = Some(cut.clone());
                    trace.push(entry);
                    let child = slots.len();
                    slots.push(Slot {
                        kind: NodeKind::Leaf,
                        children: vec![],
                    });
                    slots[node.slot] = Slot {
                        kind: NodeKind::Cut {
                            disjunction,
                            cut: cut.clone(),
                        },
                        children: vec![child],
                    };
                    open.push(Open {
                        slot: child,
                        region: node.region.with(cut),
                        parent_bound: Some(value),
                        cuts_since_branch: node.cuts_since_branch + 1,
                    });
                    continue;
                }
                None if rule == BcRule::AlwaysCut => {
                    open.push(node);
                    trace.push(entry);
                    status = Some(Status::NoCuttingPlane);
                    break;
                }
                None => {}
            }
        }

        let disjunction = candidates.into_iter().next().expect("nonempty");
        entry.disjunction = Some(disjunction.label.clone());
        trace.push(entry);
        let mut children = Vec::with_capacity(disjunction.pieces.len());
        let mut fresh = Vec::with_capacity(disjunction.pieces.len());
        for piece in &disjunction.pieces {
            let child = slots.len();
            slots.push(Slot {
                kind: NodeKind::Leaf,
                children: vec![],
            });
            children.push(child);
            fresh.push(Open {
                slot: child,
                region: node.region.with_all(&piece.ineqs),
                parent_bound: Some(value.clone()),
                cuts_since_branch: 0,
            });
        }
        if cfg.node_select == NodeSelect::Dfs {
            // the first piece is explored first
            fresh.reverse();
        }
        open.extend(fresh);
        slots[node.slot] = Slot {
            kind: NodeKind::Branch { disjunction },
            children,
        };
    }

    // unfinished nodes stay leaves; their LP values enter the certified bound
    let mut bound = leaf_bound;
    for node in &open {
        if let Some(v) = solve_lp(&node.region, &inst.objective, Sense::Max)?.value() {
            raise(&mut bound, v);
        }
    }
    let status = status.unwrap_or(match (&incumbent, &settle) {
        (None, None) => Status::Infeasible,
        (Some((_, v)), Some(g)) if v > g => Status::Optimal,
        (Some(_), None) => Status::Optimal,
        _ => Status::BoundProved,
    });
    let target = match &bound {
        Some(b) => LinearInequality::new(inst.objective.clone(), b.clone()),
        None => LinearInequality::infeasible(inst.dim()),
    };
    let best_point = match status {
        Status::Optimal => incumbent.map(|(p, _)| p),
        _ => None,
    };
    Ok(RunResult {
        status,
        best_point,
        bound,
        iterations,
        proof: Proof::Tree(BcProofTree {
            root: build(&slots, 0),
            target,
        }),
        trace,
    })
}
