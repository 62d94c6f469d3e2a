use super::select::{derive_cut, ordered_candidates};
use super::{check_runnable, EngineError, Instance, RunConfig, RunResult, Status, TraceEntry};
use crate::kernel::{solve_lp, LinearInequality, LpOutcome, Sense};
use crate::proofs::{CpProof, CutStep, Proof};

/// The cutting-plane algorithm: solve the LP, stop if the vertex is integral,
/// otherwise add a cut derived from a family member that cuts the vertex off.
pub fn run_cp(inst: &Instance, cfg: &RunConfig) -> Result<RunResult, EngineError> {
    check_runnable(inst, cfg)?;
    let n = inst.dim();
    let settle = cfg.settle_bound(inst);
    let mut region = inst.polytope.clone();
    let mut steps: Vec<CutStep> = Vec::new();
    let mut trace = Vec::new();

    let finish = |status, best_point, bound: Option<_>, steps: Vec<CutStep>, trace| {
        let target = match &bound {
            Some(b) => LinearInequality::new(inst.objective.clone(), crate::Rational::clone(b)),
            None => LinearInequality::infeasible(n),
        };
        let iterations = steps.len();
        RunResult {
            status,
            best_point,
            bound,
            iterations,
            proof: Proof::Cp(CpProof::new(steps, target)),
            trace,
        }
    };

    loop {
        let (point, value) = match solve_lp(&region, &inst.objective, Sense::Max)? {
            LpOutcome::Infeasible => {
                trace.push(TraceEntry {
                    bound: None,
                    point: None,
                    disjunction: None,
                    cut: None,
                });
                return Ok(finish(Status::Infeasible, None, None, steps, trace));
            }
            LpOutcome::Optimal { point, value } => (point, value),
        };
        let mut entry = TraceEntry {
            bound: Some(value.clone()),
            point: Some(point.clone()),
            disjunction: None,
            cut: None,
        };
        if inst.pattern.admits(&point) {
            trace.push(entry);
            return Ok(finish(Status::Optimal, Some(point), Some(value), steps, trace));
        }
        if settle.as_ref().is_some_and(|g| value <= *g) {
            trace.push(entry);
            return Ok(finish(Status::BoundProved, None, Some(value), steps, trace));
        }
        if steps.len() >= cfg.max_iters {
            trace.push(entry);
            return Ok(finish(Status::IterationCap, None, Some(value), steps, trace));
        }
        let candidates = ordered_candidates(cfg, &point);
        if candidates.is_empty() {
            trace.push(entry);
            return Ok(finish(Status::NoDisjunctionFound, None, Some(value), steps, trace));
        }
        let mut chosen = None;
        for d in candidates {
            if let Some(cut) = derive_cut(cfg.cut_rule, &region, &d, &point, &inst.objective, &inst.pattern)? {
                chosen = Some((d, cut));
                break;
            }
        }
        let Some((disjunction, cut)) = chosen else {
            trace.push(entry);
            return Ok(finish(Status::NoCuttingPlane, None, Some(value), steps, trace));
        };
        log::debug!("cp iteration {}: {} from {}", steps.len() + 1, cut, disjunction.label);
        entry.disjunction = Some(disjunction.label.clone());
        entry.cut = Some(cut.clone());
        trace.push(entry);
        region.ineqs.push(cut.clone());
        steps.push(CutStep { disjunction, cut });
    }
}
