//! The cutting-plane, branch-and-bound and branch-and-cut algorithms.
//!
//! Every run is deterministic and emits a certificate that the verifiers in
//! [`crate::proofs`] check independently.

mod cp;
mod minbb;
mod select;
mod tree;

use std::fmt;

use thiserror::Error;

use crate::disjunctions::{Disjunction, DisjunctionFamily, IntegralityPattern, LatticeBox};
use crate::kernel::{bounding_box, solve_lp, KernelError, LinearInequality, Sense};
use crate::proofs::Proof;
use crate::{Inequality, Polytope, Rational, Scalar};

pub use cp::run_cp;
pub use minbb::min_bb_tree_size;
pub use tree::{run_bb, run_bc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("objective has length {found}, expected {expected}")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("integrality pattern has length {found}, expected {expected}")]
    PatternLength { expected: usize, found: usize },
    #[error("the polytope is unbounded along coordinate {0}")]
    Unbounded(usize),
    #[error("no coordinate is integral; the problem is a plain LP")]
    PureContinuous,
    #[error("the disjunction family's integrality pattern differs from the instance's")]
    FamilyMismatch,
    #[error("{0}")]
    Unsupported(String),
}

/// `max <c, x>` over `C ∩ S`, with an optional claimed bound `gamma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub polytope: Polytope,
    pub objective: Vec<Rational>,
    pub pattern: IntegralityPattern,
    pub claimed_bound: Option<Rational>,
}

impl Instance {
    /// Checks dimensions and that every coordinate is bounded on `polytope`.
    pub fn new(
        polytope: Polytope,
        objective: Vec<Rational>,
        pattern: IntegralityPattern,
        claimed_bound: Option<Rational>,
    ) -> Result<Self, EngineError> {
        let n = polytope.dim;
        if objective.len() != n {
            return Err(EngineError::ObjectiveLength {
                expected: n,
                found: objective.len(),
            });
        }
        if pattern.dim() != n {
            return Err(EngineError::PatternLength {
                expected: n,
                found: pattern.dim(),
            });
        }
        for i in 0..n {
            let mut e = vec![Rational::int(0); n];
            e[i] = Rational::int(1);
            for sense in [Sense::Max, Sense::Min] {
                match solve_lp(&polytope, &e, sense) {
                    Ok(_) => {}
                    Err(KernelError::Unbounded) => return Err(EngineError::Unbounded(i)),
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Ok(Self {
            polytope,
            objective,
            pattern,
            claimed_bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim
    }

    /// `<c, x> <= gamma` for the claimed bound.
    pub fn target(&self) -> Option<Inequality> {
        self.claimed_bound
            .as_ref()
            .map(|g| LinearInequality::new(self.objective.clone(), g.clone()))
    }

    pub fn lattice_box(&self) -> Result<Option<LatticeBox>, KernelError> {
        Ok(bounding_box(&self.polytope)?.map(|(lo, hi)| LatticeBox::new(lo, hi)))
    }

    /// Lattice points of the bounding box that lie in `C`; continuous
    /// coordinates are pinned to their lower bound.
    pub fn lattice_points(&self) -> Result<Vec<Vec<Rational>>, KernelError> {
        let Some(bx) = self.lattice_box()? else {
            return Ok(vec![]);
        };
        Ok(bx
            .lattice_points(&self.pattern)
            .into_iter()
            .filter(|x| self.polytope.contains(x))
            .collect())
    }

    /// Integer optimum by lattice enumeration (all-integral instances only).
    pub fn integer_optimum(&self) -> Result<Option<Rational>, KernelError> {
        Ok(self
            .lattice_points()?
            .iter()
            .map(|x| crate::kernel::dot(&self.objective, x))
            .max())
    }

    pub fn with_polytope(&self, polytope: Polytope) -> Self {
        Self {
            polytope,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeSelect {
    BestBound,
    Dfs,
    Fifo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchRule {
    MostFractional,
    FirstFractional,
    /// Use the first listed disjunction that does not contain the LP vertex;
    /// fall back to the family's canonical order when none applies.
    FixedOrder(Vec<Disjunction>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutRule {
    /// Most violated cut from the cut-generating LP.
    CglpMaxViolation,
    /// Chvátal–Gomory rounding of the objective restricted to the connected
    /// component (in the constraint interaction graph) of the disjunction's
    /// support, when that cut is derivable from the disjunction and separates
    /// the LP vertex; otherwise the cut-generating LP.
    CgObjective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopRule {
    Optimality,
    /// Stop once `<c, x> <= gamma` is certified.
    ProveBound(Rational),
    /// Stop once `<c, x> <= claimed_bound + eps` is certified.
    Epsilon(Rational),
}

/// When a branch-and-cut node cuts instead of branching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcRule {
    AlwaysCut,
    AlwaysBranch,
    /// `r` cutting nodes after the root and after every branching, then branch.
    Rounds(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub family: DisjunctionFamily,
    pub node_select: NodeSelect,
    pub branch_rule: BranchRule,
    pub cut_rule: CutRule,
    pub max_iters: usize,
    pub stop: StopRule,
}

impl RunConfig {
    /// Variable disjunctions, best-bound, most-fractional, CGLP cuts, optimality.
    pub fn new(pattern: IntegralityPattern) -> Self {
        Self {
            family: DisjunctionFamily::variable(pattern),
            node_select: NodeSelect::BestBound,
            branch_rule: BranchRule::MostFractional,
            cut_rule: CutRule::CglpMaxViolation,
            max_iters: 10_000,
            stop: StopRule::Optimality,
        }
    }

    pub fn for_instance(inst: &Instance) -> Self {
        Self::new(inst.pattern.clone())
    }

    pub fn with_cut_rule(mut self, rule: CutRule) -> Self {
        self.cut_rule = rule;
        self
    }

    pub fn with_branch_rule(mut self, rule: BranchRule) -> Self {
        self.branch_rule = rule;
        self
    }

    pub fn with_node_select(mut self, sel: NodeSelect) -> Self {
        self.node_select = sel;
        self
    }

    pub fn with_max_iters(mut self, n: usize) -> Self {
        self.max_iters = n.max(1);
        self
    }

    pub fn with_stop(mut self, stop: StopRule) -> Self {
        self.stop = stop;
        self
    }

    /// The bound at which a subproblem counts as settled, besides the incumbent.
    pub(crate) fn settle_bound(&self, inst: &Instance) -> Option<Rational> {
        match &self.stop {
            StopRule::Optimality => None,
            StopRule::ProveBound(g) => Some(g.clone()),
            StopRule::Epsilon(e) => inst.claimed_bound.as_ref().map(|g| g + e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Optimal,
    Infeasible,
    NoCuttingPlane,
    NoDisjunctionFound,
    IterationCap,
    /// The requested bound (prove-bound or epsilon stop) is certified.
    BoundProved,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Optimal => "OPTIMAL",
            Status::Infeasible => "INFEASIBLE",
            Status::NoCuttingPlane => "NO_CUTTING_PLANE",
            Status::NoDisjunctionFound => "NO_DISJUNCTION_FOUND",
            Status::IterationCap => "ITERATION_CAP",
            Status::BoundProved => "BOUND_PROVED",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One line of a run's log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// LP bound of the processed relaxation; `None` if it was infeasible.
    pub bound: Option<Rational>,
    pub point: Option<Vec<Rational>>,
    pub disjunction: Option<String>,
    pub cut: Option<Inequality>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub status: Status,
    pub best_point: Option<Vec<Rational>>,
    /// Certified upper bound on the objective; `None` when `C ∩ S` is proved empty.
    pub bound: Option<Rational>,
    /// Cuts added (cutting planes) or nodes evaluated (trees).
    pub iterations: usize,
    pub proof: Proof,
    pub trace: Vec<TraceEntry>,
}

impl RunResult {
    pub fn proof_size(&self) -> usize {
        crate::proofs::proof_size(&self.proof)
    }
}

pub(crate) fn check_runnable(inst: &Instance, cfg: &RunConfig) -> Result<(), EngineError> {
    if inst.pattern.is_pure_continuous() {
        return Err(EngineError::PureContinuous);
    }
    if cfg.family.pattern != inst.pattern {
        return Err(EngineError::FamilyMismatch);
    }
    Ok(())
}
