//! Proof certificates and their verifiers.
//!
//! A [`CpProof`] is a sequence of cuts, each stored together with the
//! disjunction it was derived from, followed by a target inequality. A
//! [`BcProofTree`] is a tree of cutting, branching and leaf nodes. Both are
//! checked by exact LPs only; nothing produced by the engine is trusted.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::cuts::violated_piece;
use crate::disjunctions::{check_validity, Disjunction, IntegralityPattern, LatticeBox};
use crate::engine::Instance;
use crate::kernel::{bounding_box, KernelError, Sense};
use crate::{Inequality, Polytope, Rational};

/// One cut together with the disjunction that justifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutStep {
    pub disjunction: Disjunction,
    pub cut: Inequality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpProof {
    pub steps: Vec<CutStep>,
    pub target: Inequality,
}

impl CpProof {
    pub fn new(steps: Vec<CutStep>, target: Inequality) -> Self {
        Self { steps, target }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `base` intersected with the first `k` cuts.
    pub fn relaxation(&self, base: &Polytope, k: usize) -> Polytope {
        base.with_all(self.steps[..k].iter().map(|s| &s.cut))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// One child: the parent region intersected with `cut`.
    Cut { disjunction: Disjunction, cut: Inequality },
    /// One child per piece, in piece order.
    Branch { disjunction: Disjunction },
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcNode {
    pub kind: NodeKind,
    pub children: Vec<BcNode>,
}

impl BcNode {
    pub fn leaf() -> Self {
        Self {
            kind: NodeKind::Leaf,
            children: vec![],
        }
    }

    pub fn cut(disjunction: Disjunction, cut: Inequality, child: BcNode) -> Self {
        Self {
            kind: NodeKind::Cut { disjunction, cut },
            children: vec![child],
        }
    }

    pub fn branch(disjunction: Disjunction, children: Vec<BcNode>) -> Self {
        Self {
            kind: NodeKind::Branch { disjunction },
            children,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(BcNode::node_count).sum::<usize>()
    }

    pub fn branching_count(&self) -> usize {
        let own = usize::from(matches!(self.kind, NodeKind::Branch { .. }));
        own + self.children.iter().map(BcNode::branching_count).sum::<usize>()
    }

    /// Visits every node with its depth, parents first.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a BcNode, usize)) {
        fn go<'a>(n: &'a BcNode, depth: usize, f: &mut impl FnMut(&'a BcNode, usize)) {
            f(n, depth);
            for c in &n.children {
                go(c, depth + 1, f);
            }
        }
        go(self, 0, f);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcProofTree {
    pub root: BcNode,
    pub target: Inequality,
}

impl BcProofTree {
    /// The tree has no branching nodes.
    pub fn is_chain(&self) -> bool {
        self.root.branching_count() == 0
    }

    /// The cut sequence of a chain tree.
    pub fn chain_to_cp(&self) -> Option<CpProof> {
        let mut steps = Vec::new();
        let mut node = &self.root;
        loop {
            match &node.kind {
                NodeKind::Leaf => break,
                NodeKind::Cut { disjunction, cut } => {
                    steps.push(CutStep {
                        disjunction: disjunction.clone(),
                        cut: cut.clone(),
                    });
                    node = node.children.first()?;
                }
                NodeKind::Branch { .. } => return None,
            }
        }
        Some(CpProof::new(steps, self.target.clone()))
    }

    /// Disjunction labels along every root-to-leaf path (branching nodes only).
    pub fn branch_paths(&self) -> Vec<Vec<String>> {
        fn go(n: &BcNode, path: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
            let pushed = if let NodeKind::Branch { disjunction } = &n.kind {
                path.push(disjunction.label.clone());
                true
            } else {
                false
            };
            if n.children.is_empty() {
                out.push(path.clone());
            }
            for c in &n.children {
                go(c, path, out);
            }
            if pushed {
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(&self.root, &mut Vec::new(), &mut out);
        out
    }
}

/// Either kind of certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proof {
    Cp(CpProof),
    Tree(BcProofTree),
}

/// `N` for a cutting-plane proof, node count minus one for a tree.
pub fn proof_size(proof: &Proof) -> usize {
    match proof {
        Proof::Cp(p) => p.len(),
        Proof::Tree(t) => t.root.node_count() - 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Step(usize),
    Target,
    /// Child indices from the root.
    Node(Vec<usize>),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Step(i) => write!(f, "step {}", i + 1),
            Location::Target => write!(f, "target"),
            Location::Node(path) => {
                let p: Vec<String> = path.iter().map(|c| c.to_string()).collect();
                write!(f, "node /{}", p.join("/"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { at: Location, reason: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    fn reject(at: Location, reason: impl Into<String>) -> Self {
        Verdict::Reject {
            at,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "ACCEPT"),
            Verdict::Reject { at, reason } => write!(f, "REJECT at {at}: {reason}"),
        }
    }
}

fn fmt_point(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Checks that `d` is a lattice-valid disjunction: structured disjunctions must
/// carry exactly their canonical label, anything else is checked point by
/// point over the lattice box of `base`.
fn disjunction_problem(
    d: &Disjunction,
    pattern: &IntegralityPattern,
    lattice: &Option<LatticeBox>,
) -> Result<Option<String>, KernelError> {
    if d.dim != pattern.dim() {
        return Ok(Some(format!(
            "disjunction {} has dimension {}, expected {}",
            d.label,
            d.dim,
            pattern.dim()
        )));
    }
    if d.structure().is_some() {
        if !d.has_canonical_label() {
            return Ok(Some(format!("disjunction label {} does not match its pieces", d.label)));
        }
        if !d.is_structurally_valid(pattern) {
            return Ok(Some(format!("disjunction {} splits on a continuous coordinate", d.label)));
        }
        return Ok(None);
    }
    match lattice {
        None => Ok(None),
        Some(bx) if check_validity(d, pattern, bx)? => Ok(None),
        Some(_) => Ok(Some(format!(
            "disjunction {} misses lattice points of the bounding box",
            d.label
        ))),
    }
}

fn lattice_box(base: &Polytope) -> Result<Option<LatticeBox>, KernelError> {
    Ok(bounding_box(base)?.map(|(lo, hi)| LatticeBox::new(lo, hi)))
}

/// Verifies the cut sequence and target of `proof` against an arbitrary
/// bounded base polytope.
pub fn verify_cp_on(
    base: &Polytope,
    pattern: &IntegralityPattern,
    proof: &CpProof,
) -> Result<Verdict, KernelError> {
    let lattice = lattice_box(base)?;
    let mut region = base.clone();
    for (i, step) in proof.steps.iter().enumerate() {
        if step.cut.dim() != base.dim {
            return Ok(Verdict::reject(Location::Step(i), "cut has the wrong dimension"));
        }
        if let Some(reason) = disjunction_problem(&step.disjunction, pattern, &lattice)? {
            return Ok(Verdict::reject(Location::Step(i), reason));
        }
        if let Some(v) = violated_piece(&region, &step.disjunction, &step.cut)? {
            return Ok(Verdict::reject(
                Location::Step(i),
                format!(
                    "cut {} fails on piece {} of {}: value {} at {}",
                    step.cut,
                    v.piece + 1,
                    step.disjunction.label,
                    v.value,
                    fmt_point(&v.point)
                ),
            ));
        }
        region.ineqs.push(step.cut.clone());
    }
    target_problem(&region, &proof.target, Location::Target)
}

fn target_problem(region: &Polytope, target: &Inequality, at: Location) -> Result<Verdict, KernelError> {
    if target.dim() != region.dim {
        return Ok(Verdict::reject(at, "target has the wrong dimension"));
    }
    let out = crate::kernel::solve_lp(region, &target.normal, Sense::Max)?;
    match out.value() {
        Some(v) if *v > target.rhs => Ok(Verdict::reject(
            at,
            format!(
                "target {} fails: value {} at {}",
                target,
                v,
                fmt_point(out.point().expect("optimal"))
            ),
        )),
        _ => Ok(Verdict::Accept),
    }
}

/// The target must bound the instance objective: a positive multiple of it,
/// or the infeasibility inequality.
fn objective_problem(inst: &Instance, target: &Inequality) -> Option<String> {
    if target.has_zero_normal() {
        return (!target.rhs.is_negative())
            .then(|| format!("target {target} is trivial"));
    }
    if target.dim() != inst.objective.len() {
        return Some("target has the wrong dimension".into());
    }
    let mut ratio: Option<Rational> = None;
    for (a, c) in target.normal.iter().zip(&inst.objective) {
        if c.is_zero() {
            if !a.is_zero() {
                return Some(format!("target {target} is not a multiple of the objective"));
            }
            continue;
        }
        let r = a / c;
        match &ratio {
            None => ratio = Some(r),
            Some(q) if *q == r => {}
            Some(_) => return Some(format!("target {target} is not a multiple of the objective")),
        }
    }
    match ratio {
        Some(r) if r.is_positive() => None,
        _ => Some(format!("target {target} is not a positive multiple of the objective")),
    }
}

pub fn verify_cp_proof(inst: &Instance, proof: &CpProof) -> Result<Verdict, KernelError> {
    if let Some(reason) = objective_problem(inst, &proof.target) {
        return Ok(Verdict::reject(Location::Target, reason));
    }
    verify_cp_on(&inst.polytope, &inst.pattern, proof)
}

/// Verifies a tree against an arbitrary base polytope.
pub fn verify_bc_on(
    base: &Polytope,
    pattern: &IntegralityPattern,
    tree: &BcProofTree,
) -> Result<Verdict, KernelError> {
    let lattice = lattice_box(base)?;
    let mut path = Vec::new();
    verify_node(&tree.root, base.clone(), pattern, &lattice, &tree.target, &mut path)
}

fn verify_node(
    node: &BcNode,
    region: Polytope,
    pattern: &IntegralityPattern,
    lattice: &Option<LatticeBox>,
    target: &Inequality,
    path: &mut Vec<usize>,
) -> Result<Verdict, KernelError> {
    let here = |path: &Vec<usize>| Location::Node(path.clone());
    match &node.kind {
        NodeKind::Leaf => {
            if !node.children.is_empty() {
                return Ok(Verdict::reject(here(path), "leaf has children"));
            }
            target_problem(&region, target, here(path))
        }
        NodeKind::Cut { disjunction, cut } => {
            if node.children.len() != 1 {
                return Ok(Verdict::reject(here(path), "cutting node must have exactly one child"));
            }
            if cut.dim() != region.dim {
                return Ok(Verdict::reject(here(path), "cut has the wrong dimension"));
            }
            if let Some(reason) = disjunction_problem(disjunction, pattern, lattice)? {
                return Ok(Verdict::reject(here(path), reason));
            }
            if let Some(v) = violated_piece(&region, disjunction, cut)? {
                return Ok(Verdict::reject(
                    here(path),
                    format!(
                        "cut {} fails on piece {} of {}: value {} at {}",
                        cut,
                        v.piece + 1,
                        disjunction.label,
                        v.value,
                        fmt_point(&v.point)
                    ),
                ));
            }
            path.push(0);
            let out = verify_node(&node.children[0], region.with(cut.clone()), pattern, lattice, target, path)?;
            path.pop();
            Ok(out)
        }
        NodeKind::Branch { disjunction } => {
            if node.children.len() != disjunction.pieces.len() {
                return Ok(Verdict::reject(
                    here(path),
                    format!(
                        "branching node has {} children for {} pieces",
                        node.children.len(),
                        disjunction.pieces.len()
                    ),
                ));
            }
            if let Some(reason) = disjunction_problem(disjunction, pattern, lattice)? {
                return Ok(Verdict::reject(here(path), reason));
            }
            for (j, (child, piece)) in node.children.iter().zip(&disjunction.pieces).enumerate() {
                path.push(j);
                let out = verify_node(child, region.with_all(&piece.ineqs), pattern, lattice, target, path)?;
                path.pop();
                if !out.is_accept() {
                    return Ok(out);
                }
            }
            Ok(Verdict::Accept)
        }
    }
}

pub fn verify_bc_proof(inst: &Instance, tree: &BcProofTree) -> Result<Verdict, KernelError> {
    if let Some(reason) = objective_problem(inst, &tree.target) {
        return Ok(Verdict::reject(Location::Target, reason));
    }
    verify_bc_on(&inst.polytope, &inst.pattern, tree)
}

pub fn verify(inst: &Instance, proof: &Proof) -> Result<Verdict, KernelError> {
    match proof {
        Proof::Cp(p) => verify_cp_proof(inst, p),
        Proof::Tree(t) => verify_bc_proof(inst, t),
    }
}
